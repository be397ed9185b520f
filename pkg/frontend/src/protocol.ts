/**
 * Wire types and helpers for talking to the proof server.
 *
 * The server is the single source of truth: nothing here parses or
 * checks terms. The only syntax the client knows is how to split a
 * pasted script into balanced forms and map each form's head symbol
 * onto a request, mirroring the server's own command table.
 */

export type Op =
  | "set_task"
  | "refine"
  | "undo"
  | "goals"
  | "def"
  | "postulate"
  | "check_proof"
  | "normalize"
  | "reset";

export interface ContextRow {
  name: string;
  type: string;
}

export interface GoalView {
  number: number;
  type: string;
  context: ContextRow[];
}

export interface ErrorView {
  kind: string;
  message: string;
  details: Record<string, string>;
}

export interface ProtocolRequest {
  op: Op;
  session: string;
  expr?: string;
  goal?: number;
  name?: string;
  ascii?: boolean;
}

export interface ProtocolResponse {
  status: "ok" | "error";
  session: string;
  op: string;
  task: string | null;
  goals: GoalView[];
  goal_count: number;
  result: string | null;
  transcript: string[];
  error: ErrorView | null;
}

export type FetchLike = (
  url: string,
  init: {
    method: string;
    headers: Record<string, string>;
    body: string;
  },
) => Promise<{ ok: boolean; status: number; json(): Promise<unknown> }>;

export async function postOp(
  baseUrl: string,
  req: ProtocolRequest,
  fetchImpl: FetchLike,
): Promise<ProtocolResponse> {
  const resp = await fetchImpl(`${baseUrl}/op`, {
    method: "POST",
    headers: { "content-type": "application/json" },
    body: JSON.stringify(req),
  });
  if (!resp.ok) {
    throw new Error(`server replied ${resp.status}`);
  }
  return (await resp.json()) as ProtocolResponse;
}

/**
 * Split a script into top-level forms: parenthesized groups or bare
 * atoms, with `;` comments stripped. Purely lexical; the text of each
 * form is passed to the server untouched.
 */
export function readForms(text: string): string[] {
  const forms: string[] = [];
  let depth = 0;
  let start = -1;
  let atomStart = -1;

  const endAtom = (i: number) => {
    if (atomStart >= 0) {
      forms.push(text.slice(atomStart, i));
      atomStart = -1;
    }
  };

  for (let i = 0; i < text.length; i++) {
    const ch = text[i]!;
    if (ch === ";") {
      if (depth === 0) endAtom(i);
      while (i < text.length && text[i] !== "\n") i++;
      continue;
    }
    if (ch === "(") {
      if (depth === 0) {
        endAtom(i);
        start = i;
      }
      depth++;
    } else if (ch === ")") {
      depth--;
      if (depth < 0) throw new Error("unbalanced form: stray ')'");
      if (depth === 0) {
        forms.push(text.slice(start, i + 1));
        start = -1;
      }
    } else if (depth === 0) {
      if (/\s/.test(ch)) {
        endAtom(i);
      } else if (atomStart < 0) {
        atomStart = i;
      }
    }
  }
  if (depth !== 0) throw new Error("unbalanced form: missing ')'");
  endAtom(text.length);
  return forms;
}

const COMMAND_HEADS: Record<string, Op> = {
  "set-task": "set_task",
  "set-task!": "set_task",
  refine: "refine",
  undo: "undo",
  goals: "goals",
  def: "def",
  postulate: "postulate",
  "check-proof": "check_proof",
  normalize: "normalize",
  reset: "reset",
};

/**
 * Split one form into its head symbol and raw argument slices: each
 * part is either a parenthesized group or a bare atom. Reader quotes
 * are dropped the way the server's command table drops them.
 */
function formParts(form: string): string[] {
  let body = form.trim();
  if (body.startsWith("(") && body.endsWith(")")) {
    body = body.slice(1, -1);
  }
  const parts: string[] = [];
  let i = 0;
  while (i < body.length) {
    const ch = body[i]!;
    if (/\s/.test(ch)) {
      i++;
      continue;
    }
    if (ch === "(") {
      const start = i;
      let depth = 0;
      while (i < body.length) {
        if (body[i] === "(") depth++;
        else if (body[i] === ")") {
          depth--;
          if (depth === 0) {
            i++;
            break;
          }
        }
        i++;
      }
      if (depth !== 0) throw new Error("unbalanced form: missing ')'");
      parts.push(body.slice(start, i));
    } else {
      const start = i;
      while (i < body.length && !/[\s()]/.test(body[i]!)) i++;
      parts.push(body.slice(start, i));
    }
  }
  return parts
    .filter((p) => p !== "'")
    .map((p) => (p.startsWith("'") ? p.slice(1) : p));
}

/**
 * Interpret one script form as a protocol request. Throws on unknown
 * heads and arity mistakes; expression arguments are forwarded as the
 * exact source slice.
 */
export function commandToRequest(
  form: string,
  session: string,
): ProtocolRequest {
  const parts = formParts(form);
  const head = parts[0];
  if (head === undefined) throw new Error("empty command");
  const op = COMMAND_HEADS[head];
  if (op === undefined) throw new Error(`unknown command '${head}'`);

  if (op === "undo" || op === "goals" || op === "reset") {
    if (parts.length !== 1) throw new Error(`(${head}) takes no arguments`);
    return { op, session };
  }
  if (op === "set_task" || op === "check_proof" || op === "normalize") {
    if (parts.length !== 2) {
      throw new Error(`(${head} e) takes one expression`);
    }
    return { op, session, expr: parts[1]! };
  }
  if (op === "refine") {
    if (parts.length !== 3 || !/^\d+$/.test(parts[1]!)) {
      throw new Error(`refine is (refine n e), got ${form}`);
    }
    return {
      op,
      session,
      goal: parseInt(parts[1]!, 10),
      expr: parts[2]!,
    };
  }
  // def / postulate
  if (parts.length !== 3) {
    throw new Error(`(${head} name form) takes a name and a form`);
  }
  return { op, session, name: parts[1]!, expr: parts[2]! };
}
