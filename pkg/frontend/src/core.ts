/**
 * Pure view model: a fold over protocol responses.
 *
 * The model renders only what the server said. Every response, error
 * or not, carries the live task and goal table, so applying a failed
 * refinement leaves the proof view exactly where it was and only the
 * banner changes.
 */

import type {
  ErrorView,
  GoalView,
  ProtocolRequest,
  ProtocolResponse,
} from "./protocol.js";

export interface HistoryEntry {
  op: string;
  summary: string;
  status: "ok" | "error";
  /** Result payload, when the operation produced one (e.g. normalize). */
  detail?: string;
}

export interface Model {
  session: string;
  task: string | null;
  goals: GoalView[];
  goalCount: number;
  selected: number | null;
  error: ErrorView | null;
  history: HistoryEntry[];
  busy: boolean;
}

export function initialModel(session: string): Model {
  return {
    session,
    task: null,
    goals: [],
    goalCount: 0,
    selected: null,
    error: null,
    history: [],
    busy: false,
  };
}

export function summarize(req: ProtocolRequest): string {
  switch (req.op) {
    case "refine":
      return `refine ${req.goal} ${req.expr ?? ""}`.trim();
    case "def":
    case "postulate":
      return `${req.op} ${req.name ?? ""} ${req.expr ?? ""}`.trim();
    case "set_task":
    case "check_proof":
    case "normalize":
      return `${req.op.replace("_", "-")} ${req.expr ?? ""}`.trim();
    default:
      return req.op;
  }
}

/** Fold one request/response exchange into the model. */
export function applyResponse(
  m: Model,
  req: ProtocolRequest,
  resp: ProtocolResponse,
  opts: { quiet?: boolean } = {},
): Model {
  const entry: HistoryEntry = {
    op: req.op,
    summary: summarize(req),
    status: resp.status,
    ...(resp.result !== null && resp.result !== undefined
      ? { detail: resp.result }
      : resp.status === "error" && resp.error !== null
        ? { detail: resp.error.message }
        : {}),
  };
  const goals = resp.goals;
  const live = new Set(goals.map((g) => g.number));
  const lowest = goals.length > 0 ? goals[0]!.number : null;
  const keep = m.selected !== null && live.has(m.selected);
  const showError =
    resp.status === "error" &&
    !(opts.quiet === true && resp.error?.kind === "no-task");
  return {
    session: m.session,
    task: resp.task,
    goals,
    goalCount: resp.goal_count,
    selected: keep ? m.selected : lowest,
    error: showError ? resp.error : null,
    history: [...m.history, entry],
    busy: false,
  };
}

export function selectGoal(m: Model, n: number): Model {
  const live = new Set(m.goals.map((g) => g.number));
  return live.has(n) ? { ...m, selected: n } : m;
}

export type Banner =
  | { kind: "none" }
  | { kind: "complete"; text: string }
  | { kind: "error"; error: ErrorView };

export function banner(m: Model): Banner {
  if (m.error !== null) {
    return { kind: "error", error: m.error };
  }
  if (m.task !== null && m.goalCount === 0) {
    return { kind: "complete", text: "Proof complete" };
  }
  return { kind: "none" };
}

export type TaskSegment =
  | { kind: "text"; text: string }
  | { kind: "hole"; number: number; text: string };

/** Split a task string so each `?n` token can render as a control. */
export function taskSegments(task: string): TaskSegment[] {
  const segments: TaskSegment[] = [];
  const pattern = /\?(\d+)/g;
  let last = 0;
  for (const match of task.matchAll(pattern)) {
    const at = match.index ?? 0;
    if (at > last) {
      segments.push({ kind: "text", text: task.slice(last, at) });
    }
    segments.push({
      kind: "hole",
      number: parseInt(match[1]!, 10),
      text: match[0],
    });
    last = at + match[0].length;
  }
  if (last < task.length) {
    segments.push({ kind: "text", text: task.slice(last) });
  }
  return segments;
}
