/**
 * DOM wiring. One App owns one session: it serializes requests (a
 * single in-flight operation, inputs disabled while waiting), folds
 * every response into the model, and re-renders from scratch.
 */

import {
  applyResponse,
  banner,
  initialModel,
  selectGoal,
  taskSegments,
  type Model,
} from "./core.js";
import {
  commandToRequest,
  postOp,
  readForms,
  type FetchLike,
  type ProtocolRequest,
} from "./protocol.js";

export interface AppOptions {
  document: Document;
  baseUrl: string;
  fetchImpl: FetchLike;
  session?: string;
}

interface Elements {
  session: HTMLElement;
  banner: HTMLElement;
  task: HTMLElement;
  goals: HTMLElement;
  refineInput: HTMLInputElement;
  refineButton: HTMLButtonElement;
  undoButton: HTMLButtonElement;
  script: HTMLTextAreaElement;
  loadButton: HTMLButtonElement;
  history: HTMLElement;
}

function grab(doc: Document, id: string): HTMLElement {
  const el = doc.getElementById(id);
  if (el === null) throw new Error(`missing element #${id}`);
  return el;
}

export class App {
  model: Model;
  private readonly doc: Document;
  private readonly baseUrl: string;
  private readonly fetchImpl: FetchLike;
  private readonly els: Elements;
  private queue: Promise<void> = Promise.resolve();

  constructor(opts: AppOptions) {
    this.doc = opts.document;
    this.baseUrl = opts.baseUrl;
    this.fetchImpl = opts.fetchImpl;
    this.model = initialModel(opts.session ?? "ui");
    this.els = {
      session: grab(this.doc, "session-name"),
      banner: grab(this.doc, "banner"),
      task: grab(this.doc, "task"),
      goals: grab(this.doc, "goals"),
      refineInput: grab(this.doc, "refine-input") as HTMLInputElement,
      refineButton: grab(this.doc, "refine-button") as HTMLButtonElement,
      undoButton: grab(this.doc, "undo-button") as HTMLButtonElement,
      script: grab(this.doc, "script-input") as HTMLTextAreaElement,
      loadButton: grab(this.doc, "load-button") as HTMLButtonElement,
      history: grab(this.doc, "history"),
    };
    this.els.refineButton.addEventListener("click", () => {
      this.submitRefinement();
    });
    this.els.refineInput.addEventListener("keydown", (ev) => {
      if ((ev as KeyboardEvent).key === "Enter") this.submitRefinement();
    });
    this.els.undoButton.addEventListener("click", () => {
      this.dispatch({ op: "undo", session: this.model.session });
    });
    this.els.loadButton.addEventListener("click", () => {
      this.loadScript();
    });
    this.render();
  }

  /** Refetch the live goal table; a fresh session stays quiet. */
  refresh(): Promise<void> {
    return this.dispatch(
      { op: "goals", session: this.model.session },
      { quiet: true },
    );
  }

  /** Settle once every queued request has been answered. */
  flush(): Promise<void> {
    return this.queue;
  }

  dispatch(
    req: ProtocolRequest,
    opts: { quiet?: boolean } = {},
  ): Promise<void> {
    this.queue = this.queue.then(async () => {
      this.model = { ...this.model, busy: true };
      this.render();
      try {
        const resp = await postOp(this.baseUrl, req, this.fetchImpl);
        this.model = applyResponse(this.model, req, resp, opts);
      } catch (err) {
        this.model = {
          ...this.model,
          busy: false,
          error: {
            kind: "unreachable",
            message: err instanceof Error ? err.message : String(err),
            details: {},
          },
        };
      }
      this.render();
    });
    return this.queue;
  }

  submitRefinement(): void {
    const goal = this.model.selected;
    const text = this.els.refineInput.value.trim();
    if (goal === null || text === "" || this.model.busy) return;
    void this.dispatch({
      op: "refine",
      session: this.model.session,
      goal,
      expr: text,
    }).then(() => {
      if (this.model.error === null) this.els.refineInput.value = "";
    });
  }

  loadScript(): void {
    const text = this.els.script.value;
    let forms: string[];
    try {
      forms = readForms(text);
    } catch (err) {
      this.model = {
        ...this.model,
        error: {
          kind: "parse",
          message: err instanceof Error ? err.message : String(err),
          details: {},
        },
      };
      this.render();
      return;
    }
    for (const form of forms) {
      let req: ProtocolRequest;
      try {
        req = commandToRequest(form, this.model.session);
      } catch (err) {
        this.model = {
          ...this.model,
          history: [
            ...this.model.history,
            {
              op: "parse",
              summary: form,
              status: "error",
              detail: err instanceof Error ? err.message : String(err),
            },
          ],
        };
        this.render();
        continue;
      }
      void this.dispatch(req);
    }
  }

  select(n: number): void {
    this.model = selectGoal(this.model, n);
    this.render();
    this.els.refineInput.focus();
  }

  render(): void {
    const m = this.model;
    const doc = this.doc;
    this.els.session.textContent = m.session;

    // banner
    const b = banner(m);
    this.els.banner.textContent = "";
    this.els.banner.className = `banner ${b.kind}`;
    if (b.kind === "complete") {
      this.els.banner.textContent = b.text;
    } else if (b.kind === "error") {
      const head = doc.createElement("div");
      head.className = "error-head";
      head.textContent = `error: ${b.error.message}`;
      this.els.banner.appendChild(head);
      for (const key of ["context", "term", "expected", "found"]) {
        const value = b.error.details[key];
        if (value === undefined) continue;
        const row = doc.createElement("div");
        row.className = "error-row";
        row.textContent = `${key}: ${value}`;
        this.els.banner.appendChild(row);
      }
    }

    // task, with clickable hole tokens
    this.els.task.textContent = "";
    if (m.task === null) {
      const hint = doc.createElement("span");
      hint.className = "placeholder";
      hint.textContent = "no task - load a script below to begin";
      this.els.task.appendChild(hint);
    } else {
      for (const seg of taskSegments(m.task)) {
        if (seg.kind === "text") {
          this.els.task.appendChild(doc.createTextNode(seg.text));
        } else {
          const btn = doc.createElement("button");
          btn.className =
            seg.number === m.selected ? "hole selected" : "hole";
          btn.dataset["hole"] = String(seg.number);
          btn.textContent = seg.text;
          btn.addEventListener("click", () => this.select(seg.number));
          this.els.task.appendChild(btn);
        }
      }
    }

    // goal cards
    this.els.goals.textContent = "";
    if (m.goals.length === 0) {
      const hint = doc.createElement("div");
      hint.className = "placeholder";
      hint.textContent = "no goals";
      this.els.goals.appendChild(hint);
    }
    for (const g of m.goals) {
      const card = doc.createElement("div");
      card.className =
        g.number === m.selected ? "goal-card selected" : "goal-card";
      card.dataset["goal"] = String(g.number);
      const head = doc.createElement("div");
      head.className = "goal-head";
      head.textContent = `?${g.number} : ${g.type}`;
      card.appendChild(head);
      if (g.context.length > 0) {
        const rows = doc.createElement("div");
        rows.className = "goal-context";
        for (const row of g.context) {
          const line = doc.createElement("div");
          line.className = "context-row";
          line.textContent = `${row.name} : ${row.type}`;
          rows.appendChild(line);
        }
        card.appendChild(rows);
      }
      card.addEventListener("click", () => this.select(g.number));
      this.els.goals.appendChild(card);
    }

    // controls
    const noGoal = m.selected === null;
    this.els.refineInput.disabled = m.busy || noGoal;
    this.els.refineButton.disabled = m.busy || noGoal;
    this.els.undoButton.disabled = m.busy;
    this.els.loadButton.disabled = m.busy;

    // history, newest last
    this.els.history.textContent = "";
    for (const entry of m.history) {
      const li = doc.createElement("li");
      li.className = entry.status;
      li.textContent =
        entry.detail === undefined
          ? entry.summary
          : `${entry.summary} -> ${entry.detail}`;
      this.els.history.appendChild(li);
    }
  }
}

export function init(opts: AppOptions): App {
  const app = new App(opts);
  void app.refresh();
  return app;
}
