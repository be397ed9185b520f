"""The session protocol: one request/response handler for every front end.

The REPL, the batch script runner, the line-delimited JSON mode, and the
HTTP service all build a `ProtocolRequest` and call `handle`; nothing
else ever mutates a session. Responses are self-contained: they carry
the pretty-printed task, the full goal table, the transcript lines a
console would print, and a structured error when the operation failed.

A `SessionStore` holds many named sessions; operations on one session
are serialized, and an unknown session id denotes a fresh empty session.
When the store was given a save directory, every successful mutating
operation rewrites `<dir>/<session>.pr` with a script that replays the
session from scratch.
"""

from __future__ import annotations

import threading
from dataclasses import replace
from pathlib import Path
from typing import Literal

from pydantic import BaseModel

from . import environment, session
from .environment import EMPTY_ENV, GlobalEnv
from .equational import normalize
from .errors import BadRequest, IncompleteProof, InternalError, ParseError, ProustError
from .session import SessionState
from .syntax import parse_tree, pretty, read_all, render_tree
from .terms import Expr, renumber_holes

Tree = str | list

OPS = ("set_task", "refine", "undo", "goals", "def", "postulate",
       "check_proof", "normalize", "reset")


class ContextRow(BaseModel):
    name: str
    type: str


class GoalView(BaseModel):
    number: int
    type: str
    context: list[ContextRow]


class ErrorView(BaseModel):
    kind: str
    message: str
    details: dict[str, str] = {}


class ProtocolRequest(BaseModel):
    op: Literal[
        "set_task", "refine", "undo", "goals", "def", "postulate",
        "check_proof", "normalize", "reset"]
    session: str = "default"
    expr: str | None = None
    goal: int | None = None
    name: str | None = None
    ascii: bool = False


class ProtocolResponse(BaseModel):
    status: Literal["ok", "error"]
    session: str
    op: str
    task: str | None = None
    goals: list[GoalView] = []
    goal_count: int = 0
    result: str | None = None
    transcript: list[str] = []
    error: ErrorView | None = None


class SessionStore:
    def __init__(self, save_dir: str | Path | None = None):
        self.save_dir = Path(save_dir) if save_dir else None
        self._sessions: dict[str, SessionState] = {}
        self._logs: dict[str, list[str]] = {}
        self._locks: dict[str, threading.RLock] = {}
        self._master = threading.Lock()

    def lock_for(self, name: str) -> threading.RLock:
        with self._master:
            if name not in self._locks:
                self._locks[name] = threading.RLock()
            return self._locks[name]

    def state(self, name: str) -> SessionState:
        with self._master:
            if name not in self._sessions:
                self._sessions[name] = SessionState(env=EMPTY_ENV)
                self._logs[name] = []
            return self._sessions[name]

    def put(self, name: str, state: SessionState) -> None:
        with self._master:
            self._sessions[name] = state

    def record(self, name: str, line: str) -> None:
        with self._master:
            log = self._logs.setdefault(name, [])
            log.append(line)
            if self.save_dir is not None:
                self.save_dir.mkdir(parents=True, exist_ok=True)
                path = self.save_dir / f"{name}.pr"
                path.write_text("".join(f"{ln}\n" for ln in log),
                                encoding="utf-8")

    def reset(self, name: str) -> SessionState:
        with self._master:
            self._sessions[name] = SessionState(env=EMPTY_ENV)
            self._logs[name] = []
            return self._sessions[name]


def handle(store: SessionStore, req: ProtocolRequest) -> ProtocolResponse:
    """Run one operation; never raises."""
    with store.lock_for(req.session):
        try:
            return _dispatch(store, req)
        except ProustError as err:
            return _failure(store, req, err)
        except RecursionError:
            return _failure(store, req, InternalError(
                "term too deeply nested to process"))
        except Exception as err:  # crash-freedom over completeness
            return _failure(store, req, InternalError(
                f"internal error: {err}"))


def _goal_views(state: SessionState, ascii_mode: bool) -> list[GoalView]:
    return [
        GoalView(
            number=g.number,
            type=pretty(g.ty, ascii_mode),
            context=[ContextRow(name=n, type=pretty(t, ascii_mode))
                     for n, t in g.ctx.rows()])
        for g in state.sorted_goals()]


def _ok(store: SessionStore, req: ProtocolRequest, state: SessionState,
        transcript: list[str], result: str | None = None) -> ProtocolResponse:
    return ProtocolResponse(
        status="ok", session=req.session, op=req.op,
        task=None if state.current is None else pretty(state.current, req.ascii),
        goals=_goal_views(state, req.ascii),
        goal_count=len(state.goals),
        result=result, transcript=transcript)


def _failure(store: SessionStore, req: ProtocolRequest,
             err: ProustError) -> ProtocolResponse:
    state = store.state(req.session)
    details = dict(getattr(err, "details", {}))
    lines = [f"error: {err.message}"]
    for key in ("context", "term", "expected", "found"):
        if key in details:
            lines.append(f"  {key}: {details[key]}")
    return ProtocolResponse(
        status="error", session=req.session, op=req.op,
        task=None if state.current is None else pretty(state.current, req.ascii),
        goals=_goal_views(state, req.ascii),
        goal_count=len(state.goals),
        error=ErrorView(kind=err.kind, message=err.message, details=details),
        transcript=lines)


def _require_expr(req: ProtocolRequest) -> Expr:
    if req.expr is None:
        raise BadRequest(f"op {req.op} requires 'expr'")
    forms = read_all(req.expr)
    if len(forms) != 1:
        raise ParseError(
            f"expected exactly one expression, got {len(forms)}")
    return parse_tree(forms[0])


def _task_lines(state: SessionState, ascii_mode: bool) -> list[str]:
    assert state.current is not None
    return ["Task is now", pretty(state.current, ascii_mode)]


def _dispatch(store: SessionStore, req: ProtocolRequest) -> ProtocolResponse:
    state = store.state(req.session)

    match req.op:
        case "set_task":
            expr = _require_expr(req)
            state2 = session.set_task(state, expr)
            store.put(req.session, state2)
            assert state2.current is not None
            store.record(req.session, f"(set-task {pretty(state2.current)})")
            return _ok(store, req, state2, _task_lines(state2, req.ascii))

        case "refine":
            if req.goal is None:
                raise BadRequest("op refine requires 'goal'")
            expr = _require_expr(req)
            numbered, _ = renumber_holes(expr, state.hole_counter)
            state2 = session.refine(state, req.goal, expr)
            store.put(req.session, state2)
            store.record(req.session,
                         f"(refine {req.goal} {pretty(numbered)})")
            return _ok(store, req, state2, _task_lines(state2, req.ascii))

        case "undo":
            state2 = session.undo(state)
            store.put(req.session, state2)
            store.record(req.session, "(undo)")
            return _ok(store, req, state2, _task_lines(state2, req.ascii))

        case "goals":
            rows = session.goal_rows(state)
            lines: list[str] = []
            for g in rows:
                lines.append(f"?{g.number} : {pretty(g.ty, req.ascii)}")
                for n, t in g.ctx.rows():
                    lines.append(f"  {n} : {pretty(t, req.ascii)}")
            if not rows:
                lines = ["no goals"]
            return _ok(store, req, state, lines)

        case "def":
            if not req.name:
                raise BadRequest("op def requires 'name'")
            expr = _require_expr(req)
            env2 = environment.define(state.env, req.name, expr)
            state2 = replace(state, env=env2)
            store.put(req.session, state2)
            store.record(req.session,
                         f"(def {req.name} {pretty(expr)})")
            return _ok(store, req, state2, [f"defined {req.name}"])

        case "postulate":
            if not req.name:
                raise BadRequest("op postulate requires 'name'")
            ty = _require_expr(req)
            env2 = environment.postulate(state.env, req.name, ty)
            state2 = replace(state, env=env2)
            store.put(req.session, state2)
            store.record(req.session,
                         f"(postulate {req.name} {pretty(ty)})")
            return _ok(store, req, state2, [f"postulated {req.name}"])

        case "check_proof":
            expr = _require_expr(req)
            if not environment.check_proof(state.env, expr):
                raise IncompleteProof("the proof still contains holes")
            return _ok(store, req, state, ["true"], result="true")

        case "normalize":
            expr = _require_expr(req)
            nf = pretty(normalize(state.env, expr), req.ascii)
            return _ok(store, req, state, [nf], result=nf)

        case "reset":
            state2 = store.reset(req.session)
            store.record(req.session, "(reset)")
            return _ok(store, req, state2, ["session reset"])

    raise BadRequest(f"unknown op {req.op}")


_COMMAND_HEADS = {
    "set-task": "set_task", "set-task!": "set_task",
    "refine": "refine", "undo": "undo", "goals": "goals",
    "def": "def", "postulate": "postulate",
    "check-proof": "check_proof", "normalize": "normalize",
    "reset": "reset",
}


def _strip_quotes(tree: Tree) -> Tree:
    """Drop reader-quote artifacts so pasted transcripts replay."""
    if isinstance(tree, str):
        return tree.lstrip("'") or tree
    return [_strip_quotes(t) for t in tree if t != "'"]


def command_to_request(tree: Tree, session_id: str = "default",
                       ascii_mode: bool = False) -> ProtocolRequest:
    """Interpret one script form as a protocol request."""
    tree = _strip_quotes(tree)
    if not isinstance(tree, list) or not tree or not isinstance(tree[0], str):
        raise ParseError(f"not a command: {render_tree(tree)}")
    head = tree[0]
    op = _COMMAND_HEADS.get(head)
    if op is None:
        raise ParseError(f"unknown command {head!r}")

    def expr_arg(t: Tree) -> str:
        return render_tree(t)

    common = {"session": session_id, "ascii": ascii_mode}
    if op in ("undo", "goals", "reset"):
        if len(tree) != 1:
            raise ParseError(f"({head}) takes no arguments")
        return ProtocolRequest(op=op, **common)
    if op in ("set_task", "check_proof", "normalize"):
        if len(tree) != 2:
            raise ParseError(f"({head} e) takes one expression")
        return ProtocolRequest(op=op, expr=expr_arg(tree[1]), **common)
    if op == "refine":
        if (len(tree) != 3 or not isinstance(tree[1], str)
                or not tree[1].isdigit()):
            raise ParseError(f"refine is (refine n e), got {render_tree(tree)}")
        return ProtocolRequest(op=op, goal=int(tree[1]),
                               expr=expr_arg(tree[2]), **common)
    # def / postulate
    if len(tree) != 3 or not isinstance(tree[1], str):
        raise ParseError(
            f"({head} name form) takes a name and a form, "
            f"got {render_tree(tree)}")
    return ProtocolRequest(op=op, name=tree[1], expr=expr_arg(tree[2]),
                           **common)


def run_script(text: str, store: SessionStore | None = None,
               session_id: str = "default",
               ascii_mode: bool = False) -> list[ProtocolResponse]:
    """Replay every command form in `text` against one session."""
    store = store or SessionStore()
    responses = []
    try:
        forms = read_all(text)
    except ProustError as err:
        return [ProtocolResponse(
            status="error", session=session_id, op="parse",
            error=ErrorView(kind=err.kind, message=err.message,
                            details=dict(err.details)),
            transcript=[f"error: {err.message}"])]
    for form in forms:
        try:
            req = command_to_request(form, session_id, ascii_mode)
        except ProustError as err:
            responses.append(ProtocolResponse(
                status="error", session=session_id, op="parse",
                error=ErrorView(kind=err.kind, message=err.message,
                                details=dict(err.details)),
                transcript=[f"error: {err.message}"]))
            continue
        responses.append(handle(store, req))
    return responses


def load_corpus(name: str) -> str:
    """Text of a bundled proof script (e.g. "church.pr")."""
    from importlib.resources import files

    return (files("proust") / "corpus" / name).read_text(encoding="utf-8")


def corpus_names() -> list[str]:
    from importlib.resources import files

    return sorted(
        p.name for p in (files("proust") / "corpus").iterdir()
        if p.name.endswith(".pr"))


def build_env_from_script(text: str) -> GlobalEnv:
    """Run a script's def/postulate forms into a fresh environment."""
    env = EMPTY_ENV
    for form in read_all(text):
        req = command_to_request(form)
        if req.op == "def":
            assert req.name is not None and req.expr is not None
            env = environment.define(env, req.name, parse_tree(
                read_all(req.expr)[0]))
        elif req.op == "postulate":
            assert req.name is not None and req.expr is not None
            env = environment.postulate(env, req.name, parse_tree(
                read_all(req.expr)[0]))
    return env
