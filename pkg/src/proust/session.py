"""Interactive proof sessions: a task with numbered holes, refined
step by step.

A session is an immutable value; every operation returns a new one, so a
failed operation leaves the caller's state untouched by construction.
Hole numbers are assigned by the session (never by the parser): set_task
renumbers from 0, refine numbers incoming holes from a counter that grows
with each splice, so live goal numbers are never ambiguous. Undo restores
the counter along with everything else: after an undo the session is
exactly the state before the last refine, and an identical retry
reproduces identical numbering.

After a successful splice the whole task is re-elaborated from scratch;
the goal table is whatever that elaboration registers. The invariant
tying the two together: the hole numbers in the task term and the keys
of the goal table are always the same set.
"""

from __future__ import annotations

from dataclasses import dataclass, replace

from .environment import GlobalEnv
from .errors import NoSuchGoal, NoTask, NothingToUndo, TaskNotAnnotated
from .kernel import EMPTY_CONTEXT, Goal, check_expr, infer_expr
from .syntax import pretty
from .terms import Ann, Expr, renumber_holes, replace_hole


@dataclass(frozen=True)
class Snapshot:
    current: Expr
    goals: tuple[Goal, ...]
    hole_counter: int


@dataclass(frozen=True)
class SessionState:
    env: GlobalEnv
    current: Expr | None = None
    goals: tuple[Goal, ...] = ()
    hole_counter: int = 0
    history: tuple[Snapshot, ...] = ()

    def goal(self, number: int) -> Goal:
        for g in self.goals:
            if g.number == number:
                return g
        raise NoSuchGoal(f"no goal numbered {number}")

    def sorted_goals(self) -> tuple[Goal, ...]:
        return tuple(sorted(self.goals, key=lambda g: g.number))


def new_session(env: GlobalEnv) -> SessionState:
    return SessionState(env=env)


def set_task(state: SessionState, expr: Expr) -> SessionState:
    """Install `(term : type)` as the task; holes renumber from 0."""
    if not isinstance(expr, Ann):
        raise TaskNotAnnotated(
            "task must be of form (term : type)", term=pretty(expr))
    numbered, counter = renumber_holes(expr, 0)
    goals = _elaborate(state.env, numbered)
    return replace(
        state, current=numbered, goals=goals, hole_counter=counter,
        history=())


def refine(state: SessionState, number: int, expr: Expr) -> SessionState:
    """Solve goal `number` with `expr`, which may introduce new holes."""
    goal = state.goal(number)
    assert state.current is not None
    numbered, counter = renumber_holes(expr, state.hole_counter)
    # check against the goal before touching the task
    scratch: list[Goal] = []
    check_expr(state.env, goal.ctx, numbered, goal.ty, scratch)
    new_current = replace_hole(state.current, number, numbered)
    goals = _elaborate(state.env, new_current)
    snap = Snapshot(state.current, state.goals, state.hole_counter)
    return replace(
        state, current=new_current, goals=goals, hole_counter=counter,
        history=state.history + (snap,))


def undo(state: SessionState) -> SessionState:
    if not state.history:
        raise NothingToUndo("nothing to undo")
    snap = state.history[-1]
    return replace(
        state, current=snap.current, goals=snap.goals,
        hole_counter=snap.hole_counter, history=state.history[:-1])


def goal_rows(state: SessionState) -> tuple[Goal, ...]:
    if state.current is None:
        raise NoTask("no task is set")
    return state.sorted_goals()


def _elaborate(env: GlobalEnv, task: Expr) -> tuple[Goal, ...]:
    goals: list[Goal] = []
    infer_expr(env, EMPTY_CONTEXT, task, goals)
    return tuple(goals)
