"""A nano proof assistant: a dependently typed lambda calculus with a
bidirectional checker, interactive hole refinement, and a session
protocol served over CLI and HTTP."""

from .environment import EMPTY_ENV, GlobalEnv, check_proof, define, postulate
from .equational import alpha_equiv, def_equal, normalize, subst, whnf
from .kernel import (
    EMPTY_CONTEXT,
    CheckOutcome,
    Context,
    Goal,
    InferOutcome,
    check,
    infer,
)
from .session import SessionState, new_session, refine, set_task, undo
from .syntax import parse, pretty

__all__ = [
    "EMPTY_CONTEXT",
    "EMPTY_ENV",
    "CheckOutcome",
    "Context",
    "GlobalEnv",
    "Goal",
    "InferOutcome",
    "SessionState",
    "alpha_equiv",
    "check",
    "check_proof",
    "def_equal",
    "define",
    "infer",
    "new_session",
    "normalize",
    "parse",
    "postulate",
    "pretty",
    "refine",
    "set_task",
    "subst",
    "undo",
    "whnf",
]
