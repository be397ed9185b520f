"""Structured failures shared by every layer.

Each error carries a stable machine-readable `kind` plus whatever
pretty-printed pieces a front end needs to render it without another
round trip.
"""

from __future__ import annotations


class ProustError(Exception):
    """Base class; `kind` is the wire-level discriminator."""

    kind = "error"

    def __init__(self, message: str, **details: str):
        super().__init__(message)
        self.message = message
        # detail values are already pretty-printed strings
        self.details = details

    def __str__(self) -> str:
        if not self.details:
            return self.message
        parts = ", ".join(f"{k}: {v}" for k, v in self.details.items())
        return f"{self.message} ({parts})"


class ParseError(ProustError):
    kind = "parse"


class CannotCheck(ProustError):
    kind = "cannot-check"


class CannotInfer(ProustError):
    kind = "cannot-infer"


class NotAFunction(ProustError):
    kind = "not-a-function"


class BudgetExceeded(ProustError):
    kind = "budget"


class DuplicateName(ProustError):
    kind = "duplicate-name"


class HoleInDefinition(ProustError):
    kind = "hole-in-definition"


class TaskNotAnnotated(ProustError):
    kind = "task-not-annotated"


class NoSuchGoal(ProustError):
    kind = "no-such-goal"


class NothingToUndo(ProustError):
    kind = "nothing-to-undo"


class NoTask(ProustError):
    kind = "no-task"


class IncompleteProof(ProustError):
    kind = "incomplete-proof"


class NotPropositional(ProustError):
    kind = "not-propositional"


class BadRequest(ProustError):
    kind = "bad-request"


class InternalError(ProustError):
    kind = "internal"


class TooManyAtoms(ProustError):
    kind = "too-many-atoms"
