"""Global environment: named definitions and postulates.

An environment is an immutable ordered sequence of entries. A definition
carries a checked body; a postulate has no body and therefore never
unfolds, which is what makes postulated names opaque atoms for both the
reducer and the truth-table semantics. Names may not be redefined.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .errors import DuplicateName, HoleInDefinition, ProustError, TaskNotAnnotated
from .syntax import is_identifier, pretty
from .terms import Ann, Expr, TypeSort, contains_hole


@dataclass(frozen=True)
class EnvEntry:
    name: str
    ty: Expr
    body: Expr | None  # None marks a postulate


@dataclass(frozen=True)
class GlobalEnv:
    entries: tuple[EnvEntry, ...] = ()
    _index: dict = field(default_factory=dict, compare=False, repr=False)

    def __post_init__(self) -> None:
        self._index.update({e.name: e for e in self.entries})

    def lookup(self, name: str) -> EnvEntry | None:
        return self._index.get(name)

    def _claim(self, name: str) -> None:
        if not is_identifier(name):
            raise ProustError(f"invalid name {name!r}")
        if self.lookup(name) is not None:
            raise DuplicateName(f"{name} is already defined")


EMPTY_ENV = GlobalEnv()


def define(env: GlobalEnv, name: str, annotated: Expr) -> GlobalEnv:
    """Check `(term : type)` and append it under `name`."""
    from . import kernel

    env._claim(name)
    if not isinstance(annotated, Ann):
        raise TaskNotAnnotated(
            "a definition must be of form (term : type)",
            term=pretty(annotated))
    if contains_hole(annotated):
        raise HoleInDefinition(
            f"definition of {name} still contains holes",
            term=pretty(annotated))
    goals: list[kernel.Goal] = []
    kernel.infer_expr(env, kernel.EMPTY_CONTEXT, annotated, goals)
    assert not goals, "hole-free definition registered goals"
    return GlobalEnv(
        env.entries + (EnvEntry(name, annotated.ascription,
                                annotated.subject),))


def postulate(env: GlobalEnv, name: str, ty: Expr) -> GlobalEnv:
    """Assume `name : ty` without a body; `ty` must itself be a type."""
    from . import kernel

    env._claim(name)
    if contains_hole(ty):
        raise HoleInDefinition(
            f"postulated type for {name} contains holes", term=pretty(ty))
    goals: list[kernel.Goal] = []
    kernel.check_expr(env, kernel.EMPTY_CONTEXT, ty, TypeSort(), goals)
    return GlobalEnv(env.entries + (EnvEntry(name, ty, None),))


def check_proof(env: GlobalEnv, annotated: Expr) -> bool:
    """True iff the annotated term checks in the empty context with no
    goals left open. Kernel errors propagate."""
    from . import kernel

    if not isinstance(annotated, Ann):
        raise TaskNotAnnotated(
            "a proof must be of form (term : type)",
            term=pretty(annotated))
    goals: list[kernel.Goal] = []
    kernel.infer_expr(env, kernel.EMPTY_CONTEXT, annotated, goals)
    return not goals
