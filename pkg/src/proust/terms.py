"""Abstract syntax for the proof language.

Nodes are frozen dataclasses, so structural equality and hashing come for
free and every transformation builds new terms. Field order on each node
matches the printed argument order; the generic traversals below rely on
that to visit subterms left to right as they appear in the surface syntax.
"""

from __future__ import annotations

import dataclasses
from dataclasses import dataclass


@dataclass(frozen=True)
class Expr:
    pass


@dataclass(frozen=True)
class Var(Expr):
    name: str


@dataclass(frozen=True)
class Lam(Expr):
    var: str
    body: Expr


@dataclass(frozen=True)
class App(Expr):
    rator: Expr
    rand: Expr


@dataclass(frozen=True)
class Ann(Expr):
    subject: Expr
    ascription: Expr


@dataclass(frozen=True)
class Pi(Expr):
    """Dependent function type; var == "_" is the plain arrow."""

    var: str
    domain: Expr
    codomain: Expr


@dataclass(frozen=True)
class Sigma(Expr):
    """Dependent pair type (the existential)."""

    var: str
    domain: Expr
    body: Expr


@dataclass(frozen=True)
class TypeSort(Expr):
    pass


@dataclass(frozen=True)
class Bot(Expr):
    pass


@dataclass(frozen=True)
class NatT(Expr):
    pass


@dataclass(frozen=True)
class Zero(Expr):
    pass


@dataclass(frozen=True)
class Succ(Expr):
    pred: Expr


@dataclass(frozen=True)
class AndT(Expr):
    left: Expr
    right: Expr


@dataclass(frozen=True)
class AndIntro(Expr):
    left: Expr
    right: Expr


@dataclass(frozen=True)
class AndElim0(Expr):
    pair: Expr


@dataclass(frozen=True)
class AndElim1(Expr):
    pair: Expr


@dataclass(frozen=True)
class OrT(Expr):
    left: Expr
    right: Expr


@dataclass(frozen=True)
class OrIntro0(Expr):
    arg: Expr


@dataclass(frozen=True)
class OrIntro1(Expr):
    arg: Expr


@dataclass(frozen=True)
class OrElim(Expr):
    scrutinee: Expr
    on_left: Expr
    on_right: Expr


@dataclass(frozen=True)
class BotElim(Expr):
    arg: Expr


@dataclass(frozen=True)
class EqT(Expr):
    lhs: Expr
    rhs: Expr


@dataclass(frozen=True)
class EqRefl(Expr):
    subject: Expr


@dataclass(frozen=True)
class EqElim(Expr):
    """Transport: from subject = target, carry base : (motive subject)
    to (motive target)."""

    subject: Expr
    motive: Expr
    base: Expr
    target: Expr
    equation: Expr


@dataclass(frozen=True)
class NatInd(Expr):
    motive: Expr
    zero_case: Expr
    succ_case: Expr
    scrutinee: Expr


@dataclass(frozen=True)
class ExIntro(Expr):
    witness_type: Expr
    witness: Expr
    proof: Expr


@dataclass(frozen=True)
class ExElim(Expr):
    result_type: Expr
    consumer: Expr
    package: Expr


@dataclass(frozen=True)
class Hole(Expr):
    number: int


def arrow(domain: Expr, codomain: Expr) -> Pi:
    return Pi("_", domain, codomain)


def neg(e: Expr) -> Pi:
    """The negation sugar target: (e -> bottom)."""
    return Pi("_", e, Bot())


# Binding structure: (node class, binder field, fields the binder scopes over).
_BINDERS: dict[type, tuple[str, tuple[str, ...]]] = {
    Lam: ("var", ("body",)),
    Pi: ("var", ("codomain",)),
    Sigma: ("var", ("body",)),
}


def subterms(e: Expr) -> tuple[Expr, ...]:
    """Direct Expr children in field (printed) order."""
    return tuple(
        v for f in dataclasses.fields(e)
        if isinstance(v := getattr(e, f.name), Expr)
    )


def with_subterms(e: Expr, new: tuple[Expr, ...]) -> Expr:
    """Rebuild `e` with its Expr children replaced positionally."""
    it = iter(new)
    updates = {
        f.name: next(it)
        for f in dataclasses.fields(e)
        if isinstance(getattr(e, f.name), Expr)
    }
    return dataclasses.replace(e, **updates)


def free_vars(e: Expr) -> frozenset[str]:
    match e:
        case Var(name):
            return frozenset((name,))
        case Lam(var, body):
            return free_vars(body) - {var}
        case Pi(var, domain, codomain):
            return free_vars(domain) | (free_vars(codomain) - {var})
        case Sigma(var, domain, body):
            return free_vars(domain) | (free_vars(body) - {var})
        case _:
            out: frozenset[str] = frozenset()
            for sub in subterms(e):
                out = out | free_vars(sub)
            return out


def hole_numbers(e: Expr) -> list[int]:
    """Hole numbers in left-to-right (preorder) appearance order."""
    acc: list[int] = []

    def walk(t: Expr) -> None:
        if isinstance(t, Hole):
            acc.append(t.number)
        else:
            for sub in subterms(t):
                walk(sub)

    walk(e)
    return acc


def contains_hole(e: Expr) -> bool:
    if isinstance(e, Hole):
        return True
    return any(contains_hole(sub) for sub in subterms(e))


def renumber_holes(e: Expr, start: int) -> tuple[Expr, int]:
    """Renumber every hole left to right starting at `start`.

    Returns the renumbered term and the next unused number.
    """
    counter = start

    def walk(t: Expr) -> Expr:
        nonlocal counter
        if isinstance(t, Hole):
            h = Hole(counter)
            counter += 1
            return h
        subs = subterms(t)
        if not subs:
            return t
        return with_subterms(t, tuple(walk(s) for s in subs))

    return walk(e), counter


def replace_hole(e: Expr, number: int, replacement: Expr) -> Expr:
    if isinstance(e, Hole):
        return replacement if e.number == number else e
    subs = subterms(e)
    if not subs:
        return e
    return with_subterms(e, tuple(replace_hole(s, number, replacement) for s in subs))


def binder_of(e: Expr) -> tuple[str, tuple[str, ...]] | None:
    """(binder field name, scoped field names) for binding nodes, else None."""
    return _BINDERS.get(type(e))
