"""Classical truth-table semantics for the propositional fragment.

A type built from postulated atoms, non-dependent arrows, conjunction,
disjunction, and falsity maps onto a boolean formula; everything else is
outside the fragment. `entails` decides semantic consequence by brute
enumeration of valuations, which is exactly the check the type checker's
proofs can be audited against: anything proved without extra postulates
must come out classically valid.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Iterable, Mapping

from .environment import GlobalEnv
from .errors import TooManyAtoms
from .terms import AndT, Bot, Expr, OrT, Pi, TypeSort, Var, free_vars

ATOM_CAP = 20


@dataclass(frozen=True)
class PropFormula:
    pass


@dataclass(frozen=True)
class Atom(PropFormula):
    name: str


@dataclass(frozen=True)
class Implies(PropFormula):
    left: PropFormula
    right: PropFormula


@dataclass(frozen=True)
class Conj(PropFormula):
    left: PropFormula
    right: PropFormula


@dataclass(frozen=True)
class Disj(PropFormula):
    left: PropFormula
    right: PropFormula


@dataclass(frozen=True)
class Falsum(PropFormula):
    pass


def extract(env: GlobalEnv, e: Expr) -> PropFormula | None:
    """Map a type to its boolean skeleton, or None outside the fragment."""
    match e:
        case Bot():
            return Falsum()
        case Var(name):
            entry = env.lookup(name)
            if (entry is not None and entry.body is None
                    and isinstance(entry.ty, TypeSort)):
                return Atom(name)
            return None
        case AndT(l, r) | OrT(l, r):
            fl, fr = extract(env, l), extract(env, r)
            if fl is None or fr is None:
                return None
            ctor = Conj if isinstance(e, AndT) else Disj
            return ctor(fl, fr)
        case Pi(var, domain, codomain):
            if var != "_" and var in free_vars(codomain):
                return None  # genuinely dependent
            fl, fr = extract(env, domain), extract(env, codomain)
            if fl is None or fr is None:
                return None
            return Implies(fl, fr)
        case _:
            return None


def atoms(f: PropFormula) -> frozenset[str]:
    match f:
        case Atom(name):
            return frozenset((name,))
        case Implies(l, r) | Conj(l, r) | Disj(l, r):
            return atoms(l) | atoms(r)
        case _:
            return frozenset()


def eval_formula(valuation: Mapping[str, bool], f: PropFormula) -> bool:
    """Classical evaluation; a missing atom raises KeyError."""
    match f:
        case Atom(name):
            return bool(valuation[name])
        case Implies(l, r):
            return (not eval_formula(valuation, l)) or eval_formula(valuation, r)
        case Conj(l, r):
            return eval_formula(valuation, l) and eval_formula(valuation, r)
        case Disj(l, r):
            return eval_formula(valuation, l) or eval_formula(valuation, r)
        case Falsum():
            return False
    raise ValueError(f"unknown formula {f!r}")


def entails(hypotheses: Iterable[PropFormula], goal: PropFormula,
            atom_cap: int = ATOM_CAP) -> bool:
    """True iff every valuation satisfying the hypotheses satisfies
    the goal."""
    hyps = tuple(hypotheses)
    names = sorted(atoms(goal).union(*(atoms(h) for h in hyps))
                   if hyps else atoms(goal))
    if len(names) > atom_cap:
        raise TooManyAtoms(
            f"{len(names)} atoms exceed the cap of {atom_cap}")
    for bits in itertools.product((False, True), repeat=len(names)):
        valuation = dict(zip(names, bits))
        if all(eval_formula(valuation, h) for h in hyps):
            if not eval_formula(valuation, goal):
                return False
    return True


def tautology(f: PropFormula, atom_cap: int = ATOM_CAP) -> bool:
    return entails((), f, atom_cap)
