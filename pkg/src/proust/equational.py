"""Substitution, alpha-equivalence, reduction, definitional equality.

Reduction is untyped: head steps are beta, delta (unfolding defined
global names; postulates stay put), and the eliminator rules for the
pair, sum, equality, number, and package formers. `whnf` stops at the
first head constructor or stuck neutral; `normalize` then rebuilds every
subterm, including under binders. Definitional equality is
alpha-equivalence of full normal forms; there is no eta rule.

Every public entry point counts head steps against a budget (default
100000, overridable per call or via PROUST_STEP_BUDGET) so a looping
term raises a structured error instead of hanging the process.
"""

from __future__ import annotations

import os
from contextlib import contextmanager
from contextvars import ContextVar
from typing import TYPE_CHECKING, Iterator

from .errors import BudgetExceeded
from .terms import (
    AndElim0,
    AndElim1,
    AndIntro,
    Ann,
    App,
    EqElim,
    EqRefl,
    ExElim,
    ExIntro,
    Expr,
    Hole,
    Lam,
    NatInd,
    OrElim,
    OrIntro0,
    OrIntro1,
    Pi,
    Sigma,
    Succ,
    Var,
    Zero,
    free_vars,
    subterms,
    with_subterms,
)

if TYPE_CHECKING:
    from .environment import GlobalEnv

DEFAULT_STEP_BUDGET = 100_000

# Counter for machine-generated names, scoped to one top-level operation
# so replaying a command sequence regenerates identical names.
_fresh: ContextVar[list[int] | None] = ContextVar("fresh_counter", default=None)


@contextmanager
def fresh_scope() -> Iterator[None]:
    """Install a name counter unless an enclosing operation already did."""
    if _fresh.get() is not None:
        yield
        return
    token = _fresh.set([0])
    try:
        yield
    finally:
        _fresh.reset(token)


def fresh_name(base: str) -> str:
    """A name no surface term can contain; base keeps its readable stem."""
    cell = _fresh.get()
    assert cell is not None, "fresh_name used outside fresh_scope"
    n = cell[0]
    cell[0] = n + 1
    stem = base.split("%")[0] or "x"
    return f"{stem}%{n}"


def subst(e: Expr, var: str, replacement: Expr) -> Expr:
    """Capture-avoiding substitution of `replacement` for free `var`."""
    with fresh_scope():
        return _subst(e, var, replacement, free_vars(replacement))


def _subst(e: Expr, var: str, rep: Expr, rep_fv: frozenset[str]) -> Expr:
    match e:
        case Var(name):
            return rep if name == var else e
        case Lam(x, body):
            if x == var:
                return e
            if x in rep_fv:
                x2 = fresh_name(x)
                body = _subst(body, x, Var(x2), frozenset((x2,)))
                return Lam(x2, _subst(body, var, rep, rep_fv))
            return Lam(x, _subst(body, var, rep, rep_fv))
        case Pi(x, domain, cod):
            domain = _subst(domain, var, rep, rep_fv)
            if x == var:
                return Pi(x, domain, cod)
            if x in rep_fv:
                x2 = fresh_name(x)
                cod = _subst(cod, x, Var(x2), frozenset((x2,)))
                return Pi(x2, domain, _subst(cod, var, rep, rep_fv))
            return Pi(x, domain, _subst(cod, var, rep, rep_fv))
        case Sigma(x, domain, body):
            domain = _subst(domain, var, rep, rep_fv)
            if x == var:
                return Sigma(x, domain, body)
            if x in rep_fv:
                x2 = fresh_name(x)
                body = _subst(body, x, Var(x2), frozenset((x2,)))
                return Sigma(x2, domain, _subst(body, var, rep, rep_fv))
            return Sigma(x, domain, _subst(body, var, rep, rep_fv))
        case _:
            subs = subterms(e)
            if not subs:
                return e
            return with_subterms(
                e, tuple(_subst(s, var, rep, rep_fv) for s in subs))


def alpha_equiv(a: Expr, b: Expr) -> bool:
    """Structural equality up to consistent renaming of bound names."""
    return _alpha(a, b, {}, {}, 0)


def _alpha(a: Expr, b: Expr, env_a: dict, env_b: dict, depth: int) -> bool:
    if type(a) is not type(b):
        return False
    match a, b:
        case Var(x), Var(y):
            da, db = env_a.get(x), env_b.get(y)
            if da is None and db is None:
                return x == y  # both free
            return da == db  # same binder depth, or one bound one free
        case Hole(n), Hole(m):
            return n == m
        case Lam(x, body_a), Lam(y, body_b):
            ea = {**env_a, x: depth}
            eb = {**env_b, y: depth}
            return _alpha(body_a, body_b, ea, eb, depth + 1)
        case Pi(x, dom_a, cod_a), Pi(y, dom_b, cod_b):
            if not _alpha(dom_a, dom_b, env_a, env_b, depth):
                return False
            ea = {**env_a, x: depth}
            eb = {**env_b, y: depth}
            return _alpha(cod_a, cod_b, ea, eb, depth + 1)
        case Sigma(x, dom_a, body_a), Sigma(y, dom_b, body_b):
            if not _alpha(dom_a, dom_b, env_a, env_b, depth):
                return False
            ea = {**env_a, x: depth}
            eb = {**env_b, y: depth}
            return _alpha(body_a, body_b, ea, eb, depth + 1)
        case _:
            subs_a, subs_b = subterms(a), subterms(b)
            if len(subs_a) != len(subs_b):
                return False
            return all(
                _alpha(sa, sb, env_a, env_b, depth)
                for sa, sb in zip(subs_a, subs_b))


def resolve_budget(budget: int | None) -> int:
    if budget is not None:
        return budget
    raw = os.environ.get("PROUST_STEP_BUDGET")
    if raw is not None:
        try:
            return int(raw)
        except ValueError:
            pass
    return DEFAULT_STEP_BUDGET


class _Steps:
    """Mutable step allowance for one reduction request."""

    def __init__(self, budget: int, origin: Expr):
        self.remaining = budget
        self.origin = origin

    def spend(self) -> None:
        if self.remaining <= 0:
            from .syntax import pretty

            raise BudgetExceeded(
                "step budget exceeded while reducing",
                term=pretty(self.origin))
        self.remaining -= 1


def whnf(env: GlobalEnv, e: Expr, budget: int | None = None) -> Expr:
    with fresh_scope():
        return _whnf(env, e, _Steps(resolve_budget(budget), e))


def _whnf(env: GlobalEnv, e: Expr, steps: _Steps) -> Expr:
    # iterate rather than tail-call, unwinding application spines into an
    # argument stack, so a long head reduction exhausts the budget instead
    # of the interpreter stack
    args: list[Expr] = []  # pending arguments, innermost last
    while True:
        match e:
            case App(rator, rand):
                args.append(rand)
                e = rator
                continue
            case Lam(x, body) if args:
                steps.spend()
                e = _subst_scoped(body, x, args.pop())
                continue
            case Var(name):
                entry = env.lookup(name)
                if entry is not None and entry.body is not None:
                    steps.spend()
                    e = entry.body
                    continue
                break
            case Ann(subject, _):
                e = subject
                continue
            case AndElim0(pair):
                p = _whnf(env, pair, steps)
                if isinstance(p, AndIntro):
                    steps.spend()
                    e = p.left
                    continue
                e = AndElim0(p)
                break
            case AndElim1(pair):
                p = _whnf(env, pair, steps)
                if isinstance(p, AndIntro):
                    steps.spend()
                    e = p.right
                    continue
                e = AndElim1(p)
                break
            case OrElim(scrutinee, on_left, on_right):
                s = _whnf(env, scrutinee, steps)
                if isinstance(s, OrIntro0):
                    steps.spend()
                    e = App(on_left, s.arg)
                    continue
                if isinstance(s, OrIntro1):
                    steps.spend()
                    e = App(on_right, s.arg)
                    continue
                e = OrElim(s, on_left, on_right)
                break
            case EqElim(subject, motive, base, target, equation):
                q = _whnf(env, equation, steps)
                if isinstance(q, EqRefl):
                    steps.spend()
                    e = base
                    continue
                e = EqElim(subject, motive, base, target, q)
                break
            case NatInd(motive, zero_case, succ_case, scrutinee):
                n = _whnf(env, scrutinee, steps)
                if isinstance(n, Zero):
                    steps.spend()
                    e = zero_case
                    continue
                if isinstance(n, Succ):
                    steps.spend()
                    rec = NatInd(motive, zero_case, succ_case, n.pred)
                    e = App(App(succ_case, n.pred), rec)
                    continue
                e = NatInd(motive, zero_case, succ_case, n)
                break
            case ExElim(result_type, consumer, package):
                p = _whnf(env, package, steps)
                if isinstance(p, ExIntro):
                    steps.spend()
                    e = App(App(consumer, p.witness), p.proof)
                    continue
                e = ExElim(result_type, consumer, p)
                break
            case _:
                break
    for rand in reversed(args):
        e = App(e, rand)
    return e


def _subst_scoped(e: Expr, var: str, rep: Expr) -> Expr:
    # like subst() but assumes a fresh_scope is already active
    return _subst(e, var, rep, free_vars(rep))


def normalize(env: GlobalEnv, e: Expr, budget: int | None = None) -> Expr:
    """Full beta/delta/iota normal form, reducing under binders."""
    with fresh_scope():
        return _normalize(env, e, _Steps(resolve_budget(budget), e))


def _normalize(env: GlobalEnv, e: Expr, steps: _Steps) -> Expr:
    e = _whnf(env, e, steps)
    subs = subterms(e)
    if not subs:
        return e
    return with_subterms(e, tuple(_normalize(env, s, steps) for s in subs))


def def_equal(env: GlobalEnv, a: Expr, b: Expr, budget: int | None = None) -> bool:
    """Definitional equality: alpha-equivalence of normal forms."""
    limit = resolve_budget(budget)
    return alpha_equiv(normalize(env, a, limit), normalize(env, b, limit))
