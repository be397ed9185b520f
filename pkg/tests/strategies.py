"""Hypothesis generators and walk helpers shared across the test modules.

`exprs` builds arbitrary well-formed syntax trees for printer/parser
round trips. `typed_pairs` builds (term, type) pairs that are well typed
by construction in the three-atom environment: every step of the
generator mirrors a checking rule, so the pair always checks. That gives
the reduction, stability, soundness, and refinement properties a rich
stream of honest inputs instead of rejection sampling.

`rename_binders` and `decompose` feed the alpha-stability and
refinement-coherence properties.
"""

from __future__ import annotations

import itertools

from hypothesis import strategies as st

from proust.terms import (
    AndElim0,
    AndElim1,
    AndIntro,
    AndT,
    Ann,
    App,
    BotElim,
    Bot,
    EqElim,
    EqRefl,
    EqT,
    ExElim,
    ExIntro,
    Expr,
    Hole,
    Lam,
    NatInd,
    NatT,
    OrElim,
    OrIntro0,
    OrIntro1,
    OrT,
    Pi,
    Sigma,
    Succ,
    TypeSort,
    Var,
    Zero,
)

NAMES = ("x", "y", "z", "f", "g", "foo", "bar-baz", "A", "B", "nat2", "α")


def identifiers() -> st.SearchStrategy[str]:
    return st.sampled_from(NAMES)


def binders() -> st.SearchStrategy[str]:
    return st.sampled_from(NAMES + ("_",))


def exprs() -> st.SearchStrategy[Expr]:
    """Arbitrary well-formed terms (not necessarily well typed)."""
    leaves = st.one_of(
        st.builds(Var, identifiers()),
        st.just(TypeSort()),
        st.just(Bot()),
        st.just(NatT()),
        st.just(Zero()),
        st.builds(Hole, st.integers(0, 30)),
    )

    def extend(sub: st.SearchStrategy[Expr]) -> st.SearchStrategy[Expr]:
        return st.one_of(
            st.builds(Lam, binders(), sub),
            st.builds(App, sub, sub),
            st.builds(Ann, sub, sub),
            st.builds(Pi, binders(), sub, sub),
            st.builds(Sigma, binders(), sub, sub),
            st.builds(Succ, sub),
            st.builds(AndT, sub, sub),
            st.builds(OrT, sub, sub),
            st.builds(EqT, sub, sub),
            st.builds(AndIntro, sub, sub),
            st.builds(AndElim0, sub),
            st.builds(AndElim1, sub),
            st.builds(OrIntro0, sub),
            st.builds(OrIntro1, sub),
            st.builds(OrElim, sub, sub, sub),
            st.builds(BotElim, sub),
            st.builds(EqRefl, sub),
            st.builds(EqElim, sub, sub, sub, sub, sub),
            st.builds(NatInd, sub, sub, sub, sub),
            st.builds(ExIntro, sub, sub, sub),
            st.builds(ExElim, sub, sub, sub),
        )

    return st.recursive(leaves, extend, max_leaves=25)


ATOMS = (Var("A"), Var("B"), Var("C"))


@st.composite
def prop_types(draw, depth: int = 2) -> Expr:
    """Types over the postulated atoms A, B, C."""
    roll = draw(st.integers(0, 99))
    if depth == 0 or roll < 40:
        return draw(st.sampled_from(ATOMS))
    left = draw(prop_types(depth=depth - 1))
    right = draw(prop_types(depth=depth - 1))
    if roll < 60:
        return Pi("_", left, right)
    if roll < 75:
        return AndT(left, right)
    if roll < 90:
        return OrT(left, right)
    return Pi("_", left, Bot())


def _numeral(n: int) -> Expr:
    e: Expr = Zero()
    for _ in range(n):
        e = Succ(e)
    return e


def _inferable(term: Expr, ty: Expr) -> Expr:
    """Annotate the checking-mode-only forms so the term synthesizes."""
    if isinstance(term, (Lam, OrIntro0, OrIntro1, AndIntro, ExIntro)):
        return Ann(term, ty)
    return term


@st.composite
def typed_pairs(draw, nats: bool = True, eqs: bool = True,
                max_depth: int = 4) -> tuple[Expr, Expr]:
    """A closed (term, type) pair that checks in the A/B/C environment."""

    def go(ctx: tuple[tuple[str, Expr], ...], depth: int) -> tuple[Expr, Expr]:
        ops: list[str] = ["identity"]
        if ctx:
            ops += ["var"] * 4
        if nats:
            ops += ["numeral"]
        if depth > 0:
            ops += ["lam"] * 4 + ["pair", "pair", "inl", "inr",
                                  "redex", "proj0", "proj1"]
            if eqs:
                ops += ["refl"]
        op = draw(st.sampled_from(ops))
        x = f"v{len(ctx)}"

        if op == "var":
            name, ty = draw(st.sampled_from(ctx))
            return Var(name), ty
        if op == "numeral":
            return _numeral(draw(st.integers(0, 4))), NatT()
        if op == "identity":
            ty = draw(prop_types(depth=1))
            return Lam(x, Var(x)), Pi("_", ty, ty)
        if op == "lam":
            dom = draw(prop_types(depth=1))
            body, cod = go(ctx + ((x, dom),), depth - 1)
            return Lam(x, body), Pi("_", dom, cod)
        if op == "pair":
            a, ta = go(ctx, depth - 1)
            b, tb = go(ctx, depth - 1)
            return AndIntro(a, b), AndT(ta, tb)
        if op == "inl":
            a, ta = go(ctx, depth - 1)
            return OrIntro0(a), OrT(ta, draw(prop_types(depth=1)))
        if op == "inr":
            a, ta = go(ctx, depth - 1)
            return OrIntro1(a), OrT(draw(prop_types(depth=1)), ta)
        if op == "redex":
            a, ta = go(ctx, depth - 1)
            body, cod = go(ctx + ((x, ta),), depth - 1)
            fn = Ann(Lam(x, body), Pi("_", ta, cod))
            return App(fn, a), cod
        if op == "proj0":
            a, ta = go(ctx, depth - 1)
            b, tb = go(ctx, depth - 1)
            return AndElim0(AndIntro(_inferable(a, ta), _inferable(b, tb))), ta
        if op == "proj1":
            a, ta = go(ctx, depth - 1)
            b, tb = go(ctx, depth - 1)
            return AndElim1(AndIntro(_inferable(a, ta), _inferable(b, tb))), tb
        assert op == "refl"
        # closed subject: the equation is part of the type, and every
        # type stays closed so binders can wrap terms non-dependently
        t, tt = go((), depth - 1)
        t = _inferable(t, tt)
        return EqRefl(t), EqT(t, t)

    return go((), max_depth)


def rename_binders(e: Expr) -> Expr:
    """An alpha-variant of `e` with every named binder renamed to a
    fresh `r{i}`; free variables are untouched."""
    from proust.equational import subst

    counter = itertools.count()

    def walk(t: Expr) -> Expr:
        match t:
            case Lam(x, body):
                if x == "_":
                    return Lam("_", walk(body))
                nx = f"r{next(counter)}"
                return Lam(nx, walk(subst(body, x, Var(nx))))
            case Pi(x, domain, codomain):
                if x == "_":
                    return Pi("_", walk(domain), walk(codomain))
                nx = f"r{next(counter)}"
                return Pi(nx, walk(domain), walk(subst(codomain, x, Var(nx))))
            case Sigma(x, domain, body):
                if x == "_":
                    return Sigma("_", walk(domain), walk(body))
                nx = f"r{next(counter)}"
                return Sigma(nx, walk(domain), walk(subst(body, x, Var(nx))))
            case _:
                from proust.terms import subterms, with_subterms

                subs = subterms(t)
                if not subs:
                    return t
                return with_subterms(t, tuple(walk(s) for s in subs))

    return walk(e)


def decompose(term: Expr) -> tuple[Expr, list[Expr]]:
    """One refinement step for `term`: a skeleton whose holes stand for
    the returned children, or the term itself as a leaf splice."""
    match term:
        case Lam(x, body):
            return Lam(x, Hole(0)), [body]
        case AndIntro(a, b):
            return AndIntro(Hole(0), Hole(1)), [a, b]
        case OrIntro0(a):
            return OrIntro0(Hole(0)), [a]
        case OrIntro1(b):
            return OrIntro1(Hole(0)), [b]
        case Succ(pred):
            return Succ(Hole(0)), [pred]
        case _:
            return term, []
