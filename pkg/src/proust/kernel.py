"""Bidirectional type checker.

`check_expr` pushes an expected type into a term; `infer_expr` synthesizes
one. Introduction forms and holes are handled in checking mode first;
anything else falls back to inference followed by definitional-equality
comparison. A hole never fails a check: it registers a goal carrying the
expected type and a snapshot of the local context.

Lambda binders keep their written names whenever that cannot capture
anything (the avoid set spans the context, its types, the codomain, and
the body); otherwise they are freshened to an unwritable `name%N`.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import TYPE_CHECKING

from .equational import def_equal, fresh_name, fresh_scope, subst, whnf
from .errors import CannotCheck, CannotInfer, NotAFunction, ProustError
from .syntax import pretty
from .terms import (
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
    contains_hole,
    free_vars,
)

if TYPE_CHECKING:
    from .environment import GlobalEnv


@dataclass(frozen=True)
class Context:
    """Ordered local bindings; the innermost occurrence of a name wins."""

    bindings: tuple[tuple[str, Expr], ...] = ()

    def extend(self, name: str, ty: Expr) -> Context:
        return Context(self.bindings + ((name, ty),))

    def lookup(self, name: str) -> Expr | None:
        for n, t in reversed(self.bindings):
            if n == name:
                return t
        return None

    def names(self) -> frozenset[str]:
        return frozenset(n for n, _ in self.bindings)

    def rows(self) -> tuple[tuple[str, Expr], ...]:
        return self.bindings


EMPTY_CONTEXT = Context()


@dataclass(frozen=True)
class Goal:
    number: int
    ty: Expr
    ctx: Context


@dataclass(frozen=True)
class CheckOutcome:
    ok: bool
    goals: tuple[Goal, ...]
    error: ProustError | None


@dataclass(frozen=True)
class InferOutcome:
    ok: bool
    ty: Expr | None
    goals: tuple[Goal, ...]
    error: ProustError | None


def _ctx_detail(ctx: Context) -> str:
    return ", ".join(f"{n} : {pretty(t)}" for n, t in ctx.rows())


def _avoid_for(ctx: Context) -> frozenset[str]:
    avoid = ctx.names()
    for _, t in ctx.rows():
        avoid |= free_vars(t)
    return avoid


def _choose_binder(preferred: str, pivar: str, cod: Expr, ctx: Context,
                   extra: frozenset[str]) -> str:
    """Pick the name actually bound when entering a Pi/Sigma scope."""
    if preferred == "_":
        if pivar != "_" and pivar in free_vars(cod):
            preferred = pivar  # the codomain needs a referable name
        else:
            return "_"
    avoid = _avoid_for(ctx) | (free_vars(cod) - {pivar}) | extra
    if preferred not in avoid:
        return preferred
    return fresh_name(preferred)


def _register_goal(hole: Hole, ty: Expr, ctx: Context,
                   goals: list[Goal]) -> None:
    if contains_hole(ty):
        raise CannotCheck(
            "a goal type may not itself contain a hole",
            expected=pretty(ty), context=_ctx_detail(ctx))
    if any(g.number == hole.number for g in goals):
        raise CannotCheck(
            f"hole ?{hole.number} occurs more than once",
            term=pretty(hole))
    goals.append(Goal(hole.number, ty, ctx))


def check_expr(env: GlobalEnv, ctx: Context, e: Expr, ty: Expr,
               goals: list[Goal]) -> None:
    with fresh_scope():
        _check(env, ctx, e, ty, goals)


def infer_expr(env: GlobalEnv, ctx: Context, e: Expr,
               goals: list[Goal]) -> Expr:
    with fresh_scope():
        return _infer(env, ctx, e, goals)


def _check(env: GlobalEnv, ctx: Context, e: Expr, ty: Expr,
           goals: list[Goal]) -> None:
    w = whnf(env, ty)

    match e:
        case Hole():
            if isinstance(w, TypeSort):
                raise CannotCheck(
                    "a hole cannot stand for a type",
                    term=pretty(e), context=_ctx_detail(ctx))
            _register_goal(e, ty, ctx, goals)
            return

        case Lam(x, body):
            if not isinstance(w, Pi):
                raise CannotCheck(
                    "a lambda checks only against a function type",
                    term=pretty(e), expected=pretty(ty),
                    context=_ctx_detail(ctx))
            x2 = _choose_binder(x, w.var, w.codomain, ctx,
                                free_vars(body) - {x})
            body2 = body if x2 == x else subst(body, x, Var(x2))
            cod = w.codomain
            if w.var not in ("_", x2):
                cod = subst(cod, w.var, Var(x2))
            _check(env, ctx.extend(x2, w.domain), body2, cod, goals)
            return

        case AndIntro(a, b) if isinstance(w, AndT):
            _check(env, ctx, a, w.left, goals)
            _check(env, ctx, b, w.right, goals)
            return

        case OrIntro0(a) if isinstance(w, OrT):
            _check(env, ctx, a, w.left, goals)
            return

        case OrIntro1(b) if isinstance(w, OrT):
            _check(env, ctx, b, w.right, goals)
            return

        case OrElim(scrutinee, on_left, on_right):
            st = whnf(env, _infer(env, ctx, scrutinee, goals))
            if not isinstance(st, OrT):
                raise CannotCheck(
                    "case analysis needs a disjunction to split on",
                    term=pretty(scrutinee), found=pretty(st),
                    context=_ctx_detail(ctx))
            _check(env, ctx, on_left, Pi("_", st.left, ty), goals)
            _check(env, ctx, on_right, Pi("_", st.right, ty), goals)
            return

        case BotElim(arg):
            _check(env, ctx, arg, Bot(), goals)
            return

        case EqRefl(t) if isinstance(w, EqT):
            if def_equal(env, t, w.lhs) and def_equal(env, t, w.rhs):
                return
            raise CannotCheck(
                "the equation's sides are not definitionally equal "
                "to the subject",
                term=pretty(e), expected=pretty(ty),
                context=_ctx_detail(ctx))

        case ExIntro(t_ty, a, pa):
            if not isinstance(w, Sigma):
                raise CannotCheck(
                    "a package checks only against an existential type",
                    term=pretty(e), expected=pretty(ty),
                    context=_ctx_detail(ctx))
            if not def_equal(env, t_ty, w.domain):
                raise CannotCheck(
                    "the package's witness type does not match "
                    "the existential's domain",
                    term=pretty(t_ty), expected=pretty(w.domain),
                    context=_ctx_detail(ctx))
            _check(env, ctx, a, w.domain, goals)
            _check(env, ctx, pa, subst(w.body, w.var, a), goals)
            return

    # mode turn: synthesize and compare
    found = _infer(env, ctx, e, goals)
    if def_equal(env, ty, found):
        return
    raise CannotCheck(
        "the inferred type does not match the expected type",
        term=pretty(e), expected=pretty(ty), found=pretty(found),
        context=_ctx_detail(ctx))


def _infer(env: GlobalEnv, ctx: Context, e: Expr,
           goals: list[Goal]) -> Expr:
    match e:
        case Var(name):
            t = ctx.lookup(name)
            if t is not None:
                return t
            entry = env.lookup(name)
            if entry is not None:
                return entry.ty
            raise CannotInfer(
                f"unknown name {name}", context=_ctx_detail(ctx))

        case Ann(subject, ascription):
            if contains_hole(ascription):
                raise CannotCheck(
                    "holes may not appear inside a type ascription",
                    term=pretty(ascription), context=_ctx_detail(ctx))
            _check(env, ctx, ascription, TypeSort(), goals)
            _check(env, ctx, subject, ascription, goals)
            return ascription

        case App(rator, rand):
            ft = whnf(env, _infer(env, ctx, rator, goals))
            if not isinstance(ft, Pi):
                raise NotAFunction(
                    "application head is not a function",
                    term=pretty(rator), found=pretty(ft),
                    context=_ctx_detail(ctx))
            _check(env, ctx, rand, ft.domain, goals)
            if ft.var == "_":
                return ft.codomain
            return subst(ft.codomain, ft.var, rand)

        case TypeSort():
            return TypeSort()

        case Bot() | NatT():
            return TypeSort()

        case Zero():
            return NatT()

        case Succ(pred):
            _check(env, ctx, pred, NatT(), goals)
            return NatT()

        case Pi(x, domain, codomain):
            _check(env, ctx, domain, TypeSort(), goals)
            _check_scoped_type(env, ctx, x, domain, codomain, goals)
            return TypeSort()

        case Sigma(x, domain, body):
            _check(env, ctx, domain, TypeSort(), goals)
            _check_scoped_type(env, ctx, x, domain, body, goals)
            return TypeSort()

        case AndT(l, r) | OrT(l, r):
            _check(env, ctx, l, TypeSort(), goals)
            _check(env, ctx, r, TypeSort(), goals)
            return TypeSort()

        case EqT(lhs, rhs):
            lt = _infer(env, ctx, lhs, goals)
            _check(env, ctx, rhs, lt, goals)
            return TypeSort()

        case AndIntro(a, b):
            return AndT(_infer(env, ctx, a, goals),
                        _infer(env, ctx, b, goals))

        case AndElim0(pair) | AndElim1(pair):
            pt = whnf(env, _infer(env, ctx, pair, goals))
            if not isinstance(pt, AndT):
                raise CannotInfer(
                    "projection applies only to a conjunction",
                    term=pretty(pair), found=pretty(pt),
                    context=_ctx_detail(ctx))
            return pt.left if isinstance(e, AndElim0) else pt.right

        case EqRefl(t):
            _infer(env, ctx, t, goals)
            return EqT(t, t)

        case EqElim(subject, motive, base, target, equation):
            t_ty = _infer(env, ctx, subject, goals)
            _check(env, ctx, motive, Pi("_", t_ty, TypeSort()), goals)
            _check(env, ctx, base, App(motive, subject), goals)
            _check(env, ctx, target, t_ty, goals)
            _check(env, ctx, equation, EqT(subject, target), goals)
            return App(motive, target)

        case NatInd(motive, zero_case, succ_case, scrutinee):
            _check(env, ctx, motive, Pi("_", NatT(), TypeSort()), goals)
            _check(env, ctx, zero_case, App(motive, Zero()), goals)
            avoid = _avoid_for(ctx) | free_vars(motive)
            k = "k" if "k" not in avoid else fresh_name("k")
            step_ty = Pi(k, NatT(),
                         Pi("_", App(motive, Var(k)),
                            App(motive, Succ(Var(k)))))
            _check(env, ctx, succ_case, step_ty, goals)
            _check(env, ctx, scrutinee, NatT(), goals)
            return App(motive, scrutinee)

        case ExElim(result_type, consumer, package):
            _check(env, ctx, result_type, TypeSort(), goals)
            pt = whnf(env, _infer(env, ctx, package, goals))
            if not isinstance(pt, Sigma):
                raise CannotInfer(
                    "unpacking applies only to an existential",
                    term=pretty(package), found=pretty(pt),
                    context=_ctx_detail(ctx))
            x, body = pt.var, pt.body
            avoid = (_avoid_for(ctx) | free_vars(result_type)
                     | (free_vars(body) - {x}))
            if x == "_":
                consumer_ty: Expr = Pi("_", pt.domain,
                                       Pi("_", body, result_type))
            else:
                x2 = x if x not in avoid else fresh_name(x)
                body2 = body if x2 == x else subst(body, x, Var(x2))
                consumer_ty = Pi(x2, pt.domain,
                                 Pi("_", body2, result_type))
            _check(env, ctx, consumer, consumer_ty, goals)
            return result_type

        case Lam():
            raise CannotInfer(
                "cannot infer a type for a bare lambda; annotate it",
                term=pretty(e), context=_ctx_detail(ctx))

        case Hole():
            raise CannotInfer(
                "cannot infer a type for a hole",
                term=pretty(e), context=_ctx_detail(ctx))

        case OrIntro0() | OrIntro1():
            raise CannotInfer(
                "an injection needs an expected disjunction type",
                term=pretty(e), context=_ctx_detail(ctx))

        case OrElim():
            raise CannotInfer(
                "case analysis needs an expected result type",
                term=pretty(e), context=_ctx_detail(ctx))

        case BotElim():
            raise CannotInfer(
                "absurdity elimination needs an expected result type",
                term=pretty(e), context=_ctx_detail(ctx))

        case ExIntro():
            raise CannotInfer(
                "a package needs an expected existential type",
                term=pretty(e), context=_ctx_detail(ctx))

    raise CannotInfer(f"unhandled term {pretty(e)}")


def _check_scoped_type(env: GlobalEnv, ctx: Context, x: str, domain: Expr,
                       scoped: Expr, goals: list[Goal]) -> None:
    """Check the body of a Pi/Sigma as a type under its binder."""
    if x == "_":
        _check(env, ctx.extend("_", domain), scoped, TypeSort(), goals)
        return
    avoid = _avoid_for(ctx) | (free_vars(scoped) - {x})
    x2 = x if x not in avoid else fresh_name(x)
    scoped2 = scoped if x2 == x else subst(scoped, x, Var(x2))
    _check(env, ctx.extend(x2, domain), scoped2, TypeSort(), goals)


def check(env: GlobalEnv, ctx: Context, e: Expr, ty: Expr) -> CheckOutcome:
    goals: list[Goal] = []
    try:
        check_expr(env, ctx, e, ty, goals)
    except ProustError as err:
        return CheckOutcome(False, (), err)
    return CheckOutcome(True, tuple(goals), None)


def infer(env: GlobalEnv, ctx: Context, e: Expr) -> InferOutcome:
    goals: list[Goal] = []
    try:
        ty = infer_expr(env, ctx, e, goals)
    except ProustError as err:
        return InferOutcome(False, None, (), err)
    return InferOutcome(True, ty, tuple(goals), None)
