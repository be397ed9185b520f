import itertools

import pytest
from hypothesis import given, settings

from proust.environment import EMPTY_ENV, define, postulate
from proust.errors import TooManyAtoms
from proust.semantics import (
    ATOM_CAP,
    Atom,
    Conj,
    Disj,
    Falsum,
    Implies,
    atoms,
    entails,
    eval_formula,
    extract,
    tautology,
)
from proust.syntax import parse
from proust.terms import TypeSort, Var
from strategies import prop_types


@pytest.fixture(scope="module")
def env():
    e = EMPTY_ENV
    for name in ("A", "B", "C"):
        e = postulate(e, name, TypeSort())
    e = postulate(e, "a", Var("A"))
    e = postulate(e, "P", parse("(Nat -> Type)"))
    return define(e, "alias", parse("((A ∧ B) : Type)"))


A, B, C = Atom("A"), Atom("B"), Atom("C")


def test_extract_fragment(env):
    cases = [
        ("⊥", Falsum()),
        ("A", A),
        ("(A ∧ B)", Conj(A, B)),
        ("(A ∨ B)", Disj(A, B)),
        ("(A -> B)", Implies(A, B)),
        ("(¬ A)", Implies(A, Falsum())),
        ("((A -> B) -> ((B -> C) -> (A -> C)))",
         Implies(Implies(A, B), Implies(Implies(B, C), Implies(A, C)))),
    ]
    for text, expected in cases:
        assert extract(env, parse(text)) == expected


def test_extract_rejects_non_propositional(env):
    outside = [
        "Nat",
        "Type",
        "(Z = Z)",
        "(∀ (n : Nat) -> (P n))",
        "(∃ (n : Nat) -> (P n))",
        "(A ∧ Nat)",
        "(Nat -> A)",
        "a",        # a term postulate, not a type atom
        "alias",    # defined names are not atoms
        "unknown",  # not in the environment at all
        "(λ x => x)",
    ]
    for text in outside:
        assert extract(env, parse(text)) is None


def test_extract_dependent_pi_is_outside(env):
    env2 = postulate(env, "Q", parse("(A -> Type)"))
    assert extract(env2, parse("(∀ (x : A) -> (Q x))")) is None
    # a named but vacuous binder is still propositional
    assert extract(env2, parse("(∀ (x : A) -> B)")) == Implies(A, B)


def test_atoms(env):
    f = extract(env, parse("((A -> B) ∨ (¬ C))"))
    assert atoms(f) == frozenset({"A", "B", "C"})
    assert atoms(Falsum()) == frozenset()


def test_eval_formula():
    f = Implies(A, B)
    assert eval_formula({"A": False, "B": False}, f)
    assert not eval_formula({"A": True, "B": False}, f)
    assert eval_formula({"A": True, "B": True}, f)
    with pytest.raises(KeyError):
        eval_formula({}, A)
    assert not eval_formula({}, Falsum())


def test_tautologies(env):
    taut = [
        "(A -> A)",
        "(A ∨ (¬ A))",
        "(((A -> B) -> A) -> A)",
        "((¬ (¬ A)) -> A)",
        "((¬ (A ∧ B)) -> ((¬ A) ∨ (¬ B)))",
        "((A ∧ B) -> (B ∧ A))",
        "((A -> (B -> C)) -> ((A ∧ B) -> C))",
    ]
    not_taut = [
        "A",
        "(A -> B)",
        "(A ∨ B)",
        "((A -> B) -> (B -> A))",
        "⊥",
        "(¬ A)",
    ]
    for text in taut:
        assert tautology(extract(env, parse(text))), text
    for text in not_taut:
        assert not tautology(extract(env, parse(text))), text


def test_entails(env):
    def f(text):
        return extract(env, parse(text))

    assert entails([f("A"), f("(A -> B)")], f("B"))          # modus ponens
    assert entails([f("(A ∨ B)"), f("(¬ A)")], f("B"))       # disjunctive
    assert entails([f("⊥")], f("C"))                          # explosion
    assert not entails([f("(A -> B)"), f("B")], f("A"))       # affirming
    assert not entails([f("A")], f("B"))
    assert entails([], f("(A ∨ (¬ A))"))


def test_atom_cap(env):
    wide = Atom("x0")
    for i in range(1, 21):
        wide = Conj(wide, Atom(f"x{i}"))  # 21 atoms
    with pytest.raises(TooManyAtoms) as exc:
        tautology(wide)
    assert exc.value.kind == "too-many-atoms"
    ok = Atom("x0")
    for i in range(1, ATOM_CAP):
        ok = Disj(ok, Atom(f"x{i}"))  # exactly 20 atoms: allowed
    assert not tautology(ok)
    # the cap is a parameter, not a constant baked into the walk
    three = Disj(Disj(A, B), C)
    with pytest.raises(TooManyAtoms):
        tautology(three, atom_cap=2)
    assert not tautology(three, atom_cap=3)


@given(prop_types())
@settings(deadline=None)
def test_entails_agrees_with_direct_enumeration(ty):
    env = EMPTY_ENV
    for name in ("A", "B", "C"):
        env = postulate(env, name, TypeSort())
    f = extract(env, ty)
    assert f is not None

    def direct(formula):
        names = sorted(atoms(formula))
        return all(
            eval_formula(dict(zip(names, bits)), formula)
            for bits in itertools.product((False, True), repeat=len(names)))

    assert tautology(f) == direct(f)


@given(prop_types(), prop_types())
@settings(deadline=None)
def test_entailment_is_implication_internalized(a, b):
    env = EMPTY_ENV
    for name in ("A", "B", "C"):
        env = postulate(env, name, TypeSort())
    fa, fb = extract(env, a), extract(env, b)
    assert entails([fa], fb) == tautology(Implies(fa, fb))
