"""Surface syntax: S-expression reader, parser, and pretty-printer.

The concrete syntax is fully parenthesized. Unicode glyphs and ASCII
aliases are interchangeable on input; output picks one alphabet via the
`ascii_mode` flag. Application may be written n-ary and arrows may be
chained; both are sugar folded away by the parser, and the printer always
emits the binary form, so parse(pretty(e)) reproduces e node for node
(holes keep their printed numbers).
"""

from __future__ import annotations

from .errors import ParseError
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
    neg,
)

Tree = str | list  # reader output: atoms and nested lists


LAMBDA_WORDS = ("λ", "\\", "lambda")
FORALL_WORDS = ("∀", "forall")
EXISTS_WORDS = ("∃", "exists")
NOT_WORDS = ("¬", "not")

# keyword form -> (constructor, arity)
KEYWORD_FORMS: dict[str, tuple[type, int]] = {
    "∧-intro": (AndIntro, 2),
    "and-intro": (AndIntro, 2),
    "∧-elim0": (AndElim0, 1),
    "and-elim0": (AndElim0, 1),
    "∧-elim1": (AndElim1, 1),
    "and-elim1": (AndElim1, 1),
    "∨-intro0": (OrIntro0, 1),
    "or-intro0": (OrIntro0, 1),
    "∨-intro1": (OrIntro1, 1),
    "or-intro1": (OrIntro1, 1),
    "∨-elim": (OrElim, 3),
    "or-elim": (OrElim, 3),
    "⊥-elim": (BotElim, 1),
    "bot-elim": (BotElim, 1),
    "eq-refl": (EqRefl, 1),
    "eq-elim": (EqElim, 5),
    "nat-ind": (NatInd, 4),
    "∃-intro": (ExIntro, 3),
    "exists-intro": (ExIntro, 3),
    "∃-elim": (ExElim, 3),
    "exists-elim": (ExElim, 3),
    "S": (Succ, 1),
}

AND_WORDS = ("∧", "/\\")
OR_WORDS = ("∨", "\\/")

ATOM_EXPRS: dict[str, type] = {
    "Type": TypeSort,
    "Nat": NatT,
    "Z": Zero,
    "⊥": Bot,
    "bot": Bot,
}

MARKERS = (":", "=", "->", "=>") + AND_WORDS + OR_WORDS

RESERVED = (
    set(LAMBDA_WORDS) | set(FORALL_WORDS) | set(EXISTS_WORDS) | set(NOT_WORDS)
    | set(KEYWORD_FORMS) | set(ATOM_EXPRS) | set(MARKERS) | {"_", "?"}
)


def is_identifier(atom: str) -> bool:
    """A usable variable or definition name."""
    if not atom or atom in RESERVED:
        return False
    if atom.startswith("?") or "%" in atom or ";" in atom:
        return False
    if atom.isdigit():
        return False
    return not any(c in "()" or c.isspace() for c in atom)


def tokenize(text: str) -> list[str]:
    tokens: list[str] = []
    atom: list[str] = []
    i, n = 0, len(text)

    def flush() -> None:
        if atom:
            tokens.append("".join(atom))
            atom.clear()

    while i < n:
        c = text[i]
        if c == ";":
            flush()
            while i < n and text[i] != "\n":
                i += 1
        elif c in "()":
            flush()
            tokens.append(c)
            i += 1
        elif c.isspace():
            flush()
            i += 1
        else:
            atom.append(c)
            i += 1
    flush()
    return tokens


def read_all(text: str) -> list[Tree]:
    """Read every top-level form in `text`."""
    tokens = tokenize(text)
    forms: list[Tree] = []
    stack: list[list] = []
    for tok in tokens:
        if tok == "(":
            stack.append([])
        elif tok == ")":
            if not stack:
                raise ParseError("unbalanced ')'")
            done = stack.pop()
            if stack:
                stack[-1].append(done)
            else:
                forms.append(done)
        else:
            if stack:
                stack[-1].append(tok)
            else:
                forms.append(tok)
    if stack:
        raise ParseError("unbalanced '(': form is missing a closing paren")
    return forms


def read_one(text: str) -> Tree:
    forms = read_all(text)
    if len(forms) != 1:
        raise ParseError(f"expected exactly one form, got {len(forms)}")
    return forms[0]


def render_tree(tree: Tree) -> str:
    """Echo a raw reader tree, for error messages."""
    if isinstance(tree, str):
        return tree
    return "(" + " ".join(render_tree(t) for t in tree) + ")"


def balanced(text: str) -> bool:
    """True when every '(' is closed; used by line-based front ends to
    decide whether to keep reading."""
    depth = 0
    in_comment = False
    for c in text:
        if in_comment:
            if c == "\n":
                in_comment = False
        elif c == ";":
            in_comment = True
        elif c == "(":
            depth += 1
        elif c == ")":
            depth -= 1
            if depth < 0:
                return True  # let the reader report the error
    return depth <= 0


def _max_hole(tree: Tree) -> int:
    if isinstance(tree, str):
        if tree.startswith("?") and tree[1:].isdigit():
            return int(tree[1:])
        return -1
    return max((_max_hole(t) for t in tree), default=-1)


class _Parser:
    """One parse call; owns the provisional numbering of bare holes."""

    def __init__(self, tree: Tree):
        # provisional numbers continue past any explicit ?N so holes in
        # the result are always distinct
        self.next_hole = _max_hole(tree) + 1

    def atom(self, tok: str) -> Expr:
        if tok in ATOM_EXPRS:
            return ATOM_EXPRS[tok]()
        if tok == "?":
            h = Hole(self.next_hole)
            self.next_hole += 1
            return h
        if tok.startswith("?"):
            if tok[1:].isdigit():
                return Hole(int(tok[1:]))
            raise ParseError(f"bad hole name {tok!r}: holes are ? or ?N")
        if tok == "_":
            raise ParseError("_ is a binder-only name and cannot be referenced")
        if tok in RESERVED:
            raise ParseError(f"{tok!r} cannot be used as an expression here")
        if tok.isdigit():
            raise ParseError(
                f"no numeral literals: write {tok!r} with Z and S")
        if not is_identifier(tok):
            raise ParseError(f"invalid identifier {tok!r}")
        return Var(tok)

    def binder_name(self, tree: Tree, form: str) -> str:
        if not isinstance(tree, str) or not (tree == "_" or is_identifier(tree)):
            raise ParseError(
                f"bad binder {render_tree(tree)} in {form} form")
        return tree

    def seq(self, items: list[Tree], context: str) -> Expr:
        """A single expression or a right-associated arrow chain."""
        if len(items) == 1:
            return self.expr(items[0])
        if len(items) >= 3 and len(items) % 2 == 1 and all(
                items[i] == "->" for i in range(1, len(items), 2)):
            parts = [self.expr(items[i]) for i in range(0, len(items), 2)]
            out = parts[-1]
            for part in reversed(parts[:-1]):
                out = Pi("_", part, out)
            return out
        raise ParseError(
            f"expected one expression or an arrow chain in {context}, "
            f"got {render_tree(items)}")

    def expr(self, tree: Tree) -> Expr:
        if isinstance(tree, str):
            return self.atom(tree)
        if len(tree) == 0:
            raise ParseError("() is not an expression")
        head = tree[0]

        if isinstance(head, str):
            if head in LAMBDA_WORDS:
                if len(tree) != 4 or tree[2] != "=>":
                    raise ParseError(
                        f"lambda must be (λ x => body), got {render_tree(tree)}")
                return Lam(self.binder_name(tree[1], "lambda"), self.expr(tree[3]))

            if head in FORALL_WORDS or head in EXISTS_WORDS:
                ctor = Pi if head in FORALL_WORDS else Sigma
                label = "∀" if ctor is Pi else "∃"
                group = tree[1] if len(tree) > 1 else None
                if (len(tree) < 4 or not isinstance(group, list)
                        or len(group) < 3 or group[1] != ":"
                        or tree[2] != "->"):
                    raise ParseError(
                        f"{label} must be ({label} (x : T) -> W), "
                        f"got {render_tree(tree)}")
                var = self.binder_name(group[0], label)
                domain = self.seq(group[2:], f"{label} binder type")
                body = self.seq(tree[3:], f"{label} body")
                return ctor(var, domain, body)

            if head in NOT_WORDS:
                if len(tree) != 2:
                    raise ParseError(
                        f"negation takes one argument, got {render_tree(tree)}")
                return neg(self.expr(tree[1]))

            if head in KEYWORD_FORMS:
                ctor, arity = KEYWORD_FORMS[head]
                if len(tree) != arity + 1:
                    raise ParseError(
                        f"{head} takes {arity} argument"
                        f"{'s' if arity != 1 else ''}, got {render_tree(tree)}")
                return ctor(*(self.expr(t) for t in tree[1:]))

        if len(tree) == 3 and isinstance(tree[1], str):
            mid = tree[1]
            if mid == ":":
                return Ann(self.expr(tree[0]), self.expr(tree[2]))
            if mid == "=":
                return EqT(self.expr(tree[0]), self.expr(tree[2]))
            if mid in AND_WORDS:
                return AndT(self.expr(tree[0]), self.expr(tree[2]))
            if mid in OR_WORDS:
                return OrT(self.expr(tree[0]), self.expr(tree[2]))

        if len(tree) >= 3 and "->" in tree:
            return self.seq(tree, "arrow chain")

        # application; n-ary folds to the left
        if len(tree) == 1:
            raise ParseError(
                f"cannot parse {render_tree(tree)}: a one-element list "
                "is neither a form nor an application")
        for t in tree:
            if isinstance(t, str) and t in MARKERS:
                raise ParseError(
                    f"misplaced {t!r} in {render_tree(tree)}")
        out = self.expr(tree[0])
        for t in tree[1:]:
            out = App(out, self.expr(t))
        return out


def parse_tree(tree: Tree) -> Expr:
    return _Parser(tree).expr(tree)


def parse(text: str) -> Expr:
    return parse_tree(read_one(text))


_UNICODE = {
    "lam": "λ", "forall": "∀", "exists": "∃", "bot": "⊥",
    "and": "∧", "or": "∨",
    "and-intro": "∧-intro", "and-elim0": "∧-elim0", "and-elim1": "∧-elim1",
    "or-intro0": "∨-intro0", "or-intro1": "∨-intro1", "or-elim": "∨-elim",
    "bot-elim": "⊥-elim", "ex-intro": "∃-intro", "ex-elim": "∃-elim",
}
_ASCII = {
    "lam": "\\", "forall": "forall", "exists": "exists", "bot": "bot",
    "and": "/\\", "or": "\\/",
    "and-intro": "and-intro", "and-elim0": "and-elim0", "and-elim1": "and-elim1",
    "or-intro0": "or-intro0", "or-intro1": "or-intro1", "or-elim": "or-elim",
    "bot-elim": "bot-elim", "ex-intro": "exists-intro", "ex-elim": "exists-elim",
}


def pretty(e: Expr, ascii_mode: bool = False) -> str:
    g = _ASCII if ascii_mode else _UNICODE

    def p(t: Expr) -> str:
        match t:
            case Var(name):
                return name
            case Lam(var, body):
                return f"({g['lam']} {var} => {p(body)})"
            case App(rator, rand):
                return f"({p(rator)} {p(rand)})"
            case Ann(subject, ascription):
                return f"({p(subject)} : {p(ascription)})"
            case Pi("_", domain, codomain):
                return f"({p(domain)} -> {p(codomain)})"
            case Pi(var, domain, codomain):
                return f"({g['forall']} ({var} : {p(domain)}) -> {p(codomain)})"
            case Sigma(var, domain, body):
                return f"({g['exists']} ({var} : {p(domain)}) -> {p(body)})"
            case TypeSort():
                return "Type"
            case Bot():
                return g["bot"]
            case NatT():
                return "Nat"
            case Zero():
                return "Z"
            case Succ(pred):
                return f"(S {p(pred)})"
            case AndT(l, r):
                return f"({p(l)} {g['and']} {p(r)})"
            case OrT(l, r):
                return f"({p(l)} {g['or']} {p(r)})"
            case EqT(l, r):
                return f"({p(l)} = {p(r)})"
            case AndIntro(l, r):
                return f"({g['and-intro']} {p(l)} {p(r)})"
            case AndElim0(pair):
                return f"({g['and-elim0']} {p(pair)})"
            case AndElim1(pair):
                return f"({g['and-elim1']} {p(pair)})"
            case OrIntro0(arg):
                return f"({g['or-intro0']} {p(arg)})"
            case OrIntro1(arg):
                return f"({g['or-intro1']} {p(arg)})"
            case OrElim(s, f, h):
                return f"({g['or-elim']} {p(s)} {p(f)} {p(h)})"
            case BotElim(arg):
                return f"({g['bot-elim']} {p(arg)})"
            case EqRefl(subject):
                return f"(eq-refl {p(subject)})"
            case EqElim(s, m, b, w, q):
                return f"(eq-elim {p(s)} {p(m)} {p(b)} {p(w)} {p(q)})"
            case NatInd(m, z, sc, n):
                return f"(nat-ind {p(m)} {p(z)} {p(sc)} {p(n)})"
            case ExIntro(ty, w, pr):
                return f"({g['ex-intro']} {p(ty)} {p(w)} {p(pr)})"
            case ExElim(ty, f, b):
                return f"({g['ex-elim']} {p(ty)} {p(f)} {p(b)})"
            case Hole(number):
                return f"?{number}"
        raise ValueError(f"unknown node {t!r}")

    return p(e)
