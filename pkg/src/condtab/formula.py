"""Formulas of the conditional language: AST, parser, printer, signing,
uniform (alpha/beta) classification and a small truth-table oracle.

Grammar (ASCII), loosest binding first::

    iff   := imp ( '<->' iff )?
    imp   := cond ( '->' imp )?
    cond  := disj ( '>' cond )?
    disj  := conj ( '|' conj )*
    conj  := unary ( '&' unary )*
    unary := '~' unary | atom | '(' iff ')'

``>``, ``->`` and ``<->`` associate to the right, ``&`` and ``|`` to the left.
"""
from __future__ import annotations

import itertools
import re
from dataclasses import dataclass
from functools import lru_cache
from typing import Iterator, Mapping, Optional, Union


class Formula:
    """Base class of all formula nodes. Nodes are frozen dataclasses."""

    __slots__ = ()

    def __str__(self) -> str:
        return to_text(self)


def _node(cls):
    # frozen dataclass whose hash is computed once per instance
    cls = dataclass(frozen=True)(cls)
    plain = cls.__hash__

    def __hash__(self):
        try:
            return self.__dict__["_hash"]
        except KeyError:
            h = self.__dict__["_hash"] = plain(self)
            return h

    cls.__hash__ = __hash__
    return cls


@_node
class Atom(Formula):
    name: str


@_node
class Not(Formula):
    sub: Formula


@_node
class And(Formula):
    left: Formula
    right: Formula


@_node
class Or(Formula):
    left: Formula
    right: Formula


@_node
class Implies(Formula):
    left: Formula
    right: Formula


@_node
class Iff(Formula):
    left: Formula
    right: Formula


@_node
class Cond(Formula):
    antecedent: Formula
    consequent: Formula


BINARY = (And, Or, Implies, Iff)


class FormulaSyntaxError(ValueError):
    def __init__(self, message: str, position: int):
        super().__init__(f"{message} at position {position}")
        self.position = position


# --------------------------------------------------------------------------
# parsing

_TOKEN = re.compile(r"\s*(?:(<->|->|>|~|&|\||\(|\))|([A-Za-z][A-Za-z0-9_]*))")


def _tokenize(text: str) -> list[tuple[str, int]]:
    tokens = []
    pos = 0
    while pos < len(text):
        if text[pos:].strip() == "":
            break
        m = _TOKEN.match(text, pos)
        if m is None:
            bad = pos + (len(text[pos:]) - len(text[pos:].lstrip()))
            raise FormulaSyntaxError(f"unexpected character {text[bad]!r}", bad)
        start = m.start(1) if m.group(1) else m.start(2)
        tokens.append((m.group(1) or m.group(2), start))
        pos = m.end()
    tokens.append(("", len(text)))
    return tokens


class _Parser:
    def __init__(self, text: str):
        self.tokens = _tokenize(text)
        self.i = 0

    def peek(self) -> str:
        return self.tokens[self.i][0]

    def take(self, expected: Optional[str] = None) -> str:
        tok, pos = self.tokens[self.i]
        if expected is not None and tok != expected:
            shown = repr(tok) if tok else "end of input"
            raise FormulaSyntaxError(f"expected {expected!r}, found {shown}", pos)
        self.i += 1
        return tok

    def parse(self) -> Formula:
        f = self.iff()
        tok, pos = self.tokens[self.i]
        if tok:
            raise FormulaSyntaxError(f"unexpected token {tok!r}", pos)
        return f

    def iff(self) -> Formula:
        left = self.imp()
        if self.peek() == "<->":
            self.take()
            return Iff(left, self.iff())
        return left

    def imp(self) -> Formula:
        left = self.cond()
        if self.peek() == "->":
            self.take()
            return Implies(left, self.imp())
        return left

    def cond(self) -> Formula:
        left = self.disj()
        if self.peek() == ">":
            self.take()
            return Cond(left, self.cond())
        return left

    def disj(self) -> Formula:
        f = self.conj()
        while self.peek() == "|":
            self.take()
            f = Or(f, self.conj())
        return f

    def conj(self) -> Formula:
        f = self.unary()
        while self.peek() == "&":
            self.take()
            f = And(f, self.unary())
        return f

    def unary(self) -> Formula:
        tok, pos = self.tokens[self.i]
        if tok == "~":
            self.take()
            return Not(self.unary())
        if tok == "(":
            self.take()
            f = self.iff()
            self.take(")")
            return f
        if tok and (tok[0].isalpha()):
            self.take()
            return Atom(tok)
        shown = repr(tok) if tok else "end of input"
        raise FormulaSyntaxError(f"expected a formula, found {shown}", pos)


def parse(text: str) -> Formula:
    """Parse ``text`` into a :class:`Formula`.

    >>> parse("(A & ~A) > B")
    Cond(antecedent=And(left=Atom(name='A'), right=Not(sub=Atom(name='A'))), consequent=Atom(name='B'))
    """
    return _Parser(text).parse()


# --------------------------------------------------------------------------
# printing

# binding strength; higher binds tighter
_PREC = {Iff: 1, Implies: 2, Cond: 3, Or: 4, And: 5, Not: 6, Atom: 7}
_SYMBOL = {Iff: "<->", Implies: "->", Cond: ">", Or: "|", And: "&"}
_RIGHT_ASSOC = (Iff, Implies, Cond)


def _parts(f: Formula) -> tuple[Formula, Formula]:
    if isinstance(f, Cond):
        return f.antecedent, f.consequent
    return f.left, f.right


def to_text(f: Formula) -> str:
    """Canonical ASCII rendering with the fewest parentheses that re-parse to ``f``."""
    if isinstance(f, Atom):
        return f.name
    if isinstance(f, Not):
        inner = to_text(f.sub)
        if _PREC[type(f.sub)] < _PREC[Not]:
            inner = f"({inner})"
        return "~" + inner
    kind = type(f)
    left, right = _parts(f)
    prec = _PREC[kind]
    lt, rt = to_text(left), to_text(right)
    lp, rp = _PREC[type(left)], _PREC[type(right)]
    if kind in _RIGHT_ASSOC:
        if lp <= prec:
            lt = f"({lt})"
        if rp < prec:
            rt = f"({rt})"
    else:
        if lp < prec:
            lt = f"({lt})"
        if rp <= prec:
            rt = f"({rt})"
    return f"{lt} {_SYMBOL[kind]} {rt}"


# --------------------------------------------------------------------------
# structural helpers


def children(f: Formula) -> tuple[Formula, ...]:
    if isinstance(f, Atom):
        return ()
    if isinstance(f, Not):
        return (f.sub,)
    return _parts(f)


def rebuild(f: Formula, kids: tuple[Formula, ...]) -> Formula:
    if isinstance(f, Atom):
        return f
    return type(f)(*kids)


def atoms(f: Formula) -> frozenset[str]:
    if isinstance(f, Atom):
        return frozenset([f.name])
    return frozenset().union(*(atoms(c) for c in children(f)))


def sorted_atoms(*fs: Formula) -> list[str]:
    out: set[str] = set()
    for f in fs:
        out |= atoms(f)
    return sorted(out)


def subformulas(f: Formula) -> Iterator[Formula]:
    yield f
    for c in children(f):
        yield from subformulas(c)


def has_conditional(f: Formula) -> bool:
    return any(isinstance(g, Cond) for g in subformulas(f))


def conditional_count(f: Formula) -> int:
    return sum(isinstance(g, Cond) for g in subformulas(f))


def conditional_depth(f: Formula) -> int:
    """Maximal nesting of ``>`` (0 for conditional-free formulas)."""
    inner = max((conditional_depth(c) for c in children(f)), default=0)
    return inner + 1 if isinstance(f, Cond) else inner


def depth(f: Formula) -> int:
    """Connective depth; atoms have depth 0."""
    if isinstance(f, Atom):
        return 0
    return 1 + max(depth(c) for c in children(f))


@dataclass(frozen=True)
class FragmentViolation:
    """A conditional found inside the antecedent of another conditional.

    ``path`` lists the child names from the root down to ``subterm``.
    """

    path: tuple[str, ...]
    subterm: Formula

    def __str__(self) -> str:
        where = "/".join(self.path) or "<root>"
        return f"nested conditional {to_text(self.subterm)!r} at {where}"


_CHILD_NAMES = {Not: ("sub",), Cond: ("antecedent", "consequent")}


def check_flat_fragment(f: Formula) -> Optional[FragmentViolation]:
    """Return ``None`` if no conditional occurs inside any antecedent."""

    def walk(g: Formula, path: tuple[str, ...], in_antecedent: bool):
        if isinstance(g, Cond) and in_antecedent:
            return FragmentViolation(path, g)
        names = _CHILD_NAMES.get(type(g), ("left", "right"))
        for name, c in zip(names, children(g)):
            inside = in_antecedent or (isinstance(g, Cond) and name == "antecedent")
            found = walk(c, path + (name,), inside)
            if found is not None:
                return found
        return None

    return walk(f, (), False)


# --------------------------------------------------------------------------
# signed formulas and uniform notation


@_node
class SignedFormula:
    sign: bool  # True for T, False for F
    formula: Formula

    def __str__(self) -> str:
        return f"{'T' if self.sign else 'F'} {to_text(self.formula)}"


def T(f: Formula) -> SignedFormula:
    return SignedFormula(True, f)


def F(f: Formula) -> SignedFormula:
    return SignedFormula(False, f)


def conjugate(x: SignedFormula) -> SignedFormula:
    return SignedFormula(not x.sign, x.formula)


@dataclass(frozen=True)
class Alpha:
    components: tuple[SignedFormula, ...]


@dataclass(frozen=True)
class Beta:
    components: tuple[SignedFormula, SignedFormula]


@dataclass(frozen=True)
class Literal:
    signed: SignedFormula


@dataclass(frozen=True)
class TrueConditional:
    antecedent: Formula
    consequent: Formula


@dataclass(frozen=True)
class FalseConditional:
    antecedent: Formula
    consequent: Formula


Classification = Union[Alpha, Beta, Literal, TrueConditional, FalseConditional]


def desugar_iff(f: Iff) -> Formula:
    return And(Implies(f.left, f.right), Implies(f.right, f.left))


@lru_cache(maxsize=1 << 18)
def classify(x: SignedFormula) -> Classification:
    f, s = x.formula, x.sign
    if isinstance(f, Atom):
        return Literal(x)
    if isinstance(f, Not):
        return Alpha((SignedFormula(not s, f.sub),))
    if isinstance(f, Cond):
        if s:
            return TrueConditional(f.antecedent, f.consequent)
        return FalseConditional(f.antecedent, f.consequent)
    if isinstance(f, Iff):
        return classify(SignedFormula(s, desugar_iff(f)))
    a, b = f.left, f.right
    if isinstance(f, And):
        return Alpha((T(a), T(b))) if s else Beta((F(a), F(b)))
    if isinstance(f, Or):
        return Beta((T(a), T(b))) if s else Alpha((F(a), F(b)))
    if isinstance(f, Implies):
        return Beta((F(a), T(b))) if s else Alpha((T(a), F(b)))
    raise TypeError(f"not a formula: {f!r}")


# --------------------------------------------------------------------------
# truth tables

MAX_TABLE_ATOMS = 16


def evaluate(f: Formula, assignment: Mapping[str, bool]) -> bool:
    """Classical value of a conditional-free formula."""
    if isinstance(f, Atom):
        return assignment[f.name]
    if isinstance(f, Not):
        return not evaluate(f.sub, assignment)
    if isinstance(f, And):
        return evaluate(f.left, assignment) and evaluate(f.right, assignment)
    if isinstance(f, Or):
        return evaluate(f.left, assignment) or evaluate(f.right, assignment)
    if isinstance(f, Implies):
        return (not evaluate(f.left, assignment)) or evaluate(f.right, assignment)
    if isinstance(f, Iff):
        return evaluate(f.left, assignment) == evaluate(f.right, assignment)
    raise ValueError(f"truth tables are undefined for {to_text(f)!r}")


def _require_propositional(*fs: Formula) -> None:
    for f in fs:
        if has_conditional(f):
            raise ValueError(f"formula contains a conditional: {to_text(f)!r}")


def assignments(names: list[str]) -> Iterator[dict[str, bool]]:
    if len(names) > MAX_TABLE_ATOMS:
        raise ValueError(f"too many atoms for a truth table ({len(names)})")
    for values in itertools.product((True, False), repeat=len(names)):
        yield dict(zip(names, values))


@lru_cache(maxsize=1 << 16)
def truth_table_equiv(a: Formula, b: Formula) -> bool:
    _require_propositional(a, b)
    return all(evaluate(a, v) == evaluate(b, v) for v in assignments(sorted_atoms(a, b)))


@lru_cache(maxsize=1 << 16)
def is_top(a: Formula) -> bool:
    _require_propositional(a)
    return all(evaluate(a, v) for v in assignments(sorted_atoms(a)))
