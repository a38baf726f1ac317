"""World labels indexed by formulas, and their unification.

A label is an atomic world symbol (constant ``w_n`` or variable ``W_n``,
optionally indexed by a conditional-free formula) or a pair ``(head, body)``
whose head is atomic.  Positions are counted from the right: position 1 is
the root world, position ``length(i)`` is the head.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Iterator, Optional, Union

from .formula import Formula, is_top, to_text, truth_table_equiv


@dataclass(frozen=True)
class Const:
    id: int
    index: Optional[Formula] = None

    def __str__(self) -> str:
        return render(self)


@dataclass(frozen=True)
class Var:
    id: int
    index: Optional[Formula] = None

    def __str__(self) -> str:
        return render(self)


@dataclass(frozen=True)
class Pair:
    head: Union[Const, Var]
    body: "Label"

    def __post_init__(self):
        if not isinstance(self.head, (Const, Var)):
            raise TypeError("the head of a label must be atomic")

    def __str__(self) -> str:
        return render(self)


AtomicLabel = Union[Const, Var]
Label = Union[Const, Var, Pair]


def render(i: Label) -> str:
    if isinstance(i, Pair):
        return f"({render(i.head)}, {render(i.body)})"
    name = f"{'w' if isinstance(i, Const) else 'W'}{i.id}"
    if i.index is not None:
        name += f"^({to_text(i.index)})"
    return name


def is_atomic(i: Label) -> bool:
    return not isinstance(i, Pair)


def same_atom(a: AtomicLabel, b: AtomicLabel) -> bool:
    """Atom identity ignoring indexes."""
    return type(a) is type(b) and a.id == b.id


def atom_seq(i: Label) -> list[AtomicLabel]:
    """World symbols from the head (leftmost) down to the root."""
    out = []
    while isinstance(i, Pair):
        out.append(i.head)
        i = i.body
    out.append(i)
    return out


def from_atoms(seq) -> Label:
    seq = list(seq)
    label = seq[-1]
    for a in reversed(seq[:-1]):
        label = Pair(a, label)
    return label


def head(i: Label) -> AtomicLabel:
    return i.head if isinstance(i, Pair) else i


def body(i: Label) -> Label:
    if not isinstance(i, Pair):
        raise ValueError(f"atomic label {render(i)} has no body")
    return i.body


def length(i: Label) -> int:
    n = 1
    while isinstance(i, Pair):
        n += 1
        i = i.body
    return n


def _check_position(i: Label, n: int) -> None:
    if not 1 <= n <= length(i):
        raise ValueError(f"position {n} out of range for {render(i)}")


def segment(i: Label, n: int) -> Label:
    """The segment of ``i`` whose length is ``n``."""
    _check_position(i, n)
    for _ in range(length(i) - n):
        i = i.body
    return i


def head_at(i: Label, n: int) -> AtomicLabel:
    """The n-th world symbol of ``i`` counting from the right."""
    return head(segment(i, n))


def segments(i: Label) -> Iterator[Label]:
    """``i`` itself followed by b(i), b(b(i)), ..."""
    yield i
    while isinstance(i, Pair):
        i = i.body
        yield i


def countersegment(i: Label, n: int, w0: Label) -> Label:
    """Replace the length-``n`` tail of ``i`` by ``w0``."""
    if not 1 <= n < length(i):
        raise ValueError(f"countersegment-{n} undefined for {render(i)}")
    seq = atom_seq(i)
    kept = seq[: len(seq) - n]
    return from_atoms(kept + atom_seq(w0))


def is_ground(i: Label) -> bool:
    return not any(isinstance(a, Var) for a in atom_seq(i))


def reindex(i: Label, index: Optional[Formula]) -> Label:
    """Copy of ``i`` whose head carries ``index``."""
    h = head(i)
    new_head = type(h)(h.id, index)
    return Pair(new_head, i.body) if isinstance(i, Pair) else new_head


# --------------------------------------------------------------------------
# substitutions


@dataclass(frozen=True)
class Substitution:
    """Simultaneous binding of variable ids to atomic labels."""

    bindings: tuple[tuple[int, AtomicLabel], ...] = ()

    def as_dict(self) -> dict[int, AtomicLabel]:
        return dict(self.bindings)

    def apply(self, i: Label) -> Label:
        table = self.as_dict()
        return from_atoms(
            table.get(a.id, a) if isinstance(a, Var) else a for a in atom_seq(i)
        )

    def __len__(self) -> int:
        return len(self.bindings)


def sigma_unify(i: Label, j: Label) -> Optional[Substitution]:
    """Equal-length, atomwise unification; indexes play no part here."""
    ai, aj = atom_seq(i), atom_seq(j)
    if len(ai) != len(aj):
        return None
    bound: dict[int, AtomicLabel] = {}

    def resolve(a):
        while isinstance(a, Var) and a.id in bound:
            a = bound[a.id]
        return a

    for a, b in zip(ai, aj):
        ra, rb = resolve(a), resolve(b)
        if same_atom(ra, rb):
            continue
        if isinstance(ra, Var):
            bound[ra.id] = rb
        elif isinstance(rb, Var):
            bound[rb.id] = ra
        else:
            return None
    return Substitution(tuple(sorted((v, resolve(a)) for v, a in bound.items())))


def unified_label(i: Label, j: Label, s: Substitution) -> Label:
    """The label denoted by both ``i`` and ``j`` under ``s``.

    Where one side has a constant the constant (with its index) wins.
    """
    out = []
    for a, b in zip(atom_seq(i), atom_seq(j)):
        if isinstance(a, Const):
            out.append(a)
        elif isinstance(b, Const):
            out.append(b)
        else:
            out.append(s.as_dict().get(a.id, a))
    return from_atoms(out)


# --------------------------------------------------------------------------
# conditional equivalence registry


@dataclass(frozen=True)
class RegistryEntry:
    left: Formula
    right: Formula
    base: Label

    def __str__(self) -> str:
        return f"{to_text(self.left)} ~ {to_text(self.right)} at {render(self.base)}"


@dataclass(frozen=True)
class EquivRegistry:
    """Sphere identities derived on a branch: f(A, base) = f(B, base)."""

    entries: tuple[RegistryEntry, ...] = ()

    def add(self, a: Formula, b: Formula, base: Label) -> "EquivRegistry":
        entry = RegistryEntry(a, b, base)
        if entry in self.entries or RegistryEntry(b, a, base) in self.entries:
            return self
        return EquivRegistry(self.entries + (entry,))

    def __len__(self) -> int:
        return len(self.entries)

    def __iter__(self):
        return iter(self.entries)

    def covers(self, y: Formula, z: Formula, tail: Label) -> bool:
        for e in self.entries:
            pair_ok = (_equiv(y, e.left) and _equiv(z, e.right)) or (
                _equiv(y, e.right) and _equiv(z, e.left)
            )
            if pair_ok and sigma_cond_unify(e.base, tail, self) is not None:
                return True
        return False


EMPTY_REGISTRY = EquivRegistry()


def _equiv(a: Formula, b: Formula) -> bool:
    return a == b or truth_table_equiv(a, b)


def sigma_cond_unify(
    i: Label,
    j: Label,
    reg: EquivRegistry = EMPTY_REGISTRY,
    *,
    top: Callable[[Formula], bool] = is_top,
    top_clause: bool = True,
) -> Optional[Substitution]:
    """Unification gated by the index formulas at every aligned position.

    At a position where either atom carries an index, one of these must hold:
    both indexes are equivalent (by truth tables, or through a registered
    sphere identity whose base unifies with the tail below); or the side
    that is a variable carries a tautological index.
    """
    s = sigma_unify(i, j)
    if s is None:
        return None
    ai, aj = atom_seq(i), atom_seq(j)
    n = len(ai)
    for p, (x, y) in enumerate(zip(ai, aj)):
        yi, zi = x.index, y.index
        if yi is None and zi is None:
            continue
        ok = False
        if yi is not None and zi is not None:
            ok = _equiv(yi, zi)
            if not ok and p < n - 1 and len(reg):
                ok = reg.covers(yi, zi, from_atoms(ai[p + 1 :]))
        if not ok and top_clause:
            ok = (yi is not None and isinstance(x, Var) and top(yi)) or (
                zi is not None and isinstance(y, Var) and top(zi)
            )
        if not ok:
            return None
    return s


def extends(i: Label, k: Label, reg: EquivRegistry = EMPTY_REGISTRY) -> bool:
    return any(
        s == k or sigma_cond_unify(s, k, reg) is not None
        for s in list(segments(i))[1:]
    )


def extends_immediately(i: Label, k: Label, reg: EquivRegistry = EMPTY_REGISTRY) -> bool:
    if not isinstance(i, Pair):
        return False
    return i.body == k or sigma_cond_unify(i.body, k, reg) is not None


# --------------------------------------------------------------------------
# fresh symbols


@dataclass
class LabelFactory:
    """Issues world symbols with ids never used before by this factory."""

    next_constant: int = 1
    next_variable: int = 1

    def fresh_constant(self, index: Optional[Formula] = None) -> Const:
        c = Const(self.next_constant, index)
        self.next_constant += 1
        return c

    def fresh_variable(self, index: Optional[Formula] = None) -> Var:
        v = Var(self.next_variable, index)
        self.next_variable += 1
        return v


# --------------------------------------------------------------------------
# reading rendered labels back


def parse_label(text: str) -> Label:
    """Inverse of ``render``: ``w1``, ``W2^(A | B)``, ``(w2^(C), w1)``."""
    from .formula import parse

    s = text.strip()
    pos = 0

    def skip():
        nonlocal pos
        while pos < len(s) and s[pos].isspace():
            pos += 1

    def atom() -> AtomicLabel:
        nonlocal pos
        skip()
        if pos >= len(s) or s[pos] not in "wW":
            raise ValueError(f"expected a world symbol at {pos} in {text!r}")
        kind = Const if s[pos] == "w" else Var
        pos += 1
        start = pos
        while pos < len(s) and s[pos].isdigit():
            pos += 1
        if start == pos:
            raise ValueError(f"missing world number at {pos} in {text!r}")
        ident = int(s[start:pos])
        index = None
        if s.startswith("^(", pos):
            depth, k = 0, pos + 1
            while k < len(s):
                depth += {"(": 1, ")": -1}.get(s[k], 0)
                if depth == 0:
                    break
                k += 1
            if depth:
                raise ValueError(f"unbalanced index in {text!r}")
            index = parse(s[pos + 2 : k])
            pos = k + 1
        return kind(ident, index)

    def label() -> Label:
        nonlocal pos
        skip()
        if pos < len(s) and s[pos] == "(":
            pos += 1
            h = atom()
            skip()
            if pos >= len(s) or s[pos] != ",":
                raise ValueError(f"expected ',' at {pos} in {text!r}")
            pos += 1
            b = label()
            skip()
            if pos >= len(s) or s[pos] != ")":
                raise ValueError(f"expected ')' at {pos} in {text!r}")
            pos += 1
            return Pair(h, b)
        return atom()

    out = label()
    skip()
    if pos != len(s):
        raise ValueError(f"trailing input at {pos} in {text!r}")
    return out
