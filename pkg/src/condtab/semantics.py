"""Finite system-of-spheres models and a bounded countermodel search.

A model has worlds ``0 .. n-1``, a valuation giving the set of worlds where
each atom is true, and for every world ``u`` a family ``S(u)`` of spheres.
Because the families are finite and nested they are chains, so closure under
unions and nonempty intersections comes for free.

``A > B`` is true at ``u`` when no sphere of ``S(u)`` meets an ``A``-world, or
when ``B`` holds at every ``A``-world of the smallest sphere that does.

The search is the independent check on the prover: it never looks at labels,
only at models.
"""
from __future__ import annotations

import itertools
import json
from dataclasses import dataclass
from functools import cached_property
from typing import Iterator, Mapping, Optional, Sequence

from .formula import (
    And,
    Atom,
    Cond,
    Formula,
    Iff,
    Implies,
    Not,
    Or,
    conditional_depth,
    sorted_atoms,
    subformulas,
    to_text,
)

DEFAULT_MAX_WORLDS = 3
MAX_ENUM_ATOMS = 6
MAX_ENUM_MODELS = 5_000_000


class ResourceLimit(RuntimeError):
    pass


@dataclass(frozen=True)
class SOSModel:
    worlds: int
    valuation: Mapping[str, frozenset]
    spheres: tuple  # per world: tuple of frozensets

    @classmethod
    def build(cls, worlds: int, valuation: Mapping[str, Sequence[int]], spheres) -> "SOSModel":
        val = {a: frozenset(ws) for a, ws in sorted(valuation.items())}
        sph = tuple(tuple(frozenset(s) for s in fam) for fam in spheres)
        return cls(worlds, val, sph)

    def __hash__(self) -> int:
        return hash((self.worlds, tuple(sorted(self.valuation.items())), self.spheres))

    @cached_property
    def _masks(self):
        val = {a: _to_mask(ws) for a, ws in self.valuation.items()}
        sph = tuple(
            tuple(sorted((_to_mask(s) for s in fam), key=lambda m: bin(m).count("1")))
            for fam in self.spheres
        )
        return val, sph

    def to_dict(self) -> dict:
        return {
            "worlds": [f"u{w}" for w in range(self.worlds)],
            "valuation": {a: sorted(f"u{w}" for w in ws) for a, ws in self.valuation.items()},
            "spheres": {
                f"u{u}": [sorted(f"u{w}" for w in s) for s in _ordered(fam)]
                for u, fam in enumerate(self.spheres)
            },
        }

    def to_text(self) -> str:
        lines = ["worlds: " + ", ".join(f"u{w}" for w in range(self.worlds))]
        names = sorted(self.valuation)
        if names:
            width = max(len(n) for n in names)
            header = " " * (width + 2) + " ".join(f"u{w}" for w in range(self.worlds))
            lines.append("valuation:")
            lines.append(header)
            for n in names:
                row = " ".join(
                    ("T" if w in self.valuation[n] else "F").rjust(len(f"u{w}"))
                    for w in range(self.worlds)
                )
                lines.append(f"  {n.ljust(width)}{row}")
        lines.append("spheres:")
        for u, fam in enumerate(self.spheres):
            chain = " < ".join("{" + ", ".join(f"u{w}" for w in sorted(s)) + "}" for s in _ordered(fam))
            lines.append(f"  S(u{u}) = {chain or 'empty'}")
        return "\n".join(lines)


def _to_mask(ws) -> int:
    m = 0
    for w in ws:
        m |= 1 << w
    return m


def _from_mask(m: int) -> frozenset:
    return frozenset(i for i in range(m.bit_length()) if m >> i & 1)


def _ordered(fam):
    return sorted(fam, key=lambda s: (len(s), sorted(s)))


# --------------------------------------------------------------------------
# validation and evaluation


def validate(
    m: SOSModel, *, normal: bool = False, universal: bool = False, absolute: bool = False
) -> list[str]:
    """Defects of ``m``; an empty list means the model is fine."""
    defects = []
    everything = frozenset(range(m.worlds))
    if m.worlds < 1:
        defects.append("no worlds")
    if len(m.spheres) != m.worlds:
        defects.append(f"{len(m.spheres)} sphere families for {m.worlds} worlds")
    for a, ws in m.valuation.items():
        if not ws <= everything:
            defects.append(f"atom {a} true at unknown worlds {sorted(ws - everything)}")
    for u, fam in enumerate(m.spheres):
        for s in fam:
            if not s <= everything:
                defects.append(f"S(u{u}) has a sphere with unknown worlds {sorted(s - everything)}")
        for s, t in itertools.combinations(fam, 2):
            if not (s <= t or t <= s):
                defects.append(f"S(u{u}) is not nested: {sorted(s)} vs {sorted(t)}")
        union = frozenset().union(*fam) if fam else frozenset()
        if normal and not union:
            defects.append(f"S(u{u}) is empty (normal)")
        if universal and union != everything:
            defects.append(f"S(u{u}) does not cover every world (universal)")
    if absolute and len({frozenset(fam) for fam in m.spheres}) > 1:
        defects.append("sphere families differ between worlds (absolute)")
    return defects


def _ext(f: Formula, n: int, val: Mapping[str, int], sph, memo: dict) -> int:
    """Bitmask of the worlds where ``f`` is true."""
    got = memo.get(f)
    if got is not None:
        return got
    full = (1 << n) - 1
    if isinstance(f, Atom):
        r = val.get(f.name, 0)
    elif isinstance(f, Not):
        r = full & ~_ext(f.sub, n, val, sph, memo)
    elif isinstance(f, Cond):
        a = _ext(f.antecedent, n, val, sph, memo)
        b = _ext(f.consequent, n, val, sph, memo)
        r = 0
        for u in range(n):
            for s in sph[u]:
                if s & a:
                    if s & a & ~b == 0:
                        r |= 1 << u
                    break
            else:
                r |= 1 << u  # vacuous
    else:
        left = _ext(f.left, n, val, sph, memo)
        right = _ext(f.right, n, val, sph, memo)
        if isinstance(f, And):
            r = left & right
        elif isinstance(f, Or):
            r = left | right
        elif isinstance(f, Implies):
            r = (full & ~left) | right
        elif isinstance(f, Iff):
            r = full & ~(left ^ right)
        else:
            raise TypeError(f"unknown formula node {f!r}")
    memo[f] = r
    return r


def extension(m: SOSModel, f: Formula) -> frozenset:
    val, sph = m._masks
    return _from_mask(_ext(f, m.worlds, val, sph, {}))


def evaluate(m: SOSModel, u: int, f: Formula) -> bool:
    val, sph = m._masks
    return bool(_ext(f, m.worlds, val, sph, {}) >> u & 1)


def smallest_sphere(m: SOSModel, u: int, a: Formula) -> Optional[frozenset]:
    """The least sphere around ``u`` containing an ``a``-world, if any."""
    val, sph = m._masks
    amask = _ext(a, m.worlds, val, sph, {})
    for s in sph[u]:
        if s & amask:
            return _from_mask(s)
    return None


# --------------------------------------------------------------------------
# enumeration


def chains(n: int) -> list[tuple[int, ...]]:
    """Every chain of nonempty, strictly growing subsets of ``n`` worlds.

    Spheres are bitmasks, smallest first; the empty chain comes first.
    """
    subsets = sorted(range(1, 1 << n), key=lambda s: (bin(s).count("1"), s))
    out: list[tuple[int, ...]] = [()]

    def grow(prefix):
        last = prefix[-1]
        for s in subsets:
            if s != last and s & last == last:
                out.append(prefix + (s,))
                grow(prefix + (s,))

    for s in subsets:
        out.append((s,))
        grow((s,))
    return out


def _allowed_chains(n: int, normal: bool, universal: bool) -> list[tuple[int, ...]]:
    full = (1 << n) - 1
    cs = chains(n)
    if normal:
        cs = [c for c in cs if c]
    if universal:
        cs = [c for c in cs if c and c[-1] == full]
    return cs


def count_models(n_atoms: int, max_worlds: int, **flags) -> int:
    total = 0
    for n in range(1, max_worlds + 1):
        k = len(_allowed_chains(n, flags.get("normal", False), flags.get("universal", False)))
        families = k if flags.get("absolute", False) else k**n
        total += (1 << (n_atoms * n)) * families
    return total


def _model(n: int, names: Sequence[str], val_masks: Sequence[int], sph) -> SOSModel:
    valuation = {a: _from_mask(mk) for a, mk in zip(names, val_masks)}
    spheres = tuple(tuple(_from_mask(s) for s in c) for c in sph)
    return SOSModel(n, valuation, spheres)


def enumerate_models(
    atoms: Sequence[str],
    max_worlds: int = DEFAULT_MAX_WORLDS,
    *,
    normal: bool = False,
    universal: bool = False,
    absolute: bool = False,
    max_models: int = MAX_ENUM_MODELS,
) -> Iterator[SOSModel]:
    """Every model over ``atoms`` with at most ``max_worlds`` worlds.

    Nothing is identified up to isomorphism, so the stream has exactly
    ``count_models(len(atoms), max_worlds, ...)`` items: for each world count
    ``n``, every valuation times every choice of sphere chain per world.
    """
    if max_worlds < 1:
        raise ValueError("max_worlds must be at least 1")
    names = sorted(set(atoms))
    if len(names) > MAX_ENUM_ATOMS:
        raise ResourceLimit(f"{len(names)} atoms exceed the enumeration limit of {MAX_ENUM_ATOMS}")
    total = count_models(len(names), max_worlds, normal=normal, universal=universal, absolute=absolute)
    if total > max_models:
        raise ResourceLimit(f"{total} models exceed the limit of {max_models}")
    for n in range(1, max_worlds + 1):
        cs = _allowed_chains(n, normal, universal)
        families = ((c,) * n for c in cs) if absolute else itertools.product(cs, repeat=n)
        families = list(families)
        for val_masks in itertools.product(range(1 << n), repeat=len(names)):
            for sph in families:
                yield _model(n, names, val_masks, sph)


# --------------------------------------------------------------------------
# countermodels


@dataclass(frozen=True)
class Countermodel:
    model: SOSModel
    world: int
    formula: Formula

    def to_dict(self) -> dict:
        return {
            "formula": to_text(self.formula),
            "world": f"u{self.world}",
            "model": self.model.to_dict(),
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2)

    def to_text(self) -> str:
        return (
            f"countermodel for {to_text(self.formula)}: false at u{self.world}\n"
            + self.model.to_text()
        )


def _valuations(n: int, k: int) -> Iterator[tuple[int, ...]]:
    """Per-atom masks, one per valuation up to permuting worlds 1..n-1."""
    rows = list(itertools.product((False, True), repeat=k))
    for first in rows:
        for rest in itertools.combinations_with_replacement(rows, n - 1):
            table = (first,) + rest
            yield tuple(_to_mask(w for w in range(n) if table[w][a]) for a in range(k))


def _inner_conditionals(f: Formula) -> list[Formula]:
    """Conditionals that sit inside another conditional."""
    out: list[Formula] = []
    for g in subformulas(f):
        if isinstance(g, Cond):
            for h in (g.antecedent, g.consequent):
                out.extend(c for c in subformulas(h) if isinstance(c, Cond) and c not in out)
    return out


def find_countermodel(
    f: Formula,
    max_worlds: int = DEFAULT_MAX_WORLDS,
    *,
    normal: bool = False,
    universal: bool = False,
    absolute: bool = False,
) -> Optional[Countermodel]:
    """First model (in a fixed order) where ``f`` fails at world 0.

    Smaller models come first.  Worlds other than 0 are interchangeable, so
    their valuations are taken in sorted order only.  When ``f`` has no
    conditional nested in another, only ``S(0)`` can matter and the other
    worlds get empty sphere families; at nesting depth two, the choices for
    ``S(w)`` are cut down to one per truth pattern of the inner conditionals
    at ``w``.  A ``None`` result says nothing beyond the bound.
    """
    names = sorted_atoms(f)
    depth = conditional_depth(f)
    flagged = normal or universal or absolute
    inner = _inner_conditionals(f)
    for n in range(1, max_worlds + 1):
        cs = _allowed_chains(n, normal, universal)
        for val in _valuations(n, len(names)):
            vmap = dict(zip(names, val))
            for sph in _sphere_choices(n, cs, vmap, inner, depth, flagged, absolute):
                if not _ext(f, n, vmap, sph, {}) & 1:
                    return Countermodel(_model(n, names, val, sph), 0, f)
    return None


def _sphere_choices(n, cs, vmap, inner, depth, flagged, absolute):
    if absolute:
        for c in cs:
            yield (c,) * n
        return
    if flagged or depth > 2:
        yield from itertools.product(cs, repeat=n)
        return
    if depth <= 1:
        for c in cs:
            yield (c,) + ((),) * (n - 1)
        return
    # depth 2: one representative chain per pattern of inner truth values
    reps = []
    for w in range(1, n):
        seen: dict[tuple[bool, ...], tuple[int, ...]] = {}
        for c in cs:
            sph = tuple(c if u == w else () for u in range(n))
            key = tuple(bool(_ext(g, n, vmap, sph, {}) >> w & 1) for g in inner)
            seen.setdefault(key, c)
        reps.append(list(seen.values()))
    for c0 in cs:
        for rest in itertools.product(*reps):
            yield (c0,) + tuple(rest)
