"""Seeded random formulas of the flat fragment, and corpus files."""
from __future__ import annotations

import random
from pathlib import Path
from typing import Iterable, Iterator, Optional, Sequence

from .formula import (
    And,
    Atom,
    Cond,
    Formula,
    Iff,
    Implies,
    Not,
    Or,
    check_flat_fragment,
    conditional_count,
    parse,
    to_text,
)

ATOM_NAMES = "ABCDEFGH"
_BINARY = (And, Or, Implies, Implies, Iff)


class _Gen:
    def __init__(self, rng: random.Random, names: list[str], max_conditionals: int):
        self.rng = rng
        self.names = names
        self.left = max_conditionals

    def formula(self, depth: int, allow_cond: bool = True) -> Formula:
        r = self.rng
        if depth == 0 or r.random() < 0.2:
            return Atom(r.choice(self.names))
        if allow_cond and self.left > 0 and r.random() < 0.45:
            self.left -= 1
            ante = self.formula(r.randint(0, min(2, depth - 1)), allow_cond=False)
            return Cond(ante, self.formula(depth - 1))
        if r.random() < 0.2:
            return Not(self.formula(depth - 1, allow_cond))
        op = r.choice(_BINARY)
        return op(self.formula(depth - 1, allow_cond), self.formula(depth - 1, allow_cond))


_BINARY = (And, Or, Implies)


def random_formula(
    rng: random.Random, atom_budget: int = 3, depth_budget: int = 4, max_conditionals: int = 2
) -> Formula:
    names = list(ATOM_NAMES[:atom_budget])
    return _Gen(rng, names, max_conditionals).formula(depth_budget)


def random_propositional(rng: random.Random, atom_budget: int = 3, depth_budget: int = 3) -> Formula:
    names = list(ATOM_NAMES[:atom_budget])
    return _Gen(rng, names, 0).formula(depth_budget, allow_cond=False)


def generate_corpus(
    seed: int,
    count: int,
    atom_budget: int = 3,
    depth_budget: int = 4,
    max_conditionals: int = 2,
    min_conditionals: int = 1,
) -> list[Formula]:
    """``count`` distinct formulas, the same ones for the same arguments.

    Every formula has at most ``atom_budget`` atoms, connective depth at most
    ``depth_budget`` and between ``min_conditionals`` and ``max_conditionals``
    conditionals, none of them inside an antecedent.
    """
    if atom_budget < 1 or depth_budget < 1 or count < 0:
        raise ValueError("budgets must be positive and count nonnegative")
    rng = random.Random(seed)
    out: list[Formula] = []
    seen: set[Formula] = set()
    attempts = 0
    while len(out) < count:
        attempts += 1
        if attempts > 1000 * (count + 1):
            raise RuntimeError(f"could not find {count} distinct formulas within the budgets")
        f = random_formula(rng, atom_budget, depth_budget, max_conditionals)
        if f in seen or not min_conditionals <= conditional_count(f) <= max_conditionals:
            continue
        assert check_flat_fragment(f) is None
        seen.add(f)
        out.append(f)
    return out


def read_corpus(path) -> list[Formula]:
    """One formula per line; blank lines and ``#`` comments are skipped."""
    out = []
    for line in Path(path).read_text().splitlines():
        text = line.split("#", 1)[0].strip()
        if text:
            out.append(parse(text))
    return out


def write_corpus(path, formulas: Iterable[Formula], header: Optional[str] = None) -> None:
    lines = [f"# {header}"] if header else []
    lines += [to_text(f) for f in formulas]
    Path(path).write_text("\n".join(lines) + "\n")


def count_propositional(names: Sequence[str], depth: int) -> int:
    """Number of formulas ``all_propositional`` yields."""
    prev_total, total, exact = 0, len(names), len(names)
    for _ in range(depth):
        exact = exact + len(_BINARY) * (total**2 - prev_total**2)
        prev_total, total = total, total + exact
    return total


def all_propositional(names: Sequence[str], depth: int) -> Iterator[Formula]:
    """Every formula over ``names`` built from ~, &, | and -> up to ``depth``.

    Formulas come out by increasing depth; within one depth the order is
    fixed.  Only the lower levels are held in memory, so depth 3 over two
    atoms (about 1.85 million formulas) can be streamed.
    """
    levels: list[list[Formula]] = [[Atom(n) for n in names]]
    yield from levels[0]
    for d in range(1, depth + 1):
        lower = [f for lv in levels for f in lv]
        top = levels[-1]
        last = d == depth
        fresh: list[Formula] = []

        def emit(f):
            if not last:
                fresh.append(f)
            return f

        for f in top:
            yield emit(Not(f))
        n_old = len(lower) - len(top)
        for a_i, a in enumerate(lower):
            for b_i, b in enumerate(lower):
                if a_i < n_old and b_i < n_old:
                    continue  # both below the top level: built earlier
                for op in _BINARY:
                    yield emit(op(a, b))
        levels.append(fresh)
