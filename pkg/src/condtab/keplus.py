"""Classical KE+ proof search with dependency tracking.

The tree grows from ``T A``.  Branches opened by the bivalence rule (PB) with
the conjugate of a beta component are *betaC* branches; every branch split
inside a betaC branch is a betaC branch as well.  Search always continues
the uncompleted betaC branch nested under the most PB splits.

Besides the tree itself this module offers:

* ``detect_tautology`` -- decides ``A == T`` from the completed tree;
* ``v_sets`` / ``equivalent`` -- the signed-atom sets that v-fulfil a
  formula, and equivalence as equality of the assignments they cover.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Iterator, Optional

from .formula import (
    Alpha,
    Atom,
    Beta,
    Formula,
    Literal,
    SignedFormula,
    T,
    classify,
    conjugate,
    has_conditional,
    sorted_atoms,
    to_text,
)

ROOT, ALPHA, BETA, PB = "root", "alpha", "beta", "pb"


@dataclass(frozen=True)
class Node:
    id: int
    signed: SignedFormula
    origin: str
    premises: tuple[int, ...] = ()

    def __str__(self) -> str:
        src = f" [{self.origin} {', '.join(map(str, self.premises))}]" if self.premises else ""
        return f"{self.id}. {self.signed}{src}"


@dataclass
class Branch:
    """One segment of the tree; the branch proper is the path to the root."""

    own: list[int]
    kind: str  # "root", "betaC" or "beta"
    parent: Optional["Branch"] = None
    pb_target: Optional[int] = None
    children: list["Branch"] = field(default_factory=list)
    closed: bool = False
    closing_pair: Optional[tuple[int, int]] = None
    saturated: bool = False

    @property
    def betac_depth(self) -> int:
        n, b = 0, self
        while b is not None:
            n += b.kind == "betaC"
            b = b.parent
        return n

    def path(self) -> list[int]:
        chain = []
        b = self
        while b is not None:
            chain.append(b.own)
            b = b.parent
        return [i for seg in reversed(chain) for i in seg]

    def leaves(self) -> Iterator["Branch"]:
        if not self.children:
            yield self
        for c in self.children:
            yield from c.leaves()


class KETableau:
    """A KE+ tree for a conditional-free formula."""

    def __init__(self, formula: Formula):
        if has_conditional(formula):
            raise ValueError(f"KE+ works on conditional-free formulas: {to_text(formula)!r}")
        self.formula = formula
        self.nodes: list[Node] = []
        self.root = Branch(own=[], kind=ROOT)
        self._add(self.root, T(formula), ROOT, ())
        self.trace: list[str] = []
        # (branch, signed, existing node, node whose rule would repeat it)
        self._repeats: list[tuple[Branch, SignedFormula, int, int]] = []
        self._repeat_keys: set = set()

    # -- bookkeeping -------------------------------------------------------

    def _add(self, branch: Branch, x: SignedFormula, origin: str, premises) -> Node:
        node = Node(len(self.nodes), x, origin, tuple(premises))
        self.nodes.append(node)
        branch.own.append(node.id)
        return node

    def node(self, i: int) -> Node:
        return self.nodes[i]

    def signed_on(self, branch: Branch) -> dict[SignedFormula, list[int]]:
        out: dict[SignedFormula, list[int]] = {}
        for i in branch.path():
            out.setdefault(self.nodes[i].signed, []).append(i)
        return out

    def depends_on(self, n1: int, n2: int, *, through_pb: bool = True) -> bool:
        """Whether node ``n1`` depends on node ``n2``.

        Every node depends on itself; alpha and beta conclusions depend on
        their premises; PB conclusions on the PB target.  The relation is
        transitive.
        """
        seen, stack = set(), [n1]
        while stack:
            i = stack.pop()
            if i == n2:
                return True
            if i in seen:
                continue
            seen.add(i)
            node = self.nodes[i]
            if node.origin == PB and not through_pb:
                continue
            stack.extend(node.premises)
        return False

    # -- analysed, fulfilled, completed -----------------------------------

    def is_analysed(self, i: int, branch: Branch) -> bool:
        present = self.signed_on(branch)
        c = classify(self.nodes[i].signed)
        if isinstance(c, Alpha):
            return all(x in present for x in c.components)
        if isinstance(c, Beta):
            b1, b2 = c.components
            return (conjugate(b1) in present and b2 in present) or (
                conjugate(b2) in present and b1 in present
            )
        return True

    def is_fulfilled(self, i: int, branch: Branch) -> bool:
        c = classify(self.nodes[i].signed)
        if not isinstance(c, Beta):
            return True
        path = branch.path()
        for j in path:
            node = self.nodes[j]
            if node.signed not in c.components:
                continue
            if node.origin == PB and node.premises == (i,):
                return True
            if j != i and self.depends_on(j, i):
                return True
        return False

    def is_E_completed(self, branch: Branch) -> bool:
        return all(self.is_analysed(i, branch) for i in branch.path())

    def is_saturated(self, branch: Branch) -> bool:
        """Every alpha has its components and every beta one of its own."""
        present = self.signed_on(branch)
        for i in branch.path():
            c = classify(self.nodes[i].signed)
            if isinstance(c, Alpha) and not all(y in present for y in c.components):
                return False
            if isinstance(c, Beta) and not any(y in present for y in c.components):
                return False
        return True

    def is_completed(self, branch: Branch) -> bool:
        return self.is_E_completed(branch) and all(
            self.is_fulfilled(i, branch) for i in branch.path()
        )

    # -- search ------------------------------------------------------------

    def _close_if_contradictory(self, branch: Branch) -> bool:
        present = self.signed_on(branch)
        for i in branch.path():
            x = self.nodes[i].signed
            if conjugate(x) in present:
                j = present[conjugate(x)][0]
                branch.closed = True
                branch.closing_pair = (min(i, j), max(i, j))
                return True
        return False

    def _e_complete(self, branch: Branch) -> list[int]:
        """Apply alpha and beta rules until none adds anything new.

        Returns the ids of beta formulas produced during this round.
        """
        produced: list[int] = []
        changed = True
        present = self.signed_on(branch)
        path = branch.path()
        while changed and not branch.closed:
            changed = False
            for i in path:
                x = self.nodes[i].signed
                c = classify(x)
                new = []
                if isinstance(c, Alpha):
                    new = [(y, ALPHA, (i,)) for y in c.components if y not in present]
                    for y in c.components:
                        if y in present and present[y][0] != i:
                            key = (id(branch), y, present[y][0], i)
                            if key not in self._repeat_keys:
                                self._repeat_keys.add(key)
                                self._repeats.append((branch, y, present[y][0], i))
                elif isinstance(c, Beta):
                    b1, b2 = c.components
                    for minor, concl in ((conjugate(b1), b2), (conjugate(b2), b1)):
                        if minor in present and concl not in present:
                            new = [(concl, BETA, (i, present[minor][0]))]
                            break
                if new:
                    for y, origin, prem in new[:1]:
                        node = self._add(branch, y, origin, prem)
                        present.setdefault(y, []).append(node.id)
                        path.append(node.id)
                        self.trace.append(f"{origin} {prem} -> {node.signed}")
                        if isinstance(classify(y), Beta):
                            produced.append(node.id)
                    changed = True
                    if self._close_if_contradictory(branch):
                        return produced
                    break
        return produced

    def _unfulfilled_beta(self, branch: Branch, preferred: list[int]) -> Optional[int]:
        path = branch.path()
        # PB skips a beta already cut on this path, or one that some
        # component already makes true
        cut = {self.nodes[j].premises[0] for j in path if self.nodes[j].origin == PB}
        present = self.signed_on(branch)
        candidates = [
            i
            for i in path
            if isinstance(classify(self.nodes[i].signed), Beta)
            and i not in cut
            and not self.is_fulfilled(i, branch)
            and not any(y in present for y in classify(self.nodes[i].signed).components)
        ]
        for i in preferred:
            if i in candidates:
                return i
        return candidates[0] if candidates else None

    def _select(self) -> Optional[Branch]:
        open_leaves = [b for b in self.root.leaves() if not (b.closed or b.saturated)]
        if not open_leaves:
            return None
        betac = [b for b in open_leaves if b.kind == "betaC"]
        pool = betac or open_leaves
        best = max(b.betac_depth for b in pool)
        return next(b for b in pool if b.betac_depth == best)

    def expand(self) -> "KETableau":
        while True:
            branch = self._select()
            if branch is None:
                return self
            if self._close_if_contradictory(branch):
                continue
            produced = self._e_complete(branch)
            if branch.closed:
                continue
            target = self._unfulfilled_beta(branch, produced)
            if target is None:
                branch.saturated = True
                continue
            b1 = classify(self.nodes[target].signed).components[0]
            left_kind = "betaC"
            right_kind = "betaC" if branch.betac_depth > 0 else "beta"
            left = Branch(own=[], kind=left_kind, parent=branch, pb_target=target)
            right = Branch(own=[], kind=right_kind, parent=branch, pb_target=target)
            self._add(left, conjugate(b1), PB, (target,))
            self._add(right, b1, PB, (target,))
            branch.children = [left, right]
            self.trace.append(f"PB on {target}: {conjugate(b1)} | {b1}")

    # -- reading the result ------------------------------------------------

    def open_leaves(self) -> list[Branch]:
        return [b for b in self.root.leaves() if not b.closed]

    def literals(self, branch: Branch) -> frozenset[SignedFormula]:
        return frozenset(
            self.nodes[i].signed
            for i in branch.path()
            if isinstance(self.nodes[i].signed.formula, Atom)
        )

    def duplicate_witnesses(self) -> list[tuple[SignedFormula, int, int]]:
        """Signed formulas met twice in a betaC branch.

        Each witness ``(x, first, second)`` has ``first`` depending on the
        branch's PB root and ``second`` (the node that produced or would have
        produced ``x`` again) depending on the PB target through alpha/beta
        steps only.
        """
        out = []
        for branch, x, first, second in self._repeats:
            b = branch
            while b is not None:
                if b.kind == "betaC" and b.own:
                    r, target = b.own[0], b.pb_target
                    if (
                        self.depends_on(first, r)
                        and second != target
                        and self.depends_on(second, target, through_pb=False)
                        and (x, first, second) not in out
                    ):
                        out.append((x, first, second))
                b = b.parent
        return out

    def render(self) -> str:
        lines = []

        def walk(b: Branch, indent: str):
            for i in b.own:
                lines.append(indent + str(self.nodes[i]))
            if b.closed:
                lines.append(indent + f"x  {b.closing_pair[0]} / {b.closing_pair[1]}")
            for k, c in enumerate(b.children):
                lines.append(indent + f"[{c.kind} branch {k + 1}]")
                walk(c, indent + "    ")

        walk(self.root, "")
        return "\n".join(lines)


def expand(formula: Formula) -> KETableau:
    """Build the completed KE+ tree for ``T formula``."""
    return KETableau(formula).expand()


def detect_tautology(a: Formula) -> bool:
    """Decide whether ``a`` is a tautology from its completed KE+ tree.

    The open completed branches are pairwise exclusive, and every assignment
    satisfying ``a`` extends the literals of exactly one of them; ``a`` is a
    tautology exactly when those branches leave no assignment uncovered.
    """
    tree = expand(a)
    n = len(sorted_atoms(a))
    covered = sum(1 << (n - len(tree.literals(b))) for b in tree.open_leaves())
    return covered == 1 << n


# --------------------------------------------------------------------------
# v-fulfilment


def _clash(s: frozenset[SignedFormula]) -> bool:
    return any(conjugate(x) in s for x in s)


def _v(x: SignedFormula) -> set[frozenset[SignedFormula]]:
    c = classify(x)
    if isinstance(c, Literal):
        return {frozenset([x])}
    if isinstance(c, Alpha):
        out = {frozenset()}
        for comp in c.components:
            out = {s | t for s in out for t in _v(comp) if not _clash(s | t)}
        return out
    if isinstance(c, Beta):
        b1, b2 = c.components
        out = set(_v(b1))
        out |= {s | t for s in _v(conjugate(b1)) for t in _v(b2) if not _clash(s | t)}
        return out
    raise ValueError(f"v-sets are undefined for conditionals: {x}")


def v_sets(a: Formula) -> set[frozenset[SignedFormula]]:
    """All sets of signed atoms that v-fulfil ``a``."""
    if has_conditional(a):
        raise ValueError(f"v-sets are undefined for conditionals: {to_text(a)!r}")
    return _v(T(a))


def _covered(sets, names: list[str]) -> set[tuple[bool, ...]]:
    out = set()
    for s in sets:
        fixed = {x.formula.name: x.sign for x in s}
        free = [n for n in names if n not in fixed]
        for values in itertools.product((True, False), repeat=len(free)):
            full = dict(fixed, **dict(zip(free, values)))
            out.add(tuple(full[n] for n in names))
    return out


def equivalent(a: Formula, b: Formula) -> bool:
    """Two formulas are equivalent iff their v-sets cover the same assignments."""
    names = sorted_atoms(a, b)
    return _covered(v_sets(a), names) == _covered(v_sets(b), names)
