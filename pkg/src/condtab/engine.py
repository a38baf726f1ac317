"""Labelled tableau prover for the flat conditional fragment.

The search starts from ``F f`` at the root world ``w1`` and works one branch
at a time, leftmost first.  On the current branch it checks for closure and
otherwise applies the first rule in this schedule that adds something new:

    alpha, unfold, F>, T>1, T>2, cond-equiv, inst, beta, PB

``inst`` copies a beta formula or a false conditional from a label with
variables onto each ground label it unifies with; ``F>`` and ``PB`` only ever
fire at ground labels.  When nothing applies the branch stays open.
"""
from __future__ import annotations

import json
from dataclasses import asdict, dataclass, field
from typing import Iterator, Optional

from .formula import (
    Alpha,
    Beta,
    FalseConditional,
    Formula,
    SignedFormula,
    T,
    F,
    TrueConditional,
    check_flat_fragment,
    classify,
    conjugate,
    has_conditional,
    is_top,
    to_text,
    truth_table_equiv,
)
from .labels import (
    EMPTY_REGISTRY,
    Const,
    EquivRegistry,
    Label,
    LabelFactory,
    Pair,
    RegistryEntry,
    Var,
    atom_seq,
    body,
    countersegment,
    from_atoms,
    head,
    is_ground,
    length,
    reindex,
    render,
    sigma_cond_unify,
    sigma_unify,
)

SCHEMA = "condtab.proof/1"
RULES = ("root", "alpha", "beta", "T>1", "T>2", "F>", "PB", "PNC", "unfold", "cond-equiv", "inst")


class FragmentError(ValueError):
    def __init__(self, violation):
        super().__init__(str(violation))
        self.violation = violation


@dataclass(frozen=True)
class ProverConfig:
    budget: int = 10_000
    t2_enabled: bool = True
    t2_registry: bool = False  # let T>2 match indexes through registered identities
    top_clause: bool = True


@dataclass(frozen=True)
class LSFormula:
    signed: SignedFormula
    label: Label

    def __str__(self) -> str:
        return f"{self.signed}  {render(self.label)}"


@dataclass(frozen=True)
class Node:
    """A tableau line; registry events have no ``item``."""

    id: int
    item: Optional[LSFormula]
    rule: str
    premises: tuple[int, ...] = ()
    entry: Optional[RegistryEntry] = None


@dataclass(frozen=True)
class Occurrence:
    """An LS-formula on a branch, written out or implied by a label index."""

    signed: SignedFormula
    label: Label
    node: int
    implicit: bool = False

    def to_dict(self) -> dict:
        return {
            "node": self.node,
            "implicit": self.implicit,
            "signed": str(self.signed),
            "label": render(self.label),
        }


@dataclass
class Branch:
    own: list[int]
    parent: Optional["Branch"] = None
    registry: EquivRegistry = EMPTY_REGISTRY
    facts: set = field(default_factory=set)
    labels: dict = field(default_factory=dict)  # label -> first node carrying it
    done: set = field(default_factory=set)
    children: list["Branch"] = field(default_factory=list)
    closed: bool = False
    closing: Optional[tuple[Occurrence, Occurrence, Label]] = None

    def path(self) -> list[int]:
        chain, b = [], self
        while b is not None:
            chain.append(b.own)
            b = b.parent
        return [i for seg in reversed(chain) for i in seg]

    def split(self) -> "Branch":
        return Branch(
            own=[],
            parent=self,
            registry=self.registry,
            facts=set(self.facts),
            labels=dict(self.labels),
            done=set(self.done),
        )

    def leaves(self) -> Iterator["Branch"]:
        if not self.children:
            yield self
        for c in self.children:
            yield from c.leaves()


def merge_labels(i: Label, j: Label, s=None) -> Label:
    """The label both ``i`` and ``j`` denote once ``s`` is applied.

    Constants win; between two variables the one with the more specific
    index is kept.
    """
    out = []
    for a, b in zip(atom_seq(i), atom_seq(j)):
        if isinstance(a, Const):
            out.append(a)
        elif isinstance(b, Const):
            out.append(b)
        else:
            weak = a.index is None or is_top(a.index)
            out.append(b if weak and b.index is not None else a)
    return from_atoms(out)


class Tableau:
    def __init__(self, formula: Formula, config: ProverConfig = ProverConfig()):
        violation = check_flat_fragment(formula)
        if violation is not None:
            raise FragmentError(violation)
        self.formula = formula
        self.config = config
        self.factory = LabelFactory()
        self.nodes: dict[int, Node] = {}
        self.root_label = self.factory.fresh_constant()
        self.root = Branch(own=[])
        self.exhausted = False
        self._add(self.root, LSFormula(F(formula), self.root_label), "root", ())

    # -- bookkeeping -------------------------------------------------------

    def _add(self, branch: Branch, item: Optional[LSFormula], rule: str, premises, entry=None) -> Node:
        node = Node(len(self.nodes) + 1, item, rule, tuple(premises), entry)
        self.nodes[node.id] = node
        branch.own.append(node.id)
        if item is not None:
            branch.facts.add((item.signed, item.label))
            branch.labels.setdefault(item.label, node.id)
        return node

    def _try_add(self, branch, signed, label, rule, premises) -> bool:
        if (signed, label) in branch.facts:
            return False
        self._add(branch, LSFormula(signed, label), rule, premises)
        return True

    def items(self, branch: Branch) -> list[tuple[int, LSFormula]]:
        return [(i, self.nodes[i].item) for i in branch.path() if self.nodes[i].item is not None]

    def holds_at(self, branch: Branch, sign: bool, a: Formula, label: Label) -> bool:
        if (SignedFormula(sign, a), label) in branch.facts:
            return True
        return sign and head(label).index == a

    def occurrences(self, branch: Branch) -> list[Occurrence]:
        out = [Occurrence(it.signed, it.label, i) for i, it in self.items(branch)]
        for label, first in branch.labels.items():
            index = head(label).index
            if index is not None:
                out.append(Occurrence(T(index), label, first, implicit=True))
        return out

    def _unify(self, i: Label, j: Label, reg: EquivRegistry):
        return sigma_cond_unify(i, j, reg, top_clause=self.config.top_clause)

    def witnessed(self, label: Label, branch: Branch) -> bool:
        """Whether ``label`` is guaranteed to denote at least one world.

        Constant heads do (given a witnessed body); a variable head needs a
        constant-headed label on the branch that unifies with it.
        """
        if is_ground(label):
            return True
        h = head(label)
        if isinstance(h, Const):
            return self.witnessed(body(label), branch)
        n = length(label)
        for other in branch.labels:
            if (
                length(other) == n
                and isinstance(head(other), Const)
                and self._unify(label, other, branch.registry) is not None
                and self.witnessed(other, branch)
            ):
                return True
        return False

    # -- closure -----------------------------------------------------------

    def check_closure(self, branch: Branch):
        """First complementary pair whose labels unify at a witnessed label."""
        by_formula: dict[Formula, tuple[list, list]] = {}
        for occ in self.occurrences(branch):
            pos, neg = by_formula.setdefault(occ.signed.formula, ([], []))
            (pos if occ.signed.sign else neg).append(occ)
        found = []
        for pos, neg in by_formula.values():
            for p in pos:
                for q in neg:
                    s = self._unify(p.label, q.label, branch.registry)
                    if s is None:
                        continue
                    merged = merge_labels(p.label, q.label, s)
                    if self.witnessed(merged, branch):
                        a, b = sorted((p, q), key=lambda o: (o.node, o.implicit))
                        found.append(((b.node, a.node, b.implicit, a.implicit), (a, b, merged)))
        if not found:
            return None
        return min(found, key=lambda t: t[0])[1]

    # -- rules -------------------------------------------------------------

    def _alpha(self, branch: Branch) -> bool:
        for i, it in self.items(branch):
            c = classify(it.signed)
            if isinstance(c, Alpha):
                for y in c.components:
                    if self._try_add(branch, y, it.label, "alpha", (i,)):
                        return True
        return False

    def unfold_index(self, branch: Branch) -> bool:
        for label, first in list(branch.labels.items()):
            h = head(label)
            if isinstance(h, Const) and h.index is not None:
                if self._try_add(branch, T(h.index), label, "unfold", (first,)):
                    return True
        return False

    def apply_f_cond(self, branch: Branch) -> bool:
        for i, it in self.items(branch):
            c = classify(it.signed)
            if isinstance(c, FalseConditional) and is_ground(it.label):
                key = ("F>", i)
                if key in branch.done:
                    continue
                branch.done.add(key)
                w = self.factory.fresh_constant(c.antecedent)
                self._add(branch, LSFormula(F(c.consequent), Pair(w, it.label)), "F>", (i,))
                return True
        return False

    def apply_t_cond_1(self, branch: Branch) -> bool:
        for i, it in self.items(branch):
            c = classify(it.signed)
            if isinstance(c, TrueConditional):
                key = ("T>1", i)
                if key in branch.done:
                    continue
                branch.done.add(key)
                v = self.factory.fresh_variable(c.antecedent)
                self._add(branch, LSFormula(T(c.consequent), Pair(v, it.label)), "T>1", (i,))
                return True
        return False

    def _index_matches(self, index: Formula, a: Formula, base: Label, reg: EquivRegistry) -> bool:
        if index == a:
            return True
        if has_conditional(a):
            return False
        if truth_table_equiv(index, a):
            return True
        return self.config.t2_registry and reg.covers(index, a, base)

    def t2_conclusions(self, branch: Branch, major: int, minor_label: Label):
        """What T>2 yields for ``major`` against the world ``minor_label``."""
        it = self.nodes[major].item
        c = classify(it.signed)
        if not isinstance(c, TrueConditional) or not isinstance(minor_label, Pair):
            return None
        h = head(minor_label)
        if not isinstance(h, Const) or h.index is None:
            return None
        if not self._index_matches(h.index, c.antecedent, minor_label.body, branch.registry):
            return None
        s = self._unify(body(minor_label), it.label, branch.registry)
        if s is None:
            return None
        w0 = merge_labels(body(minor_label), it.label, s)
        target = reindex(countersegment(minor_label, length(minor_label) - 1, w0), c.antecedent)
        out = []
        if self.holds_at(branch, True, c.antecedent, minor_label):
            out.append(T(c.consequent))
        if self.holds_at(branch, False, c.consequent, minor_label):
            out.append(F(c.antecedent))
        return target, out

    def apply_t_cond_2(self, branch: Branch) -> bool:
        if not self.config.t2_enabled:
            return False
        for i, it in self.items(branch):
            if not isinstance(classify(it.signed), TrueConditional):
                continue
            for label, first in list(branch.labels.items()):
                got = self.t2_conclusions(branch, i, label)
                if got is None:
                    continue
                target, conclusions = got
                for y in conclusions:
                    if self._try_add(branch, y, target, "T>2", (i, first)):
                        return True
        return False

    def apply_cond_equiv(self, branch: Branch) -> bool:
        cands = [
            (i, it)
            for i, it in self.items(branch)
            if it.signed.sign
            and isinstance(head(it.label), Var)
            and head(it.label).index is not None
            and isinstance(it.label, Pair)
            and not has_conditional(it.signed.formula)
        ]
        for i, p in cands:
            a, b = p.signed.formula, head(p.label).index
            for j, q in cands:
                if j == i or q.signed.formula != b or head(q.label).index != a:
                    continue
                s = sigma_unify(body(p.label), body(q.label))
                if s is None:
                    continue
                base = merge_labels(body(p.label), body(q.label), s)
                reg = branch.registry.add(a, b, base)
                if reg is branch.registry:
                    continue
                branch.registry = reg
                self._add(branch, None, "cond-equiv", (i, j), entry=reg.entries[-1])
                return True
        return False

    def _inst(self, branch: Branch) -> bool:
        ground = [(l, n) for l, n in branch.labels.items() if is_ground(l)]
        for i, it in self.items(branch):
            if is_ground(it.label):
                continue
            c = classify(it.signed)
            if not isinstance(c, (Beta, FalseConditional)):
                continue
            for g, first in ground:
                if length(g) != length(it.label):
                    continue
                if self._unify(it.label, g, branch.registry) is None:
                    continue
                if self._try_add(branch, it.signed, g, "inst", (i, first)):
                    return True
        return False

    def _beta(self, branch: Branch) -> bool:
        occs = None
        for i, it in self.items(branch):
            c = classify(it.signed)
            if not isinstance(c, Beta):
                continue
            if occs is None:
                occs = self.occurrences(branch)
            for k in (0, 1):
                minor, concl = conjugate(c.components[k]), c.components[1 - k]
                for o in occs:
                    if o.signed != minor:
                        continue
                    s = self._unify(it.label, o.label, branch.registry)
                    if s is None:
                        continue
                    label = merge_labels(it.label, o.label, s)
                    if self._try_add(branch, concl, label, "beta", (i, o.node)):
                        return True
        return False

    def _pb_target(self, branch: Branch):
        for i, it in self.items(branch):
            c = classify(it.signed)
            if not isinstance(c, Beta) or not is_ground(it.label):
                continue
            b1, b2 = c.components
            if any(self.holds_at(branch, y.sign, y.formula, it.label) for y in (b1, b2)):
                continue
            return i, b1, it.label
        return None

    # -- search ------------------------------------------------------------

    SCHEDULE = ("_alpha", "unfold_index", "apply_f_cond", "apply_t_cond_1",
                "apply_t_cond_2", "apply_cond_equiv", "_inst", "_beta")

    def _work(self, branch: Branch) -> None:
        """Develop ``branch`` until it closes, splits, saturates or runs out."""
        while True:
            if len(self.nodes) >= self.config.budget:
                self.exhausted = True
                return
            hit = self.check_closure(branch)
            if hit is not None:
                branch.closed = True
                branch.closing = hit
                return
            if any(getattr(self, name)(branch) for name in self.SCHEDULE):
                continue
            target = self._pb_target(branch)
            if target is None:
                return
            i, b1, label = target
            left, right = branch.split(), branch.split()
            self._add(left, LSFormula(conjugate(b1), label), "PB", (i,))
            self._add(right, LSFormula(b1, label), "PB", (i,))
            branch.children = [left, right]
            return

    def run(self) -> "Tableau":
        pending = [self.root]
        while pending and not self.exhausted:
            branch = pending.pop(0)
            self._work(branch)
            if branch.children:
                pending[:0] = branch.children
            elif not branch.closed and not self.exhausted:
                break  # an open saturated branch settles the matter
        return self

    # -- reading the result ------------------------------------------------

    def leaves(self) -> list[Branch]:
        return list(self.root.leaves())

    @property
    def closed(self) -> bool:
        return all(b.closed for b in self.leaves())

    def render(self) -> str:
        lines: list[str] = []
        width = max(
            (len(str(n.item.signed)) for n in self.nodes.values() if n.item is not None), default=0
        )

        num = len(str(len(self.nodes))) + 1

        def line(n: Node, indent: str) -> str:
            why = f"[{n.rule} {', '.join(map(str, n.premises))}]" if n.premises else f"[{n.rule}]"
            tag = f"{n.id}.".ljust(num)
            if n.item is None:
                return f"{indent}{tag} {n.entry}  {why}"
            text = str(n.item.signed).ljust(width)
            return f"{indent}{tag} {text}  {render(n.item.label)}  {why}"

        def walk(b: Branch, indent: str):
            for i in b.own:
                lines.append(line(self.nodes[i], indent))
            if b.closed:
                a, c, merged = b.closing
                lines.append(f"{indent}x  {_occ_ref(a)} / {_occ_ref(c)} at {render(merged)}")
            for k, c in enumerate(b.children):
                lines.append(f"{indent}[branch {k + 1}]")
                walk(c, indent + "    ")

        walk(self.root, "")
        return "\n".join(lines)


def _occ_ref(o: Occurrence) -> str:
    return f"{o.node}" + (f" (index {o.signed})" if o.implicit else "")


@dataclass(frozen=True)
class Verdict:
    valid: bool
    exhausted: bool
    tableau: Tableau = field(repr=False, compare=False)

    @property
    def status(self) -> str:
        return "Valid" if self.valid else "NotProved"

    @property
    def closing_pairs(self) -> list[tuple[Occurrence, Occurrence, Label]]:
        return [b.closing for b in self.tableau.leaves() if b.closed]

    def resources(self) -> dict:
        t = self.tableau
        leaves = t.leaves()
        return {
            "nodes": len(t.nodes),
            "budget": t.config.budget,
            "branches": len(leaves),
            "open_branches": sum(not b.closed for b in leaves),
            "exhausted": self.exhausted,
        }

    def to_text(self) -> str:
        t = self.tableau
        head_line = f"{self.status}: {to_text(t.formula)}"
        if self.exhausted:
            head_line += f" (node budget {t.config.budget} exhausted)"
        return head_line + "\n" + t.render()

    def to_dict(self) -> dict:
        t = self.tableau
        leaf_ids = {id(b): k for k, b in enumerate(t.leaves())}
        node_branch = {}
        for b in t.leaves():
            for i in b.path():
                node_branch.setdefault(i, []).append(leaf_ids[id(b)])
        nodes = []
        for n in t.nodes.values():
            d = {"id": n.id, "rule": n.rule, "premises": list(n.premises), "branches": node_branch.get(n.id, [])}
            if n.item is not None:
                d.update(sign="T" if n.item.signed.sign else "F",
                         formula=to_text(n.item.signed.formula),
                         label=render(n.item.label))
            else:
                d.update(registry={"left": to_text(n.entry.left), "right": to_text(n.entry.right),
                                   "base": render(n.entry.base)})
            nodes.append(d)
        branches = []
        for b in t.leaves():
            d = {"path": b.path(), "closed": b.closed,
                 "registry": [str(e) for e in b.registry]}
            if b.closed:
                a, c, merged = b.closing
                d["closing"] = {"rule": "PNC", "pair": [a.to_dict(), c.to_dict()], "label": render(merged)}
            branches.append(d)
        return {
            "schema": SCHEMA,
            "formula": to_text(t.formula),
            "config": asdict(t.config),
            "status": self.status,
            "nodes": nodes,
            "branches": branches,
            "resources": self.resources(),
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2)


def prove(f: Formula, config: ProverConfig = ProverConfig()) -> Verdict:
    t = Tableau(f, config).run()
    return Verdict(valid=t.closed and not t.exhausted, exhausted=t.exhausted, tableau=t)
