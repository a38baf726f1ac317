"""Reference proofs replayed against the prover.

Each fixture lists the key lines of a known closed tree and the pair that
closes it.  A replay passes when the prover's tree contains those lines in
the same order and closes on the same pair, allowing world symbols to be
renamed consistently (constants to constants, variables to variables).
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional

from .engine import ProverConfig, Tableau, Verdict, prove
from .formula import SignedFormula, parse
from .labels import Label, atom_seq, parse_label, sigma_cond_unify

Line = tuple[SignedFormula, Label]


def _line(text: str) -> Line:
    signed, label = text.split("@")
    sign, formula = signed.strip().split(" ", 1)
    return SignedFormula(sign == "T", parse(formula)), parse_label(label)


@dataclass(frozen=True)
class Fixture:
    name: str
    formula: str
    steps: tuple[str, ...]
    closing: tuple[str, str]
    needs_registry: bool = False

    def parsed_steps(self) -> list[Line]:
        return [_line(s) for s in self.steps]

    def parsed_closing(self) -> tuple[Line, Line]:
        return _line(self.closing[0]), _line(self.closing[1])


FIXTURES = (
    Fixture(
        name="top-antecedent",
        formula="((A | ~A) > B) -> (C > B)",
        steps=(
            "F ((A | ~A) > B) -> (C > B) @ w1",
            "T (A | ~A) > B @ w1",
            "F C > B @ w1",
            "F B @ (w2^(C), w1)",
            "T B @ (W1^(A | ~A), w1)",
        ),
        closing=("T B @ (W1^(A | ~A), w1)", "F B @ (w2^(C), w1)"),
    ),
    Fixture(
        name="contradictory-antecedent",
        formula="(A & ~A) > B",
        steps=(
            "F (A & ~A) > B @ w1",
            "F B @ (w2^(A & ~A), w1)",
            "T A @ (w2^(A & ~A), w1)",
            "F A @ (w2^(A & ~A), w1)",
        ),
        closing=("T A @ (w2^(A & ~A), w1)", "F A @ (w2^(A & ~A), w1)"),
    ),
    Fixture(
        name="equivalent-antecedents",
        formula="((~A | B) > C) -> ((A -> B) > C)",
        steps=(
            "F ((~A | B) > C) -> ((A -> B) > C) @ w1",
            "T (~A | B) > C @ w1",
            "F (A -> B) > C @ w1",
            "F C @ (w2^(A -> B), w1)",
            "T C @ (W1^(~A | B), w1)",
        ),
        closing=("T C @ (W1^(~A | B), w1)", "F C @ (w2^(A -> B), w1)"),
    ),
    Fixture(
        name="sphere-identity",
        formula="((A > B) & (B > A)) -> ((A > C) -> (B > C))",
        steps=(
            "F ((A > B) & (B > A)) -> ((A > C) -> (B > C)) @ w1",
            "T (A > B) & (B > A) @ w1",
            "F (A > C) -> (B > C) @ w1",
            "T A > B @ w1",
            "T B > A @ w1",
            "T A > C @ w1",
            "F B > C @ w1",
            "F C @ (w2^(B), w1)",
            "T B @ (W1^(A), w1)",
            "T A @ (W2^(B), w1)",
            "T C @ (W3^(A), w1)",
        ),
        closing=("T C @ (W3^(A), w1)", "F C @ (w2^(B), w1)"),
        needs_registry=True,
    ),
)


class Renaming:
    """A consistent, injective renaming of world symbols."""

    def __init__(self):
        self.fwd: dict[tuple[type, int], int] = {}
        self.back: dict[tuple[type, int], int] = {}

    def copy(self) -> "Renaming":
        r = Renaming()
        r.fwd, r.back = dict(self.fwd), dict(self.back)
        return r

    def match_label(self, expected: Label, actual: Label) -> bool:
        ea, aa = atom_seq(expected), atom_seq(actual)
        if len(ea) != len(aa):
            return False
        for e, a in zip(ea, aa):
            if type(e) is not type(a) or e.index != a.index:
                return False
            ke, ka = (type(e), e.id), (type(a), a.id)
            if self.fwd.setdefault(ke, a.id) != a.id or self.back.setdefault(ka, e.id) != e.id:
                return False
        return True

    def match_line(self, expected: Line, actual: Line) -> bool:
        return expected[0] == actual[0] and self.match_label(expected[1], actual[1])


def _embed(steps: list[Line], lines: list[Line], ren: Renaming) -> Optional[Renaming]:
    """Find ``steps`` as a subsequence of ``lines`` under one renaming."""
    if not steps:
        return ren
    first, rest = steps[0], steps[1:]
    for k, line in enumerate(lines):
        trial = ren.copy()
        if trial.match_line(first, line):
            done = _embed(rest, lines[k + 1 :], trial)
            if done is not None:
                return done
    return None


@dataclass
class FixtureResult:
    fixture: Fixture
    verdict: Verdict
    checks: dict[str, bool] = field(default_factory=dict)

    @property
    def ok(self) -> bool:
        return all(self.checks.values())

    def to_dict(self) -> dict:
        return {
            "name": self.fixture.name,
            "formula": self.fixture.formula,
            "status": self.verdict.status,
            "checks": self.checks,
            "ok": self.ok,
        }

    def to_text(self) -> str:
        marks = ", ".join(f"{k} {'ok' if v else 'FAIL'}" for k, v in self.checks.items())
        return f"{'PASS' if self.ok else 'FAIL'} {self.fixture.name}: {self.fixture.formula}  ({marks})"


def replay(fx: Fixture, config: ProverConfig = ProverConfig()) -> FixtureResult:
    verdict = prove(parse(fx.formula), config)
    t: Tableau = verdict.tableau
    res = FixtureResult(fx, verdict)
    res.checks["valid"] = verdict.valid
    leaves = t.leaves()
    branch = leaves[0]
    lines = [(it.signed, it.label) for _, it in t.items(branch)]
    ren = _embed(fx.parsed_steps(), lines, Renaming())
    res.checks["steps"] = ren is not None
    closing_ok = False
    if branch.closed and ren is not None:
        a, b, _ = branch.closing
        got = [(a.signed, a.label), (b.signed, b.label)]
        want = list(fx.parsed_closing())
        for pair in (got, got[::-1]):
            trial = ren.copy()
            if all(trial.match_line(w, g) for w, g in zip(want, pair)):
                closing_ok = True
                break
    res.checks["closing"] = closing_ok
    if fx.needs_registry:
        # the pair must fail without the registry and a cond-equiv step must precede closure
        used = any(t.nodes[i].rule == "cond-equiv" for i in branch.path())
        if branch.closed:
            a, b, _ = branch.closing
            blocked = sigma_cond_unify(a.label, b.label) is None
        else:
            blocked = False
        res.checks["registry"] = used and blocked
    return res


def replay_all(config: ProverConfig = ProverConfig()) -> list[FixtureResult]:
    return [replay(fx, config) for fx in FIXTURES]
