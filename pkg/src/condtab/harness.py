"""Differential runs: the prover against the bounded countermodel search."""
from __future__ import annotations

import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from typing import Optional, Sequence

from .engine import ProverConfig, prove
from .formula import Formula, to_text
from .semantics import DEFAULT_MAX_WORLDS, Countermodel, find_countermodel

PROVED = "proved"            # valid, no countermodel
REFUTED = "refuted"          # not proved, countermodel found
UNSOUND = "unsound"          # valid and refuted: a hard failure
UNDECIDED = "undecided"      # not proved, nothing within the bound
EXHAUSTED = "exhausted"      # node budget ran out

CATEGORIES = (PROVED, REFUTED, UNSOUND, UNDECIDED, EXHAUSTED)


@dataclass(frozen=True)
class DiffRow:
    index: int
    formula: Formula
    status: str
    exhausted: bool
    countermodel: Optional[Countermodel]
    seconds: float

    @property
    def category(self) -> str:
        if self.exhausted:
            return EXHAUSTED
        if self.status == "Valid":
            return UNSOUND if self.countermodel is not None else PROVED
        return REFUTED if self.countermodel is not None else UNDECIDED


@dataclass
class DiffReport:
    rows: list[DiffRow] = field(default_factory=list)
    max_worlds: int = DEFAULT_MAX_WORLDS
    seconds: float = 0.0

    def matrix(self) -> dict[str, int]:
        out = dict.fromkeys(CATEGORIES, 0)
        for r in self.rows:
            out[r.category] += 1
        return out

    def failures(self) -> list[DiffRow]:
        return [r for r in self.rows if r.category == UNSOUND]

    def undecided(self) -> list[DiffRow]:
        return [r for r in self.rows if r.category == UNDECIDED]

    @property
    def refuted_share(self) -> float:
        """Share of not-proved formulas that the search did refute."""
        m = self.matrix()
        total = m[REFUTED] + m[UNDECIDED]
        return 1.0 if total == 0 else m[REFUTED] / total

    def to_dict(self) -> dict:
        return {
            "max_worlds": self.max_worlds,
            "seconds": round(self.seconds, 3),
            "matrix": self.matrix(),
            "refuted_share": round(self.refuted_share, 4),
            "items": [
                {
                    "index": r.index,
                    "formula": to_text(r.formula),
                    "prover": r.status,
                    "exhausted": r.exhausted,
                    "countermodel": r.countermodel is not None,
                    "category": r.category,
                }
                for r in self.rows
            ],
        }

    def to_text(self) -> str:
        m = self.matrix()
        lines = [f"{len(self.rows)} formulas, countermodel bound {self.max_worlds} worlds, {self.seconds:.1f}s"]
        lines.append("                 countermodel   none")
        lines.append(f"  prover Valid     {m[UNSOUND]:>10}   {m[PROVED]:>4}")
        lines.append(f"  prover NotProved {m[REFUTED]:>10}   {m[UNDECIDED]:>4}")
        if m[EXHAUSTED]:
            lines.append(f"  budget exhausted {m[EXHAUSTED]:>10}")
        lines.append(f"refuted share of NotProved: {self.refuted_share:.1%}")
        for r in self.failures():
            lines.append(f"UNSOUND #{r.index}: {to_text(r.formula)}")
        for r in self.undecided():
            lines.append(f"undecided at bound #{r.index}: {to_text(r.formula)}")
        return "\n".join(lines)


def check_one(args) -> DiffRow:
    index, f, max_worlds, config = args
    t0 = time.perf_counter()
    v = prove(f, config)
    cm = find_countermodel(f, max_worlds)
    return DiffRow(index, f, v.status, v.exhausted, cm, time.perf_counter() - t0)


def run_diff(
    corpus: Sequence[Formula],
    max_worlds: int = DEFAULT_MAX_WORLDS,
    config: ProverConfig = ProverConfig(),
    workers: int = 1,
) -> DiffReport:
    t0 = time.perf_counter()
    jobs = [(k, f, max_worlds, config) for k, f in enumerate(corpus)]
    if workers > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            rows = list(pool.map(check_one, jobs, chunksize=8))
    else:
        rows = [check_one(j) for j in jobs]
    rows.sort(key=lambda r: r.index)
    return DiffReport(rows, max_worlds, time.perf_counter() - t0)
