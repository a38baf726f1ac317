"""Command-line front end.

    condtab prove    --formula TEXT | --corpus PATH
    condtab refute   --formula TEXT | --corpus PATH  [--max-worlds N]
    condtab check    --formula TEXT | --corpus PATH
    condtab fixtures
    condtab diff     [--corpus PATH | --seed N --count N] [--max-worlds N]

Exit codes: 0 success or valid, 1 not proved / refuted / outside the
fragment, 2 usage error, 3 node budget exhausted, 4 fixture or diff
inconsistency.
"""
from __future__ import annotations

import argparse
import json
import sys
from dataclasses import asdict, dataclass
from typing import Optional, Sequence

from .corpus import generate_corpus, read_corpus
from .engine import FragmentError, ProverConfig, prove
from .fixtures import replay_all
from .formula import Formula, FormulaSyntaxError, check_flat_fragment, parse, to_text
from .harness import UNSOUND, EXHAUSTED, run_diff
from .semantics import DEFAULT_MAX_WORLDS, find_countermodel

RUN_SCHEMA = "condtab.run/1"
EXIT_OK, EXIT_NO, EXIT_USAGE, EXIT_BUDGET, EXIT_INCONSISTENT = 0, 1, 2, 3, 4
COMMANDS = ("prove", "refute", "check", "fixtures", "diff")


@dataclass(frozen=True)
class RunConfig:
    command: str
    formula: Optional[str] = None
    corpus: Optional[str] = None
    max_worlds: int = DEFAULT_MAX_WORLDS
    budget: int = 10_000
    t2_enabled: bool = True
    output: str = "text"
    seed: int = 1
    count: int = 500
    workers: int = 1

    def prover(self) -> ProverConfig:
        return ProverConfig(budget=self.budget, t2_enabled=self.t2_enabled)


class UsageError(Exception):
    pass


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="condtab", description="Tableau prover and sphere-model checker for flat conditional formulas.")
    p.add_argument("command", choices=COMMANDS)
    p.add_argument("--formula", help="formula text, e.g. '(A>B)->(A->B)'")
    p.add_argument("--corpus", help="file with one formula per line ('#' starts a comment)")
    p.add_argument("--max-worlds", type=int, default=DEFAULT_MAX_WORLDS)
    p.add_argument("--budget", type=int, default=10_000, help="node budget per proof")
    p.add_argument("--no-t2", action="store_true", help="disable the second true-conditional rule")
    p.add_argument("--format", choices=("text", "json"), default="text")
    p.add_argument("--seed", type=int, default=1)
    p.add_argument("--count", type=int, default=500)
    p.add_argument("--workers", type=int, default=1)
    return p


def config_from_args(argv: Sequence[str]) -> RunConfig:
    a = build_parser().parse_args(argv)
    for name in ("max_worlds", "budget", "count", "workers"):
        if getattr(a, name) < (0 if name == "count" else 1):
            raise UsageError(f"--{name.replace('_', '-')} must be positive")
    return RunConfig(
        command=a.command,
        formula=a.formula,
        corpus=a.corpus,
        max_worlds=a.max_worlds,
        budget=a.budget,
        t2_enabled=not a.no_t2,
        output=a.format,
        seed=a.seed,
        count=a.count,
        workers=a.workers,
    )


def _inputs(cfg: RunConfig) -> list[Formula]:
    if cfg.formula is not None and cfg.corpus is not None:
        raise UsageError("give either --formula or --corpus, not both")
    if cfg.formula is not None:
        return [parse(cfg.formula)]
    if cfg.corpus is not None:
        return read_corpus(cfg.corpus)
    raise UsageError(f"{cfg.command} needs --formula or --corpus")


def _prove(cfg: RunConfig):
    results, codes, texts = [], [], []
    for f in _inputs(cfg):
        try:
            v = prove(f, cfg.prover())
        except FragmentError as e:
            results.append({"formula": to_text(f), "status": "OutsideFragment", "violation": str(e.violation)})
            texts.append(f"outside the fragment: {to_text(f)}: {e.violation}")
            codes.append(EXIT_NO)
            continue
        results.append(v.to_dict())
        texts.append(v.to_text())
        codes.append(EXIT_OK if v.valid else EXIT_BUDGET if v.exhausted else EXIT_NO)
    return results, texts, max(codes, default=EXIT_OK)


def _refute(cfg: RunConfig):
    results, codes, texts = [], [], []
    for f in _inputs(cfg):
        cm = find_countermodel(f, cfg.max_worlds)
        if cm is None:
            results.append({"formula": to_text(f), "countermodel": None, "max_worlds": cfg.max_worlds})
            texts.append(f"none within bound ({cfg.max_worlds} worlds): {to_text(f)}")
            codes.append(EXIT_OK)
        else:
            results.append(cm.to_dict())
            texts.append(cm.to_text())
            codes.append(EXIT_NO)
    return results, texts, max(codes, default=EXIT_OK)


def _check(cfg: RunConfig):
    results, codes, texts = [], [], []
    for f in _inputs(cfg):
        v = check_flat_fragment(f)
        if v is None:
            results.append({"formula": to_text(f), "ok": True})
            texts.append(f"ok: {to_text(f)}")
            codes.append(EXIT_OK)
        else:
            results.append({"formula": to_text(f), "ok": False, "path": list(v.path), "subterm": to_text(v.subterm)})
            texts.append(f"violation at {'/'.join(v.path)}: {to_text(v.subterm)} in {to_text(f)}")
            codes.append(EXIT_NO)
    return results, texts, max(codes, default=EXIT_OK)


def _fixtures(cfg: RunConfig):
    got = replay_all(cfg.prover())
    code = EXIT_OK if all(r.ok for r in got) else EXIT_INCONSISTENT
    return [r.to_dict() for r in got], [r.to_text() for r in got], code


def _diff(cfg: RunConfig):
    if cfg.corpus is not None:
        corpus = read_corpus(cfg.corpus)
    else:
        corpus = generate_corpus(cfg.seed, cfg.count)
    report = run_diff(corpus, cfg.max_worlds, cfg.prover(), workers=cfg.workers)
    m = report.matrix()
    code = EXIT_INCONSISTENT if m[UNSOUND] else EXIT_BUDGET if m[EXHAUSTED] else EXIT_OK
    return [report.to_dict()], [report.to_text()], code


HANDLERS = {"prove": _prove, "refute": _refute, "check": _check, "fixtures": _fixtures, "diff": _diff}


def run(cfg: RunConfig, out=None) -> int:
    out = out or sys.stdout
    try:
        results, texts, code = HANDLERS[cfg.command](cfg)
    except FormulaSyntaxError as e:
        print(f"condtab: syntax error: {e}", file=sys.stderr)
        return EXIT_USAGE
    except (UsageError, OSError) as e:
        print(f"condtab: {e}", file=sys.stderr)
        return EXIT_USAGE
    if cfg.output == "json":
        doc = {"schema": RUN_SCHEMA, "config": asdict(cfg), "exit_code": code, "results": results}
        print(json.dumps(doc, indent=2), file=out)
    else:
        sep = "\n\n" if cfg.command in ("prove", "refute") else "\n"
        print(sep.join(texts), file=out)
    return code


def main(argv: Optional[Sequence[str]] = None) -> int:
    try:
        cfg = config_from_args(sys.argv[1:] if argv is None else argv)
    except UsageError as e:
        print(f"condtab: {e}", file=sys.stderr)
        return EXIT_USAGE
    except SystemExit as e:  # argparse
        return EXIT_USAGE if e.code else EXIT_OK
    return run(cfg)
