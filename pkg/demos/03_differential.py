"""Run the prover and the countermodel search side by side on a seeded corpus."""
import sys

from condtab.corpus import generate_corpus
from condtab.harness import run_diff

count = int(sys.argv[1]) if len(sys.argv) > 1 else 100
report = run_diff(generate_corpus(seed=1, count=count), max_worlds=3)
print(report.to_text())
