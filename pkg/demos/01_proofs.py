"""Prove a handful of conditional formulas and print one closed tree."""
from condtab import parse, prove

FORMULAS = [
    "(A & ~A) > B",
    "((A > B) & (B > A)) -> ((A > C) -> (B > C))",
    "(A > B) -> (A -> B)",
    "(A > B) -> ((A & C) > B)",
]

for text in FORMULAS:
    v = prove(parse(text))
    print(f"{v.status:10} {text}")

print()
# the sphere-identity tree: the closing pair needs the registered identity
print(prove(parse(FORMULAS[1])).to_text())
