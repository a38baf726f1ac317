"""KE+ trees, tautology detection and v-sets for propositional formulas."""
from condtab import detect_tautology, equivalent, parse, v_sets
from condtab.keplus import expand

tree = expand(parse("A | ~A"))
print(tree.render())
print("duplicate witnesses:", [(str(x), a, b) for x, a, b in tree.duplicate_witnesses()])
print()

for text in ["A | ~A", "(A -> B) | A", "(P | Q) | (~P & R)"]:
    print(f"{text:22} tautology={detect_tautology(parse(text))}")

print()
for text in ["~A | B", "A -> B"]:
    sets = sorted(sorted(str(x) for x in s) for s in v_sets(parse(text)))
    print(f"v-sets of {text}: {sets}")
print("equivalent:", equivalent(parse("~A | B"), parse("A -> B")))
