"""Find small sphere models that refute MP and monotony."""
from condtab import evaluate, find_countermodel, parse

for text, bound in [("(A > B) -> (A -> B)", 2), ("(A > B) -> ((A & C) > B)", 3)]:
    f = parse(text)
    cm = find_countermodel(f, bound)
    print(cm.to_text())
    print("false at u0:", not evaluate(cm.model, 0, f))
    print()

# insisting on nonempty sphere families gives the two-world MP model
print(find_countermodel(parse("(A > B) -> (A -> B)"), 2, normal=True).to_text())
