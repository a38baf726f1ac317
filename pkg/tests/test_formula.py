import itertools

import pytest
from hypothesis import given

from condtab.corpus import all_propositional, count_propositional
from condtab.formula import (
    Alpha,
    And,
    Atom,
    Beta,
    Cond,
    FalseConditional,
    FormulaSyntaxError,
    Iff,
    Implies,
    Literal,
    Not,
    Or,
    SignedFormula,
    T,
    F,
    TrueConditional,
    check_flat_fragment,
    classify,
    conjugate,
    desugar_iff,
    evaluate,
    is_top,
    parse,
    to_text,
    truth_table_equiv,
)
from strategies import anything, propositional

A, B, C = Atom("A"), Atom("B"), Atom("C")


def test_parse_atom():
    assert parse("A") == A
    assert parse("  x_1 ") == Atom("x_1")


def test_parse_top_antecedent_formula():
    f = parse("((A | ~A) > B) -> (C > B)")
    assert f == Implies(Cond(Or(A, Not(A)), B), Cond(C, B))


def test_parse_contradictory_antecedent():
    assert parse("(A & ~A) > B") == Cond(And(A, Not(A)), B)


@pytest.mark.parametrize(
    "text, expected",
    [
        ("~A & B", And(Not(A), B)),
        ("A & B | C", Or(And(A, B), C)),
        ("A | B > C", Cond(Or(A, B), C)),
        ("A > B -> C", Implies(Cond(A, B), C)),
        ("A -> B <-> C", Iff(Implies(A, B), C)),
        ("A > B > C", Cond(A, Cond(B, C))),
        ("A -> B -> C", Implies(A, Implies(B, C))),
        ("A & B & C", And(And(A, B), C)),
        ("(A > B) > C", Cond(Cond(A, B), C)),
    ],
)
def test_precedence_and_associativity(text, expected):
    assert parse(text) == expected


@pytest.mark.parametrize("text", ["", "A &", "(A", "A B", "A >> B", "1A", "A $ B", ")"])
def test_syntax_errors_carry_position(text):
    with pytest.raises(FormulaSyntaxError) as info:
        parse(text)
    assert info.value.position >= 0


def test_printer_uses_minimal_parentheses():
    assert to_text(parse("((A & B))")) == "A & B"
    assert to_text(parse("(A > B) > C")) == "(A > B) > C"
    assert to_text(parse("A > (B > C)")) == "A > B > C"
    assert to_text(parse("(A -> B) -> C")) == "(A -> B) -> C"
    assert to_text(parse("~(A | B)")) == "~(A | B)"


@given(anything())
def test_print_parse_round_trip(f):
    assert parse(to_text(f)) == f


def test_flat_fragment_examples():
    assert check_flat_fragment(parse("((A | ~A) > B) -> (C > B)")) is None
    assert check_flat_fragment(parse("A > (B > C)")) is None
    v = check_flat_fragment(parse("(A > B) > C"))
    assert v is not None and v.path == ("antecedent",) and v.subterm == Cond(A, B)


def test_flat_fragment_reports_deep_path():
    v = check_flat_fragment(parse("D | (((A > B) & C) > E)"))
    assert v.path == ("right", "antecedent", "left")


def test_conjugate():
    assert conjugate(T(A)) == F(A)
    assert conjugate(F(Cond(A, B))) == T(Cond(A, B))
    x = T(And(A, B))
    assert conjugate(conjugate(x)) == x


@given(anything(), propositional())
def test_conjugate_is_an_involution(f, _):
    for s in (True, False):
        x = SignedFormula(s, f)
        assert conjugate(conjugate(x)) == x and conjugate(x).formula == f


def test_classification_table():
    assert classify(T(And(A, B))) == Alpha((T(A), T(B)))
    assert classify(F(Or(A, B))) == Alpha((F(A), F(B)))
    assert classify(F(Implies(A, B))) == Alpha((T(A), F(B)))
    assert classify(T(Not(A))) == Alpha((F(A),))
    assert classify(F(Not(A))) == Alpha((T(A),))
    assert classify(T(Or(A, B))) == Beta((T(A), T(B)))
    assert classify(F(And(A, B))) == Beta((F(A), F(B)))
    assert classify(T(Implies(A, B))) == Beta((F(A), T(B)))
    assert classify(F(Cond(A, B))) == FalseConditional(A, B)
    assert classify(T(Cond(A, B))) == TrueConditional(A, B)
    assert classify(T(A)) == Literal(T(A))


def test_iff_is_classified_after_desugaring():
    assert classify(T(Iff(A, B))) == Alpha((T(Implies(A, B)), T(Implies(B, A))))
    assert classify(F(Iff(A, B))) == Beta((F(Implies(A, B)), F(Implies(B, A))))


@given(anything())
def test_classify_is_total(f):
    for s in (True, False):
        c = classify(SignedFormula(s, f))
        if isinstance(c, Alpha):
            assert 1 <= len(c.components) <= 2
        elif isinstance(c, Beta):
            assert len(c.components) == 2
        else:
            assert isinstance(c, (Literal, TrueConditional, FalseConditional))


def test_truth_table_equiv_examples():
    assert truth_table_equiv(Or(Not(A), B), Implies(A, B))
    assert truth_table_equiv(A, A)
    assert not truth_table_equiv(A, B)
    with pytest.raises(ValueError):
        truth_table_equiv(Cond(A, B), A)


def test_is_top_examples():
    assert is_top(Or(A, Not(A)))
    assert not is_top(And(A, Not(A)))
    assert not is_top(A)
    with pytest.raises(ValueError):
        is_top(Cond(A, A))


def test_is_top_matches_fresh_tautology_exhaustively():
    # every formula of depth <= 2 over 3 atoms; depth 3 is sampled below
    top = Or(Atom("Z"), Not(Atom("Z")))
    formulas = list(all_propositional(["A", "B", "C"], 2))
    assert len(formulas) == count_propositional(["A", "B", "C"], 2) == 3303
    for f in formulas:
        assert is_top(f) == truth_table_equiv(f, top)


@given(propositional(max_leaves=8))
def test_is_top_agrees_with_brute_force(f):
    rows = [dict(zip("ABC", v)) for v in itertools.product((True, False), repeat=3)]
    assert is_top(f) == all(evaluate(f, r) for r in rows)


@given(propositional(max_leaves=5), propositional(max_leaves=5))
def test_iff_desugaring_preserves_truth_tables(a, b):
    assert truth_table_equiv(Iff(a, b), desugar_iff(Iff(a, b)))
    assert truth_table_equiv(Iff(a, b), And(Implies(a, b), Implies(b, a)))
