import pytest
from hypothesis import assume, given
from hypothesis import strategies as st

from condtab.formula import Atom, Implies, Not, Or
from condtab.labels import (
    EMPTY_REGISTRY,
    Const,
    EquivRegistry,
    LabelFactory,
    Pair,
    Var,
    atom_seq,
    body,
    countersegment,
    extends,
    extends_immediately,
    head,
    head_at,
    length,
    parse_label,
    render,
    segment,
    sigma_cond_unify,
    sigma_unify,
)
from strategies import label_pairs, labels

A, B, C = Atom("A"), Atom("B"), Atom("C")
w0, w1, w2, w3 = Const(0), Const(1), Const(2), Const(3)
W1, W3 = Var(1), Var(3)


def test_head_body_length():
    i = Pair(W1, w1)
    assert head(i) == W1 and body(i) == w1
    assert length(w1) == 1 and length(i) == 2
    with pytest.raises(ValueError):
        body(w1)


def test_segments_and_head_at():
    i = Pair(w2, Pair(W1, w1))
    assert segment(i, 2) == Pair(W1, w1)
    assert segment(i, 3) == i
    assert segment(i, 1) == w1
    assert head_at(i, 3) == head(i) == w2
    assert head_at(i, 2) == W1
    with pytest.raises(ValueError):
        segment(i, 4)
    with pytest.raises(ValueError):
        head_at(i, 0)


def test_countersegment_examples():
    # worked by hand from the countersegment definition
    assert countersegment(Pair(w2, Pair(W1, w1)), 1, w0) == Pair(w2, Pair(W1, w0))
    assert countersegment(Pair(W1, w1), 1, w0) == Pair(W1, w0)
    i = Pair(w2, Pair(W1, w1))
    with pytest.raises(ValueError):
        countersegment(i, length(i), w0)
    with pytest.raises(ValueError):
        countersegment(w1, 1, w0)


@given(labels(2, 5), st.data())
def test_countersegment_length(i, data):
    n = data.draw(st.integers(1, length(i) - 1))
    assert length(countersegment(i, n, w0)) == length(i) - n + 1


def test_pair_head_must_be_atomic():
    with pytest.raises(TypeError):
        Pair(Pair(W1, w1), w1)


def test_sigma_unify_links_both_variables():
    s = sigma_unify(Pair(w3, Pair(W1, w1)), Pair(W3, Pair(w2, w1)))
    assert s is not None
    assert s.as_dict() == {3: w3, 1: w2}


def test_sigma_unify_trivial_and_failing():
    s = sigma_unify(w1, w1)
    assert s is not None and len(s) == 0
    assert sigma_unify(Pair(w2, w1), Pair(w3, w1)) is None
    assert sigma_unify(Pair(W1, w1), w1) is None


def test_sigma_unify_consistent_linking():
    # W1 cannot be both w2 and w3
    assert sigma_unify(Pair(W1, Pair(W1, w1)), Pair(w2, Pair(w3, w1))) is None
    assert sigma_unify(Pair(W1, Pair(W1, w1)), Pair(w2, Pair(w2, w1))) is not None


@given(label_pairs())
def test_sigma_unify_is_symmetric(pair):
    i, j = pair
    s, t = sigma_unify(i, j), sigma_unify(j, i)
    assert (s is None) == (t is None)
    if s is not None:
        for sub in (s, t):
            assert _ids(sub.apply(i)) == _ids(sub.apply(j))


def _ids(lab):
    return [(type(a), a.id) for a in atom_seq(lab)]


@given(label_pairs())
def test_substitution_is_idempotent(pair):
    s = sigma_unify(*pair)
    assume(s is not None)
    for lab in pair:
        assert s.apply(s.apply(lab)) == s.apply(lab)
    assert _ids(s.apply(pair[0])) == _ids(s.apply(pair[1]))


@given(label_pairs())
def test_indexes_never_matter_to_plain_unification(pair):
    i, j = pair

    def strip(lab):
        from condtab.labels import from_atoms

        return from_atoms(type(a)(a.id) for a in atom_seq(lab))

    assert (sigma_unify(i, j) is None) == (sigma_unify(strip(i), strip(j)) is None)


def test_sigma_cond_top_clause():
    top_var = Pair(Var(1, Or(A, Not(A))), w1)
    assert sigma_cond_unify(top_var, Pair(Const(2, C), w1)) is not None
    # the tautology has to sit on the variable side
    assert sigma_cond_unify(Pair(Const(2, Or(A, Not(A))), w1), Pair(Var(1, C), w1)) is None
    assert sigma_cond_unify(top_var, Pair(Const(2, C), w1), top_clause=False) is None


def test_sigma_cond_equivalent_indexes():
    i = Pair(Var(1, Or(Not(A), B)), w1)
    j = Pair(Const(2, Implies(A, B)), w1)
    assert sigma_cond_unify(i, j) is not None


def test_sigma_cond_registry():
    i = Pair(Var(3, A), w1)
    j = Pair(Const(2, B), w1)
    assert sigma_cond_unify(i, j, EMPTY_REGISTRY) is None
    reg = EMPTY_REGISTRY.add(A, B, w1)
    assert sigma_cond_unify(i, j, reg) is not None
    assert sigma_cond_unify(j, i, reg) is not None
    # the identity holds around w1 only
    other = EMPTY_REGISTRY.add(A, B, w2)
    assert sigma_cond_unify(i, j, other) is None


def test_registry_is_symmetric_and_append_only():
    reg = EMPTY_REGISTRY.add(A, B, w1)
    assert reg.add(B, A, w1) is reg
    assert len(reg.add(A, C, w1)) == 2
    assert len(reg) == 1


def test_unindexed_positions_need_nothing():
    assert sigma_cond_unify(Pair(W1, w1), Pair(w2, w1)) is not None


REG = EquivRegistry().add(A, B, w1).add(Or(A, B), C, w1)


@given(label_pairs())
def test_sigma_cond_refines_sigma(pair):
    i, j = pair
    if sigma_cond_unify(i, j) is not None:
        assert sigma_unify(i, j) is not None


@given(label_pairs())
def test_registry_only_enlarges_success(pair):
    i, j = pair
    if sigma_cond_unify(i, j, EMPTY_REGISTRY) is not None:
        assert sigma_cond_unify(i, j, REG) is not None


def test_extends_examples():
    assert extends_immediately(Pair(Const(2, A), w1), w1)
    assert extends(Pair(w2, Pair(W1, w1)), w1)
    assert not extends(w1, Pair(w2, w1))
    assert not extends_immediately(Pair(w2, Pair(W1, w1)), w1)
    assert extends_immediately(Pair(w3, Pair(W1, w1)), Pair(w2, w1))


def test_fresh_symbols():
    f = LabelFactory()
    first = f.fresh_constant()
    assert first == Const(1) and render(first) == "w1"
    assert f.fresh_constant().id != first.id
    v = f.fresh_variable(A)
    assert v.index == A and isinstance(v, Var)
    assert f.fresh_variable().id != v.id


def test_render():
    assert render(Pair(Var(1, Or(Not(A), B)), w1)) == "(W1^(~A | B), w1)"
    assert render(Pair(w2, Pair(W1, w1))) == "(w2, (W1, w1))"


@given(labels())
def test_render_parse_round_trip(i):
    assert parse_label(render(i)) == i
