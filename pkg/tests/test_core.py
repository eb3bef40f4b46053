from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from condprob import (
    Binomial,
    CPTable,
    DegenerateBinomialError,
    InputError,
    Monomial,
    Polynomial,
    TermOrder,
    VarId,
    canonicalize_binomial,
    make_event_family,
    variables,
)
from condprob.core import ONE, canonical_key, format_event, random_weight_order
from condprob.io import decode_exact, encode_value


def v(i, *event):
    return VarId(i, tuple(event))


class TestEventFamily:
    def test_ground_flag(self):
        fam = make_event_family(3, [[1, 2], [2, 3], [1, 2, 3]])
        assert len(fam) == 3
        assert fam.contains_ground
        assert fam.ground == (1, 2, 3)

    def test_single_event(self):
        fam = make_event_family(3, [[1, 2]])
        assert len(fam) == 1 and not fam.contains_ground

    @pytest.mark.parametrize("subsets", [[[1]], [[1, 4]], [[0, 1]], [[1, 1, 2]], [[]]])
    def test_rejects_bad_subsets(self, subsets):
        with pytest.raises(InputError):
            make_event_family(3, subsets)

    def test_rejects_bad_m(self):
        with pytest.raises(InputError):
            make_event_family(0, [])

    def test_canonical_order_and_dedup(self):
        fam = make_event_family(3, [[1, 2, 3], [3, 2], [2, 1], [1, 2]])
        assert fam.events == ((1, 2), (2, 3), (1, 2, 3))

    def test_variable_counts(self, two_pairs_and_triple, all_subsets_of_3):
        assert len(variables(two_pairs_and_triple)) == 7
        assert len(variables(all_subsets_of_3)) == 9
        assert variables(make_event_family(2, [[1, 2]])) == [v(1, 1, 2), v(2, 1, 2)]

    def test_nested_pairs(self, two_pairs_and_triple):
        assert two_pairs_and_triple.nested_pairs() == [((1, 2), (1, 2, 3)), ((2, 3), (1, 2, 3))]

    def test_support(self):
        assert make_event_family(5, [[1, 3], [3, 5]]).support == (1, 3, 5)

    def test_format_event(self):
        assert format_event((1, 2, 3)) == "123"
        assert format_event((9, 10)) == "9,10"

    def test_var_names(self):
        assert v(2, 1, 2, 3).name() == "p_{2|123}"
        assert v(2, 1, 2, 3).name(3) == "p_2"
        assert v(2, 1, 2).name(3) == "p_{2|12}"

    def test_var_requires_membership(self):
        with pytest.raises(InputError):
            VarId(3, (1, 2))


class TestMonomialAndBinomial:
    def test_arith(self):
        a = Monomial.of(v(1, 1, 2), v(2, 1, 2, 3))
        b = Monomial.of(v(1, 1, 2), v(1, 1, 2))
        assert (a * b).degree == 4
        assert a.gcd(b) == Monomial.of(v(1, 1, 2))
        assert a.lcm(b) == Monomial({v(1, 1, 2): 2, v(2, 1, 2, 3): 1})
        assert Monomial.of(v(1, 1, 2)).divides(a)
        assert a / Monomial.of(v(1, 1, 2)) == Monomial.of(v(2, 1, 2, 3))
        assert not b.is_squarefree() and a.is_squarefree()
        assert ONE.is_one() and not a.is_one() and ONE.degree == 0

    def test_degenerate_binomial(self):
        m = Monomial.of(v(1, 1, 2))
        with pytest.raises(DegenerateBinomialError):
            Binomial(m, m)

    def test_canonicalize_removes_gcd_and_orients(self):
        p3, p1 = v(3, 1, 2, 3), v(1, 1, 2, 3)
        # singletons here are relative to the ground event 123
        b = Binomial(Monomial.of(p3, p1), Monomial.of(p3, v(1, 1, 2)))
        c = canonicalize_binomial(b)
        assert c.plus.gcd(c.minus).is_one()
        assert {c.plus, c.minus} == {Monomial.of(p1), Monomial.of(v(1, 1, 2))}

    def test_canonicalize_matches_displayed_sign(self):
        # ground event 1234 with the chain 12 < 123 < 1234
        g = (1, 2, 3, 4)
        b = Binomial(Monomial.of(VarId(3, (1, 2, 3)), VarId(1, g)), Monomial.of(VarId(3, g), VarId(1, (1, 2, 3))))
        c = canonicalize_binomial(b)
        assert c.plus == Monomial.of(VarId(3, g), VarId(1, (1, 2, 3)))
        assert c.minus == Monomial.of(VarId(3, (1, 2, 3)), VarId(1, g))

    def test_canonicalize_idempotent(self):
        b = Binomial(Monomial.of(v(1, 1, 2), v(2, 1, 2, 3)), Monomial.of(v(2, 1, 2), v(1, 1, 2, 3)))
        c = canonicalize_binomial(b)
        assert canonicalize_binomial(c) == c
        assert canonicalize_binomial(b.negated()) == c


class TestPolynomial:
    def test_linear_form_and_product(self):
        x, y = v(1, 1, 2), v(2, 1, 2)
        lf = Polynomial.linear_form([x, y])
        sq = lf * lf
        assert sq.coefficient(Monomial.of(x, y)) == 2
        assert (sq - sq).is_zero
        assert lf.evaluate({x: Fraction(1, 3), y: Fraction(2, 3)}) == 1

    def test_as_binomial(self):
        b = Binomial(Monomial.of(v(1, 1, 2)), Monomial.of(v(2, 1, 2)))
        assert b.to_polynomial().as_binomial() == b
        assert Polynomial.constant(3).as_binomial() is None


class TestCPTable:
    def test_exact_conversion(self):
        t = CPTable({v(1, 1, 2): "1/3", v(2, 1, 2): Fraction(2, 3)})
        assert t[v(1, 1, 2)] == Fraction(1, 3)
        assert t.is_positive()

    def test_missing(self, two_pairs_and_triple):
        t = CPTable.from_events({(1, 2): ["1/2", "1/2"]})
        assert len(t.missing(two_pairs_and_triple)) == 5
        with pytest.raises(InputError):
            t.require_complete(two_pairs_and_triple)

    def test_float_mode(self):
        t = CPTable.from_events({(1, 2): [0.25, 0.75]}, mode="float")
        assert t.mode == "float" and t.get(2, (1, 2)) == 0.75

    def test_bad_mode(self):
        with pytest.raises(InputError):
            CPTable({}, mode="decimal")


# property tests for term orders

VARS = [v(1, 1, 2), v(2, 1, 2), v(2, 2, 3), v(3, 2, 3), v(1, 1, 2, 3), v(2, 1, 2, 3), v(3, 1, 2, 3)]

monomials = st.lists(st.integers(0, 3), min_size=len(VARS), max_size=len(VARS)).map(
    lambda e: Monomial({x: k for x, k in zip(VARS, e) if k})
)


@st.composite
def term_orders(draw):
    perm = draw(st.permutations(VARS))
    kind = draw(st.sampled_from(["lex", "grevlex", "weighted"]))
    if kind == "weighted":
        weights = draw(st.lists(st.integers(0, 20), min_size=len(VARS), max_size=len(VARS)))
        return TermOrder.weighted(dict(zip(VARS, weights)), perm)
    return TermOrder(kind, tuple(perm))


@settings(max_examples=300, deadline=None)
@given(term_orders(), monomials, monomials, monomials)
def test_term_order_axioms(order, a, b, c):
    assert (order.compare(a, b) > 0) + (order.compare(b, a) > 0) + (a == b) == 1
    assert order.compare(ONE, a) <= 0
    if order.greater(a, b):
        assert order.greater(c * a, c * b)


@settings(max_examples=200, deadline=None)
@given(monomials, monomials)
def test_canonical_order_agrees_with_key(a, b):
    order = TermOrder.canonical(VARS)
    assert order.compare(a, b) == (canonical_key(a) > canonical_key(b)) - (canonical_key(a) < canonical_key(b))


@settings(max_examples=100, deadline=None)
@given(monomials, monomials)
def test_canonicalize_properties(a, b):
    if a == b:
        return
    c = canonicalize_binomial(Binomial(a, b))
    assert c.plus.gcd(c.minus).is_one()
    assert canonicalize_binomial(c) == c
    assert canonicalize_binomial(Binomial(b, a)) == c


fractions = st.fractions(max_denominator=10**12)


@settings(max_examples=300)
@given(fractions, fractions)
def test_rational_string_round_trip(x, y):
    s = x + y
    assert decode_exact(encode_value(s)) == s
    assert decode_exact(encode_value(x * y)) == x * y


def test_random_weight_order_range():
    import random

    order = random_weight_order(VARS, random.Random(3))
    assert all(1 <= w <= 10**6 for w in order.weights)
    assert sorted(order.priority) == sorted(VARS)
