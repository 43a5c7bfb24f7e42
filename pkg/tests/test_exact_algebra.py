import random
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from superint.exact_algebra import (
    ArityMismatch,
    IncrementalBasis,
    LaurentPoly,
    PoleAtPoint,
    RatMatrix,
    add,
    as_rational,
    evaluate,
    mul,
    nullspace,
    partial,
    rank,
    reduced_echelon,
    variables,
)

from oracles import dense_rank

coeffs = st.fractions(min_value=-5, max_value=5, max_denominator=6)


def laurent(n):
    exps = st.tuples(*[st.integers(-2, 3)] * n)
    return st.dictionaries(exps, coeffs, max_size=4).map(lambda t: LaurentPoly(n, t))


nonzero = st.fractions(min_value=-9, max_value=9, max_denominator=9).filter(bool)


# --- worked examples -------------------------------------------------------

def test_add_and_mul_examples():
    x1, x2 = variables(2)
    assert str(add(x1 ** 2 + x2, x2 * 2 - x1 ** 2)) == "3*x2"
    assert mul(x1 ** -1, x1 ** 3) == x1 ** 2
    assert str((x1 + x2) * (x1 - x2)) == "x1^2 - x2^2"


def test_partial_examples():
    x1, x2, x3 = variables(3)
    assert partial(x1 ** -2 * x3, 0) == x1 ** -3 * x3 * -2
    assert partial(x1 ** 3 / 6, 0) == x1 ** 2 / 2
    assert partial(x2, 0).is_zero()


def test_evaluate_examples_and_pole():
    x1, x2 = variables(2)
    p = x1 ** -1 + x2 ** 2
    assert evaluate(p, [Fraction(2), Fraction(3)]) == Fraction(19, 2)
    with pytest.raises(PoleAtPoint):
        evaluate(p, [0, 1])
    assert evaluate(x2 ** 2, [0, 2]) == 4  # a zero coordinate without a negative exponent is fine


def test_arity_mismatch():
    with pytest.raises(ArityMismatch):
        add(variables(2)[0], variables(3)[0])
    with pytest.raises(ArityMismatch):
        evaluate(variables(2)[0], [1])


def test_float_coefficients_rejected():
    with pytest.raises(TypeError):
        as_rational(0.5)
    assert as_rational("3/4") == Fraction(3, 4)


def test_canonical_order_and_json():
    x1, x2 = variables(2)
    p = x2 + x1 ** 2 + x1 * x2 * 2 + 1
    assert str(p) == "x1^2 + 2*x1*x2 + x2 + 1"
    data = p.to_json()
    assert data[0] == {"c": "1/1", "e": [2, 0]}
    assert LaurentPoly.from_json(2, data) == p
    q = x1 ** -2 * Fraction(-1, 2)
    assert q.to_json() == [{"c": "-1/2", "e": [-2, 0]}]


def test_negative_power_of_non_monomial():
    x1, x2 = variables(2)
    with pytest.raises(ValueError):
        (x1 + x2) ** -1


def test_nullspace_example():
    m = RatMatrix.from_dense([[1, 2, 3], [2, 4, 6]])
    ns = nullspace(m)
    assert len(ns) == 2
    for v in ns:
        assert all(x == 0 for x in m.apply(v))
    assert rank(m) == 1


def test_rank_of_identity_and_zero():
    assert rank(RatMatrix.identity(5)) == 5
    assert rank(RatMatrix(3, 4)) == 0
    assert len(nullspace(RatMatrix(3, 4))) == 4


def test_incremental_basis():
    b = IncrementalBasis()
    assert b.add({0: 1, 1: 1})
    assert not b.add({0: 2, 1: 2})
    assert b.add({1: 1})
    assert b.contains({0: 5})
    assert b.rank == 2


# --- properties ----------------------------------------------------------

@settings(max_examples=100, deadline=None)
@given(laurent(2), laurent(2), laurent(2))
def test_ring_axioms(a, b, c):
    assert a + b == b + a
    assert a * b == b * a
    assert (a + b) + c == a + (b + c)
    assert (a * b) * c == a * (b * c)
    assert a * (b + c) == a * b + a * c
    assert a - a == LaurentPoly.zero(2)
    assert a * LaurentPoly.constant(2, 1) == a


@settings(max_examples=100, deadline=None)
@given(laurent(3))
def test_partials_commute(a):
    assert a.partial(0).partial(2) == a.partial(2).partial(0)
    assert a.partial(1).partial(0) == a.partial(0).partial(1)


@settings(max_examples=100, deadline=None)
@given(laurent(2), laurent(2))
def test_leibniz(a, b):
    assert (a * b).partial(1) == a.partial(1) * b + a * b.partial(1)


@settings(max_examples=100, deadline=None)
@given(laurent(2), laurent(2), st.tuples(nonzero, nonzero))
def test_evaluate_is_a_homomorphism(a, b, pt):
    assert (a + b).evaluate(pt) == a.evaluate(pt) + b.evaluate(pt)
    assert (a * b).evaluate(pt) == a.evaluate(pt) * b.evaluate(pt)


@settings(max_examples=100, deadline=None)
@given(laurent(3))
def test_json_roundtrip(a):
    assert LaurentPoly.from_json(3, a.to_json()) == a


@settings(max_examples=100, deadline=None)
@given(st.integers(1, 6), st.integers(1, 7), st.integers(0, 10_000))
def test_rank_nullity_and_dense_oracle(r, c, seed):
    rng = random.Random(seed)
    # low-rank-ish random matrices so the kernel is usually nontrivial
    k = rng.randint(0, min(r, c))
    A = [[Fraction(rng.randint(-3, 3)) for _ in range(c)] for _ in range(k)]
    rows = []
    for _ in range(r):
        w = [rng.randint(-2, 2) for _ in range(k)]
        rows.append([sum((w[t] * A[t][j] for t in range(k)), Fraction(0)) + (rng.randint(-1, 1) if rng.random() < 0.2 else 0)
                     for j in range(c)])
    m = RatMatrix.from_dense(rows)
    ns = nullspace(m)
    assert rank(m) + len(ns) == c
    assert rank(m) == dense_rank(rows, c)
    for v in ns:
        assert all(x == 0 for x in m.apply(v))


def test_reduced_echelon_pivots_are_unit():
    piv = reduced_echelon([{0: 2, 1: 4}, {1: 3, 2: 1}])
    for c, row in piv.items():
        assert row[c] == 1
        assert all(c not in other for c2, other in piv.items() if c2 != c)
