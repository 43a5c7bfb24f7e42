import random
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from superint import catalog as cat
from superint.exact_algebra import LaurentPoly, PoleAtPoint, variables
from superint.flat_geometry import FlatMetric
from superint.killing import KillingTensor, integrate_companion
from superint.reference_data import glued8d_potential
from superint.verify import (
    PhasePoly,
    brackets_vanish,
    build_hamiltonian,
    build_integral,
    certify,
    independence_rank,
    poisson_bracket,
    random_point,
    system_integrals,
)

from conftest import random_laurent


def P(n, i):
    return PhasePoly.momentum(n, i)


def X(n, i):
    return PhasePoly.from_position(LaurentPoly.variable(n, i))


def _random_phase(rng, n):
    out = PhasePoly(n)
    for _ in range(rng.randint(1, 3)):
        m = tuple(rng.randint(0, 2) for _ in range(n))
        out = out + PhasePoly(n, {m: random_laurent(rng, n, nterms=2, lo=-1, hi=2)})
    return out


def test_canonical_relations():
    n = 2
    assert poisson_bracket(X(n, 0), P(n, 0)) == PhasePoly.from_position(LaurentPoly.constant(n, 1))
    assert poisson_bracket(X(n, 0), P(n, 1)).is_zero()
    p1sq = P(n, 0) * P(n, 0)
    assert poisson_bracket(X(n, 0), p1sq) == P(n, 0).scale(2)
    assert poisson_bracket(p1sq, X(n, 0)) == P(n, 0).scale(-2)


def test_hamiltonian_examples():
    e = build_hamiltonian(FlatMetric.euclidean(2), LaurentPoly.zero(2))
    assert e == P(2, 0) * P(2, 0) + P(2, 1) * P(2, 1)
    h = build_hamiltonian(cat.SPLIT_4D, LaurentPoly.zero(4))
    assert h == (P(4, 0) * P(4, 2) + P(4, 1) * P(4, 3)).scale(2)
    assert poisson_bracket(h, h).is_zero()


def test_8d_hamiltonian_matches_display():
    hf = cat.catalog("glued8d")
    c = [Fraction(k + 1) for k in range(10)]
    V = glued8d_potential(c)
    H = build_hamiltonian(hf.metric, V)
    kinetic = (P(8, 0) * P(8, 2) + P(8, 1) * P(8, 3)).scale(2)
    for k in range(4, 8):
        kinetic = kinetic + P(8, k) * P(8, k)
    assert H == kinetic + PhasePoly.from_position(V)


def test_build_integral_with_metric_is_hamiltonian():
    g = FlatMetric(((2, 1), (1, 1)))
    x1, x2 = variables(2)
    K = KillingTensor(2, {(0, 0): LaurentPoly.constant(2, 2), (0, 1): LaurentPoly.constant(2, 1), (1, 1): LaurentPoly.constant(2, 1)})
    V = x1 ** 2 + x2
    assert build_integral(K, V, g) == build_hamiltonian(g, V)


def test_independence_rank_examples():
    p1sq = P(2, 0) * P(2, 0)
    p2sq = P(2, 1) * P(2, 1)
    pt = [Fraction(1), Fraction(2), Fraction(3), Fraction(-1, 2)]
    assert independence_rank([p1sq, p2sq], pt) == 2
    assert independence_rank([p1sq, p1sq.scale(2)], pt) == 1
    pole = PhasePoly.from_position(LaurentPoly.variable(2, 0) ** -1)
    with pytest.raises(PoleAtPoint):
        independence_rank([pole], [0, 1, 1, 1])


def test_random_points_avoid_zero():
    rng = random.Random(5)
    for _ in range(50):
        pt = random_point(rng, 3)
        assert len(pt) == 6 and all(v != 0 for v in pt)
        assert all(abs(v.numerator) <= 9 * v.denominator and 1 <= v.denominator <= 9 for v in pt)


@settings(max_examples=100)
@given(st.integers(0, 10 ** 6))
def test_bracket_antisymmetric_and_bilinear(seed):
    rng = random.Random(seed)
    n = rng.randint(1, 3)
    F, G, K = (_random_phase(rng, n) for _ in range(3))
    assert poisson_bracket(F, G) == -poisson_bracket(G, F)
    assert poisson_bracket(F + K, G) == poisson_bracket(F, G) + poisson_bracket(K, G)


@settings(max_examples=100)
@given(st.integers(0, 10 ** 6))
def test_jacobi_identity(seed):
    rng = random.Random(seed)
    n = rng.randint(1, 2)
    F, G, K = (_random_phase(rng, n) for _ in range(3))
    total = (poisson_bracket(F, poisson_bracket(G, K)) + poisson_bracket(G, poisson_bracket(K, F))
             + poisson_bracket(K, poisson_bracket(F, G)))
    assert total.is_zero()


@pytest.mark.parametrize("name", ["nilpotent4d", "sw4d", "sw3d", "nilpotent2d"])
def test_every_integral_commutes(systems, name):
    _, _, comp = systems(name)
    assert brackets_vanish(comp) == []


def test_first_integral_of_nilpotent4d(systems):
    # dx1^2 is compatible, so F = p1^2 + W commutes with H for every basis potential
    _, fam, comp = systems("nilpotent4d")
    one, zero = LaurentPoly.constant(4, 1), LaurentPoly.zero(4)
    K = KillingTensor.sym_product([one, zero, zero, zero], [one, zero, zero, zero])
    assert comp.contains(K)
    g = comp.hf.metric
    for V in fam.basis:
        F = build_integral(K, integrate_companion(K, V, g), g)
        assert poisson_bracket(F, build_hamiltonian(g, V)).is_zero()


@pytest.mark.parametrize("name, seed", [("sw4d", 1), ("nilpotent4d", 0), ("sw3d", 2)])
def test_certificates(systems, name, seed):
    hf, _, comp = systems(name)
    cert = certify(comp, seed=seed, system=name)
    assert cert.valid and cert.rank == 2 * hf.dim - 1
    assert cert.upper_bound_ok and cert.max_rank_all == 2 * hf.dim - 1
    assert len(cert.selected) == 2 * hf.dim - 2
    assert cert.to_json()["valid"] is True


def test_rank_is_monotone(systems):
    _, fam, comp = systems("sw4d")
    rng = random.Random(9)
    H, Fs = system_integrals(comp, [Fraction(rng.randint(1, 5)) for _ in fam.basis])
    pt = random_point(rng, 4)
    ranks = [independence_rank([H] + Fs[:k], pt) for k in range(len(Fs) + 1)]
    assert ranks == sorted(ranks) and ranks[-1] == 7


def test_certificate_is_reproducible(systems):
    _, _, comp = systems("nilpotent4d")
    a = certify(comp, seed=4).to_json()
    b = certify(comp, seed=4).to_json()
    assert a == b
