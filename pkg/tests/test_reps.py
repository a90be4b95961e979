import itertools
import math
import random
import warnings
from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from padic_shalika.padic import PAdicMatrix
from padic_shalika.reps import _random_congruence, _random_matrix
from padic_shalika.reps import (PSData, Stabilization, TestFunction, WeightData, critical_points, delta_eval, e_al,
                                enumerate_stabilizations, gl2_lattice_conditions, gl2_weight, integral_check,
                                open_cell_element, purity_check, sample_delta_identities, satake,
                                scaling_integral, shalika_compatible, spherical_eval, stabilization_from_alphas,
                                standard_stabilization, sym_cube_from_hecke, sym_cube_lift, sym_cube_weight,
                                weakly_ordinary)
from padic_shalika.scalar import CycScalar, padic_ord


def test_satake_parameters():
    p = 5
    beta = satake(PSData(p, (1, 1)))
    u = CycScalar.sqrt_p(p)
    assert beta == [u, u / p]
    ps = PSData(p, (2, 3, Fraction(1, 3), Fraction(1, 2)))
    beta = satake(ps)
    for i in range(3):
        assert beta[i] / beta[i + 1] == ps.alphas[i] / ps.alphas[i + 1] * p


def test_shalika_compatibility():
    assert shalika_compatible(PSData(3, (Fraction(2, 7), Fraction(7, 2))), 1)
    assert shalika_compatible(PSData(3, (2, 3, Fraction(1, 3), Fraction(1, 2))), 1)
    assert not shalika_compatible(PSData(3, (2, 3, 5, 7)), 1)


@pytest.mark.parametrize("n", [1, 2, 3])
def test_stabilization_inventory(n):
    alphas = tuple(Fraction(k + 2) for k in range(2 * n))
    stabs = enumerate_stabilizations(PSData(7, alphas))
    assert len(stabs) == math.comb(2 * n, n)
    expected = sorted(math.prod(c) for c in itertools.combinations(alphas, n))
    assert sorted(s.alpha_theta.to_fraction() for s in stabs) == expected


def test_integrality():
    def stab(a):
        return stabilization_from_alphas(5, (Fraction(1) / a, a))
    assert integral_check(stab(Fraction(1)))
    assert not integral_check(stab(Fraction(5)))
    assert integral_check(stab(Fraction(1, 5)))


def test_spherical_values():
    p = 3
    half = PSData(p, (Fraction(2), Fraction(5)))
    k = PAdicMatrix(p, [[1, 2], [1, 1]], 20)
    assert spherical_eval(half, k) == 1
    assert spherical_eval(half, PAdicMatrix.diag(p, [Fraction(1, 9), 3], 20)) == Fraction(5, 4)
    assert spherical_eval(half, PAdicMatrix(p, [[0, 1], [p, 0]], 20)) == 5


def test_delta_basic_values():
    p, n, K = 3, 2, 30
    stab = standard_stabilization(PSData(p, (2, 3, Fraction(1, 3), Fraction(1, 2))))
    one = PAdicMatrix.identity(p, n, K)
    zero = PAdicMatrix(p, [[0, 0], [0, 0]], K)
    u = PAdicMatrix(p, [[1, 3], [0, 1]], K)
    g = open_cell_element(one, zero, one, u)
    assert delta_eval(TestFunction.indicator(one, 1), stab, g) == 1
    degenerate = PAdicMatrix.blocks(one, one, zero, one)
    assert delta_eval(TestFunction.indicator(one, 1), stab, degenerate) == 0


@pytest.mark.parametrize("n", [1, 2])
def test_delta_is_representative_independent(n):
    # moving u inside its coset A K^(m) leaves delta(1_{A K^(m)}) unchanged
    rng = random.Random(n)
    p, K = 3, 30
    alphas = (Fraction(1, 2), 2) if n == 1 else (2, 3, Fraction(1, 3), Fraction(1, 2))
    stab = standard_stabilization(PSData(p, alphas))
    nonzero = 0
    for _ in range(30):
        g1, x, g2, A = (_random_matrix(rng, p, n, K) for _ in range(4))
        m = rng.randint(1, 2)
        u = A * _random_congruence(rng, p, n, m, K)
        f = TestFunction.indicator(A, m)
        k = _random_congruence(rng, p, n, m, K)
        a = delta_eval(f, stab, open_cell_element(g1, x, g2, u))
        assert a == delta_eval(f, stab, open_cell_element(g1, x, g2, u * k))
        nonzero += not a.is_zero()
    assert nonzero > 0


@pytest.mark.parametrize("identity", ["equi", "addequi", "scaling"])
@pytest.mark.parametrize("p,alphas", [(3, (2, 3, Fraction(1, 3), Fraction(1, 2))), (5, (Fraction(1, 2), 2))])
def test_delta_identities(identity, p, alphas):
    stab = standard_stabilization(PSData(p, alphas))
    passed, nonzero, count = sample_delta_identities(stab, identity, 25, seed=11)
    assert passed == count
    assert nonzero >= count // 4


def test_weights():
    assert e_al(gl2_weight(4)) == 0
    assert e_al(sym_cube_weight(5)) == -3
    assert e_al(WeightData(1, (0, 0))) == 0
    assert list(critical_points(WeightData(1, (0, 0)))) == [0]
    assert list(critical_points(gl2_weight(3))) == [0, 1, 2, 3]
    k = 6
    assert list(critical_points(sym_cube_weight(k))) == list(range(k - 2, 2 * (k - 2) + 1))
    with pytest.raises(ValueError):
        WeightData(1, (0, 1))


def test_purity_examples():
    assert purity_check(WeightData(1, (0, -3)), -3)
    assert not any(purity_check(WeightData(2, (0, -1, -1, -3)), w) for w in range(-6, 1))
    assert purity_check(sym_cube_weight(5), -9)


def test_weak_ordinarity_examples():
    w = gl2_weight(2)
    ordinary = stabilization_from_alphas(5, (25, 1))
    assert weakly_ordinary(ordinary, w)
    assert not weakly_ordinary(stabilization_from_alphas(5, (Fraction(1, 5), 5)), WeightData(1, (0, 0)))


def test_gl2_lattice_conditions():
    assert gl2_lattice_conditions(2, Fraction(5 ** 3, 2), 3, 5)
    assert not gl2_lattice_conditions(Fraction(1, 5), 5 ** 4, 3, 5)


def test_sym_cube_lift():
    ps, w = sym_cube_lift(1, 1, 2, 7)
    assert all(a == 1 for a in ps.alphas)
    ps, w = sym_cube_lift(Fraction(3), Fraction(5 ** 2, 3), 4, 5)
    eta = (Fraction(3) * Fraction(25, 3)) ** 3
    assert shalika_compatible(ps, eta)
    with warnings.catch_warnings(record=True) as caught:
        warnings.simplefilter("always")
        sym_cube_lift(Fraction(3), Fraction(5 ** 3, 3), 4, 5)
    assert caught


def test_sym_cube_from_hecke_flags_one_stabilization():
    p, k = 5, 4
    ps, w = sym_cube_from_hecke(1 + p ** (k - 1), k, p)
    flagged = [s for s in enumerate_stabilizations(ps) if weakly_ordinary(s, w)]
    assert len(flagged) == 1
    assert flagged[0].second == (2, 3)


def test_gl2_scaling_factors():
    assert scaling_integral(stabilization_from_alphas(5, (1, 1)), 3)
    assert not scaling_integral(stabilization_from_alphas(5, (Fraction(1, 5), 5)), 3)


@given(st.lists(st.integers(-6, 0), min_size=4, max_size=4))
def test_critical_interval_nonempty_for_pure_weights(raw):
    mu = sorted(raw, reverse=True)
    w = WeightData(2, tuple(mu))
    if purity_check(w):
        assert len(critical_points(w)) >= 1
