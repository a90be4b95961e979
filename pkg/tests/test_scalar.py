import cmath
import math
from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from padic_shalika.scalar import (INF, CycScalar, complex_embed, cyclotomic_coeffs, padic_ord,
                                  sqrt_p_cyclotomic)


def zeta(p, N, k=1):
    return CycScalar.zeta(p, N, k)


def test_u_squared_is_p():
    for p in (2, 3, 5, 7):
        u = CycScalar.sqrt_p(p)
        assert u * u == p


def test_root_of_unity_product():
    assert zeta(5, 4) * zeta(5, 4, 3) == 1
    assert zeta(5, 20) * zeta(5, 20, 19) == 1


def test_norm_of_one_minus_zeta3():
    z = zeta(3, 3)
    assert (1 - z) * (1 - z * z) == 3


def test_complex_embedding():
    assert complex_embed(CycScalar.rational(3, 1)) == 1
    assert abs(complex_embed(zeta(5, 4)) - 1j) < 1e-15
    z = zeta(3, 3)
    assert abs(complex_embed(z - z * z) - 1j * math.sqrt(3)) < 1e-12


def test_padic_ord_examples():
    assert padic_ord(CycScalar.rational(5, 5)) == 1
    assert padic_ord(CycScalar.sqrt_p(5)) == Fraction(1, 2)
    for p in (3, 5, 7):
        assert padic_ord(zeta(p, p) - 1) == Fraction(1, p - 1)
    assert padic_ord(CycScalar.rational(5, Fraction(3, 25))) == -2
    assert padic_ord(CycScalar.rational(5, 0)) == INF


def test_padic_ord_on_p_power_roots():
    # 1 - zeta_{p^2} is a uniformizer of Q_p(zeta_{p^2})
    assert padic_ord(1 - zeta(3, 9)) == Fraction(1, 6)


def test_sqrt_p_inside_cyclotomic_field():
    for p in (5, 13):
        s = sqrt_p_cyclotomic(p)
        assert s * s == p
    s = sqrt_p_cyclotomic(2)
    assert s * s == 2


def test_zero_divisor_and_inverse():
    with pytest.raises(ZeroDivisionError):
        CycScalar.rational(3, 0).inverse()
    x = 2 + zeta(3, 6) + CycScalar.sqrt_p(3)
    assert x * x.inverse() == 1


def test_cyclotomic_coefficients():
    assert cyclotomic_coeffs(4) == (1, 0, 1)
    assert cyclotomic_coeffs(6) == (1, -1, 1)


def scalars(p=3, N=6):
    coeff = st.integers(-6, 6)
    return st.builds(lambda a, b, d: CycScalar(p, N, a, b, d),
                     st.lists(coeff, min_size=1, max_size=N), st.lists(coeff, min_size=1, max_size=2),
                     st.integers(1, 5))


@given(scalars(), scalars(), scalars())
def test_ring_axioms(x, y, z):
    assert (x + y) * z == x * z + y * z
    assert (x * y) * z == x * (y * z)
    assert x * y == y * x
    assert x - x == 0


@given(scalars())
def test_inverse_property(x):
    if x.is_zero():
        return
    assert x * x.inverse() == 1


@given(scalars(), scalars())
def test_complex_embedding_is_a_ring_map(x, y):
    assert cmath.isclose(complex_embed(x * y), complex_embed(x) * complex_embed(y), rel_tol=1e-9, abs_tol=1e-9)
    assert cmath.isclose(complex_embed(x + y), complex_embed(x) + complex_embed(y), rel_tol=1e-9, abs_tol=1e-9)


@given(scalars())
def test_serialization_round_trip(x):
    assert CycScalar.deserialize(x.serialize()) == x
    assert CycScalar.from_json(x.to_json()) == x


@given(scalars(5, 20), st.sampled_from([1, 3, 7, 9, 11, 13, 17, 19]))
def test_galois_action_is_multiplicative(x, k):
    y = x + 1
    assert (x * y).galois(k) == x.galois(k) * y.galois(k)


@given(scalars(5, 20), scalars(5, 20))
def test_padic_ord_of_product(x, y):
    if x.is_zero() or y.is_zero():
        return
    assert padic_ord(x * y) == padic_ord(x) + padic_ord(y)


def test_lift_is_exact():
    x = zeta(5, 4) + 3
    assert x.lift(20) == x
    assert x.lift(20).N == 20
