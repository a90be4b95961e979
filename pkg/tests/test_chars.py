import cmath
from fractions import Fraction

import pytest

from padic_shalika.chars import (AddChar, MultChar, all_characters, char_value, characters_of_level, gauss_sum,
                                 orthogonality_sum, psi, trivial_char, unramified_char)
from padic_shalika.padic import padic
from padic_shalika.scalar import CycScalar, complex_embed


def test_quadratic_character_mod_3():
    (chi,) = all_characters(3, 1)
    assert chi(2) == -1
    assert chi(Fraction(2, 9)) == -1


def test_additive_character():
    assert psi(5)(3) == 1
    assert psi(5)(Fraction(1, 5)) == CycScalar.zeta(5, 5)
    a, b = Fraction(2, 25), Fraction(7, 125)
    assert psi(5)(a + b) == psi(5)(a) * psi(5)(b)
    assert AddChar(5, -1)(a) * psi(5)(a) == 1


def test_character_counts():
    assert len(all_characters(5, 1)) == 3
    assert len(all_characters(5, 2)) == 16
    assert len(all_characters(2, 1)) == 0
    assert len(all_characters(2, 2)) == 1
    assert len(all_characters(2, 3)) == 2
    assert len(characters_of_level(5, 2)) == 20
    assert len(characters_of_level(2, 1)) == 1
    assert len(characters_of_level(2, 3)) == 4


@pytest.mark.parametrize("p,m", [(2, 2), (2, 3), (3, 1), (3, 2), (5, 1), (5, 2), (7, 1)])
def test_gauss_sum_absolute_value(p, m):
    for chi in all_characters(p, m):
        tau = gauss_sum(chi)
        assert abs(abs(complex_embed(tau)) ** 2 - p ** m) < 1e-9
        assert gauss_sum(chi.conjugate()) * tau == chi(-1) * p ** m


@pytest.mark.parametrize("p,m", [(3, 1), (3, 2), (5, 1), (5, 2), (2, 3)])
def test_orthogonality(p, m):
    for chi in all_characters(p, m):
        assert orthogonality_sum(chi).is_zero()
        assert (chi * chi.conjugate()).m == 0


def test_unramified_gauss_sum_and_values():
    chi = unramified_char(5, Fraction(1, 3))
    assert gauss_sum(chi) == 1
    assert chi(25) == Fraction(1, 9)


def test_multiplicativity():
    for chi in all_characters(5, 2):
        for a in (2, 3, 7):
            for b in (4, 6, 13):
                assert chi(a * b) == chi(a) * chi(b)


def test_conductor_is_minimal():
    with pytest.raises(ValueError):
        MultChar(5, 2, 1, 0)  # trivial on 1 + 5Z_5, so the conductor is 5


def test_product_drops_conductor():
    chi = all_characters(5, 2)[0]
    assert (chi * chi.conjugate()).key() == trivial_char(5).key()


def test_insufficient_precision():
    chi = all_characters(5, 2)[0]
    with pytest.raises(ValueError):
        char_value(chi, padic(5, 2, 1))


def test_json_round_trip():
    for chi in all_characters(5, 2)[:3]:
        assert MultChar.from_json(chi.to_json()) == chi
