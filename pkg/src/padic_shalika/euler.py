"""Closed-form local factors: L-factors, modified Euler factors and the
interpolation right-hand side."""
from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Iterable, Sequence

from .chars import AddChar, MultChar, gauss_sum, trivial_char
from .reps import Stabilization, regularity_check, satake, shalika_compatible
from .scalar import CycScalar, as_scalar

# The integrand of the local zeta integral pairs against psi^-1, so every Gauss
# sum that appears in a closed form is taken with respect to psi^-1.
PSI_INV_SIGN = -1


def p_power(p: int, e) -> CycScalar:
    """p^e for e in (1/2)Z, using u = sqrt(p) for the half-integral part."""
    e = Fraction(e)
    if e.denominator == 1:
        return CycScalar.rational(p, Fraction(p) ** int(e))
    if e.denominator != 2:
        raise ValueError(f"exponent {e} is not a half-integer")
    return CycScalar.rational(p, Fraction(p) ** int(e - Fraction(1, 2))) * CycScalar.sqrt_p(p)


def tau(chi: MultChar) -> CycScalar:
    return gauss_sum(chi, AddChar(chi.p, PSI_INV_SIGN))


class NonRegularParameter(ArithmeticError):
    pass


class LFactorPole(ArithmeticError):
    pass


@dataclass(frozen=True, eq=False)
class LaurentQS:
    """Finite Laurent polynomial in t = p^-s; coefficients are CycScalars."""

    p: int
    coeffs: tuple = ()  # ((exponent, CycScalar), ...), exponents integral

    @classmethod
    def constant(cls, p: int, c) -> "LaurentQS":
        return cls(p, ((0, as_scalar(p, c)),))

    @classmethod
    def linear(cls, p: int, a, b) -> "LaurentQS":
        """a + b*t."""
        return cls(p, ((0, as_scalar(p, a)), (1, as_scalar(p, b))))._normalize()

    def _normalize(self) -> "LaurentQS":
        acc: dict = {}
        for e, c in self.coeffs:
            acc[e] = acc[e] + c if e in acc else c
        return LaurentQS(self.p, tuple(sorted((e, c) for e, c in acc.items() if not c.is_zero())))

    def __mul__(self, other: "LaurentQS") -> "LaurentQS":
        out = [(e1 + e2, c1 * c2) for e1, c1 in self.coeffs for e2, c2 in other.coeffs]
        return LaurentQS(self.p, tuple(out))._normalize()

    def __add__(self, other: "LaurentQS") -> "LaurentQS":
        return LaurentQS(self.p, self.coeffs + other.coeffs)._normalize()

    def __call__(self, s) -> CycScalar:
        total = CycScalar.rational(self.p, 0)
        for e, c in self.coeffs:
            total = total + c * p_power(self.p, -Fraction(e) * Fraction(s))
        return total

    def degree_range(self) -> tuple[int, int]:
        es = [e for e, _ in self.coeffs]
        return (min(es), max(es)) if es else (0, 0)

    def to_json(self) -> list:
        return [[e, c.to_json()] for e, c in self.coeffs]


def _chi_at_p(chi: MultChar | None, p: int) -> CycScalar:
    if chi is None:
        return CycScalar.rational(p, 1)
    if not chi.is_unramified():
        raise ValueError("character must be unramified here")
    return chi.at_p


def local_L_inverse(betas: Sequence[CycScalar], chi_p: CycScalar) -> LaurentQS:
    """prod (1 - beta_i chi(p) t) as a polynomial in t = p^-s."""
    p = chi_p.p
    poly = LaurentQS.constant(p, 1)
    for b in betas:
        poly = poly * LaurentQS.linear(p, 1, -(b * chi_p))
    return poly


def local_L(ps, chi: MultChar | None, s) -> CycScalar:
    """prod_{i=1}^{2n} (1 - beta_i chi(p) p^-s)^-1."""
    poly = local_L_inverse(satake(ps), _chi_at_p(chi, ps.p))
    val = poly(s)
    if val.is_zero():
        raise LFactorPole("L-factor pole")
    return val.inverse()


def _unramified_factor(stab: Stabilization, chi_p: CycScalar, s) -> CycScalar:
    """prod_i (1 - beta_{n+i}^-1 chi(p)^-1 p^(s-1)) / (1 - beta_{n+i} chi(p) p^-s)."""
    p, n = stab.p, stab.n
    beta = satake(stab.ordered)
    out = CycScalar.rational(p, 1)
    s = Fraction(s)
    for i in range(n):
        b = beta[n + i]
        num = 1 - (b * chi_p).inverse() * p_power(p, s - 1)
        den = 1 - b * chi_p * p_power(p, -s)
        if den.is_zero():
            raise NonRegularParameter("non-regular parameter")
        out = out * num / den
    return out


def euler_closed(stab: Stabilization, chi: MultChar, s=Fraction(1, 2), c=None) -> CycScalar:
    """E(Theta, chi, s).

    Ramified: c tau(chi)^n (alpha p^((n-n^2)/2))^-m p^(mn(s-1/2)).
    Unramified: c prod_i (1 - beta_{n+i}^-1 chi(p)^-1 p^(s-1)) / (1 - beta_{n+i} chi(p) p^-s).
    With c=None the constant is left out (the returned value is the coefficient of c).
    """
    p, n, m = stab.p, stab.n, chi.m
    s = Fraction(s)
    if m >= 1:
        base = stab.alpha_theta * p_power(p, Fraction(n - n * n, 2))
        val = tau(chi) ** n * base ** (-m) * p_power(p, m * n * (s - Fraction(1, 2)))
    else:
        val = _unramified_factor(stab, chi.at_p, s)
    return val if c is None else val * as_scalar(p, c)


def e_factor(stab: Stabilization, chi: MultChar, s=Fraction(1, 2)) -> LaurentQS:
    """E / L for unramified chi, as a Laurent polynomial in t = p^-s.

    prod_{i<=n} (1 - beta_i chi(p) t) (1 - beta_{n+i}^-1 chi(p)^-1 p^-1 t^-1).
    """
    if chi.m:
        raise ValueError("e_factor is defined here for unramified characters")
    p, n = stab.p, stab.n
    beta = satake(stab.ordered)
    chi_p = chi.at_p
    out = LaurentQS.constant(p, 1)
    for i in range(n):
        out = out * LaurentQS.linear(p, 1, -(beta[i] * chi_p))
        lead = -(beta[n + i] * chi_p).inverse() * Fraction(1, p)
        out = out * LaurentQS(p, ((0, CycScalar.rational(p, 1)), (-1, lead)))._normalize()
    return out


def eprime(stab: Stabilization, chi_prime: MultChar, chi: MultChar, s) -> CycScalar:
    """e'(Theta (x) chi', chi, s + 1/2), branching on the conductor of chi' chi."""
    p, n = stab.p, stab.n
    xi = chi_prime * chi
    s = Fraction(s)
    if xi.m == 0:
        beta = satake(stab.ordered)
        x = xi.at_p
        out = CycScalar.rational(p, 1)
        for i in range(n):
            out = out * (1 - beta[i] * x * p_power(p, -s - Fraction(1, 2)))
            out = out * (1 - (beta[n + i] * x).inverse() * p_power(p, s - Fraction(1, 2)))
        return out
    return (p_power(p, Fraction(n * n - n, 2)) * stab.alpha_theta) ** (-xi.m)


# ---------------------------------------------------------------- L-value provider

class MissingLValue(KeyError):
    pass


@dataclass
class LValueProvider:
    """External L-values L(pi (x) chi, s + 1/2) keyed by (character key, s)."""

    p: int
    table: dict = field(default_factory=dict)
    default: CycScalar | None = None

    @classmethod
    def one(cls, p: int) -> "LValueProvider":
        return cls(p, {}, CycScalar.rational(p, 1))

    @classmethod
    def from_rows(cls, p: int, rows: Iterable[dict]) -> "LValueProvider":
        table = {}
        for row in rows:
            ch = row["character"]
            key = (int(ch.get("m", 0)), int(ch.get("teich_index", 0)), int(ch.get("wild_index", 0)))
            table[(key, Fraction(row["s"]))] = as_scalar(p, row["value"])
        return cls(p, table)

    @classmethod
    def from_file(cls, p: int, path) -> "LValueProvider":
        with open(path) as fh:
            return cls.from_rows(p, json.load(fh))

    def __call__(self, chi_key: tuple, s) -> CycScalar:
        hit = self.table.get((tuple(chi_key), Fraction(s)))
        if hit is not None:
            return hit
        if self.default is not None:
            return self.default
        raise MissingLValue(f"missing L-value for character {tuple(chi_key)} at s={s}")


@dataclass(frozen=True, eq=False)
class LocalDatum:
    """One place above p: its stabilization and the twisting character chi'."""

    stab: Stabilization
    chi_prime: MultChar | None = None

    def twist(self) -> MultChar:
        return self.chi_prime if self.chi_prime is not None else trivial_char(self.stab.p)


def interpolation_rhs(places: Sequence[LocalDatum], chis: Sequence[MultChar], s, provider: Callable,
                      chi_key=None) -> CycScalar:
    """N(f(chi' chi))^(n s) tau(chi' chi)^n prod_p e'(...) L(pi (x) chi, s + 1/2).

    places and chis are parallel lists, one entry per place above p.
    """
    if len(places) != len(chis):
        raise ValueError("one character per place is required")
    p = places[0].stab.p
    s = Fraction(s)
    out = CycScalar.rational(p, 1)
    for place, chi in zip(places, chis):
        n = place.stab.n
        xi = place.twist() * chi
        out = out * p_power(p, xi.m * n * s) * tau(xi) ** n
        out = out * eprime(place.stab, place.twist(), chi, s)
    key = chi_key if chi_key is not None else chis[0].key()
    return out * provider(key, s)


def check_local_preconditions(stab: Stabilization, eta_at_p) -> None:
    if not shalika_compatible(stab.ordered, eta_at_p):
        raise ValueError("parameters are not Shalika-compatible")
    if not regularity_check(stab.ordered, eta_at_p):
        raise NonRegularParameter("non-regular parameter")


def euler_row(stab: Stabilization, chi: MultChar, s, value: CycScalar) -> dict:
    return {"p": stab.p, "n": stab.n, "m": chi.m, "s": str(Fraction(s)),
            "branch": "ramified" if chi.m else "unramified",
            "character": {"m": chi.m, "teich_index": chi.teich_index, "wild_index": chi.wild_index},
            "value_serialized": value.serialize()}
