"""Finite-level distributions on (Z/p^m)^*, their moments, boundedness
diagnostics, and integration of <gamma>^x against a measure tower."""
from __future__ import annotations

import json
import math
import random
import statistics
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Sequence

import numpy as np

from .chars import MultChar, characters_of_level, value_order
from .euler import LocalDatum, interpolation_rhs
from .padic import PAdicNum, vp
from .scalar import INF, CycScalar, LocalRingElem, PrecisionError, padic_ord, split_modulus


class UnboundedTower(ValueError):
    pass


def units_mod(p: int, m: int) -> list[int]:
    P = p ** m
    return [a for a in range(1, P) if a % p] if m else [0]


# ---------------------------------------------------------------- moments and masses

@dataclass(eq=False)
class MomentTable:
    """Moments of a level-m distribution, one per character of (Z/p^m)^* (chi(p) = 1)."""

    p: int
    m: int
    chars: list
    moments: list

    def __post_init__(self):
        if len(self.chars) != len(self.moments):
            raise ValueError("one moment per character")
        expected = sorted(c.key() for c in characters_of_level(self.p, self.m))
        if sorted(c.key() for c in self.chars) != expected:
            raise ValueError(f"table is not complete at level {self.m}")

    def moment(self, chi: MultChar) -> CycScalar:
        for c, v in zip(self.chars, self.moments):
            if c.key() == chi.key():
                return v
        raise KeyError(chi.key())

    def to_json(self) -> dict:
        return {"p": self.p, "m": self.m,
                "moments": [{"character": list(c.key()), "value": v.to_json()}
                            for c, v in zip(self.chars, self.moments)]}

    @classmethod
    def from_json(cls, data: dict) -> "MomentTable":
        p, m = int(data["p"]), int(data["m"])
        chars, moments = [], []
        for row in data["moments"]:
            cm, t, w = row["character"]
            chars.append(MultChar(p, cm, t, w))
            moments.append(CycScalar.from_json(row["value"]))
        return cls(p, m, chars, moments)


@dataclass(eq=False)
class FiniteLevelMeasure:
    """Masses on (Z/p^m)^*; masses[i] belongs to the i-th unit of units_mod(p, m)."""

    p: int
    m: int
    masses: list

    def __post_init__(self):
        if len(self.masses) != len(units_mod(self.p, self.m)):
            raise ValueError("one mass per unit residue")

    def mass(self, a: int) -> CycScalar:
        return self.masses[units_mod(self.p, self.m).index(a % self.p ** self.m)]

    def items(self):
        return zip(units_mod(self.p, self.m), self.masses)

    def pushforward(self) -> "FiniteLevelMeasure":
        """Image at level m - 1."""
        if self.m < 2:
            raise ValueError("nothing below level 1")
        lower = units_mod(self.p, self.m - 1)
        index = {a: i for i, a in enumerate(lower)}
        acc = [CycScalar.rational(self.p, 0)] * len(lower)
        Q = self.p ** (self.m - 1)
        for a, v in self.items():
            i = index[a % Q]
            acc[i] = acc[i] + v
        return FiniteLevelMeasure(self.p, self.m - 1, acc)

    def to_json(self) -> dict:
        return {"m": self.m, "masses": [v.to_json() for v in self.masses]}


@dataclass(eq=False)
class MeasureTower:
    p: int
    levels: list = field(default_factory=list)

    def __post_init__(self):
        for i, lvl in enumerate(self.levels):
            if lvl.m != i + 1 or lvl.p != self.p:
                raise ValueError("tower levels must run 1, 2, ..., M")

    @property
    def depth(self) -> int:
        return len(self.levels)

    def to_json(self) -> dict:
        return {"p": self.p, "levels": [lvl.to_json() for lvl in self.levels]}

    def dumps(self) -> str:
        return json.dumps(self.to_json(), sort_keys=True, separators=(",", ":"))

    @classmethod
    def from_json(cls, data: dict) -> "MeasureTower":
        p = int(data["p"])
        levels = [FiniteLevelMeasure(p, int(l["m"]), [CycScalar.from_json(v) for v in l["masses"]])
                  for l in data["levels"]]
        return cls(p, levels)


def moments_from_interpolation(places: Sequence[LocalDatum], s, m: int, provider: Callable) -> MomentTable:
    """Interpolation right-hand side at every character of (Z/p^m)^*."""
    p = places[0].stab.p
    chars = characters_of_level(p, m)
    moments = [interpolation_rhs(places, [chi] * len(places), s, provider) for chi in chars]
    return MomentTable(p, m, chars, moments)


def _char_exponents(chi: MultChar, units: Sequence[int], N0: int) -> list[int]:
    """Exponents e with chi(a) = zeta_N0^e for each a."""
    if chi.m == 0:
        return [0] * len(units)
    table = chi.exponent_table()
    k = N0 // chi.N
    return [int(table[a % len(table)]) * k for a in units]


def _common_frame(values: Sequence[CycScalar], N0: int) -> tuple[int, int, np.ndarray, np.ndarray]:
    """Lift to a common root-of-unity order M and denominator D; integer vectors of length M."""
    M = N0
    for v in values:
        M = math.lcm(M, v.N)
    D = 1
    for v in values:
        D = math.lcm(D, v.den)
    vec0 = np.zeros((len(values), M), dtype=object)
    vec1 = np.zeros((len(values), M), dtype=object)
    for i, v in enumerate(values):
        w = v.lift(M) if v.N != M else v
        scale = D // w.den
        vec0[i, :len(w.c0)] = [c * scale for c in w.c0]
        vec1[i, :len(w.c1)] = [c * scale for c in w.c1]
    return M, D, vec0, vec1


def fourier_invert(tbl: MomentTable) -> FiniteLevelMeasure:
    """mass(a) = phi(p^m)^-1 sum_chi chi(a)^-1 moment(chi), exactly."""
    p, m = tbl.p, tbl.m
    units = units_mod(p, m)
    N0 = value_order(p, m)
    M, D, vec0, vec1 = _common_frame(tbl.moments, N0)
    step = M // N0
    exps = [_char_exponents(c, units, N0) for c in tbl.chars]
    masses = []
    for j in range(len(units)):
        acc0 = np.zeros(M, dtype=object)
        acc1 = np.zeros(M, dtype=object)
        for i in range(len(tbl.chars)):
            shift = (-exps[i][j] * step) % M
            acc0 += np.roll(vec0[i], shift)
            acc1 += np.roll(vec1[i], shift)
        masses.append(CycScalar(p, M, [int(c) for c in acc0], [int(c) for c in acc1], D * len(units)))
    return FiniteLevelMeasure(p, m, masses)


def moments_of(mu: FiniteLevelMeasure) -> MomentTable:
    """sum_a chi(a) mass(a) for every character of the level."""
    p, m = mu.p, mu.m
    units = units_mod(p, m)
    N0 = value_order(p, m)
    M, D, vec0, vec1 = _common_frame(mu.masses, N0)
    step = M // N0
    chars = characters_of_level(p, m)
    moments = []
    for chi in chars:
        exps = _char_exponents(chi, units, N0)
        acc0 = np.zeros(M, dtype=object)
        acc1 = np.zeros(M, dtype=object)
        for j, e in enumerate(exps):
            acc0 += np.roll(vec0[j], (e * step) % M)
            acc1 += np.roll(vec1[j], (e * step) % M)
        moments.append(CycScalar(p, M, [int(c) for c in acc0], [int(c) for c in acc1], D))
    return MomentTable(p, m, chars, moments)


def build_tower(places: Sequence[LocalDatum], s, depth: int, provider: Callable) -> MeasureTower:
    levels = [fourier_invert(moments_from_interpolation(places, s, m, provider)) for m in range(1, depth + 1)]
    return MeasureTower(places[0].stab.p, levels)


def compat_check(tower: MeasureTower) -> bool:
    for lower, upper in zip(tower.levels, tower.levels[1:]):
        pushed = upper.pushforward()
        if any(a != b for a, b in zip(pushed.masses, lower.masses)):
            return False
    return True


def synthetic_tower(p: int, depth: int, seed: int = 0, bound: int = 50) -> MeasureTower:
    """Integral tower: random integer masses at the top level pushed down."""
    rng = random.Random(seed)
    top = FiniteLevelMeasure(p, depth, [CycScalar.rational(p, rng.randint(-bound, bound))
                                        for _ in units_mod(p, depth)])
    levels = [top]
    while levels[0].m > 1:
        levels.insert(0, levels[0].pushforward())
    return MeasureTower(p, levels)


def point_mass_tower(p: int, depth: int, b: int) -> MeasureTower:
    levels = []
    for m in range(1, depth + 1):
        units = units_mod(p, m)
        levels.append(FiniteLevelMeasure(p, m, [CycScalar.rational(p, int(a == b % p ** m)) for a in units]))
    return MeasureTower(p, levels)


# ---------------------------------------------------------------- boundedness

@dataclass
class BoundednessReport:
    floors: list  # min padic_ord of the masses, per level
    slope: float
    bounded: bool

    def to_json(self) -> dict:
        return {"floors": [str(f) if f != INF else "inf" for f in self.floors],
                "slope": self.slope, "bounded": self.bounded}


def boundedness_diagnostic(tower: MeasureTower, slope_tol: float = 0.25) -> BoundednessReport:
    if not tower.levels:
        raise ValueError("empty tower")
    floors = []
    for lvl in tower.levels:
        floors.append(min((padic_ord(v) for v in lvl.masses), default=INF))
    finite = [(lvl.m, float(f)) for lvl, f in zip(tower.levels, floors) if f != INF]
    if len(finite) >= 2:
        slope = statistics.linear_regression([m for m, _ in finite], [f for _, f in finite]).slope
    else:
        slope = 0.0
    return BoundednessReport(floors, slope, slope >= -slope_tol)


# ---------------------------------------------------------------- p-adic analysis

def _abs_prec_num(p: int, x: Fraction, K: int) -> PAdicNum:
    """x as a PAdicNum known modulo p^K."""
    if x == 0:
        return PAdicNum.zero(p, K)
    v = vp(x.numerator, p) - vp(x.denominator, p)
    if v >= K:
        return PAdicNum.zero(p, K)
    return PAdicNum.from_rational(p, x, K - v)


def _min_domain_val(p: int) -> int:
    return 2 if p == 2 else 1


def log_p(x, K: int = 12) -> PAdicNum:
    """Logarithm on 1 + pZ_p (1 + 4Z_2), to absolute precision K."""
    p = x.p
    K = min(K, int(x.abs_prec))
    y = x.to_fraction() - 1
    if x.is_zero() or (y != 0 and vp(y.numerator, p) - vp(y.denominator, p) < _min_domain_val(p)):
        raise ValueError(f"log_p is defined here on 1 + {p ** _min_domain_val(p)}Z_{p}")
    if y == 0:
        return PAdicNum.zero(p, K)
    v = vp(y.numerator, p) - vp(y.denominator, p)
    total = Fraction(0)
    power = Fraction(1)
    k = 0
    while True:
        k += 1
        # ord(y^j / j) >= j v - log_p(j), increasing in j
        if k * v - math.log(k, p) >= K:
            break
        power *= y
        total += power / k if k % 2 else -power / k
    return _abs_prec_num(p, total, K)


def exp_p(y, K: int = 12) -> PAdicNum:
    """Exponential on pZ_p (4Z_2), to absolute precision K."""
    p = y.p
    K = min(K, int(y.abs_prec))
    z = y.to_fraction()
    if z != 0 and vp(z.numerator, p) - vp(z.denominator, p) < _min_domain_val(p):
        raise ValueError(f"exp_p is defined here on {p ** _min_domain_val(p)}Z_{p}")
    if z == 0:
        return _abs_prec_num(p, Fraction(1), K)
    v = vp(z.numerator, p) - vp(z.denominator, p)
    total = Fraction(1)
    term = Fraction(1)
    k = 0
    # ord(z^k / k!) >= k (v - 1/(p-1))
    rate = v - 1 / (p - 1)
    while True:
        k += 1
        term = term * z / k
        total += term
        if (k + 1) * rate >= K:
            break
    return _abs_prec_num(p, total, K)


def one_unit_part(p: int, a: int, K: int) -> PAdicNum:
    """<a> = a / omega(a) for odd p, and +-a in 1 + 4Z_2 for p = 2."""
    if a % p == 0:
        raise ValueError("a must be a unit")
    mod = p ** K
    if p == 2:
        b = a if a % 4 == 1 else -a
        return PAdicNum.from_rational(2, b % mod, K)
    omega = pow(a, p ** (K - 1), mod)
    return PAdicNum.from_rational(p, a * pow(omega, -1, mod) % mod, K)


def gamma_bracket(a: int, x, K: int = 12) -> PAdicNum:
    """<a>^x = exp_p(x log_p <a>)."""
    p = x.p if isinstance(x, PAdicNum) else None
    if p is None:
        raise TypeError("x must be a PAdicNum")
    if x.is_zero():
        return _abs_prec_num(p, Fraction(1), K)
    return exp_p(x * log_p(one_unit_part(p, a, K + 2), K + 2), K)


def _local_sum(terms, p: int, B: int, K: int) -> LocalRingElem:
    total = LocalRingElem.zero(p, B, K)
    for t in terms:
        total = total + t
    return total


def Lp_eval(tower: MeasureTower, x, K: int = 12, level: int | None = None,
            slope_tol: float = 0.25) -> tuple[LocalRingElem, int]:
    """Riemann sum of <a>^x against the level-M masses, with the exponent of the error bound.

    Returns (value, e): the value is correct modulo p^e.
    """
    report = boundedness_diagnostic(tower, slope_tol)
    if not report.bounded:
        raise UnboundedTower(f"tower is not bounded: floors {[str(f) for f in report.floors]}, slope {report.slope:.3f}")
    finite = [f for f in report.floors if f != INF]
    floor = min(finite) if finite else 0
    M = level if level is not None else tower.depth
    lvl = tower.levels[M - 1]
    p = tower.p
    N = math.lcm(*[v.N for v in lvl.masses])
    _, B = split_modulus(p, N)
    extra = max(0, math.ceil(-floor)) + 2
    terms = []
    for a, mass in lvl.items():
        if mass.is_zero():
            continue
        g = gamma_bracket(a, x, K + extra)
        loc = LocalRingElem.from_scalar(mass.lift(N) if mass.N != N else mass, K + extra)
        if g.is_zero():
            continue
        terms.append(loc.scale(g.unit, int(g.val)))
    value = _local_sum(terms, p, B, K + extra)
    bound = M - 1 - max(0, math.ceil(-floor))
    return value, min(bound, K)


def local_difference_ord(a: LocalRingElem, b: LocalRingElem):
    """Lower bound for ord(a - b); exact when the difference is visible at the working precision."""
    d = a - b
    best = INF
    for i, part in enumerate(d.parts):
        if part is None:
            continue
        try:
            o = d._part_ord(part)
        except PrecisionError:
            o = Fraction(part[0] + d.K)
        best = min(best, o + Fraction(i, 2))
    return best
