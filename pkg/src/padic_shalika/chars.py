"""Characters of Q_p^*: finite-order multiplicative characters, the additive
character of conductor Z_p, and Gauss sums."""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache

import numpy as np
from sympy.ntheory import primitive_root

from .padic import PAdicNum, padic
from .scalar import CycScalar, as_scalar


def value_order(p: int, m: int) -> int:
    """Order N of the roots of unity needed for characters of (Z/p^m)^*."""
    if m == 0:
        return 1
    if p == 2:
        return 2 ** max(1, m - 2)
    return (p - 1) * p ** (m - 1)


def _wild_modulus(p: int, m: int) -> int:
    if p == 2:
        return 2 ** max(0, m - 2)
    return p ** max(0, m - 1)


@lru_cache(maxsize=None)
def dlog_table(p: int, m: int) -> tuple[dict, int]:
    """Map residue a mod p^m to (j, l) with a = g^j * gen^l.

    For odd p, g is the Teichmuller lift of the smallest primitive root and gen = 1+p.
    For p = 2, g = -1 and gen = 5.
    """
    P = p ** m
    if p == 2:
        g, gen, tors = P - 1, 5 % P, 2
    else:
        g, gen, tors = pow(primitive_root(p), p ** (m - 1), P), (1 + p) % P, p - 1
    table = {}
    gp = 1
    for j in range(tors):
        x = gp
        for l in range(_wild_modulus(p, m)):
            table.setdefault(x, (j, l))
            x = x * gen % P
        gp = gp * g % P
    return table, P


@dataclass(frozen=True, eq=False)
class MultChar:
    """Character of Q_p^* of conductor p^m.

    On units: chi(g) = zeta_{tors}^teich_index for the torsion generator g, and
    chi(gen) = zeta_{wild}^wild_index for gen = 1+p (odd p) or 5 (p = 2).
    at_p is chi(p).
    """

    p: int
    m: int
    teich_index: int = 0
    wild_index: int = 0
    at_p: CycScalar = field(default=None)

    def __post_init__(self):
        p, m = self.p, self.m
        if self.at_p is None:
            object.__setattr__(self, "at_p", CycScalar.rational(p, 1))
        elif not isinstance(self.at_p, CycScalar):
            object.__setattr__(self, "at_p", as_scalar(p, self.at_p))
        tors = 2 if p == 2 else p - 1
        object.__setattr__(self, "teich_index", self.teich_index % tors)
        object.__setattr__(self, "wild_index", self.wild_index % _wild_modulus(p, m))
        if conductor_of_indices(p, m, self.teich_index, self.wild_index)[0] != m:
            raise ValueError(f"indices ({self.teich_index}, {self.wild_index}) do not give conductor {p}^{m}")

    @property
    def N(self) -> int:
        return value_order(self.p, self.m)

    @property
    def conductor(self) -> int:
        return self.p ** self.m

    def is_unramified(self) -> bool:
        return self.m == 0

    def unit_exponent(self, a: int) -> int:
        """chi(a) = zeta_N^e for an integer unit a."""
        if self.m == 0:
            return 0
        p, m, N = self.p, self.m, self.N
        table, P = dlog_table(p, m)
        try:
            j, l = table[a % P]
        except KeyError:
            raise ValueError(f"{a} is not a unit mod {p}") from None
        tors = 2 if p == 2 else p - 1
        wild = _wild_modulus(p, m)
        return (self.teich_index * j * (N // tors) + self.wild_index * l * (N // wild)) % N

    def exponent_table(self) -> np.ndarray:
        """Exponents on residues mod p^max(m,1); -1 marks non-units."""
        return _exponent_table(self.p, self.m, self.teich_index, self.wild_index)

    def unit_value(self, a: int) -> CycScalar:
        return CycScalar.zeta(self.p, self.N, self.unit_exponent(a))

    def __call__(self, x) -> CycScalar:
        return char_value(self, x)

    def level_indices(self, M: int) -> tuple[int, int]:
        """Indices describing this character on (Z/p^M)^*, M >= m."""
        if M < self.m:
            raise ValueError("level below conductor")
        if self.m == 0:
            return 0, 0
        return self.teich_index, self.wild_index * _wild_modulus(self.p, M) // _wild_modulus(self.p, self.m)

    def __mul__(self, other: "MultChar") -> "MultChar":
        if other.p != self.p:
            raise ValueError("mixing primes")
        M = max(self.m, other.m)
        t1, w1 = self.level_indices(M)
        t2, w2 = other.level_indices(M)
        return char_from_level(self.p, M, t1 + t2, w1 + w2, self.at_p * other.at_p)

    def conjugate(self) -> "MultChar":
        return MultChar(self.p, self.m, -self.teich_index, -self.wild_index, self.at_p.inverse())

    def __eq__(self, other):
        if not isinstance(other, MultChar):
            return NotImplemented
        return (self.p, self.m, self.teich_index, self.wild_index) == (
            other.p, other.m, other.teich_index, other.wild_index) and self.at_p == other.at_p

    __hash__ = None

    def key(self) -> tuple[int, int, int]:
        return (self.m, self.teich_index, self.wild_index)

    def to_json(self) -> dict:
        return {"p": self.p, "m": self.m, "teich_index": self.teich_index,
                "wild_index": self.wild_index, "at_p": self.at_p.to_json()}

    @classmethod
    def from_json(cls, data: dict) -> "MultChar":
        p = int(data["p"])
        at_p = data.get("at_p")
        return cls(p, int(data["m"]), int(data.get("teich_index", 0)), int(data.get("wild_index", 0)),
                   None if at_p is None else as_scalar(p, at_p))

    def __repr__(self):
        return f"MultChar(p={self.p}, m={self.m}, t={self.teich_index}, w={self.wild_index}, at_p={self.at_p})"


@lru_cache(maxsize=None)
def _exponent_table(p: int, m: int, t: int, w: int) -> np.ndarray:
    chi = MultChar(p, m, t, w)
    P = p ** max(m, 1)
    out = np.full(P, -1, dtype=np.int64)
    for a in range(P):
        if a % p:
            out[a] = chi.unit_exponent(a)
    out.setflags(write=False)
    return out


def conductor_of_indices(p: int, M: int, t: int, w: int) -> tuple[int, int, int]:
    """Reduce level-M indices to (conductor exponent, teich index, wild index)."""
    tors = 2 if p == 2 else p - 1
    t %= tors
    w %= _wild_modulus(p, M)
    if w == 0:
        if t == 0:
            return 0, 0, 0
        return (2 if p == 2 else 1), t, 0
    v = 0
    while w % p == 0:
        w //= p
        v += 1
    m = M - v
    return m, t, w % _wild_modulus(p, m)


def char_from_level(p: int, M: int, t: int, w: int, at_p=None) -> MultChar:
    """Character of (Z/p^M)^* given by level-M indices, at its true conductor."""
    m, t, w = conductor_of_indices(p, M, t, w)
    return MultChar(p, m, t, w, at_p)


def trivial_char(p: int, at_p=None) -> MultChar:
    return MultChar(p, 0, 0, 0, at_p)


def unramified_char(p: int, at_p) -> MultChar:
    return MultChar(p, 0, 0, 0, as_scalar(p, at_p))


@lru_cache(maxsize=None)
def _primitive_indices(p: int, m: int) -> tuple[tuple[int, int], ...]:
    tors = 2 if p == 2 else p - 1
    out = []
    for t in range(tors):
        for w in range(_wild_modulus(p, m)):
            if conductor_of_indices(p, m, t, w)[0] == m:
                out.append((t, w))
    return tuple(out)


def all_characters(p: int, m: int) -> list[MultChar]:
    """Primitive characters of conductor exactly p^m, with chi(p) = 1."""
    return [MultChar(p, m, t, w) for t, w in _primitive_indices(p, m)]


def characters_of_level(p: int, M: int) -> list[MultChar]:
    """All characters of (Z/p^M)^*, each at its own conductor, with chi(p) = 1."""
    if M == 0 or (p == 2 and M == 1):
        return [trivial_char(p)]
    tors = 2 if p == 2 else p - 1
    return [char_from_level(p, M, t, w) for t in range(tors) for w in range(_wild_modulus(p, M))]


def char_value(chi: MultChar, x) -> CycScalar:
    """chi(x) = chi(p)^v(x) * chi(unit part)."""
    x = padic(chi.p, x)
    if x.is_zero():
        raise ValueError("character of zero")
    if x.K < chi.m:
        raise ValueError("insufficient precision on the argument")
    v = x.val
    unit = chi.unit_value(x.unit) if chi.m else CycScalar.rational(chi.p, 1)
    return unit * chi.at_p ** v


@dataclass(frozen=True)
class AddChar:
    """psi(a / p^k) = zeta_{p^k}^(sign * a); trivial exactly on Z_p."""

    p: int
    sign: int = 1

    def __post_init__(self):
        if self.sign not in (1, -1):
            raise ValueError("sign must be +1 or -1")

    def inverse(self) -> "AddChar":
        return AddChar(self.p, -self.sign)

    def exponent(self, x) -> tuple[int, int]:
        """(a, k) with psi(x) = zeta_{p^k}^a."""
        if isinstance(x, PAdicNum):
            if x.is_zero() or x.val >= 0:
                return 0, 1
            k = -x.val
            frac = x.residue(0)
        else:
            frac = Fraction(x)
            k = 0
            d = frac.denominator
            while d % self.p == 0:
                d //= self.p
                k += 1
            if k == 0:
                return 0, 1
        P = self.p ** k
        num = frac.numerator * pow(frac.denominator // P, -1, P)
        return (self.sign * num) % P, P

    def __call__(self, x) -> CycScalar:
        a, P = self.exponent(x)
        return CycScalar.zeta(self.p, P, a)


def psi(p: int) -> AddChar:
    return AddChar(p, 1)


def gauss_sum(chi: MultChar, add: AddChar | None = None) -> CycScalar:
    """sum over g in (Z/p^m)^* of chi(p^-m g) psi(p^-m g); 1 when chi is unramified."""
    p, m = chi.p, chi.m
    if add is None:
        add = AddChar(p)
    if m == 0:
        return CycScalar.rational(p, 1)
    P = p ** m
    Nc = chi.N
    M = Nc * P // math.gcd(Nc, P)
    counts = [0] * M
    for g in range(P):
        if g % p:
            e = chi.unit_exponent(g) * (M // Nc) + add.sign * g * (M // P)
            counts[e % M] += 1
    return CycScalar.from_counts(p, M, counts) * chi.at_p ** (-m)


def orthogonality_sum(chi: MultChar) -> CycScalar:
    """sum over (Z/p^m)^* of chi."""
    P = chi.p ** max(chi.m, 1)
    counts = [0] * chi.N
    for a in range(P):
        if a % chi.p:
            counts[chi.unit_exponent(a)] += 1
    return CycScalar.from_counts(chi.p, chi.N, counts)
