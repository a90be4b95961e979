"""Exact arithmetic in Q(zeta_N)[u]/(u^2 - p) with complex and p-adic embeddings.

Elements are stored as c0 + c1*u where c0, c1 are integer coefficient vectors
(reduced modulo the N-th cyclotomic polynomial) over a shared positive
denominator.  N must be of the form d * p^B with d | p - 1.
"""
from __future__ import annotations

import cmath
import json
import math
from fractions import Fraction
from functools import lru_cache
from math import gcd
from typing import Iterable, Sequence, Union

import sympy
from sympy.ntheory import primitive_root

INF = math.inf

Number = Union[int, Fraction]


class PrecisionError(ArithmeticError):
    pass


def split_modulus(p: int, N: int) -> tuple[int, int]:
    """Return (d, B) with N = d * p^B and p not dividing d."""
    B = 0
    while N % p == 0:
        N //= p
        B += 1
    return N, B


def check_modulus(p: int, N: int) -> None:
    d, _ = split_modulus(p, N)
    if N < 1 or (p - 1) % d:
        raise ValueError(f"root-of-unity order {N} is not d*p^B with d | p-1 (p={p})")


@lru_cache(maxsize=None)
def cyclotomic_coeffs(N: int) -> tuple[int, ...]:
    """Coefficients of Phi_N in ascending degree."""
    x = sympy.Symbol("x")
    poly = sympy.Poly(sympy.cyclotomic_poly(N, x), x)
    return tuple(int(c) for c in reversed(poly.all_coeffs()))


@lru_cache(maxsize=None)
def _tail(N: int) -> tuple[int, tuple[tuple[int, int], ...]]:
    cf = cyclotomic_coeffs(N)
    deg = len(cf) - 1
    return deg, tuple((j, a) for j, a in enumerate(cf[:-1]) if a)


def euler_phi(N: int) -> int:
    return _tail(N)[0]


def _reduce(coeffs: list[int], N: int) -> tuple[int, ...]:
    deg, tail = _tail(N)
    for k in range(len(coeffs) - 1, deg - 1, -1):
        c = coeffs[k]
        if c:
            coeffs[k] = 0
            base = k - deg
            for j, a in tail:
                coeffs[base + j] -= c * a
    if len(coeffs) < deg:
        coeffs.extend([0] * (deg - len(coeffs)))
    return tuple(coeffs[:deg])


def _pmul(a: Sequence[int], b: Sequence[int]) -> list[int]:
    out = [0] * (len(a) + len(b) - 1)
    nb = [(j, y) for j, y in enumerate(b) if y]
    for i, x in enumerate(a):
        if x:
            for j, y in nb:
                out[i + j] += x * y
    return out


def _is_zero(v: Sequence[int]) -> bool:
    return not any(v)


def _lift_vec(v: Sequence[int], N: int, M: int) -> tuple[int, ...]:
    if N == M:
        return tuple(v)
    k = M // N
    out = [0] * ((len(v) - 1) * k + 1 if v else 1)
    for j, c in enumerate(v):
        if c:
            out[j * k] = c
    return _reduce(out, M)


class CycScalar:
    """Element c0 + c1*u of Q(zeta_N)[u]/(u^2 - p)."""

    __slots__ = ("p", "N", "c0", "c1", "den")

    def __init__(self, p: int, N: int, c0: Iterable[int], c1: Iterable[int] = (), den: int = 1,
                 reduced: bool = False):
        check_modulus(p, N)
        c0 = list(c0) or [0]
        c1 = list(c1) or [0]
        if not reduced:
            c0 = _reduce(c0, N)
            c1 = _reduce(c1, N)
        else:
            c0, c1 = tuple(c0), tuple(c1)
        if den == 0:
            raise ZeroDivisionError("zero denominator")
        if den < 0:
            den = -den
            c0 = tuple(-c for c in c0)
            c1 = tuple(-c for c in c1)
        g = den
        for c in c0:
            if c:
                g = gcd(g, c)
        for c in c1:
            if c:
                g = gcd(g, c)
        if _is_zero(c0) and _is_zero(c1):
            g = den
        if g > 1:
            c0 = tuple(c // g for c in c0)
            c1 = tuple(c // g for c in c1)
            den //= g
        self.p = int(p)
        self.N = int(N)
        self.c0 = c0
        self.c1 = c1
        self.den = den

    # constructors
    @classmethod
    def rational(cls, p: int, q: Number) -> "CycScalar":
        q = Fraction(q)
        return cls(p, 1, [q.numerator], [0], q.denominator, reduced=True)

    @classmethod
    def zeta(cls, p: int, N: int, k: int = 1) -> "CycScalar":
        k %= N
        v = [0] * (k + 1)
        v[k] = 1
        return cls(p, N, v)

    @classmethod
    def sqrt_p(cls, p: int) -> "CycScalar":
        return cls(p, 1, [0], [1], reduced=True)

    @classmethod
    def from_counts(cls, p: int, N: int, counts: Sequence[int], den: int = 1) -> "CycScalar":
        """sum_e counts[e] * zeta_N^e, divided by den."""
        return cls(p, N, [int(c) for c in counts], [0], den)

    # helpers
    def _coerce(self, other) -> "CycScalar":
        if isinstance(other, CycScalar):
            if other.p != self.p:
                raise ValueError(f"mixing scalars for p={self.p} and p={other.p}")
            return other
        if isinstance(other, (int, Fraction)):
            return CycScalar.rational(self.p, other)
        return NotImplemented

    def lift(self, M: int) -> "CycScalar":
        if M % self.N:
            raise ValueError(f"cannot lift from N={self.N} to {M}")
        return CycScalar(self.p, M, _lift_vec(self.c0, self.N, M), _lift_vec(self.c1, self.N, M),
                         self.den, reduced=True)

    def _pair(self, other: "CycScalar") -> tuple["CycScalar", "CycScalar", int]:
        M = self.N * other.N // gcd(self.N, other.N)
        a = self if self.N == M else self.lift(M)
        b = other if other.N == M else other.lift(M)
        return a, b, M

    # predicates
    def is_zero(self) -> bool:
        return _is_zero(self.c0) and _is_zero(self.c1)

    def is_rational(self) -> bool:
        return _is_zero(self.c1) and _is_zero(self.c0[1:])

    def has_u(self) -> bool:
        return not _is_zero(self.c1)

    def to_fraction(self) -> Fraction:
        if not self.is_rational():
            raise ValueError("scalar is not rational")
        return Fraction(self.c0[0], self.den)

    # arithmetic
    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        a, b, M = self._pair(other)
        c0 = [x * b.den + y * a.den for x, y in zip(a.c0, b.c0)]
        c1 = [x * b.den + y * a.den for x, y in zip(a.c1, b.c1)]
        return CycScalar(self.p, M, c0, c1, a.den * b.den, reduced=True)

    __radd__ = __add__

    def __neg__(self):
        return CycScalar(self.p, self.N, [-c for c in self.c0], [-c for c in self.c1], self.den,
                         reduced=True)

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        a, b, M = self._pair(other)
        p = self.p
        a1z, b1z = _is_zero(a.c1), _is_zero(b.c1)
        c0 = _pmul(a.c0, b.c0)
        if not (a1z or b1z):
            t = _pmul(a.c1, b.c1)
            for i, v in enumerate(t):
                c0[i] += p * v
        if a1z and b1z:
            c1 = [0]
        elif a1z:
            c1 = _pmul(a.c0, b.c1)
        elif b1z:
            c1 = _pmul(a.c1, b.c0)
        else:
            c1 = _pmul(a.c0, b.c1)
            for i, v in enumerate(_pmul(a.c1, b.c0)):
                c1[i] += v
        return CycScalar(p, M, _reduce(c0, M), _reduce(c1, M), a.den * b.den, reduced=True)

    __rmul__ = __mul__

    def conj_u(self) -> "CycScalar":
        return CycScalar(self.p, self.N, self.c0, [-c for c in self.c1], self.den, reduced=True)

    def galois(self, k: int) -> "CycScalar":
        """zeta_N -> zeta_N^k (k a unit mod N), u fixed."""
        if gcd(k, self.N) != 1:
            raise ValueError("galois exponent must be a unit")

        def act(v):
            out = [0] * self.N
            for j, c in enumerate(v):
                if c:
                    out[(j * k) % self.N] += c
            return _reduce(out, self.N)

        return CycScalar(self.p, self.N, act(self.c0), act(self.c1), self.den, reduced=True)

    def conjugate(self) -> "CycScalar":
        """Complex conjugation (u is real under the embedding)."""
        return self.galois(-1)

    def _inverse_cyclotomic(self) -> "CycScalar":
        # inverse of an element with no u-part
        nz = [(j, c) for j, c in enumerate(self.c0) if c]
        if not nz:
            raise ZeroDivisionError("inversion of zero")
        if len(nz) == 1:
            j, c = nz[0]
            inv = CycScalar.zeta(self.p, self.N, -j)
            return CycScalar(self.p, self.N, [v * self.den for v in inv.c0], [0], c)
        x = sympy.Symbol("x")
        a = sympy.Poly(list(reversed(self.c0)), x, domain=sympy.QQ)
        phi = sympy.Poly(list(reversed(cyclotomic_coeffs(self.N))), x, domain=sympy.QQ)
        inv = sympy.invert(a, phi)
        coeffs = [Fraction(int(c.p), int(c.q)) for c in reversed(inv.all_coeffs())]
        den = 1
        for c in coeffs:
            den = den * c.denominator // gcd(den, c.denominator)
        return CycScalar(self.p, self.N, [int(c * den) * self.den for c in coeffs], [0], den)

    def inverse(self) -> "CycScalar":
        if self.is_zero():
            raise ZeroDivisionError("inversion of zero")
        if _is_zero(self.c1):
            return self._inverse_cyclotomic()
        bar = self.conj_u()
        norm = self * bar
        if not _is_zero(norm.c1):
            raise ArithmeticError("norm did not land in Q(zeta_N)")
        if norm.is_zero():
            raise ZeroDivisionError("scalar is a zero divisor (sqrt(p) lies in Q(zeta_N))")
        return bar * norm._inverse_cyclotomic()

    def __truediv__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self * other.inverse()

    def __rtruediv__(self, other):
        return self._coerce(other) * self.inverse()

    def __pow__(self, k: int):
        if k < 0:
            return self.inverse() ** (-k)
        result = CycScalar.rational(self.p, 1)
        base = self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            other = CycScalar.rational(self.p, other)
        if not isinstance(other, CycScalar):
            return NotImplemented
        if other.p != self.p:
            return False
        a, b, _ = self._pair(other)
        return (all(x * b.den == y * a.den for x, y in zip(a.c0, b.c0))
                and all(x * b.den == y * a.den for x, y in zip(a.c1, b.c1)))

    __hash__ = None

    def __repr__(self):
        def fmt(v, tag):
            parts = []
            for j, c in enumerate(v):
                if c:
                    q = Fraction(c, self.den)
                    mono = "" if j == 0 else (f"z^{j}" if j > 1 else "z")
                    parts.append(f"{q}{'*' + mono if mono else ''}")
            return ("(" + " + ".join(parts) + ")" + tag) if parts else ""

        body = " + ".join(s for s in (fmt(self.c0, ""), fmt(self.c1, "*u")) if s) or "0"
        return f"CycScalar(p={self.p}, N={self.N}: {body})"

    # serialization
    def to_json(self) -> dict:
        return {
            "p": self.p,
            "N": self.N,
            "c0": [str(Fraction(c, self.den)) for c in self.c0],
            "c1": [str(Fraction(c, self.den)) for c in self.c1],
        }

    @classmethod
    def from_json(cls, data: dict) -> "CycScalar":
        c0 = [Fraction(s) for s in data["c0"]]
        c1 = [Fraction(s) for s in data.get("c1", [])] or [Fraction(0)]
        den = 1
        for c in c0 + c1:
            den = den * c.denominator // gcd(den, c.denominator)
        return cls(int(data["p"]), int(data["N"]), [int(c * den) for c in c0],
                   [int(c * den) for c in c1], den)

    def serialize(self) -> str:
        return json.dumps(self.to_json(), sort_keys=True, separators=(",", ":"))

    @classmethod
    def deserialize(cls, text: str) -> "CycScalar":
        return cls.from_json(json.loads(text))


def as_scalar(p: int, x) -> CycScalar:
    if isinstance(x, CycScalar):
        return x
    if isinstance(x, dict):
        return CycScalar.from_json(x)
    if isinstance(x, str):
        return CycScalar.rational(p, Fraction(x))
    return CycScalar.rational(p, Fraction(x))


def complex_embed(x: CycScalar, which_root: int = 1) -> complex:
    """zeta_N -> exp(2*pi*i*which_root/N), u -> +sqrt(p)."""
    z = cmath.exp(2j * math.pi * which_root / x.N)

    def horner(v):
        acc = 0j
        for c in reversed(v):
            acc = acc * z + c
        return acc

    return (horner(x.c0) + math.sqrt(x.p) * horner(x.c1)) / x.den


# ---------------------------------------------------------------- p-adic side

@lru_cache(maxsize=None)
def _eisenstein(p: int, B: int) -> tuple[int, ...]:
    """Minimal polynomial of pi = zeta_{p^B} - 1 (ascending, monic)."""
    if B == 0:
        return (-p, 1)
    x = sympy.Symbol("x")
    poly = sympy.Poly(sympy.cyclotomic_poly(p ** B, x).subs(x, x + 1), x)
    return tuple(int(c) for c in reversed(poly.all_coeffs()))


def _local_reduce(v: list[int], p: int, B: int, mod: int) -> tuple[int, ...]:
    f = _eisenstein(p, B)
    e = len(f) - 1
    tail = [(j, a) for j, a in enumerate(f[:-1]) if a]
    for k in range(len(v) - 1, e - 1, -1):
        c = v[k]
        if c:
            v[k] = 0
            for j, a in tail:
                v[k - e + j] -= c * a
    if len(v) < e:
        v.extend([0] * (e - len(v)))
    return tuple(c % mod for c in v[:e])


def teichmuller(a: int, p: int, K: int) -> int:
    """Teichmuller lift of a (mod p) to Z/p^K."""
    if p == 2:
        return 1 if a % 2 else 0
    return pow(a, p ** (K - 1), p ** K)


@lru_cache(maxsize=None)
def _zeta_images(p: int, N: int, K: int) -> tuple[tuple[int, ...], ...]:
    """Images of zeta_N^j, j < phi(N), in Z_p[pi] modulo p^K."""
    d, B = split_modulus(p, N)
    mod = p ** K
    e = len(_eisenstein(p, B)) - 1
    x = pow(p ** B, -1, d) if d > 1 else 0
    y = pow(d, -1, p ** B) if B > 0 else 0
    omega = teichmuller(primitive_root(p), p, K) if p > 2 else 1
    one = [1] + [0] * (e - 1)
    step = [1, 1] + [0] * (e - 2) if B > 0 else one
    powers = [tuple(one)]
    for _ in range(1, p ** B):
        powers.append(_local_reduce(_pmul(powers[-1], step), p, B, mod))
    out = []
    for j in range(euler_phi(N)):
        t = pow(omega, (j * x * ((p - 1) // d)) % (p - 1), mod) if d > 1 else 1
        vec = powers[(j * y) % (p ** B)] if B > 0 else powers[0]
        out.append(tuple((t * c) % mod for c in vec))
    return tuple(out)


def _vp(a: int, p: int) -> int:
    if a == 0:
        return 10 ** 9
    v = 0
    while a % p == 0:
        a //= p
        v += 1
    return v


class LocalRingElem:
    """Truncated element a0 + a1*u of Q_p(zeta_{p^B})[u], u^2 = p.

    Each part is stored as p^shift * sum_j coeffs[j] * pi^j with coeffs known
    modulo p^K, where pi = zeta_{p^B} - 1 (pi = p when B = 0).
    """

    __slots__ = ("p", "B", "K", "parts")

    def __init__(self, p: int, B: int, K: int, parts):
        self.p, self.B, self.K = p, B, K
        self.parts = tuple(parts)

    @property
    def e(self) -> int:
        return len(_eisenstein(self.p, self.B)) - 1

    @classmethod
    def from_scalar(cls, x: CycScalar, K: int) -> "LocalRingElem":
        p = x.p
        if needs_sqrt_substitution(x):
            x = substitute_sqrt(x)
        d, B = split_modulus(p, x.N)
        imgs = _zeta_images(p, x.N, K)
        mod = p ** K
        e = len(_eisenstein(p, B)) - 1
        vden = _vp(x.den, p)
        uden = x.den // p ** vden
        uinv = pow(uden, -1, mod)
        parts = []
        for vec in (x.c0, x.c1):
            if _is_zero(vec):
                parts.append(None)
                continue
            g = 0
            for c in vec:
                g = gcd(g, c)
            shift = _vp(g, p)
            scale = p ** shift
            acc = [0] * e
            for j, c in enumerate(vec):
                if c:
                    c = (c // scale) % mod
                    for i, w in enumerate(imgs[j]):
                        acc[i] += c * w
            parts.append((shift - vden, tuple((a * uinv) % mod for a in acc)))
        return cls(p, B, K, parts)

    def _part_ord(self, part) -> Fraction:
        shift, coeffs = part
        e = len(coeffs)
        best = None
        for j, a in enumerate(coeffs):
            if a % (self.p ** self.K):
                cand = Fraction(_vp(a, self.p) + shift) + Fraction(j, e)
                if best is None or cand < best:
                    best = cand
        if best is None:
            raise PrecisionError("raise precision")
        return best

    def valuation(self):
        vals = []
        if self.parts[0] is not None:
            vals.append(self._part_ord(self.parts[0]))
        if len(self.parts) > 1 and self.parts[1] is not None:
            vals.append(self._part_ord(self.parts[1]) + Fraction(1, 2))
        return min(vals) if vals else INF

    def _binop_parts(self, a, b, op):
        if a is None:
            return b if op == 1 else (None if b is None else (b[0], tuple(-c for c in b[1])))
        if b is None:
            return a
        mod = self.p ** self.K
        s = min(a[0], b[0])
        fa = self.p ** (a[0] - s)
        fb = self.p ** (b[0] - s)
        return s, tuple((x * fa + op * y * fb) % mod for x, y in zip(a[1], b[1]))

    def _check(self, other: "LocalRingElem"):
        if (self.p, self.B) != (other.p, other.B):
            raise ValueError("local elements live in different fields")

    def __add__(self, other: "LocalRingElem") -> "LocalRingElem":
        self._check(other)
        K = min(self.K, other.K)
        out = LocalRingElem(self.p, self.B, K, ())
        out.parts = tuple(out._binop_parts(a, b, 1) for a, b in zip(self.parts, other.parts))
        return out

    def __sub__(self, other: "LocalRingElem") -> "LocalRingElem":
        self._check(other)
        K = min(self.K, other.K)
        out = LocalRingElem(self.p, self.B, K, ())
        out.parts = tuple(out._binop_parts(a, b, -1) for a, b in zip(self.parts, other.parts))
        return out

    def scale(self, c: int, shift: int = 0) -> "LocalRingElem":
        """Multiply by p^shift * c with c an integer (p-adic unit or not)."""
        mod = self.p ** self.K
        parts = tuple(None if q is None else (q[0] + shift, tuple((c * a) % mod for a in q[1]))
                      for q in self.parts)
        return LocalRingElem(self.p, self.B, self.K, parts)

    @classmethod
    def zero(cls, p: int, B: int, K: int) -> "LocalRingElem":
        return cls(p, B, K, (None, None))

    def __repr__(self):
        return f"LocalRingElem(p={self.p}, B={self.B}, K={self.K}, parts={self.parts})"


def needs_sqrt_substitution(x: CycScalar) -> bool:
    if not x.has_u():
        return False
    _, B = split_modulus(x.p, x.N)
    return x.p == 2 or (x.p % 4 == 1 and B >= 1)


def sqrt_p_cyclotomic(p: int) -> CycScalar:
    """A square root of p inside Q(zeta_M): quadratic Gauss sum (p = 1 mod 4) or zeta_8 + zeta_8^-1."""
    if p == 2:
        return CycScalar.zeta(2, 8, 1) + CycScalar.zeta(2, 8, 7)
    if p % 4 != 1:
        raise ValueError("sqrt(p) is not in Q(zeta_{d p^B}) for p = 3 mod 4")
    g = CycScalar.rational(p, 0)
    for a in range(1, p):
        g = g + CycScalar.zeta(p, p, a) * int(sympy.legendre_symbol(a, p))
    return g


def substitute_sqrt(x: CycScalar) -> CycScalar:
    s = sqrt_p_cyclotomic(x.p)
    c0 = CycScalar(x.p, x.N, x.c0, [0], x.den, reduced=True)
    c1 = CycScalar(x.p, x.N, x.c1, [0], x.den, reduced=True)
    return c0 + c1 * s


def padic_ord(x: CycScalar, K: int = 24, K_max: int = 2048):
    """Valuation of the fixed p-adic embedding of x, normalised so ord(p) = 1."""
    if x.is_zero():
        return INF
    if needs_sqrt_substitution(x) and substitute_sqrt(x).is_zero():
        return INF
    while K <= K_max:
        try:
            return LocalRingElem.from_scalar(x, K).valuation()
        except PrecisionError:
            K *= 2
    raise PrecisionError("raise precision")
