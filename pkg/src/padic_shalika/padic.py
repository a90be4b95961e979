"""Truncated p-adic numbers and matrices over Q_p."""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

INF = math.inf
DEFAULT_PRECISION = 12


def vp(a: int, p: int) -> int:
    """Valuation of a nonzero integer."""
    if a == 0:
        raise ValueError("valuation of 0 is infinite")
    v = 0
    while a % p == 0:
        a //= p
        v += 1
    return v


@dataclass(frozen=True)
class PAdicNum:
    """p^val * unit, with unit known modulo p^K.

    K counts significant digits. Zero is stored as val = inf, and its K is the
    absolute precision (x is known to be 0 mod p^K).
    """

    p: int
    val: float | int
    unit: int
    K: int = DEFAULT_PRECISION

    def __post_init__(self):
        if self.val != INF and self.unit % self.p == 0:
            raise ValueError("unit part must be prime to p")

    @classmethod
    def from_rational(cls, p: int, x, K: int = DEFAULT_PRECISION) -> "PAdicNum":
        x = Fraction(x)
        if x == 0:
            return cls.zero(p, K)
        a, b = x.numerator, x.denominator
        va, vb = vp(a, p), vp(b, p)
        a //= p ** va
        b //= p ** vb
        mod = p ** K
        return cls(p, va - vb, (a * pow(b, -1, mod)) % mod, K)

    @classmethod
    def zero(cls, p: int, K: int = DEFAULT_PRECISION) -> "PAdicNum":
        return cls(p, INF, 0, K)

    def is_zero(self) -> bool:
        return self.val == INF

    @property
    def abs_prec(self) -> float | int:
        """x is known modulo p^abs_prec."""
        return self.K if self.is_zero() else self.val + self.K

    def valuation(self):
        return self.val

    def norm(self) -> Fraction:
        return Fraction(0) if self.is_zero() else Fraction(self.p) ** (-self.val)

    def to_fraction(self) -> Fraction:
        """Representative with unit in [0, p^K)."""
        if self.is_zero():
            return Fraction(0)
        return Fraction(self.unit) * Fraction(self.p) ** self.val

    def residue(self, k: int) -> Fraction:
        """Rational representative of the class of x in Q_p / p^k Z_p."""
        if self.abs_prec < k:
            raise ValueError("insufficient precision")
        if self.is_zero() or self.val >= k:
            return Fraction(0)
        shift = k - self.val
        return Fraction(self.unit % self.p ** shift) * Fraction(self.p) ** self.val

    def _co(self, other) -> "PAdicNum":
        if isinstance(other, PAdicNum):
            if other.p != self.p:
                raise ValueError("mixing primes")
            return other
        return PAdicNum.from_rational(self.p, other, self.K)

    def __add__(self, other):
        other = self._co(other)
        if self.is_zero():
            return other if other.abs_prec <= self.abs_prec else _rezero_or_trunc(other, self.abs_prec)
        if other.is_zero():
            return self if self.abs_prec <= other.abs_prec else _rezero_or_trunc(self, other.abs_prec)
        absprec = min(self.abs_prec, other.abs_prec)
        v = min(self.val, other.val)
        K = absprec - v
        mod = self.p ** K
        total = (self.unit * self.p ** (self.val - v) + other.unit * self.p ** (other.val - v)) % mod
        if total == 0:
            return PAdicNum.zero(self.p, absprec)
        w = vp(total, self.p)
        return PAdicNum(self.p, v + w, (total // self.p ** w) % self.p ** (K - w), K - w)

    __radd__ = __add__

    def __neg__(self):
        if self.is_zero():
            return self
        return PAdicNum(self.p, self.val, (-self.unit) % self.p ** self.K, self.K)

    def __sub__(self, other):
        return self + (-self._co(other))

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        other = self._co(other)
        if self.is_zero() or other.is_zero():
            z, o = (self, other) if self.is_zero() else (other, self)
            ap = z.abs_prec + (o.val if not o.is_zero() else z.abs_prec)
            return PAdicNum.zero(self.p, ap)
        K = min(self.K, other.K)
        return PAdicNum(self.p, self.val + other.val, (self.unit * other.unit) % self.p ** K, K)

    __rmul__ = __mul__

    def inverse(self) -> "PAdicNum":
        if self.is_zero():
            raise ZeroDivisionError("inversion of p-adic zero")
        mod = self.p ** self.K
        return PAdicNum(self.p, -self.val, pow(self.unit, -1, mod), self.K)

    def __truediv__(self, other):
        return self * self._co(other).inverse()

    def __rtruediv__(self, other):
        return self._co(other) * self.inverse()

    def __pow__(self, k: int):
        if k < 0:
            return self.inverse() ** (-k)
        out = PAdicNum.from_rational(self.p, 1, self.K)
        for _ in range(k):
            out = out * self
        return out

    def eq_mod(self, other, k: int) -> bool:
        """Congruence modulo p^k."""
        d = self - self._co(other)
        return d.is_zero() and d.abs_prec >= k or (not d.is_zero() and d.val >= k)

    def __eq__(self, other):
        """Equality at the common precision."""
        if not isinstance(other, (PAdicNum, int, Fraction)):
            return NotImplemented
        return (self - self._co(other)).is_zero()

    __hash__ = None

    def __repr__(self):
        if self.is_zero():
            return f"O({self.p}^{self.K})"
        return f"{self.p}^{self.val}*{self.unit} + O({self.p}^{self.val + self.K})"


def _rezero_or_trunc(x: PAdicNum, absprec) -> PAdicNum:
    if x.is_zero():
        return PAdicNum.zero(x.p, min(x.K, absprec))
    if x.val >= absprec:
        return PAdicNum.zero(x.p, absprec)
    K = absprec - x.val
    return PAdicNum(x.p, x.val, x.unit % x.p ** K, K)


def padic(p: int, x, K: int = DEFAULT_PRECISION) -> PAdicNum:
    if isinstance(x, PAdicNum):
        return x
    return PAdicNum.from_rational(p, x, K)


def valuation(x: PAdicNum):
    return x.val


class PAdicMatrix:
    """Square matrix of PAdicNum entries."""

    __slots__ = ("p", "n", "rows")

    def __init__(self, p: int, rows: Sequence[Sequence], K: int = DEFAULT_PRECISION):
        self.p = p
        self.rows = tuple(tuple(padic(p, x, K) for x in row) for row in rows)
        self.n = len(self.rows)
        if any(len(r) != self.n for r in self.rows):
            raise ValueError("matrix must be square")

    @classmethod
    def identity(cls, p: int, n: int, K: int = DEFAULT_PRECISION) -> "PAdicMatrix":
        return cls(p, [[1 if i == j else 0 for j in range(n)] for i in range(n)], K)

    @classmethod
    def diag(cls, p: int, entries: Sequence, K: int = DEFAULT_PRECISION) -> "PAdicMatrix":
        n = len(entries)
        return cls(p, [[entries[i] if i == j else 0 for j in range(n)] for i in range(n)], K)

    @classmethod
    def blocks(cls, a: "PAdicMatrix", b: "PAdicMatrix", c: "PAdicMatrix", d: "PAdicMatrix") -> "PAdicMatrix":
        rows = [list(ra) + list(rb) for ra, rb in zip(a.rows, b.rows)]
        rows += [list(rc) + list(rd) for rc, rd in zip(c.rows, d.rows)]
        return cls(a.p, rows)

    def block(self, i: int, j: int, size: int) -> "PAdicMatrix":
        return PAdicMatrix(self.p, [r[j * size:(j + 1) * size] for r in self.rows[i * size:(i + 1) * size]])

    def __getitem__(self, ij):
        i, j = ij
        return self.rows[i][j]

    def __mul__(self, other):
        if isinstance(other, PAdicMatrix):
            n = self.n
            rows = []
            for i in range(n):
                row = []
                for j in range(n):
                    acc = self.rows[i][0] * other.rows[0][j]
                    for k in range(1, n):
                        acc = acc + self.rows[i][k] * other.rows[k][j]
                    row.append(acc)
                rows.append(row)
            return PAdicMatrix(self.p, rows)
        s = padic(self.p, other)
        return PAdicMatrix(self.p, [[s * x for x in r] for r in self.rows])

    def __rmul__(self, other):
        s = padic(self.p, other)
        return PAdicMatrix(self.p, [[s * x for x in r] for r in self.rows])

    def __add__(self, other: "PAdicMatrix"):
        return PAdicMatrix(self.p, [[x + y for x, y in zip(r, s)] for r, s in zip(self.rows, other.rows)])

    def __neg__(self):
        return PAdicMatrix(self.p, [[-x for x in r] for r in self.rows])

    def __sub__(self, other: "PAdicMatrix"):
        return self + (-other)

    def __eq__(self, other):
        if not isinstance(other, PAdicMatrix):
            return NotImplemented
        return self.n == other.n and all(x == y for r, s in zip(self.rows, other.rows) for x, y in zip(r, s))

    __hash__ = None

    def transpose(self) -> "PAdicMatrix":
        return PAdicMatrix(self.p, list(zip(*self.rows)))

    def det(self) -> PAdicNum:
        """Determinant by cofactor expansion (n is tiny here)."""
        return _det(self.rows)

    def inverse(self) -> "PAdicMatrix":
        """Gauss-Jordan with minimal-valuation pivots."""
        n, p = self.n, self.p
        K = self.precision()
        a = [list(r) + [padic(p, 1 if i == j else 0, K) for j in range(n)] for i, r in enumerate(self.rows)]
        for col in range(n):
            piv = min(range(col, n), key=lambda r: (a[r][col].val, r))
            if a[piv][col].is_zero():
                raise ZeroDivisionError("matrix is singular to working precision")
            a[col], a[piv] = a[piv], a[col]
            inv = a[col][col].inverse()
            a[col] = [x * inv for x in a[col]]
            for r in range(n):
                if r != col and not a[r][col].is_zero():
                    f = a[r][col]
                    a[r] = [x - f * y for x, y in zip(a[r], a[col])]
        return PAdicMatrix(p, [r[n:] for r in a])

    def precision(self) -> int:
        """Largest relative precision among the entries; used for exact constants."""
        return max(x.K for r in self.rows for x in r)

    def is_integral(self) -> bool:
        return all(x.is_zero() or x.val >= 0 for r in self.rows for x in r)

    def in_gl_zp(self) -> bool:
        return self.is_integral() and self.det().val == 0

    def in_congruence_subgroup(self, m: int) -> bool:
        """Membership in K^{(m)} = {k in GL_n(Z_p) : k = 1 mod p^m}."""
        if not self.in_gl_zp():
            return False
        one = PAdicMatrix.identity(self.p, self.n, self.precision())
        d = self - one
        return all(x.is_zero() or x.val >= m for r in d.rows for x in r)

    def entry_valuations(self):
        return [[x.val for x in r] for r in self.rows]

    def to_fractions(self):
        return [[x.to_fraction() for x in r] for r in self.rows]

    def __repr__(self):
        return f"PAdicMatrix(p={self.p}, {self.to_fractions()})"


def _det(rows) -> PAdicNum:
    n = len(rows)
    if n == 1:
        return rows[0][0]
    if n == 2:
        return rows[0][0] * rows[1][1] - rows[0][1] * rows[1][0]
    acc = None
    for j in range(n):
        minor = [r[:j] + r[j + 1:] for r in rows[1:]]
        term = rows[0][j] * _det(minor)
        if j % 2:
            term = -term
        acc = term if acc is None else acc + term
    return acc


def matrix_order(a: PAdicMatrix):
    """Minimum entry valuation."""
    vals = [x.val for r in a.rows for x in r if not x.is_zero()]
    if not vals:
        raise ValueError("undefined order")
    return min(vals)


def iwasawa_decompose(g: PAdicMatrix) -> tuple[PAdicMatrix, PAdicMatrix]:
    """g = b * k with b upper triangular (diagonal entries p^v) and k in GL_n(Z_p).

    Works bottom row upward: the pivot of row i is the entry of least valuation
    among the not-yet-used columns (ties to the smallest index); integral column
    operations clear the rest of the row, and the pivot column is moved to
    position i.  Column operations act as g -> g * E, so k accumulates E^{-1}.
    """
    p, n = g.p, g.n
    K = g.precision()
    one = padic(p, 1, K)
    zero = padic(p, 0, K)
    a = [list(r) for r in g.rows]
    k = [[one if i == j else zero for j in range(n)] for i in range(n)]  # k = E^{-1}, as rows

    def col_swap(i, j):
        for r in a:
            r[i], r[j] = r[j], r[i]
        k[i], k[j] = k[j], k[i]

    def col_axpy(dst, src, f):
        # column dst -= f * column src;  k: row src += f * row dst
        for r in a:
            r[dst] = r[dst] - f * r[src]
        k[src] = [x + f * y for x, y in zip(k[src], k[dst])]

    def col_scale(c, unit):
        for r in a:
            r[c] = r[c] * unit
        inv = unit.inverse()
        k[c] = [x * inv for x in k[c]]

    for i in range(n - 1, -1, -1):
        row = a[i]
        cand = [j for j in range(i + 1) if not row[j].is_zero()]
        if not cand:
            raise ArithmeticError("precision exhausted")
        piv = min(cand, key=lambda j: (row[j].val, j))
        for j in range(i + 1):
            if j != piv and not row[j].is_zero():
                col_axpy(j, piv, row[j] / row[piv])
        if piv != i:
            col_swap(piv, i)
        u = PAdicNum(p, 0, a[i][i].unit, a[i][i].K)
        col_scale(i, u.inverse())
    b = PAdicMatrix(p, a)
    kk = PAdicMatrix(p, k)
    return b, kk
