"""Brute-force evaluation of the local Shalika distribution.

Every integral here is of the form

    int_{A H} 1_G(X) rho_2(X) chi(det X) |det X|^(s-1/2) psi^-1(tr X) dX

with dX the self-dual additive measure (vol M_n(Z_p) = 1) and H one of
K = GL_n(Z_p), its congruence subgroups K^(m), or Iwahori subgroups I^(m).
Since rho_2 is right K-invariant,

    int_{A H} ... dX = rho_2(A) chi(det A) |det A|^(s-1/2+n) int_H chi(det k) psi^-1(tr(A k)) dk,

and the last integral is a finite character sum once k is read modulo p^depth.
"""
from __future__ import annotations

import cmath
import itertools
import math
import time
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from typing import Sequence

import numpy as np

from .chars import AddChar, MultChar, trivial_char
from .euler import PSI_INV_SIGN, euler_closed, p_power, tau
from .padic import PAdicMatrix, matrix_order, padic
from .reps import (PSData, Stabilization, TestFunction, delta_eval, open_cell_element, satake,
                   spherical_eval)
from .scalar import CycScalar, as_scalar, complex_embed


class GuardViolation(ValueError):
    pass


class TruncationError(ValueError):
    pass


@dataclass(frozen=True)
class Truncation:
    """L: residue precision; T: ceiling for the diagonal exponents; tol: complex tolerance."""

    L: int = 2
    T: int = 30
    tol: float = 1e-9

    def depth(self, m: int) -> int:
        return max(self.L - 1, m, 1)


@dataclass
class OracleResult:
    value: object  # CycScalar when exact, complex otherwise
    exact: bool
    tail_bound: float = 0.0
    truncated: CycScalar | None = None
    elapsed_ms: float = 0.0

    def as_complex(self) -> complex:
        return complex_embed(self.value) if self.exact else complex(self.value)


# ---------------------------------------------------------------- subgroup enumeration

@lru_cache(maxsize=None)
def subgroup_residues(p: int, n: int, kind: str, m: int, depth: int) -> np.ndarray:
    """Rows (k_11, k_12, ..., k_nn) of H modulo p^depth.

    kind "K": GL_n(Z_p); "Kc": K^(m); "I": Iwahori, upper triangular mod p^m.
    """
    P = p ** depth
    if kind == "Kc":
        step = p ** m
        free = np.arange(p ** (depth - m), dtype=np.int64) * step
        grids = np.meshgrid(*([free] * (n * n)), indexing="ij")
        rows = np.stack([g.ravel() for g in grids], axis=1)
        for i in range(n):
            rows[:, i * n + i] += 1
        return rows % P
    vals = np.arange(P, dtype=np.int64)
    grids = np.meshgrid(*([vals] * (n * n)), indexing="ij")
    rows = np.stack([g.ravel() for g in grids], axis=1)
    det = _det_rows(rows, n, P)
    keep = det % p != 0
    if kind == "I":
        for i in range(n):
            for j in range(i):
                keep &= rows[:, i * n + j] % (p ** m) == 0
    elif kind != "K":
        raise ValueError(f"unknown subgroup kind {kind}")
    out = rows[keep]
    out.setflags(write=False)
    return out


def _det_rows(rows: np.ndarray, n: int, P: int) -> np.ndarray:
    if n == 1:
        return rows[:, 0] % P
    if n == 2:
        return (rows[:, 0] * rows[:, 3] - rows[:, 1] * rows[:, 2]) % P
    raise ValueError("only n <= 2 is supported by the oracle")


@lru_cache(maxsize=None)
def _det_exponents(p: int, n: int, kind: str, m: int, depth: int, chi_key: tuple) -> np.ndarray:
    rows = subgroup_residues(p, n, kind, m, depth)
    cm, t, w = chi_key
    chi = MultChar(p, cm, t, w)
    det = _det_rows(rows, n, p ** depth)
    table = chi.exponent_table()
    return table[det % len(table)] if cm else np.zeros(len(rows), dtype=np.int64)


def scaled_residue(x, depth: int, p: int) -> int:
    """x * p^depth modulo p^depth, for x with valuation >= -depth."""
    x = padic(p, x)
    if x.is_zero() or x.val >= 0:
        return 0
    if x.val < -depth:
        raise TruncationError("entry below the truncation depth")
    return (x.unit * p ** (x.val + depth)) % p ** depth


class CharacterSum:
    """sum over k in H mod p^depth of chi(det k) psi^-1(tr(A k)), memoized on A mod M_n(Z_p)."""

    def __init__(self, p: int, n: int, chi: MultChar, kind: str = "K", m: int = 0, depth: int = 1):
        if depth < chi.m:
            raise TruncationError("depth below the conductor exponent")
        self.p, self.n, self.chi, self.kind, self.m, self.depth = p, n, chi, kind, m, depth
        self.P = p ** depth
        self.rows = subgroup_residues(p, n, kind, m, depth)
        self.M = chi.N * self.P // math.gcd(chi.N, self.P)
        dexp = _det_exponents(p, n, kind, m, depth, chi.key())
        self._chi_part = (dexp * (self.M // chi.N)) % self.M
        self._cache: dict = {}

    def key_of(self, A: PAdicMatrix) -> tuple:
        return tuple(scaled_residue(A[i, j], self.depth, self.p) for i in range(self.n) for j in range(self.n))

    def counts(self, key: tuple) -> np.ndarray:
        hit = self._cache.get(key)
        if hit is not None:
            return hit
        n, P = self.n, self.P
        tr = np.zeros(len(self.rows), dtype=np.int64)
        for i in range(n):
            for j in range(n):
                a = key[i * n + j]
                if a:
                    tr += a * self.rows[:, j * n + i]
        expo = (self._chi_part + PSI_INV_SIGN * (tr % P) * (self.M // P)) % self.M
        out = np.bincount(expo, minlength=self.M)
        self._cache[key] = out
        return out

    def value(self, key: tuple) -> CycScalar:
        """The integral over H (additive measure), i.e. the sum times p^(-n^2 depth)."""
        return CycScalar.from_counts(self.p, self.M, self.counts(key).tolist(),
                                     self.p ** (self.n * self.n * self.depth))


def coset_integral(stab: Stabilization, A: PAdicMatrix, chi: MultChar, kind: str = "K", m: int = 0,
                   s=Fraction(1, 2), depth: int | None = None) -> CycScalar:
    """int over A H of rho_2 chi(det) |det|^(s-1/2) psi^-1(tr) dX, exactly."""
    p, n = stab.p, stab.n
    if depth is None:
        depth = max(m, chi.m, 1, -matrix_order(A))
    summer = CharacterSum(p, n, chi, kind, m, depth)
    inner = summer.value(summer.key_of(A))
    det = A.det()
    weight = spherical_eval(stab.half2, A) * chi(det) * p_power(p, -(Fraction(s) - Fraction(1, 2) + n) * det.val)
    return weight * inner


# ---------------------------------------------------------------- Euler factor by shells

def _shell_weight(alphas2: Sequence[CycScalar], chi_p: CycScalar, r: Sequence[int], n: int, s) -> CycScalar:
    p = chi_p.p
    w = CycScalar.rational(p, 1)
    for a, ri in zip(alphas2, r):
        if ri:
            w = w * a ** ri
    total = sum(r)
    if total:
        w = w * chi_p ** total * p_power(p, -(Fraction(s) - Fraction(1, 2) + n) * total)
    return w


def _representatives(p: int, n: int, r: Sequence[int], depth: int):
    """Yield (key, multiplicity) for Iwasawa representatives b with diagonal p^r.

    The key is b * p^depth mod p^depth, entrywise.  For n = 2 the upper-right
    entry x runs over p^-depth Z_p / p^r1 Z_p.
    """
    P = p ** depth

    def diag_key(ri):
        return (p ** (ri + depth)) % P if ri < 0 else 0

    if n == 1:
        yield (diag_key(r[0]),), 1
        return
    r1, r2 = r
    if r1 < 0:
        count, mult = p ** (r1 + depth), 1
    else:
        count, mult = P, p ** r1
    for j in range(count):
        yield (diag_key(r1), j % P, 0, diag_key(r2)), mult


def convergence_ratios(stab: Stabilization, chi: MultChar, s=Fraction(1, 2)) -> list[float]:
    """|beta_{n+i} chi(p) p^(-s)| for i = 1..n (complex absolute values)."""
    n = stab.n
    beta = satake(stab.ordered)
    chi_p = chi.at_p
    return [abs(complex_embed(beta[n + i] * chi_p * p_power(stab.p, -Fraction(s)))) for i in range(n)]


def euler_bruteforce(stab: Stabilization, chi: MultChar, s=Fraction(1, 2), trunc: Truncation = Truncation(),
                     guard: float = 0.5) -> OracleResult:
    """Shell-by-shell evaluation of E(Theta, chi, s).

    Ramified chi: exact CycScalar (all shells with some r_i > 0 vanish).
    Unramified chi: complex value of the truncated sum plus a geometric tail bound.
    """
    t0 = time.perf_counter()
    p, n = stab.p, stab.n
    if n not in (1, 2):
        raise ValueError("the oracle supports n = 1, 2")
    s = Fraction(s)
    depth = trunc.depth(chi.m)
    ramified = chi.m >= 1
    if not ramified:
        ratios = convergence_ratios(stab, chi, s)
        if any(r > guard for r in ratios):
            raise GuardViolation(f"convergence guard violated: ratios {ratios} exceed {guard}")
    if trunc.T < 1:
        raise TruncationError("T must be at least 1")
    summer = CharacterSum(p, n, chi, "K", 0, depth)
    alphas2 = stab.half2.alphas
    total = CycScalar.rational(p, 0)
    edge = [0.0] * n
    for r in itertools.product(range(-depth, trunc.T + 1), repeat=n):
        shell = CycScalar.rational(p, 0)
        for key, mult in _representatives(p, n, r, depth):
            shell = shell + summer.value(key) * mult
        if shell.is_zero():
            continue
        shell = shell * _shell_weight(alphas2, chi.at_p, r, n, s)
        total = total + shell
        if not ramified:
            mag = abs(complex_embed(shell))
            for i in range(n):
                if r[i] == trunc.T:
                    edge[i] += mag
    elapsed = (time.perf_counter() - t0) * 1000
    if ramified:
        return OracleResult(total, True, 0.0, total, elapsed)
    bound = 0.0
    for i in range(n):
        rest = 1.0
        for j in range(n):
            if j != i:
                rest /= 1 - ratios[j]
        bound += ratios[i] / (1 - ratios[i]) * edge[i] * rest
    return OracleResult(complex_embed(total), False, bound, total, elapsed)


def determine_constant(stab: Stabilization, trunc: Truncation = Truncation(), reference: MultChar | None = None,
                       s=Fraction(1, 2)) -> CycScalar:
    """Ratio of the brute-force value to the closed form at a ramified reference character."""
    if reference is None:
        reference = default_reference_character(stab.p)
    got = euler_bruteforce(stab, reference, s, trunc)
    c = got.value / euler_closed(stab, reference, s)
    if not c.is_rational():
        raise AssertionError(f"constant is not rational: {c}")
    if c.is_zero():
        raise AssertionError("constant vanished")
    return c


def default_reference_character(p: int) -> MultChar:
    from .chars import all_characters
    m = 2 if p == 2 else 1
    return all_characters(p, m)[0]


# ---------------------------------------------------------------- vanishing statements

def mu_integral(stab: Stabilization, A: PAdicMatrix, m: int, chi: MultChar | None = None,
                kind: str = "Kc", depth: int | None = None) -> CycScalar:
    """int over A K^(m) (kind "Kc"), A K (kind "K", m ignored) or A I^(m) (kind "I") of chi(det) dmu."""
    chi = chi if chi is not None else trivial_char(stab.p)
    if kind == "K":
        m = 0
    return coset_integral(stab, A, chi, kind, m, Fraction(1, 2), depth)


def verify_vanish(stab: Stabilization, A: PAdicMatrix, m: int) -> bool:
    """int_{A K^(m)} dmu = 0 when 1 <= m < -ord(A)."""
    if not 1 <= m < -matrix_order(A):
        raise ValueError("precondition 1 <= m < -ord(A) fails")
    return mu_integral(stab, A, m).is_zero()


def verify_vanish2(stab: Stabilization, A: PAdicMatrix, chi: MultChar) -> bool:
    """int (chi o det) 1_{A K} dmu = 0 when ord(A) < -max(m, 1)."""
    if not matrix_order(A) < -max(chi.m, 1):
        raise ValueError("precondition ord(A) < -max(m, 1) fails")
    return mu_integral(stab, A, 0, chi, "K").is_zero()


def verify_gauss_lemma(stab: Stabilization, A: PAdicMatrix, chi: MultChar) -> bool:
    """int (chi o det) 1_{A K} dmu = 0 when chi is ramified and ord(A) > -m."""
    if chi.m < 1 or not matrix_order(A) > -chi.m:
        raise ValueError("precondition m >= 1 and ord(A) > -m fails")
    return mu_integral(stab, A, 0, chi, "K", depth=max(chi.m, 1, -matrix_order(A))).is_zero()


def diagonal_power(p: int, r: Sequence[int], K: int = 40) -> PAdicMatrix:
    return PAdicMatrix.diag(p, [Fraction(p) ** ri for ri in r], K)


def cond_formula(stab: Stabilization, chi: MultChar) -> CycScalar:
    """tau(chi)^n (alpha p^((n-n^2)/2))^-m p^((n^2+n)/2)."""
    p, n, m = stab.p, stab.n, chi.m
    base = stab.alpha_theta * p_power(p, Fraction(n - n * n, 2))
    return tau(chi) ** n * base ** (-m) * p_power(p, Fraction(n * n + n, 2))


def verify_cond(stab: Stabilization, r: Sequence[int], chi: MultChar, constant: CycScalar | None = None):
    """int (chi o det) 1_{T_r I^(m)} dmu.

    Returns (value, ok): for r = (-m, ..., -m) ok compares value / formula with
    constant (or just checks the ratio is a nonzero rational when constant is
    None); otherwise ok means the value is exactly 0.
    """
    p, m = stab.p, chi.m
    if m < 1:
        raise ValueError("Iwahori statement needs a ramified character")
    A = diagonal_power(p, r)
    depth = max(m, 1, -min(r))
    value = mu_integral(stab, A, m, chi, "I", depth)
    if all(ri == -m for ri in r):
        ratio = value / cond_formula(stab, chi)
        if constant is None:
            ok = ratio.is_rational() and not ratio.is_zero()
        else:
            ok = ratio == constant
        return value, ok
    return value, value.is_zero()


def cond_constant(stab: Stabilization, chi: MultChar) -> CycScalar:
    m = chi.m
    value, _ = verify_cond(stab, [-m] * stab.n, chi)
    return value / cond_formula(stab, chi)


# ---------------------------------------------------------------- twisting

def twisted_bruteforce(stab: Stabilization, chi_prime: MultChar, chi: MultChar, s=Fraction(1, 2),
                       trunc: Truncation = Truncation()) -> OracleResult:
    """Oracle for Theta twisted by chi': integrand rho_2 chi'(det) chi(det), with separate character tables."""
    p, n = stab.p, stab.n
    depth = max(trunc.depth(max(chi.m, chi_prime.m)), chi.m, chi_prime.m)
    s = Fraction(s)
    s1 = CharacterSum(p, n, chi, "K", 0, depth)
    s2 = CharacterSum(p, n, chi_prime, "K", 0, depth)
    # combine the two determinant tables on a common root-of-unity order
    M = math.lcm(s1.M, s2.M)
    chi_part = (s1._chi_part * (M // s1.M) + s2._chi_part * (M // s2.M)) % M
    rows = s1.rows
    P = s1.P
    at_p = chi.at_p * chi_prime.at_p
    alphas2 = stab.half2.alphas
    total = CycScalar.rational(p, 0)
    cache: dict = {}
    for r in itertools.product(range(-depth, trunc.T + 1), repeat=n):
        shell = CycScalar.rational(p, 0)
        for key, mult in _representatives(p, n, r, depth):
            if key not in cache:
                tr = np.zeros(len(rows), dtype=np.int64)
                for i in range(n):
                    for j in range(n):
                        a = key[i * n + j]
                        if a:
                            tr += a * rows[:, j * n + i]
                expo = (chi_part + PSI_INV_SIGN * (tr % P) * (M // P)) % M
                cache[key] = CycScalar.from_counts(p, M, np.bincount(expo, minlength=M).tolist(),
                                                   p ** (n * n * depth))
            shell = shell + cache[key] * mult
        if not shell.is_zero():
            total = total + shell * _shell_weight(alphas2, at_p, r, n, s)
    return OracleResult(total, True, 0.0, total)


def verify_twist(stab: Stabilization, chi_prime: MultChar, chi: MultChar, s=Fraction(1, 2),
                 trunc: Truncation = Truncation()) -> bool:
    """E(Theta (x) chi', chi, s) = E(Theta, chi' chi, s), both sides by brute force."""
    xi = chi_prime * chi
    if xi.m == 0:
        raise ValueError("product character is unramified; compare numerically instead")
    lhs = twisted_bruteforce(stab, chi_prime, chi, s, trunc).value
    rhs = euler_bruteforce(stab, xi, s, Truncation(max(trunc.L, xi.m + 1), trunc.T, trunc.tol)).value
    return lhs == rhs


# ---------------------------------------------------------------- consistency checks

def conjugation_invariant(p: int, chi: MultChar, A: PAdicMatrix, k: PAdicMatrix, s=Fraction(1, 2)) -> bool:
    """chi(det X) |det X|^(s-1/2) psi^-1(tr X) is unchanged under X -> k X k^-1."""
    psi_inv = AddChar(p, PSI_INV_SIGN)

    def weight(X):
        d = X.det()
        return chi(d) * p_power(p, -(Fraction(s) - Fraction(1, 2)) * d.val) * psi_inv(_trace(X))

    return weight(A) == weight(k * A * k.inverse())


def _trace(X: PAdicMatrix):
    acc = X[0, 0]
    for i in range(1, X.n):
        acc = acc + X[i, i]
    return acc


def density_check(stab: Stabilization, a, level: int) -> bool:
    """n = 1: the closed coset integral over a U^(level) agrees with the Riemann
    sum of delta(1_{a U^(level)}) against psi^-1 over the finer cosets
    a (1 + p^level j)(1 + p^depth Z_p), each weighted by its additive volume."""
    if stab.n != 1:
        raise ValueError("density check is implemented for n = 1")
    p = stab.p
    K = 40
    A = PAdicMatrix(p, [[a]], K)
    lhs = mu_integral(stab, A, level)
    depth = max(level, 1, -matrix_order(A))
    psi_inv = AddChar(p, PSI_INV_SIGN)
    f = TestFunction.indicator(A, level)
    rhs = CycScalar.rational(p, 0)
    one = PAdicMatrix.identity(p, 1, K)
    x = padic(p, a, K)
    for j in range(p ** (depth - level)):
        point = x * (1 + p ** level * j)
        u = PAdicMatrix(p, [[point]], K)
        g = open_cell_element(one, one, one, u)
        # delta_eval returns f(u) rho_1(1) rho_2(u); weight by psi^-1(u) and the coset volume
        val = delta_eval(f, stab, g)
        if not val.is_zero():
            rhs = rhs + val * psi_inv(point) * Fraction(p) ** (-(depth + point.val))
    return lhs == rhs


def report(lemma: str, parameters: dict, expected, got, exact: bool, elapsed_ms: float) -> dict:
    def ser(v):
        if isinstance(v, CycScalar):
            return v.serialize()
        if isinstance(v, complex):
            return [v.real, v.imag]
        return v

    return {"lemma": lemma, "parameters": parameters, "expected": ser(expected), "got": ser(got),
            "exact": exact, "elapsed_ms": round(elapsed_ms, 3)}
