"""Unramified principal series on GL_2n, their stabilizations, and the delta map
from test functions on GL_n to the parabolically induced representation."""
from __future__ import annotations

import itertools
import random
import warnings
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .padic import DEFAULT_PRECISION, PAdicMatrix, iwasawa_decompose
from .scalar import CycScalar, as_scalar, padic_ord


@dataclass(frozen=True, eq=False)
class PSData:
    """Ind_B^G(chi_1, ..., chi_r) with unramified chi_i, recorded by alpha_i = chi_i(p)."""

    p: int
    alphas: tuple

    def __post_init__(self):
        al = tuple(as_scalar(self.p, a) for a in self.alphas)
        if any(a.is_zero() for a in al):
            raise ValueError("alpha_i must be nonzero")
        object.__setattr__(self, "alphas", al)

    @property
    def rank(self) -> int:
        return len(self.alphas)

    @property
    def n(self) -> int:
        return self.rank // 2

    def to_json(self) -> dict:
        return {"p": self.p, "alphas": [a.to_json() for a in self.alphas]}


def satake(ps: PSData) -> list[CycScalar]:
    """beta_i = alpha_i * p^(n-i) * sqrt(p), i = 1..2n."""
    n, p = ps.n, ps.p
    u = CycScalar.sqrt_p(p)
    return [a * Fraction(p) ** (n - i) * u for i, a in enumerate(ps.alphas, start=1)]


def shalika_compatible(ps: PSData, eta_at_p) -> bool:
    eta = as_scalar(ps.p, eta_at_p)
    r = ps.rank
    return r % 2 == 0 and all(ps.alphas[i] * ps.alphas[r - 1 - i] == eta for i in range(r))


def regularity_check(ps: PSData, eta_at_p) -> bool:
    """beta_i beta_j differs from eta(p) and eta(p)^-1 for 1 <= i < j <= n."""
    eta = as_scalar(ps.p, eta_at_p)
    eta_inv = eta.inverse()
    beta = satake(ps)
    for i, j in itertools.combinations(range(ps.n), 2):
        prod = beta[i] * beta[j]
        if prod == eta or prod == eta_inv:
            return False
    return True


@dataclass(frozen=True, eq=False)
class Stabilization:
    """A reordering of the chi_i into two blocks of size n; the second block gives alpha_theta."""

    base: PSData
    first: tuple
    second: tuple

    @property
    def n(self) -> int:
        return self.base.n

    @property
    def p(self) -> int:
        return self.base.p

    @property
    def ordered(self) -> PSData:
        return PSData(self.p, tuple(self.base.alphas[i] for i in self.first + self.second))

    @property
    def half1(self) -> PSData:
        return PSData(self.p, tuple(self.base.alphas[i] for i in self.first))

    @property
    def half2(self) -> PSData:
        return PSData(self.p, tuple(self.base.alphas[i] for i in self.second))

    @property
    def alpha_theta(self) -> CycScalar:
        out = CycScalar.rational(self.p, 1)
        for i in self.second:
            out = out * self.base.alphas[i]
        return out

    def label(self) -> str:
        return "(" + ",".join(str(i + 1) for i in self.first) + "|" + ",".join(str(i + 1) for i in self.second) + ")"


def standard_stabilization(ps: PSData) -> Stabilization:
    n = ps.n
    return Stabilization(ps, tuple(range(n)), tuple(range(n, 2 * n)))


def stabilization_from_alphas(p: int, alphas: Sequence) -> Stabilization:
    return standard_stabilization(PSData(p, tuple(alphas)))


def enumerate_stabilizations(ps: PSData) -> list[Stabilization]:
    r, n = ps.rank, ps.n
    out = []
    for second in itertools.combinations(range(r), n):
        first = tuple(i for i in range(r) if i not in second)
        out.append(Stabilization(ps, first, tuple(second)))
    return out


def alpha_of(stab: Stabilization) -> CycScalar:
    return stab.alpha_theta


def integral_check(stab: Stabilization) -> bool:
    return padic_ord(stab.alpha_theta) <= 0


def spherical_eval(half: PSData, g: PAdicMatrix) -> CycScalar:
    """Value of the K-fixed vector of Ind_B^G(chi_1..chi_n) (value 1 on K) at g."""
    b, _ = iwasawa_decompose(g)
    out = CycScalar.rational(half.p, 1)
    for i, a in enumerate(half.alphas):
        v = b[i, i].val
        if v:
            out = out * a ** v
    return out


# ---------------------------------------------------------------- test functions

@dataclass(frozen=True, eq=False)
class TestFunction:
    """sum of coeff * 1_{A K^(m)}(u + shift).

    Each term is (A, m, coeff) with A an invertible n x n PAdicMatrix, m >= 1.
    shift is an optional n x n matrix X (the additive translate X * f).
    """

    __test__ = False  # keep pytest from collecting the class

    terms: tuple
    shift: PAdicMatrix | None = None

    @classmethod
    def indicator(cls, A: PAdicMatrix, m: int, coeff=1) -> "TestFunction":
        return cls(((A, m, coeff),))

    @classmethod
    def congruence(cls, p: int, n: int, m: int, K: int = DEFAULT_PRECISION) -> "TestFunction":
        return cls.indicator(PAdicMatrix.identity(p, n, K), m)

    def __call__(self, u: PAdicMatrix):
        if self.shift is not None:
            u = u + self.shift
        total = 0
        for A, m, c in self.terms:
            if in_coset(u, A, m):
                total = total + c
        return total

    def translate(self, h1: PAdicMatrix, h2: PAdicMatrix) -> "TestFunction":
        """((h1, h2) f)(u) = f(h1^-1 u h2); requires h2 in GL_n(Z_p)."""
        if not h2.in_gl_zp():
            raise ValueError("h2 must lie in GL_n(Z_p)")
        if self.shift is not None:
            raise ValueError("translate an unshifted function")
        h2i = h2.inverse()
        return TestFunction(tuple((h1 * A * h2i, m, c) for A, m, c in self.terms))

    def add_shift(self, X: PAdicMatrix) -> "TestFunction":
        new = X if self.shift is None else self.shift + X
        return TestFunction(self.terms, new)


def in_coset(u: PAdicMatrix, A: PAdicMatrix, m: int) -> bool:
    """u in A K^(m)."""
    if u.det().is_zero():
        return False
    return (A.inverse() * u).in_congruence_subgroup(m)


def open_cell(g: PAdicMatrix, n: int):
    """Split g = [[g1, *],[0, g2]] w [[1, u],[0, 1]]; None when g is off the open cell."""
    A, B = g.block(0, 0, n), g.block(0, 1, n)
    C, D = g.block(1, 0, n), g.block(1, 1, n)
    if C.det().is_zero():
        return None
    Ci = C.inverse()
    u = Ci * D
    g1 = B - A * u
    return g1, C, u


def delta_eval(f: TestFunction, stab: Stabilization, g: PAdicMatrix, h=None) -> CycScalar:
    """Value of delta(f)(g) at the point (h1, h2): f(u) rho_1(h1 g1) rho_2(h2 g2 u)."""
    n, p = stab.n, stab.p
    zero = CycScalar.rational(p, 0)
    if h is None:
        h = (PAdicMatrix.identity(p, n, g.precision()), PAdicMatrix.identity(p, n, g.precision()))
    h1, h2 = h
    cell = open_cell(g, n)
    if cell is None:
        return zero
    g1, g2, u = cell
    if u.det().is_zero() or g1.det().is_zero():
        return zero
    fu = f(u)
    if fu == 0:
        return zero
    return as_scalar(p, fu) * spherical_eval(stab.half1, h1 * g1) * spherical_eval(stab.half2, h2 * g2 * u)


def block_diag(h1: PAdicMatrix, h2: PAdicMatrix) -> PAdicMatrix:
    n = h1.n
    z = PAdicMatrix(h1.p, [[0] * n for _ in range(n)], max(h1.precision(), h2.precision()))
    return PAdicMatrix.blocks(h1, z, z, h2)


def unipotent(X: PAdicMatrix) -> PAdicMatrix:
    n, K = X.n, X.precision()
    one = PAdicMatrix.identity(X.p, n, K)
    z = PAdicMatrix(X.p, [[0] * n for _ in range(n)], K)
    return PAdicMatrix.blocks(one, X, z, one)


def scaling_matrix(p: int, n: int, K: int = DEFAULT_PRECISION) -> PAdicMatrix:
    """[[p 1_n, (p-1) 1_n], [0, 1_n]]."""
    one = PAdicMatrix.identity(p, n, K)
    z = PAdicMatrix(p, [[0] * n for _ in range(n)], K)
    return PAdicMatrix.blocks(one * p, one * (p - 1), z, one)


def open_cell_element(g1: PAdicMatrix, x: PAdicMatrix, g2: PAdicMatrix, u: PAdicMatrix) -> PAdicMatrix:
    """[[g1, x],[0, g2]] * w * [[1, u],[0, 1]] = [[x, x u + g1],[g2, g2 u]]."""
    return PAdicMatrix.blocks(x, x * u + g1, g2, g2 * u)


# ---------------------------------------------------------------- sampled identities

def _random_matrix(rng: random.Random, p: int, n: int, K: int, lo: int = -1, hi: int = 2) -> PAdicMatrix:
    while True:
        g = PAdicMatrix(p, [[Fraction(rng.randint(-8, 8)) * Fraction(p) ** rng.randint(lo, hi)
                             for _ in range(n)] for _ in range(n)], K)
        if not g.det().is_zero():
            return g


def _random_congruence(rng: random.Random, p: int, n: int, m: int, K: int) -> PAdicMatrix:
    """Random element of K^(m) (of GL_n(Z_p) when m = 0)."""
    while True:
        g = PAdicMatrix(p, [[int(i == j) + p ** m * rng.randint(-8, 8) for j in range(n)]
                            for i in range(n)], K)
        if g.det().val == 0:
            return g


def sample_delta_identities(stab: Stabilization, identity: str, count: int, seed: int = 0,
                            K: int = 40) -> tuple[int, int, int]:
    """Check one delta identity at count random points; returns (passed, nonzero, count).

    identity is "equi" (G_n x GL_n(Z_p) equivariance), "addequi" (additive
    translate by a unipotent) or "scaling" (the alpha-scaling of 1_{K^(r)}).
    Sample points are drawn so that a good share of evaluations are nonzero.
    """
    rng = random.Random(seed)
    p, n = stab.p, stab.n
    passed = nonzero = 0
    for _ in range(count):
        g1, x, g2 = (_random_matrix(rng, p, n, K) for _ in range(3))
        hh = (_random_matrix(rng, p, n, K), _random_congruence(rng, p, n, 0, K))
        if identity == "equi":
            A, m = _random_matrix(rng, p, n, K), rng.randint(1, 2)
            h1, h2 = _random_matrix(rng, p, n, K), _random_congruence(rng, p, n, 0, K)
            u = h1 * A * _random_congruence(rng, p, n, m, K) * h2.inverse()
            g = open_cell_element(g1, x, g2, u)
            f = TestFunction.indicator(A, m)
            lhs = delta_eval(f, stab, g * block_diag(h1, h2), hh)
            rhs = delta_eval(f.translate(h1, h2), stab, g, hh)
        elif identity == "addequi":
            A, m = _random_matrix(rng, p, n, K), rng.randint(1, 2)
            X = A * PAdicMatrix(p, [[p ** m * rng.randint(-5, 5) for _ in range(n)] for _ in range(n)], K)
            g = open_cell_element(g1, x, g2, A * _random_congruence(rng, p, n, m, K))
            f = TestFunction.indicator(A, m)
            lhs = delta_eval(f.add_shift(X), stab, g, hh)
            rhs = delta_eval(f, stab, g * unipotent(X), hh)
        elif identity == "scaling":
            r = rng.randint(1, 3)
            u = _random_congruence(rng, p, n, r + 1 if rng.random() < 0.6 else r, K)
            g = open_cell_element(g1, x, g2, u)
            lhs = delta_eval(TestFunction.congruence(p, n, r, K), stab, g * scaling_matrix(p, n, K), hh)
            rhs = stab.alpha_theta * delta_eval(TestFunction.congruence(p, n, r + 1, K), stab, g, hh)
        else:
            raise ValueError(f"unknown identity {identity}")
        passed += lhs == rhs
        nonzero += not lhs.is_zero()
    return passed, nonzero, count


# ---------------------------------------------------------------- weights

@dataclass(frozen=True)
class WeightData:
    n: int
    mu: tuple
    w: int | None = None

    def __post_init__(self):
        object.__setattr__(self, "mu", tuple(int(x) for x in self.mu))
        if len(self.mu) != 2 * self.n:
            raise ValueError("mu must have 2n entries")
        if any(a < b for a, b in zip(self.mu, self.mu[1:])):
            raise ValueError("mu must be dominant (non-increasing)")


def e_al(w: WeightData) -> int:
    return sum(w.mu[: w.n])


def weakly_ordinary(stab: Stabilization, w: WeightData) -> bool:
    return padic_ord(stab.alpha_theta) + e_al(w) <= 0


def critical_points(w: WeightData) -> range:
    """Integers s with -mu_n <= s <= -mu_{n+1}; the critical points are s + 1/2."""
    return range(-w.mu[w.n - 1], -w.mu[w.n] + 1)


def purity_check(w: WeightData, weight: int | None = None) -> bool:
    mu = w.mu
    r = len(mu)
    target = mu[0] + mu[-1] if weight is None else weight
    if weight is None and w.w is not None:
        target = w.w
    return all(mu[i] + mu[r - 1 - i] == target for i in range(r))


def gl2_weight(k: int) -> WeightData:
    return WeightData(1, (0, -k), -k)


def gl2_lattice_conditions(alpha, alpha_prime, k: int, p: int) -> bool:
    """Necessary conditions for a lattice in Ind(chi_1, chi_2) (x) Sym^k dual, alpha = chi_2(p),
    alpha' = chi_1(p): alpha alpha' p^-k is a unit, alpha and p alpha' are integral."""
    a, b = as_scalar(p, alpha), as_scalar(p, alpha_prime)
    return padic_ord(a * b) == k and padic_ord(a) >= 0 and padic_ord(b) + 1 >= 0


def sym_cube_weight(k: int) -> WeightData:
    j = k - 2
    return WeightData(2, (0, -j, -2 * j, -3 * j), -3 * j)


def sym_cube_lift(alpha, alpha_prime, k: int, p: int) -> tuple[PSData, WeightData]:
    """Local data of the symmetric cube, with alpha = chi_2(p), alpha' = chi_1(p).

    alphas are (alpha'^3, alpha'^2 alpha, alpha' alpha^2, alpha^3). A warning is
    emitted when ord(alpha alpha') differs from k - 2, the value forced by a
    lattice in the weight-k local representation.
    """
    a = as_scalar(p, alpha)
    b = as_scalar(p, alpha_prime)
    prod = a * b
    if not prod.is_zero() and padic_ord(prod) != k - 2:
        warnings.warn(f"ord(alpha*alpha') = {padic_ord(prod)}, expected {k - 2}", stacklevel=2)
    ps = PSData(p, (b ** 3, b * b * a, b * a * a, a ** 3))
    return ps, sym_cube_weight(k)


def hecke_roots(a_p, k: int, p: int) -> tuple[CycScalar, CycScalar]:
    """Rational roots of X^2 - a_p X + p^(k-1), unit root first."""
    a = Fraction(a_p)
    disc = a * a - 4 * Fraction(p) ** (k - 1)
    if disc < 0:
        raise ValueError("Hecke polynomial has non-real roots; supply alpha and alpha_prime instead")
    num, den = disc.numerator, disc.denominator
    rn, rd = _isqrt_exact(num), _isqrt_exact(den)
    if rn is None or rd is None:
        raise ValueError("Hecke polynomial roots are irrational; supply alpha and alpha_prime instead")
    r = Fraction(rn, rd)
    x1, x2 = (a + r) / 2, (a - r) / 2
    r1, r2 = CycScalar.rational(p, x1), CycScalar.rational(p, x2)
    if padic_ord(r1) > padic_ord(r2):
        r1, r2 = r2, r1
    return r1, r2


def _isqrt_exact(x: int):
    import math
    r = math.isqrt(x)
    return r if r * r == x else None


def sym_cube_from_hecke(a_p, k: int, p: int) -> tuple[PSData, WeightData]:
    """Sym^3 data from a Hecke eigenvalue: chi_2(p) = unit root, chi_1(p) = other root / p."""
    unit_root, other = hecke_roots(a_p, k, p)
    return sym_cube_lift(unit_root, other * Fraction(1, p), k, p)


def sym_k_scaling_factors(stab: Stabilization, k: int) -> list[CycScalar]:
    """alpha^-1 e_l(p)^-1 for the weights e_l = -l, l = 0..k, of Sym^k on GL_2."""
    if stab.n != 1:
        raise ValueError("weight-space scaling is implemented for GL_2 only")
    inv = stab.alpha_theta.inverse()
    return [inv * Fraction(stab.p) ** l for l in range(k + 1)]


def scaling_integral(stab: Stabilization, k: int) -> bool:
    return all(padic_ord(c) >= 0 for c in sym_k_scaling_factors(stab, k))
