"""Boundedness floors of provider-1 towers against their closed-form prediction.

With every L-value set to 1 (n = 1, s = 0) the level-m mass at a is

    phi(p^m)^-1 [e0 + alpha^-1((p-1) psi^-1(a/p) + 1) + sum_{j=2}^m phi(p^j) psi^-1(a/p^j) alpha^-j]

with e0 = (1 - alpha_1)(1 - alpha_2^-1), alpha = alpha_2. Absent cancellation the
floor is the smallest term valuation minus ord phi(p^m) = m - 1. The table
compares that prediction with the diagnostic.

    python3 scripts/measure_floors.py --primes 3 5 --depth 3
"""
import argparse
from fractions import Fraction

from padic_shalika.euler import LValueProvider, LocalDatum
from padic_shalika.measure import boundedness_diagnostic, build_tower
from padic_shalika.reps import stabilization_from_alphas
from padic_shalika.scalar import as_scalar, padic_ord


def predicted_floor(alphas, p: int, m: int) -> Fraction:
    a1, a2 = (Fraction(a) for a in alphas)
    v = padic_ord(as_scalar(p, a2))
    terms = [-v] + [j - 1 - j * v for j in range(2, m + 1)]
    e0 = (1 - a1) * (1 - 1 / a2)
    if e0:
        terms.append(padic_ord(as_scalar(p, e0)))
    return min(terms) - (m - 1)


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--primes", type=int, nargs="+", default=[3, 5])
    ap.add_argument("--depth", type=int, default=3)
    args = ap.parse_args()
    print(f"{'p':<4}{'alphas':<14}{'ord':<5}{'floors':<28}{'predicted':<28}{'slope':<8}bounded")
    for p in args.primes:
        for alphas in ((Fraction(1, 2), 2), (2, Fraction(1, 2)), (-1, -1), (Fraction(1, p), p)):
            stab = stabilization_from_alphas(p, alphas)
            tower = build_tower([LocalDatum(stab)], 0, args.depth, LValueProvider.one(p))
            rep = boundedness_diagnostic(tower)
            v = padic_ord(stab.alpha_theta)
            pred = [predicted_floor(alphas, p, m) for m in range(1, args.depth + 1)]
            label = "(" + ",".join(str(a) for a in alphas) + ")"
            print(f"{p:<4}{label:<14}{str(v):<5}{str([str(f) for f in rep.floors]):<28}"
                  f"{str([str(f) for f in pred]):<28}{rep.slope:<8.2f}{rep.bounded}")


if __name__ == "__main__":
    main()
