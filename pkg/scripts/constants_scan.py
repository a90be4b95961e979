"""Run constants of the ramified Euler factor and of the diagonal conductor integral.

    python3 scripts/constants_scan.py
"""
from fractions import Fraction

from padic_shalika.chars import all_characters
from padic_shalika.zeta import Truncation, cond_constant, determine_constant
from padic_shalika.reps import stabilization_from_alphas

RUNS = [
    (2, (Fraction(1, 3), Fraction(1, 2), 2, 3), 2),
    (3, (Fraction(1, 2), 2), 2),
    (3, (Fraction(1, 3), Fraction(1, 2), 2, 3), 1),
    (5, (Fraction(1, 2), 2), 2),
    (5, (-1, -1), 2),
    (7, (Fraction(1, 2), 2), 1),
]


def fmt(c):
    return str(c.to_fraction()) if c.is_rational() else c.serialize()


def main():
    print(f"{'p':<4}{'n':<4}{'alphas':<22}{'m':<4}{'euler constants':<26}cond constants")
    for p, alphas, m_top in RUNS:
        stab = stabilization_from_alphas(p, alphas)
        n = len(alphas) // 2
        for m in range(1, m_top + 1):
            chis = all_characters(p, m)[:3]
            if not chis:
                continue
            trunc = Truncation(m + 1, 2 if n == 1 else 1)
            euler = sorted({fmt(determine_constant(stab, trunc, chi)) for chi in chis})
            cond = sorted({fmt(cond_constant(stab, chi)) for chi in chis}) if n == 1 or p > 2 else ["-"]
            label = "(" + ",".join(str(a) for a in alphas) + ")"
            print(f"{p:<4}{n:<4}{label:<22}{m:<4}{str(euler):<26}{cond}")


if __name__ == "__main__":
    main()
