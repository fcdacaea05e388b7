#!/usr/bin/env python3
"""Independent evaluation of the closed-form exponents.

Values printed here are frozen into tests/test_bounds.cpp and the acceptance
suite.  The formulas are typed directly from the printed statements, using
exact fractions where the inputs are rational, so this script shares no code
with the C++ calculators.
"""
from fractions import Fraction as F


def thm16(a, b, g, e, k, m1=1, m2=7):
    d2 = 16 * m2 + 36 * m1
    d3 = 16 * m2 + 44 * m1
    d4 = 20 * m2 + 54 * m1
    return {
        "(m0)": (g - b) / 4,
        "M1-statement": (g + 2 * b + k * e) / 4,
        "M1-proof": (g - 2 * b + k * e) / 4,
        "(4.16)": (3 * g - 8 * b + 1 - k * (3 - g)) / d2,
        "(4.17)": (4 * g - 9 * b + 1 - k * (3 - e)) / d2,
        "(4.18)": (4 * g - 10 * b - k * (3 - g)) / d3,
        "(4.19)": (5 * g - 11 * b - k * (2 - e)) / d3,
        "(4.20)": (5 * g - 12 * b + e - k * (2 - g)) / d3,
        "(4.21)": (6 * g - 13 * b + e - k * (1 - e)) / d3,
        "(4.27)": (6 * g - 14 * b - k * (3 - g)) / d4,
        "(4.28)": (7 * g - 16 * b + e - k * (2 - g)) / d4,
        "(4.29)": (7 * g - 15 * b - k * (2 - e)) / d4,
        "(4.30)": (8 * g - 17 * b + e - k * (1 - e)) / d4,
    }


def gamma_thresholds(a, b, e, k):
    return {
        "(m0)": 2 * a - b,
        "(4.3)": 2 * a - 4 * b - k * e,
        "(4.16)": (74 * a - 66 * b - 1 + 3 * k) / (3 + k),
        "(4.17)": (74 * a - 65 * b - 1 + k * (3 - e)) / 4,
        "(4.18)": (78 * a - 68 * b + 3 * k) / (4 + k),
        "(4.19)": (78 * a - 67 * b + k * (2 - e)) / 5,
        "(4.20)": (78 * a - 66 * b - e + 2 * k) / (5 + k),
        "(4.21)": (78 * a - 65 * b - e + k * (1 - e)) / 6,
        "(4.27)": (97 * a - 83 * b + 3 * k) / (6 + k),
        "(4.28)": (97 * a - 81 * b - e + 2 * k) / (7 + k),
        "(4.29)": (97 * a - 82 * b + k * (2 - e)) / 7,
        "(4.30)": (97 * a - 80 * b - e + k * (1 - e)) / 8,
    }


def eps_range(a, b, g):
    eps = min((4 * g - 74 * a + 65 * b + 1) / 444, (6 * g - 78 * a + 66 * b) / 468)
    low = a <= (21 * b + 1) / 22
    floor = (78 * a - 66 * b) / 6 if low else (74 * a - 65 * b - 1) / 4
    return eps, "LOW" if low else "HIGH", floor, g > floor


def thm110(a, b, g):
    return (a - 3 * b - 4 * g + 2 * g * (a + b) - a * a + b * b + 2) / (2 * (3 - a - b))


def thm110_equal(a, g):
    return (-g * (4 - 4 * a) + 2 - 2 * a) / (2 * (3 - 2 * a))


def thm111(a, b, g):
    return (-6 * b - 4 * g - 2 * a * a + 4 * a + 2 * b * b + 2 + 2 * g * (a + b)) / (2 * (3 - a - b))


def dov(P, L, delta, t, C=1.0):
    return C * P * L ** (1 / (3 - t)) * delta ** ((t - 1) / (3 - t))


def show(title, d):
    print(title)
    for k, v in d.items():
        print(f"  {k:14s} {float(v)!r}  ({v})")


if __name__ == "__main__":
    show("thm16 a=b=e=0.3 g=0.9 k=0.01", thm16(F(3, 10), F(3, 10), F(9, 10), F(3, 10), F(1, 100)))
    show("thm16 specialised a=b=e=0.3 g=0.9 k=0", thm16(F(3, 10), F(3, 10), F(9, 10), F(3, 10), F(0)))
    show("gamma a=b=e=0.5 k=0", gamma_thresholds(F(1, 2), F(1, 2), F(1, 2), F(0)))
    show("gamma a=b=e=0.9 k=0", gamma_thresholds(F(9, 10), F(9, 10), F(9, 10), F(0)))
    show("gamma a=0.6 b=0.5 e=0.4 k=0.05",
         gamma_thresholds(F(3, 5), F(1, 2), F(2, 5), F(1, 20)))
    print("eps 0.4,0.4,0.9", eps_range(F(2, 5), F(2, 5), F(9, 10)), float(eps_range(F(2, 5), F(2, 5), F(9, 10))[0]))
    print("eps 0.5,0.5,1", eps_range(F(1, 2), F(1, 2), F(1)))
    print("eps 0.96,0.9,1", eps_range(F(24, 25), F(9, 10), F(1)), float(eps_range(F(24, 25), F(9, 10), F(1))[0]))
    for a, b, g in [(F(7, 10), F(7, 10), F(3, 5)), (F(3, 5), F(3, 5), F(1)), (F(4, 5), F(3, 5), F(7, 10)),
                    (F(3, 4), F(3, 4), F(1, 2)), (F(79, 100), F(79, 100), F(1, 2))]:
        print("thm110", a, b, g, float(thm110(a, b, g)), thm110(a, b, g),
              "equal-form", float(thm110_equal(a, g)) if a == b else None,
              "thm111", float(thm111(a, b, g)))
    print("dov 4096,256,2^-6,1.5", repr(dov(4096, 256, 2.0 ** -6, 1.5)))
    print("st 16,4", 4 * (16 ** (2 / 3) * 4 ** (2 / 3) + 16 + 4))
