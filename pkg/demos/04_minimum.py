"""The smallest value the coefficient can take.

A countermonotone pair followed by a comonotone block reaches -1/d for
d >= 3. In two dimensions the same idea is just the countermonotone pair,
whose value is -1: the bivariate coefficient has the full range [-1, 1].

Run: python demos/04_minimum.py
"""
from medialcorr.orthant import build_orthant_table, coefficients_from_table
from medialcorr.validation import minimum_attaining

for d in range(2, 9):
    b = coefficients_from_table(build_orthant_table(minimum_attaining(d))).beta
    print(f"d={d}  beta={b:+.6f}  -1/d={-1 / d:+.6f}")
