"""More concordant on a grid, yet a smaller coefficient.

X couples a countermonotone pair with an independent pair; Y replaces the
independent pair with a comonotone one. Y dominates X in both the copula and
the survival copula at every grid point, but the coefficient of Y is lower.
The coefficient only respects the stronger ordering that compares the
orthant probabilities at the median for every coordinate against the rest.

Run: python demos/02_concordance_counterexample.py
"""
from medialcorr import parse_model, build_orthant_table, coefficients_from_table, strong_concordance_check

x = parse_model("compose:[counter | product:d=2]")
y = parse_model("compose:[counter | comonotone:d=2]")

bx = coefficients_from_table(build_orthant_table(x)).beta
by = coefficients_from_table(build_orthant_table(y)).beta
print(f"beta(X) = {bx:+.4f}")
print(f"beta(Y) = {by:+.4f}")

rep = strong_concordance_check(x, y, grid_resolution=9)
print(f"\ncopula dominance on a 9^4 grid:   {rep.grid_copula_ok}")
print(f"survival dominance on the grid:   {rep.grid_survival_ok}")
print(f"median condition for every i:     {rep.median_ok}")
for row in rep.median_detail:
    print(f"  i={row['i']}  C_X={row['C_x']:.3f}  C_Y={row['C_y']:.3f}  ok={row['ok']}")
print(f"verdict: {rep.verdict}")
