"""Exact coefficients for a few copula models.

Run: python demos/01_exact_values.py
"""
from medialcorr import (
    BlockCompose, Comonotone, Gumbel, MarshallOlkin, Product,
    beta_IJ, build_orthant_table, coefficients_from_table,
    gumbel_beta_closed_form, mo_product_beta_closed_form,
)

# Independence gives 0 and perfect positive dependence gives 1, in any dimension.
for d in (2, 5, 10):
    b0 = coefficients_from_table(build_orthant_table(Product(d))).beta
    b1 = coefficients_from_table(build_orthant_table(Comonotone(d))).beta
    print(f"d={d:2d}  product {b0:+.3f}  comonotone {b1:+.3f}")

# Gumbel family: the orthant table route agrees with the closed form.
print("\nGumbel, d=4")
for delta in (0.2, 0.5, 0.8, 1.0):
    rep = coefficients_from_table(build_orthant_table(Gumbel(4, delta)))
    print(f"  delta={delta:.1f}  beta={rep.beta:.6f}  closed form={gumbel_beta_closed_form(4, delta):.6f}"
          f"  beta*={rep.beta_star:.6f}  pairwise={rep.beta_pairwise_avg:.6f}")

# Two independent Marshall-Olkin pairs, one with parameter delta and one with alpha.
print("\nMarshall-Olkin product")
for delta, alpha in [(0.0, 0.0), (0.6, 0.3), (1.0, 1.0)]:
    model = BlockCompose([MarshallOlkin(delta, 1.0), MarshallOlkin(alpha, 1.0)])
    table = build_orthant_table(model)
    print(f"  delta={delta} alpha={alpha}  beta={coefficients_from_table(table).beta:.6f}"
          f"  closed form={mo_product_beta_closed_form(delta, alpha):.6f}"
          f"  beta_IJ({{1,2}},{{3,4}})={beta_IJ(table, [0, 1], [2, 3]):.6f}")
