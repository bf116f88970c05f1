"""Estimate from a simulated sample and compare with the exact value.

Run: python demos/03_estimation.py
"""
from medialcorr import Gumbel, bootstrap_ci, build_orthant_table, coefficients_from_table, empirical_coefficients, sample
from medialcorr.io import format_table

model = Gumbel(3, 0.5)
exact = coefficients_from_table(build_orthant_table(model)).beta
print(f"exact beta for {model}: {exact:.4f}\n")

for n in (100, 1_000, 10_000, 100_000):
    est = empirical_coefficients(sample(model, n, seed=1).data)
    print(f"n={n:6d}  beta_hat={est.beta:.4f}  error={est.beta - exact:+.4f}")

data = sample(model, 500, seed=2).data
rep = empirical_coefficients(data)
ci = bootstrap_ci(data, replicates=500, level=0.9, seed=3)
print("\nn=500 sample:")
print(format_table(rep), end="")
print(f"90% bootstrap interval for beta: [{ci['beta'][0]:.3f}, {ci['beta'][1]:.3f}]")
