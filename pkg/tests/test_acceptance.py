"""Acceptance criteria, each at its stated tolerance.

Every test records one PASS/FAIL line that is printed in the terminal
summary. Nothing here is relaxed to make a case pass: a criterion that the
mathematics does not support is left failing.
"""
import itertools
import os
import time
from pathlib import Path

import numpy as np
import pytest

from medialcorr.copulas import BlockCompose, Comonotone, CountermonotonePair, Gumbel, MarshallOlkin, Product
from medialcorr.estimator import (
    empirical_beta_exact,
    empirical_coefficients,
    empirical_orthant_table,
    pseudo_observations,
)
from medialcorr.io import CsvSpec, format_table, load_csv
from medialcorr.orthant import (
    beta_of_reflection,
    build_orthant_table,
    coefficients_from_table,
    gumbel_beta_closed_form,
    mo_product_beta_closed_form,
    representations,
    strong_concordance_check,
)
from medialcorr.sampler import sample
from medialcorr.validation import WINE_COLUMNS, WINE_TABLE, minimum_attaining, mo_product, random_models


def beta(model):
    return coefficients_from_table(build_orthant_table(model)).beta


def _wine_path():
    env = os.environ.get("MEDIALCORR_WINE_CSV")
    if env:
        return Path(env)
    return Path(__file__).resolve().parents[1] / "data" / "winequality-white.csv"


def test_c01_wine_table(record):
    path = _wine_path()
    if not path.exists():
        record("1 wine table", None, f"dataset not found at {path}")
        pytest.skip(f"white-wine dataset not found at {path}; set MEDIALCORR_WINE_CSV")
    t0 = time.perf_counter()
    data = load_csv(path, CsvSpec(";", True, WINE_COLUMNS))
    rep = empirical_coefficients(data)
    elapsed = time.perf_counter() - t0
    got = tuple(round(v, 3) + 0.0 for v in rep.components + (rep.beta,))
    ok = data.n == 4898 and got == WINE_TABLE and elapsed < 1.0
    record("1 wine table", ok, f"n={data.n}, got {got}, want {WINE_TABLE}, {elapsed:.3f} s")
    print(format_table(rep))
    assert ok


def test_c02_degenerate(record):
    worst = 0.0
    for d in range(2, 11):
        worst = max(worst, abs(beta(Product(d))), abs(beta(Comonotone(d)) - 1.0))
    ok = worst <= 1e-12
    record("2 degenerate exact values", ok, f"max error {worst:.1e} over d=2..10")
    assert ok


def test_c03_marshall_olkin_product(record):
    grid = [0.0, 0.25, 0.5, 0.75, 1.0]
    worst = 0.0
    vals = {}
    for dl, al in itertools.product(grid, grid):
        vals[dl, al] = mo_product_beta_closed_form(dl, al)
        worst = max(worst, abs(vals[dl, al] - beta(mo_product(dl, al))))
    monotone = all(vals[grid[i], a] <= vals[grid[i + 1], a] and vals[a, grid[i]] <= vals[a, grid[i + 1]]
                   for i in range(4) for a in grid)
    ok = worst <= 1e-12 and vals[0.0, 0.0] == 0.0 and monotone
    record("3 Marshall-Olkin product closed form", ok,
           f"max error {worst:.1e}, value at (0,0) {vals[0.0, 0.0]}, nondecreasing {monotone}")
    assert ok


def test_c04_gumbel(record):
    general = special = 0.0
    g = lambda k, delta: 2.0 ** (-(k ** delta))
    for d in range(2, 7):
        for delta in (0.1, 0.3, 0.5, 0.7, 0.9, 1.0):
            b = beta(Gumbel(d, delta))
            general = max(general, abs(gumbel_beta_closed_form(d, delta) - b))
            if d == 3:
                special = max(special, abs(b - (2 ** (2 - 2 ** delta) - 1)))
            if d == 4:
                special = max(special, abs(b - (4 * g(4, delta) - 8 * g(3, delta) + 9 * g(2, delta) - 1.5)))
    ok = general <= 1e-10 and special <= 1e-12
    record("4 Gumbel closed forms", ok, f"general formula {general:.1e}, d=3/d=4 forms {special:.1e}")
    assert ok


def test_c05_counterexample(record):
    x = BlockCompose([CountermonotonePair(), Product(2)])
    y = BlockCompose([CountermonotonePair(), Comonotone(2)])
    bx, by = beta(x), beta(y)
    rep = strong_concordance_check(x, y)
    ok = (abs(bx + 1 / 8) <= 1e-12 and abs(by + 1 / 4) <= 1e-12
          and rep.grid_copula_ok and rep.grid_survival_ok and not rep.median_ok)
    record("5 concordance counterexample", ok,
           f"beta(X)={bx}, beta(Y)={by}, grid dominance {rep.grid_copula_ok and rep.grid_survival_ok}, "
           f"median condition {rep.median_ok}")
    assert ok


@pytest.mark.parametrize("d", range(2, 9))
def test_c06_minimum_attainment(record, d):
    # at d = 2 the construction is the countermonotone pair itself, whose value is -1, not -1/2
    b = beta(minimum_attaining(d))
    ok = abs(b + 1 / d) <= 1e-12
    record(f"6 minimum attainment d={d}", ok, f"beta={b!r}, want {-1 / d!r}")
    assert ok


def test_c07_properties(record):
    t0 = time.perf_counter()
    rng = np.random.default_rng(2024)
    worst = dict.fromkeys(["repr", "perm", "dual", "refl_sum", "transition", "d3"], 0.0)
    for d in (3, 4):
        for model in random_models(d, 20, rng):
            t = build_orthant_table(model)
            rep = representations(t)
            b = float(rep["definition"])
            for key in ("marginals", "reflections", "exceedance"):
                worst["repr"] = max(worst["repr"], abs(float(rep[key]) - b))
            perm = tuple(int(i) for i in rng.permutation(d))
            worst["perm"] = max(worst["perm"], abs(beta(BlockCompose([(model, perm)])) - b))
            worst["dual"] = max(worst["dual"], abs(beta_of_reflection(t, t.full) - b))
            worst["refl_sum"] = max(worst["refl_sum"], abs(sum(beta_of_reflection(t, m) for m in range(1 << d))))
            if d == 3:
                r = coefficients_from_table(t)
                worst["d3"] = max(worst["d3"], abs(r.beta - r.beta_star), abs(r.beta - r.beta_pairwise_avg))
    for d in (2, 3):
        for delta in (0.2, 0.5, 0.8):
            bx = beta(Gumbel(d, delta))
            ty = build_orthant_table(Gumbel(d + 1, delta))
            by = coefficients_from_table(ty).beta
            for i in range(d + 1):
                worst["transition"] = max(worst["transition"],
                                          abs(d / (d + 1) * bx - (by + beta_of_reflection(ty, [i]))))
    # displayed instance: beta(X1,X2,X3) + beta(-X1,X2,X3) = (2/3) beta(X2,X3)
    ty = build_orthant_table(Gumbel(3, 0.5))
    lhs = coefficients_from_table(ty).beta + beta_of_reflection(ty, [0])
    worst["transition"] = max(worst["transition"], abs(lhs - 2 / 3 * beta(Gumbel(2, 0.5))))
    for _ in range(10):
        x = rng.normal(size=(200, 3))
        x[:, 1] += x[:, 0]
        r = empirical_coefficients(x)
        worst["d3"] = max(worst["d3"], abs(r.beta - r.beta_star), abs(r.beta - r.beta_pairwise_avg))
    elapsed = time.perf_counter() - t0
    limits = {"repr": 1e-12, "perm": 1e-12, "dual": 1e-12, "refl_sum": 1e-11, "transition": 1e-10, "d3": 1e-12}
    ok = all(worst[k] <= limits[k] for k in limits) and elapsed < 30
    record("7 property suite", ok, ", ".join(f"{k} {v:.1e}" for k, v in worst.items()) + f", {elapsed:.1f} s")
    assert ok


def test_c08_monte_carlo(record):
    t0 = time.perf_counter()
    n = 200_000
    models = [Gumbel(3, 0.5), mo_product(0.6, 0.3), Product(4)]
    worst = 0.0
    for model in models:
        exact = beta(model)
        for seed in (1, 2, 3):
            worst = max(worst, abs(empirical_coefficients(sample(model, n, seed).data).beta - exact))
    worst_z = 0.0
    families = models + [Comonotone(3), CountermonotonePair(), MarshallOlkin(0.4, 0.7), Gumbel(2, 0.2)]
    for model in families:
        t = build_orthant_table(model)
        low = sample(model, n, 11).data <= 0.5
        for s in range(1, 1 << model.dim):
            cols = [i for i in range(model.dim) if s >> i & 1]
            freq = np.mean(np.all(low[:, cols], axis=1))
            p = t.values[s]
            if 0.0 < p < 1.0:
                z = abs(freq - p) / np.sqrt(p * (1 - p) / n)
            else:
                z = 0.0 if freq == p else np.inf
            worst_z = max(worst_z, z)
    elapsed = time.perf_counter() - t0
    ok = worst <= 0.01 and worst_z <= 4.0 and elapsed < 60
    record("8 Monte Carlo consistency", ok, f"max |beta_hat - beta| {worst:.4f}, max orthant z {worst_z:.2f}, {elapsed:.1f} s")
    assert ok


def test_c09_route_equivalence(record):
    rng = np.random.default_rng(99)
    problems = []
    for k in range(50):
        n = int(rng.choice([50, 200]))
        d = int(rng.choice([2, 3, 4]))
        x = rng.normal(size=(n, d)) @ rng.normal(size=(d, d))
        rep = empirical_coefficients(x)
        plug = coefficients_from_table(empirical_orthant_table(pseudo_observations(x)))
        if rep.beta != plug.beta or rep.components != plug.components:
            problems.append(f"{k}: routes differ")
        total = sum(empirical_beta_exact(x * np.array(e)) for e in itertools.product((-1.0, 1.0), repeat=d))
        if total != 0:
            problems.append(f"{k}: reflection sum {total}")
        y = np.column_stack([np.exp(x[:, 0]), x[:, 1] ** 3] + [2 * x[:, j] + 1 for j in range(2, d)])
        if empirical_coefficients(y) != rep:
            problems.append(f"{k}: monotone transform changed the report")
    ok = not problems
    record("9 estimator route equivalence", ok, "; ".join(problems) or "50 datasets, all identities exact")
    assert ok


def test_c10_gdp_manual(record):
    record("10 GDP table", None, "manual check, needs external series (see README)")
    pytest.skip("needs the external per-capita GDP series; run manually as described in the README")
