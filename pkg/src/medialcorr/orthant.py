"""Orthant probabilities at the median point and the coefficients built on them.

An :class:`OrthantTable` stores, for every coordinate subset ``S``, the
probability that all ``U_i`` with ``i`` in ``S`` are at most 1/2. Subsets
are bitmasks: bit ``i`` set means coordinate ``i`` (zero-based) belongs to
``S``. Every coefficient in this module is a linear functional of that
table, so survival and reflected quantities are obtained from it by
inclusion-exclusion instead of from separate evaluators.

Tables come in two flavours. Model tables hold floats and alternating sums
go through :func:`math.fsum`. Empirical tables additionally carry integer
counts over a common denominator ``n``; for those all arithmetic is done on
integers and :class:`fractions.Fraction`, and results are rounded to float
once at the very end.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations
from typing import Optional, Sequence

import numpy as np

from .copulas import MAX_DIM, Copula, ReflectionMask, cdf, survival
from .report import CoefficientsReport

__all__ = [
    "OrthantTable",
    "ExceedanceDistribution",
    "ConcordanceReport",
    "build_orthant_table",
    "table_from_counts",
    "orthant_mask_prob",
    "atoms",
    "reflect_table",
    "exceedance_distribution",
    "representations",
    "coefficients_from_table",
    "beta_star",
    "beta_IJ",
    "beta_of_reflection",
    "gumbel_beta_closed_form",
    "mo_product_beta_closed_form",
    "strong_concordance_check",
]


@dataclass(frozen=True, eq=False)
class OrthantTable:
    d: int
    values: np.ndarray
    counts: Optional[np.ndarray] = None
    n: Optional[int] = None

    def __post_init__(self):
        if self.values.shape != (1 << self.d,):
            raise ValueError(f"expected {1 << self.d} table entries, got {self.values.shape}")
        self.values.setflags(write=False)
        if self.counts is not None:
            self.counts.setflags(write=False)

    @property
    def exact(self) -> bool:
        return self.counts is not None

    @property
    def full(self) -> int:
        return (1 << self.d) - 1

    def __getitem__(self, subset) -> float:
        return float(self.values[_mask(subset, self.d)])


@dataclass(frozen=True)
class ExceedanceDistribution:
    """Law of the number of coordinates exceeding their median."""

    probs: tuple

    def __post_init__(self):
        p = np.asarray(self.probs, dtype=float)
        if np.any(p < -1e-12):
            raise ValueError("negative exceedance probability")
        if abs(math.fsum(self.probs) - 1.0) > 1e-12:
            raise ValueError(f"exceedance probabilities sum to {math.fsum(self.probs)!r}")


def _mask(subset, d) -> int:
    if isinstance(subset, (int, np.integer)):
        m = int(subset)
        if not 0 <= m < (1 << d):
            raise ValueError(f"mask {m} out of range for dimension {d}")
        return m
    m = 0
    for i in subset:
        if not 0 <= i < d:
            raise ValueError(f"coordinate {i} out of range for dimension {d}")
        m |= 1 << int(i)
    return m


def _submasks(s: int) -> np.ndarray:
    out = np.zeros(1, dtype=np.int64)
    bit = 1
    while bit <= s:
        if s & bit:
            out = np.concatenate([out, out | bit])
        bit <<= 1
    return out


def _popcount(x):
    return np.bitwise_count(np.asarray(x, dtype=np.int64)).astype(np.int64)


def build_orthant_table(model: Copula, chunk: int = 1 << 16) -> OrthantTable:
    """Evaluate every marginal copula of ``model`` at (1/2, ..., 1/2)."""
    d = model.dim
    if d > MAX_DIM:
        raise ValueError(f"dimension {d} exceeds the supported maximum {MAX_DIM}")
    size = 1 << d
    values = np.empty(size)
    bits = 1 << np.arange(d)
    for start in range(0, size, chunk):
        masks = np.arange(start, min(size, start + chunk))
        pts = np.where((masks[:, None] & bits) != 0, 0.5, 1.0)
        values[start:start + len(masks)] = cdf(model, pts)
    values[0] = 1.0
    return OrthantTable(d, values)


def table_from_counts(counts, n: int, d: int) -> OrthantTable:
    """Table of an empirical measure: ``counts[S]`` rows out of ``n``."""
    counts = np.asarray(counts, dtype=np.int64)
    if counts[0] != n:
        raise ValueError("counts of the empty set must equal n")
    return OrthantTable(d, counts / n, counts.copy(), int(n))


def _orth(table: OrthantTable, leq: int, gt: int):
    """P(U_i <= 1/2 on ``leq``, U_j > 1/2 on ``gt``); masks must be disjoint."""
    if leq & gt:
        raise ValueError("leq_set and gt_set must be disjoint")
    sub = _submasks(gt)
    sign = 1 - 2 * (_popcount(sub) & 1)
    idx = leq | sub
    if table.exact:
        return Fraction(int(np.dot(sign, table.counts[idx])), table.n)
    return math.fsum((sign * table.values[idx]).tolist())


def _c(table: OrthantTable, s: int):
    if table.exact:
        return Fraction(int(table.counts[s]), table.n)
    return float(table.values[s])


def orthant_mask_prob(table: OrthantTable, leq_set, gt_set) -> float:
    """Probability that coordinates in ``leq_set`` are <= 1/2 and those in ``gt_set`` exceed 1/2."""
    leq, gt = _mask(leq_set, table.d), _mask(gt_set, table.d)
    return float(_orth(table, leq, gt))


def _moebius(a: np.ndarray, d: int) -> np.ndarray:
    # superset differencing; every intermediate is itself an orthant probability
    a = a.copy()
    for j in range(d):
        v = a.reshape(-1, 2, 1 << j)
        v[:, 0, :] -= v[:, 1, :]
    return a


def _zeta(a: np.ndarray, d: int) -> np.ndarray:
    a = a.copy()
    for j in range(d):
        v = a.reshape(-1, 2, 1 << j)
        v[:, 0, :] += v[:, 1, :]
    return a


def atoms(table: OrthantTable) -> np.ndarray:
    """Probability of each sign pattern.

    Entry ``L`` is P(U_i <= 1/2 exactly for the coordinates in ``L``).
    Integer counts for empirical tables, floats otherwise.
    """
    src = table.counts if table.exact else table.values
    return _moebius(np.array(src), table.d)


def reflect_table(table: OrthantTable, mask) -> OrthantTable:
    """Table of the vector with coordinates in ``mask`` replaced by 1 - U."""
    if isinstance(mask, ReflectionMask):
        if mask.d != table.d:
            raise ValueError("reflection mask dimension does not match table")
        r = mask.mask
    else:
        r = _mask(mask, table.d)
    a = atoms(table)
    flipped = a[np.arange(1 << table.d) ^ r]
    back = _zeta(flipped, table.d)
    if table.exact:
        return OrthantTable(table.d, back / table.n, back, table.n)
    back[0] = 1.0
    return OrthantTable(table.d, np.clip(back, 0.0, 1.0))


def exceedance_distribution(table: OrthantTable) -> ExceedanceDistribution:
    """Distribution of the number of coordinates above 1/2."""
    a = atoms(table)
    d = table.d
    n_gt = d - _popcount(np.arange(1 << d))
    probs = []
    for k in range(d + 1):
        sel = a[n_gt == k]
        if table.exact:
            probs.append(int(sel.sum()) / table.n)
        else:
            probs.append(max(0.0, math.fsum(sel.tolist())))
    return ExceedanceDistribution(tuple(probs))


def _agree(table, s):
    return _c(table, s) + _orth(table, 0, s)


def _components(table):
    d, full = table.d, table.full
    c_all = _c(table, full)
    s_all = _orth(table, 0, full)
    comps = []
    for i in range(d):
        me, rest = 1 << i, full ^ (1 << i)
        # medial correlation of U_i with the max of the rest
        both_low = c_all
        both_high = _orth(table, 0, me) - _orth(table, rest, me)
        b_max = 2 * (both_low + both_high) - 1
        # ... and with the min of the rest
        both_low = _c(table, me) - _orth(table, me, rest)
        both_high = s_all
        b_min = 2 * (both_low + both_high) - 1
        comps.append((b_max + b_min) / 2)
    return comps


def representations(table: OrthantTable) -> dict:
    """Compute the coefficient through each of its equivalent forms.

    Keys: ``definition`` (mean of the per-coordinate components),
    ``marginals`` (full and leave-one-out orthants), ``reflections``
    (single-coordinate reflections) and ``exceedance`` (law of the
    exceedance count). All four agree for any probability measure.
    """
    d, full = table.d, table.full
    if d < 2:
        raise ValueError("the coefficient needs at least two coordinates")
    exact = table.exact
    comps = _components(table)
    definition = sum(comps) / d if exact else math.fsum(comps) / d

    agree_all = _agree(table, full)
    loo = [_agree(table, full ^ (1 << i)) for i in range(d)]
    marginals = 2 * agree_all - (sum(loo) / d if exact else math.fsum(loo) / d)

    refl = []
    for i in range(d):
        me, rest = 1 << i, full ^ (1 << i)
        refl.append(_orth(table, rest, me) + _orth(table, me, rest))
    reflections = agree_all - (sum(refl) / d if exact else math.fsum(refl) / d)

    if exact:
        a = atoms(table)
        n_gt = d - _popcount(np.arange(1 << d))
        cnt = [int(a[n_gt == k].sum()) for k in (0, 1, d - 1, d)]
        exceed = Fraction(cnt[0] + cnt[3], table.n) - Fraction(cnt[1] + cnt[2], table.n * d)
    else:
        p = exceedance_distribution(table).probs
        exceed = p[0] + p[d] - (p[1] + p[d - 1]) / d

    return {
        "definition": definition,
        "marginals": marginals,
        "reflections": reflections,
        "exceedance": exceed,
        "components": comps,
    }


def beta_star(table: OrthantTable):
    """Rescaled probability that all coordinates sit on the same side of 1/2."""
    d = table.d
    k = 2 ** (d - 1)
    return float((k * _agree(table, table.full) - 1) / (k - 1))


def coefficients_from_table(table: OrthantTable, source: Optional[str] = None,
                            check_tol: float = 1e-9) -> CoefficientsReport:
    """All coefficients of the vector described by ``table``.

    The result is cross-checked against the marginal, reflection and
    exceedance forms; a disagreement larger than ``check_tol`` raises
    ``ArithmeticError``.
    """
    d, full = table.d, table.full
    if d < 2:
        raise ValueError("the coefficient needs at least two coordinates")
    rep = representations(table)
    beta = rep["definition"]
    for key in ("marginals", "reflections", "exceedance"):
        if abs(float(rep[key]) - float(beta)) > check_tol:
            raise ArithmeticError(
                f"representation mismatch: {key}={float(rep[key])!r} vs definition={float(beta)!r}"
            )
    k = 2 ** (d - 1)
    c_all = _c(table, full)
    agree_all = _agree(table, full)
    star = (k * agree_all - 1) / (k - 1)
    nelsen = (2 * k * c_all - 1) / (k - 1)
    pairs = [2 * _agree(table, (1 << i) | (1 << j)) - 1 for i, j in combinations(range(d), 2)]
    pair_avg = sum(pairs) / len(pairs) if table.exact else math.fsum(pairs) / len(pairs)
    if source is None:
        source = "empirical" if table.exact else "exact"
    return CoefficientsReport(
        d=d,
        beta=float(beta),
        components=tuple(float(c) for c in rep["components"]),
        beta_star=float(star),
        beta_nelsen=float(nelsen),
        beta_pairwise_avg=float(pair_avg),
        source=source,
        n=table.n,
    )


def beta_IJ(table: OrthantTable, I: Sequence[int], J: Sequence[int]) -> float:
    """Average of the medial correlations of (max U_I, max U_J) and (min U_I, min U_J)."""
    mi, mj = _mask(I, table.d), _mask(J, table.d)
    if not mi or not mj:
        raise ValueError("I and J must be nonempty")
    if mi & mj:
        raise ValueError("I and J must be disjoint")
    u = mi | mj
    # maxima are both low iff every coordinate of I and J is low
    low = _c(table, u)
    high = 1 - _c(table, mi) - _c(table, mj) + _c(table, u)
    b_max = 2 * (low + high) - 1
    high = _orth(table, 0, u)
    low = 1 - _orth(table, 0, mi) - _orth(table, 0, mj) + _orth(table, 0, u)
    b_min = 2 * (low + high) - 1
    return float((b_max + b_min) / 2)


def beta_of_reflection(table: OrthantTable, mask) -> float:
    """Coefficient of the vector with the coordinates in ``mask`` reflected."""
    return coefficients_from_table(reflect_table(table, mask)).beta


def gumbel_beta_closed_form(d: int, delta: float) -> float:
    """Closed form of the coefficient for the d-dimensional Gumbel copula."""
    if int(d) != d or d < 2:
        raise ValueError("d must be an integer >= 2")
    if not 0.0 < delta <= 1.0:
        raise ValueError("delta must lie in (0, 1]")

    def g(k):
        return 2.0 ** (-(k ** delta))

    terms = [(1 - d) / 2]
    for k in range(1, d - 1):
        terms.append((math.comb(d - 1, k) + math.comb(d, k + 1)) * (-1) ** (k + 1) * g(k + 1))
    if d % 2 == 0:
        terms += [4 * g(d), (-1) ** (d - 1) * g(d - 1)]
    else:
        terms.append(-g(d - 1))
    return math.fsum(terms)


def mo_product_beta_closed_form(delta: float, alpha: float) -> float:
    """Coefficient of two independent Marshall-Olkin pairs with parameters (delta, 1), (alpha, 1)."""
    for name, v in (("delta", delta), ("alpha", alpha)):
        if not 0.0 <= v <= 1.0:
            raise ValueError(f"{name} must lie in [0, 1], got {v!r}")
    return 2.0 ** (delta + alpha - 2) - 2.0 ** (alpha - 3) - 2.0 ** (delta - 3)


@dataclass
class ConcordanceReport:
    """Outcome of comparing two models under the strong concordance order.

    ``median_ok`` is exact: every single-coordinate reflection of Y has
    orthant and survival-orthant values at the median no larger than those
    of X. The copula and survival dominance checks only look at grid
    points and are therefore approximate.
    """

    median_ok: bool
    median_detail: list
    grid_copula_ok: bool
    grid_survival_ok: bool
    grid_points: int
    worst_copula_gap: float
    worst_survival_gap: float
    verdict: str


def strong_concordance_check(model_x: Copula, model_y: Copula, grid_resolution: int = 6,
                             tol: float = 1e-12, max_points: int = 20_000,
                             seed: int = 0) -> ConcordanceReport:
    """Check whether X precedes Y in the strong concordance order.

    Verdicts: ``strong-holds-on-grid``, ``weak-only`` (pointwise dominance
    holds on the grid but the reflected median condition fails), ``fails``
    (pointwise dominance violated somewhere on the grid) and
    ``inconclusive`` (non-finite evaluations).
    """
    if model_x.dim != model_y.dim:
        raise ValueError("models must have the same dimension")
    if grid_resolution < 2:
        raise ValueError("grid_resolution must be at least 2")
    d = model_x.dim
    tx, ty = build_orthant_table(model_x), build_orthant_table(model_y)
    full = tx.full
    detail = []
    median_ok = True
    for i in range(d):
        me, rest = 1 << i, full ^ (1 << i)
        cx, cy = _orth(tx, rest, me), _orth(ty, rest, me)
        sx, sy = _orth(tx, me, rest), _orth(ty, me, rest)
        ok = cy <= cx + tol and sy <= sx + tol
        median_ok &= ok
        detail.append({"i": i + 1, "C_x": cx, "C_y": cy, "S_x": sx, "S_y": sy, "ok": ok})

    axis = np.linspace(0.0, 1.0, grid_resolution)
    if grid_resolution ** d <= max_points:
        mesh = np.meshgrid(*([axis] * d), indexing="ij")
        pts = np.stack([m.ravel() for m in mesh], axis=1)
    else:
        rng = np.random.default_rng(seed)
        pts = axis[rng.integers(0, grid_resolution, size=(max_points, d))]
    gap_c = cdf(model_y, pts) - cdf(model_x, pts)
    gap_s = survival(model_y, pts) - survival(model_x, pts)
    if not (np.all(np.isfinite(gap_c)) and np.all(np.isfinite(gap_s))):
        verdict = "inconclusive"
        grid_c = grid_s = False
    else:
        grid_c = bool(np.min(gap_c) >= -tol)
        grid_s = bool(np.min(gap_s) >= -tol)
        if not (grid_c and grid_s):
            verdict = "fails"
        elif median_ok:
            verdict = "strong-holds-on-grid"
        else:
            verdict = "weak-only"
    return ConcordanceReport(
        median_ok=bool(median_ok),
        median_detail=detail,
        grid_copula_ok=grid_c,
        grid_survival_ok=grid_s,
        grid_points=len(pts),
        worst_copula_gap=float(np.min(gap_c)),
        worst_survival_gap=float(np.min(gap_s)),
        verdict=verdict,
    )
