"""Empirical medial correlation from data via rank pseudo-observations.

Pseudo-observations are kept as integer ranks ``r`` with value ``r/(n+1)``
so that the comparison with 1/2 is the exact integer test ``2r <= n + 1``.
A value of exactly 1/2 (odd ``n``) counts as "at most 1/2".

Ties get the maximal rank, i.e. the number of observations less than or
equal to the value.
"""
from __future__ import annotations

from dataclasses import dataclass, replace
from fractions import Fraction
from typing import Optional

import numpy as np

from .copulas import MAX_DIM
from .orthant import OrthantTable, coefficients_from_table, table_from_counts, _zeta
from .report import CoefficientsReport

__all__ = [
    "DataMatrix",
    "PseudoObservations",
    "pseudo_observations",
    "row_extremes",
    "empirical_orthant_table",
    "empirical_coefficients",
    "empirical_beta_exact",
    "bootstrap_ci",
]


@dataclass(frozen=True, eq=False)
class DataMatrix:
    """``n`` observations (rows) of ``d`` variables (columns)."""

    values: np.ndarray
    labels: Optional[tuple] = None

    def __post_init__(self):
        v = np.asarray(self.values, dtype=float)
        if v.ndim != 2:
            raise ValueError("data must be a 2-D array")
        n, d = v.shape
        if n < 2:
            raise ValueError(f"need at least 2 observations, got {n}")
        if d < 2:
            raise ValueError(f"need at least 2 variables, got {d}")
        if not np.all(np.isfinite(v)):
            r, c = np.argwhere(~np.isfinite(v))[0]
            raise ValueError(f"non-finite entry at row {r + 1}, column {c + 1}")
        labels = self.labels
        if labels is None:
            labels = tuple(f"X{i + 1}" for i in range(d))
        if len(labels) != d:
            raise ValueError("one label per column is required")
        object.__setattr__(self, "values", v)
        object.__setattr__(self, "labels", tuple(str(s) for s in labels))

    @property
    def n(self) -> int:
        return self.values.shape[0]

    @property
    def d(self) -> int:
        return self.values.shape[1]


@dataclass(frozen=True, eq=False)
class PseudoObservations:
    ranks: np.ndarray  # int, in 1..n
    n: int

    @property
    def values(self) -> np.ndarray:
        return self.ranks / (self.n + 1)

    @property
    def low(self) -> np.ndarray:
        """Boolean matrix: entry is at most 1/2."""
        return 2 * self.ranks <= self.n + 1


def _as_data(data) -> DataMatrix:
    return data if isinstance(data, DataMatrix) else DataMatrix(np.asarray(data, dtype=float))


def pseudo_observations(data) -> PseudoObservations:
    """Scaled ranks: count of column entries <= each entry, divided by n + 1."""
    data = _as_data(data)
    x = data.values
    ranks = np.empty(x.shape, dtype=np.int64)
    for i in range(x.shape[1]):
        col = x[:, i]
        ranks[:, i] = np.searchsorted(np.sort(col), col, side="right")
    return PseudoObservations(ranks, data.n)


def row_extremes(pseudo: PseudoObservations, i: int):
    """Row-wise max and min of the pseudo-observations of every column but ``i``."""
    others = np.delete(pseudo.values, i, axis=1)
    return others.max(axis=1), others.min(axis=1)


def empirical_orthant_table(pseudo: PseudoObservations) -> OrthantTable:
    """Orthant table of the empirical measure of the pseudo-observations."""
    n, d = pseudo.ranks.shape
    if d > MAX_DIM:
        raise ValueError(f"dimension {d} exceeds the supported maximum {MAX_DIM}")
    pattern = pseudo.low.astype(np.int64) @ (1 << np.arange(d, dtype=np.int64))
    atom_counts = np.bincount(pattern, minlength=1 << d).astype(np.int64)
    return table_from_counts(_zeta(atom_counts, d), n, d)


def _components_direct(pseudo: PseudoObservations):
    # literal indicator sums over rows with the row extremes of the other columns
    n, d = pseudo.ranks.shape
    half = Fraction(1, 2)
    comps = []
    for i in range(d):
        others = np.delete(pseudo.ranks, i, axis=1)
        u_low = 2 * pseudo.ranks[:, i] <= n + 1
        m_low = 2 * others.max(axis=1) <= n + 1
        w_low = 2 * others.min(axis=1) <= n + 1
        agree_max = int(np.sum(u_low & m_low) + np.sum(~u_low & ~m_low))
        agree_min = int(np.sum(u_low & w_low) + np.sum(~u_low & ~w_low))
        b_max = 2 * Fraction(agree_max, n) - 1
        b_min = 2 * Fraction(agree_min, n) - 1
        comps.append((b_max + b_min) * half)
    return comps


def empirical_beta_exact(data) -> Fraction:
    """The estimate as an exact rational number."""
    pseudo = pseudo_observations(data)
    return sum(_components_direct(pseudo)) / pseudo.ranks.shape[1]


def empirical_coefficients(data) -> CoefficientsReport:
    """Estimate the coefficient and its companions from raw data."""
    data = _as_data(data)
    pseudo = pseudo_observations(data)
    comps = _components_direct(pseudo)
    beta = sum(comps) / data.d
    plug_in = coefficients_from_table(empirical_orthant_table(pseudo), source="empirical")
    return replace(
        plug_in,
        beta=float(beta),
        components=tuple(float(c) for c in comps),
        n=data.n,
        labels=data.labels,
    )


def bootstrap_ci(data, replicates: int = 1000, level: float = 0.95, seed: int = 0) -> dict:
    """Percentile bootstrap intervals for the coefficient and each component.

    Each replicate resamples rows with replacement from its own
    ``SeedSequence`` child, so results depend only on (data, replicates,
    level, seed).
    """
    if replicates < 100:
        raise ValueError("replicates must be at least 100")
    if not 0.0 < level < 1.0:
        raise ValueError("level must lie strictly between 0 and 1")
    data = _as_data(data)
    n, d = data.n, data.d
    children = np.random.SeedSequence(seed).spawn(replicates)
    betas = np.empty(replicates)
    comps = np.empty((replicates, d))
    for b, child in enumerate(children):
        rows = np.random.default_rng(child).integers(0, n, size=n)
        ps = pseudo_observations(DataMatrix(data.values[rows], data.labels))
        c = _components_direct(ps)
        comps[b] = [float(x) for x in c]
        betas[b] = float(sum(c) / d)
    q = [(1.0 - level) / 2.0, (1.0 + level) / 2.0]
    lo, hi = np.quantile(betas, q)
    comp_q = np.quantile(comps, q, axis=0)
    return {
        "level": level,
        "replicates": replicates,
        "seed": seed,
        "beta": [float(lo), float(hi)],
        "components": [[float(a), float(b)] for a, b in comp_q.T],
    }
