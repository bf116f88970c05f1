"""Seeded sampling from the copula families in :mod:`medialcorr.copulas`.

Rows are produced in fixed-size chunks. Chunk ``k`` of block ``b`` draws
from the ``SeedSequence`` child keyed by ``(b, k)``, so the output for a
given ``(model, n, seed)`` is the same no matter how many threads build it.
"""
from __future__ import annotations

import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from .copulas import (
    BlockCompose,
    Comonotone,
    Copula,
    CountermonotonePair,
    Gumbel,
    MarshallOlkin,
    Product,
    format_model,
)

__all__ = ["SampleBatch", "sample", "positive_stable"]

CHUNK = 1 << 15

_LO = np.nextafter(0.0, 1.0)
_HI = np.nextafter(1.0, 0.0)


@dataclass(frozen=True, eq=False)
class SampleBatch:
    data: np.ndarray
    model: str
    seed: int
    n: int


def positive_stable(alpha: float, size: int, rng: np.random.Generator) -> np.ndarray:
    """One-sided stable variates with Laplace transform exp(-t**alpha), 0 < alpha <= 1.

    Chambers-Mallows-Stuck construction in Kanter's form.
    """
    if alpha == 1.0:
        return np.ones(size)
    theta = rng.uniform(0.0, np.pi, size)
    w = rng.exponential(size=size)
    a = np.sin(alpha * theta) / np.sin(theta) ** (1.0 / alpha)
    b = (np.sin((1.0 - alpha) * theta) / w) ** ((1.0 - alpha) / alpha)
    return a * b


def _draw(model: Copula, m: int, rng: np.random.Generator) -> np.ndarray:
    if isinstance(model, Product):
        return rng.uniform(size=(m, model.dim))
    if isinstance(model, Comonotone):
        return np.repeat(rng.uniform(size=(m, 1)), model.dim, axis=1)
    if isinstance(model, CountermonotonePair):
        u = rng.uniform(size=m)
        return np.column_stack([u, 1.0 - u])
    if isinstance(model, Gumbel):
        s = positive_stable(model.delta, m, rng)
        e = rng.exponential(size=(m, model.dim))
        return np.exp(-((e / s[:, None]) ** model.delta))
    if isinstance(model, MarshallOlkin):
        return _marshall_olkin(model, m, rng)
    raise TypeError(f"no sampler for {type(model).__name__}")


def _marshall_olkin(model, m, rng):
    # common shock with rate 1; a_k = 1 / (rate_k + 1)
    a = (model.alpha1, model.alpha2)
    common = rng.exponential(size=m)
    out = np.empty((m, 2))
    for k in range(2):
        own = rng.exponential(size=m)
        if a[k] == 0.0:
            out[:, k] = rng.uniform(size=m)
            continue
        rate = (1.0 - a[k]) / a[k]
        x = common if rate == 0.0 else np.minimum(own / rate, common)
        # survival transform of an exponential with total rate (rate + 1)
        out[:, k] = np.exp(-(rate + 1.0) * x)
    return out


def _leaves(model, block):
    if isinstance(model, BlockCompose):
        for sub, sub_block in model.parts:
            yield from _leaves(sub, tuple(block[i] for i in sub_block))
    else:
        yield model, block


def _chunk(leaves, seed, k, m, d):
    out = np.empty((m, d))
    for b, (leaf, block) in enumerate(leaves):
        rng = np.random.Generator(np.random.PCG64(np.random.SeedSequence(seed, spawn_key=(b, k))))
        out[:, list(block)] = _draw(leaf, m, rng)
    return out


def sample(model: Copula, n: int, seed: int, threads: int | None = None) -> SampleBatch:
    """Draw ``n`` rows with uniform margins from ``model``."""
    if int(n) != n or n < 1:
        raise ValueError(f"n must be a positive integer, got {n!r}")
    if not 0 <= seed < 2 ** 64:
        raise ValueError("seed must be an unsigned 64-bit integer")
    d = model.dim
    leaves = list(_leaves(model, tuple(range(d))))
    sizes = [min(CHUNK, n - s) for s in range(0, n, CHUNK)]
    threads = threads or int(os.environ.get("MEDIALCORR_THREADS", 0)) or 1
    if threads > 1 and len(sizes) > 1:
        with ThreadPoolExecutor(threads) as pool:
            parts = list(pool.map(lambda km: _chunk(leaves, seed, km[0], km[1], d), enumerate(sizes)))
    else:
        parts = [_chunk(leaves, seed, k, m, d) for k, m in enumerate(sizes)]
    data = np.clip(np.concatenate(parts, axis=0), _LO, _HI)
    return SampleBatch(data, format_model(model), int(seed), int(n))
