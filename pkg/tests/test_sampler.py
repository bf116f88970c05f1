import numpy as np
import pytest
from scipy import stats

from medialcorr.copulas import (
    BlockCompose,
    Comonotone,
    CountermonotonePair,
    Gumbel,
    MarshallOlkin,
    Product,
    format_model,
)
from medialcorr.estimator import empirical_coefficients
from medialcorr.orthant import build_orthant_table, coefficients_from_table
from medialcorr.sampler import CHUNK, positive_stable, sample

FAMILIES = [
    Product(3),
    Comonotone(3),
    CountermonotonePair(),
    Gumbel(3, 0.5),
    Gumbel(2, 0.15),
    MarshallOlkin(0.4, 0.7),
    MarshallOlkin(0.0, 1.0),
    MarshallOlkin(1.0, 0.2),
    BlockCompose([(Gumbel(2, 0.4), (0, 3)), (CountermonotonePair(), (1, 2))]),
]


def test_deterministic_and_thread_independent():
    m = Gumbel(3, 0.5)
    n = 2 * CHUNK + 17
    a = sample(m, n, 42, threads=1).data
    b = sample(m, n, 42, threads=4).data
    assert np.array_equal(a, b)
    assert not np.array_equal(a, sample(m, n, 43).data)


def test_prefix_stable_across_n():
    # chunks are keyed by index, so a longer sample extends a shorter one
    m = MarshallOlkin(0.3, 0.6)
    short = sample(m, CHUNK, 5).data
    long = sample(m, CHUNK + 100, 5).data
    assert np.array_equal(long[:CHUNK], short)


def test_batch_metadata():
    b = sample(Product(2), 10, 3)
    assert b.data.shape == (10, 2)
    assert b.model == "product:d=2"
    assert (b.seed, b.n) == (3, 10)


def test_interior_values():
    u = sample(Comonotone(2), 5000, 0).data
    assert np.all((u > 0.0) & (u < 1.0))


@pytest.mark.parametrize("model", FAMILIES, ids=format_model)
def test_uniform_margins(model):
    u = sample(model, 20000, 9).data
    for i in range(model.dim):
        assert stats.kstest(u[:, i], "uniform").pvalue > 1e-4


@pytest.mark.parametrize("model", FAMILIES, ids=format_model)
def test_orthant_consistency(model):
    n = 100_000
    t = build_orthant_table(model)
    low = sample(model, n, 21).data <= 0.5
    for s in range(1, 1 << model.dim):
        cols = [i for i in range(model.dim) if s >> i & 1]
        freq = np.mean(np.all(low[:, cols], axis=1))
        p = t.values[s]
        if p in (0.0, 1.0):
            assert freq == p
        else:
            assert abs(freq - p) <= 4 * np.sqrt(p * (1 - p) / n)


def test_cdf_consistency_off_median(rng):
    m = Gumbel(3, 0.4)
    u = sample(m, 100_000, 2).data
    for point in rng.uniform(0.2, 0.9, size=(5, 3)):
        p = m.cdf(point)
        freq = np.mean(np.all(u <= point, axis=1))
        assert abs(freq - p) <= 4 * np.sqrt(p * (1 - p) / len(u))


def test_beta_consistency():
    m = Gumbel(4, 0.6)
    exact = coefficients_from_table(build_orthant_table(m)).beta
    assert abs(empirical_coefficients(sample(m, 100_000, 1).data).beta - exact) < 0.015


@pytest.mark.parametrize("alpha", [0.2, 0.5, 0.8])
def test_positive_stable_laplace_transform(alpha):
    s = positive_stable(alpha, 200_000, np.random.default_rng(0))
    assert np.all(s > 0)
    for t in (0.5, 1.0, 2.0):
        emp = np.exp(-t * s)
        assert abs(emp.mean() - np.exp(-t ** alpha)) <= 5 * emp.std() / np.sqrt(len(s))


def test_positive_stable_alpha_one():
    assert np.all(positive_stable(1.0, 10, np.random.default_rng(0)) == 1.0)


@pytest.mark.parametrize("n,seed", [(0, 1), (-3, 1), (2.5, 1), (5, -1), (5, 2 ** 64)])
def test_bad_arguments(n, seed):
    with pytest.raises(ValueError):
        sample(Product(2), n, seed)
