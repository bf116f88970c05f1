"""Multivariate medial correlation (a multivariate Blomqvist beta).

Exact values come from copula models through orthant probabilities at the
median point; estimates come from data through rank pseudo-observations.
"""
from .copulas import (
    BlockCompose,
    Comonotone,
    Copula,
    CountermonotonePair,
    Gumbel,
    MarshallOlkin,
    Product,
    ReflectionMask,
    axiom_check,
    cdf,
    format_model,
    marginal_cdf,
    parse_model,
)
from .estimator import (
    DataMatrix,
    bootstrap_ci,
    empirical_coefficients,
    empirical_orthant_table,
    pseudo_observations,
)
from .io import CsvSpec, load_csv, read_report, write_report, write_sample_csv
from .orthant import (
    OrthantTable,
    beta_IJ,
    beta_of_reflection,
    build_orthant_table,
    coefficients_from_table,
    exceedance_distribution,
    gumbel_beta_closed_form,
    mo_product_beta_closed_form,
    orthant_mask_prob,
    strong_concordance_check,
)
from .report import CoefficientsReport
from .sampler import sample

__version__ = "0.1.0"
