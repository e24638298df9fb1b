"""Accessible paths in the randomly weighted hypercube."""

from ._core import (
    GuardError,
    c_sg,
    c_sg_exact,
    count_accessible,
    gompertz_delta,
    list_accessible,
    moment,
    pair_sums,
    pmf_exact,
    pmf_quadrature,
    run_cli,
    sample_xn,
    second_moment_exact,
    tail_quadrature,
    tree_campaign,
    z_ideal_samples,
)

__all__ = [
    "GuardError",
    "c_sg",
    "c_sg_exact",
    "count_accessible",
    "gompertz_delta",
    "list_accessible",
    "moment",
    "pair_sums",
    "pmf_exact",
    "pmf_quadrature",
    "run_cli",
    "sample_xn",
    "second_moment_exact",
    "tail_quadrature",
    "tree_campaign",
    "z_ideal_samples",
]
