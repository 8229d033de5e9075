"""Limiting laws of Wald statistics at singular points and a tetrad test."""

from ._core import (
    DegenerateCovarianceError,
    DegenerateWaldError,
    ParseError,
    Polynomial,
    __version__,
    cdf,
    classify,
    classify_spectrum,
    empirical_covariance,
    k_alpha,
    ks_distance,
    moment_table,
    quantile,
    run_suite,
    sample_law,
    sample_monomial,
    sample_wald,
    stable_density,
    tetrad_polynomial,
    tetrad_singular_cdf,
    tetrad_stat,
    wald_tetrad_test,
)

__all__ = [
    "DegenerateCovarianceError",
    "DegenerateWaldError",
    "ParseError",
    "Polynomial",
    "__version__",
    "cdf",
    "classify",
    "classify_spectrum",
    "empirical_covariance",
    "k_alpha",
    "ks_distance",
    "moment_table",
    "quantile",
    "run_suite",
    "sample_law",
    "sample_monomial",
    "sample_wald",
    "stable_density",
    "tetrad_polynomial",
    "tetrad_singular_cdf",
    "tetrad_stat",
    "wald_tetrad_test",
]
