"""Real root counts of random Kostlan-Shub-Smale systems."""

from ._core import (
    KssSystem,
    count_roots,
    count_univariate,
    derive_seed,
    estimate_moments,
    f_tilde,
    g_functional,
    hermite_eval,
    homogenize,
    i2d_lower_bound,
    replicate_seed,
    run_experiment,
    sample_system,
    scaled_kernel,
    v_infinity,
    variance_finite_d,
)

__all__ = [
    "KssSystem",
    "count_roots",
    "count_univariate",
    "derive_seed",
    "estimate_moments",
    "f_tilde",
    "g_functional",
    "hermite_eval",
    "homogenize",
    "i2d_lower_bound",
    "replicate_seed",
    "run_experiment",
    "sample_system",
    "scaled_kernel",
    "v_infinity",
    "variance_finite_d",
]
__version__ = "0.1.0"
