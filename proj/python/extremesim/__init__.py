"""Extreme first-passage statistics for many diffusing particles.

Thin wrapper over the C++ library: geometry and exit probabilities, the
first-k arrival sampler (with optional killing or emission), MFAT estimates,
splitting probabilities and the Brownian reference simulation.
"""

from ._extremesim import (
    Geometry,
    SpecError,
    ValidityError,
    classify_regime,
    exit_cdf,
    exit_density,
    fastest_survival,
    invert_exit_cdf,
    lambert_w0,
    lambert_wm1,
    mfat_emission,
    mfat_instantaneous,
    oracle,
    order_statistic_density,
    sample,
    sample_first_k,
    splitting_asymptotic,
    splitting_integral,
)

__all__ = [
    "Geometry",
    "SpecError",
    "ValidityError",
    "classify_regime",
    "exit_cdf",
    "exit_density",
    "fastest_survival",
    "invert_exit_cdf",
    "lambert_w0",
    "lambert_wm1",
    "mfat_emission",
    "mfat_instantaneous",
    "oracle",
    "order_statistic_density",
    "sample",
    "sample_first_k",
    "splitting_asymptotic",
    "splitting_integral",
]
