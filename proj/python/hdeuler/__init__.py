"""Axisymmetric swirl-free Euler laboratory in R^d (d = 4..8).

Thin Python layer over the compiled ``_core`` module.
"""

import json

from ._core import (
    AccuracyError,
    ConfigError,
    DomainError,
    IoError,
    Kernel,
    Particles,
    __version__,
    calibrated_constant,
    feng_sverak_product,
    feng_sverak_ratio,
    rescale,
    ring_particles,
    simulate,
    tail_coefficient,
    velocity_field,
    weighted_L1,
)


def verify_kernel(d):
    """Kernel verification report as a dict (same schema as ``hdeuler verify-kernel``)."""
    from ._core import verify_kernel_json

    return json.loads(verify_kernel_json(d))


def verify_estimates(d, sweep=20):
    """Estimate verification report as a dict (same schema as ``hdeuler verify-estimates``)."""
    from ._core import verify_estimates_json

    return json.loads(verify_estimates_json(d, sweep))


__all__ = [
    "AccuracyError",
    "ConfigError",
    "DomainError",
    "IoError",
    "Kernel",
    "Particles",
    "__version__",
    "calibrated_constant",
    "feng_sverak_product",
    "feng_sverak_ratio",
    "rescale",
    "ring_particles",
    "simulate",
    "tail_coefficient",
    "velocity_field",
    "verify_estimates",
    "verify_kernel",
    "weighted_L1",
]
