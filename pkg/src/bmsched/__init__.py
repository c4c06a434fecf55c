"""Optimal measurement schedules for a scalar Brownian motion tracked by a
Kalman filter: exact variance bookkeeping, closed-form one-measure optima,
the two-measure optimizer with its critical durations, brute-force oracles,
and reproducible experiment sweeps."""

from . import cli, experiments, kalman, numerics, one_measure, two_measure

__version__ = "0.1.0"

__all__ = [
    "cli",
    "experiments",
    "kalman",
    "numerics",
    "one_measure",
    "two_measure",
    "__version__",
]
