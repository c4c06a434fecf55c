"""Optimal instants for two measurements.

Three regimes exist depending on the horizon length T.  For short horizons
both measurements happen at 0; past a first critical duration only the second
one leaves 0; past a second critical duration both are interior.  The
regime-2/3 boundary is governed by a cubic in sigma2*t2 whose coefficient sign
pattern (one sign change) guarantees a unique positive root.  In regime 3 the
optimum solves a two-equation stationarity system; it is found both by
coordinate descent (the reference algorithm) and by bisection on the
stationarity gap (an independent cross-check).
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field

from .kalman import parallel_sum
from .numerics import bisect_root, golden_section_min
from .one_measure import cost_single, critical_duration_1, duration_from_instant
from .one_measure import optimal_instant_1

__all__ = [
    "TwoMeasureRegime",
    "CubicCoeffs",
    "DescentOptions",
    "DescentTrace",
    "TwoMeasureSolution",
    "cost_pair",
    "cost_derivative_t1",
    "cubic_coeffs",
    "critical_spacing",
    "critical_duration_2_second",
    "critical_duration_2_first",
    "classify_regime",
    "optimal_gap",
    "equilibrium_gap",
    "optimize_two",
    "solve_stationarity",
]


class TwoMeasureRegime(enum.Enum):
    REGIME1 = "1"  # both measurements at 0
    REGIME2 = "2"  # first at 0, second interior
    REGIME3 = "3"  # both interior


@dataclass(frozen=True)
class CubicCoeffs:
    """Coefficients of the boundary cubic a*x^3 + b*x^2 + c*x + d in
    x = sigma2*t2.  For positive variances a < 0 and d > 0, so there is a
    single sign change and hence a unique positive root."""

    a: float
    b: float
    c: float
    d: float

    def evaluate(self, x: float) -> float:
        return ((self.a * x + self.b) * x + self.c) * x + self.d


@dataclass(frozen=True)
class DescentOptions:
    step_tol: float = 1e-9
    max_iterations: int = 200
    golden_tol: float = 1e-10
    cross_check: bool = True
    cross_check_tol: float = 1e-5


@dataclass(frozen=True)
class DescentTrace:
    """Per-iteration record of the coordinate descent.

    Iteration 0 is the starting point (its step sizes are NaN); later entries
    hold (t1, t2, cost, |step in t1|, |step in t2|).  ``final_gap`` is
    optimal_gap - equilibrium_gap at the returned t1 and vanishes at the
    regime-3 optimum.
    """

    iterations: tuple[tuple[float, float, float, float, float], ...]
    converged: bool
    final_gap: float


@dataclass(frozen=True)
class TwoMeasureSolution:
    t1_opt: float
    t2_opt: float
    regime: TwoMeasureRegime
    cost_at_opt: float
    T2_crit: float
    T1_crit: float
    trace: DescentTrace | None = field(default=None)


def _check_domain(**kwargs: float) -> None:
    for name, value in kwargs.items():
        if math.isnan(value) or value < 0:
            raise ValueError(f"{name} must be >= 0, got {value}")


def _check_positive(**kwargs: float) -> None:
    for name, value in kwargs.items():
        if not (value > 0) or math.isinf(value):
            raise ValueError(f"{name} must be positive and finite, got {value}")


def _check_finite(**kwargs: float) -> None:
    for name, value in kwargs.items():
        if math.isnan(value) or math.isinf(value) or value < 0:
            raise ValueError(f"{name} must be finite and >= 0, got {value}")


def cost_pair(
    sigma2: float, T: float, v0: float, v1: float, v2: float, t1: float, t2: float
) -> float:
    """Integral cost of measuring at t1 and t2 (0 <= t1 <= t2 <= T)."""
    _check_positive(sigma2=sigma2, T=T)
    _check_domain(v0=v0, v1=v1, v2=v2)
    if not (0.0 <= t1 <= t2 <= T):
        raise ValueError(f"need 0 <= t1 <= t2 <= T, got t1={t1}, t2={t2}, T={T}")
    gap = t2 - t1
    post1 = parallel_sum(v1, v0 + sigma2 * t1)
    post2 = parallel_sum(v2, post1 + sigma2 * gap)
    return (
        0.5 * sigma2 * t1 * t1
        + v0 * t1
        + 0.5 * sigma2 * gap * gap
        + post1 * gap
        + 0.5 * sigma2 * (T - t2) ** 2
        + post2 * (T - t2)
    )


def cost_derivative_t1(
    sigma2: float, T: float, v0: float, v1: float, v2: float, t1: float, t2: float
) -> float:
    """Partial derivative of :func:`cost_pair` with respect to t1.

    With g = v0 + sigma2*t1 and post1 = v1 || g:

        (g / (g + v1)) * (g - (1 + v1/(v1+g)) * sigma2
            * (v2^2*(T - t2)/(v2 + sigma2*(t2-t1) + post1)^2 + (t2 - t1)))
    """
    _check_positive(sigma2=sigma2, T=T)
    _check_domain(v0=v0, v1=v1, v2=v2)
    if not (0.0 <= t1 <= t2 <= T):
        raise ValueError(f"need 0 <= t1 <= t2 <= T, got t1={t1}, t2={t2}, T={T}")
    g = v0 + sigma2 * t1
    ratio = _noise_ratio(v1, g)
    first = 1.0 - ratio  # == g / (g + v1)
    post1 = parallel_sum(v1, g)
    denom = v2 + sigma2 * (t2 - t1) + post1
    inner = (t2 - t1) if denom == 0.0 else v2 * v2 * (T - t2) / (denom * denom) + (t2 - t1)
    return first * (g - (1.0 + ratio) * sigma2 * inner)


def _noise_ratio(v1: float, g: float) -> float:
    """v1 / (v1 + g) with its 0/0 and inf limits."""
    if v1 == 0.0:
        return 0.0
    if math.isinf(v1):
        return 1.0
    return v1 / (v1 + g)


def _t1_slope_factor(
    sigma2: float, T: float, v0: float, v1: float, v2: float, t1: float, t2: float
) -> float:
    """Sign-carrying factor of :func:`cost_derivative_t1` (the derivative with
    its nonnegative prefactor g/(g+v1) removed, so it stays informative where
    the prefactor vanishes)."""
    g = v0 + sigma2 * t1
    ratio = _noise_ratio(v1, g)
    post1 = parallel_sum(v1, g)
    denom = v2 + sigma2 * (t2 - t1) + post1
    inner = (t2 - t1) if denom == 0.0 else v2 * v2 * (T - t2) / (denom * denom) + (t2 - t1)
    return g - (1.0 + ratio) * sigma2 * inner


def _line_search_t1(
    sigma2: float,
    T: float,
    v0: float,
    v1: float,
    v2: float,
    t2: float,
    golden_tol: float,
) -> float:
    """Minimize t1 -> cost over [0, t2]: golden-section search, then a
    derivative-sign polish.

    Near the minimum the cost is flat to float precision over a region of
    width ~sqrt(eps*J), so the golden result wanders there and consecutive
    line searches would never agree to 1e-9.  Bisecting the analytic slope
    inside a narrow bracket around the golden result pins the minimizer
    deterministically.
    """
    x = golden_section_min(
        lambda u: cost_pair(sigma2, T, v0, v1, v2, u, t2), 0.0, t2, golden_tol
    )
    width = 1e-6 * max(1.0, t2)
    lo, hi = max(0.0, x - width), min(t2, x + width)
    slope_lo = _t1_slope_factor(sigma2, T, v0, v1, v2, lo, t2)
    if slope_lo >= 0.0:
        return lo
    slope_hi = _t1_slope_factor(sigma2, T, v0, v1, v2, hi, t2)
    if slope_hi <= 0.0:
        return hi
    return bisect_root(
        lambda u: _t1_slope_factor(sigma2, T, v0, v1, v2, u, t2),
        lo,
        hi,
        tol=1e-13 * max(1.0, hi),
    )


def cubic_coeffs(v0: float, v1: float, v2: float) -> CubicCoeffs:
    """Boundary cubic coefficients, exact polynomials in the variances."""
    _check_finite(v0=v0, v1=v1, v2=v2)
    a = -((v0 + v1) ** 2) * (v0 + 2.0 * v1)
    b = (v0 + v1) * (v0**3 - 3.0 * ((v0 + v1) * (v0 + 2.0 * v1) * v2 + v0 * v1 * v1))
    c = v2 * b + v0 * v0 * (2.0 * v0 + 3.0 * v1) * (v0 * v1 + v0 * v2 + v1 * v2)
    d = v0 * v0 * (v1 + v2) * (v0 + v1) * (v0 * v1 + 2.0 * v0 * v2 + 3.0 * v1 * v2)
    return CubicCoeffs(a, b, c, d)


def critical_spacing(sigma2: float, v0: float, v1: float, v2: float) -> float:
    """Largest second-measure instant t2 for which (0, t2) can be optimal.

    sigma2 * t2 is the unique positive root of the boundary cubic, bracketed
    by a coefficient bound and isolated by bisection (the cubic is positive
    before the root and negative after, so the bracket is unconditionally
    safe).  Zero when v0 = 0.
    """
    _check_positive(sigma2=sigma2)
    _check_finite(v0=v0, v1=v1, v2=v2)
    if v0 == 0.0:
        return 0.0
    cub = cubic_coeffs(v0, v1, v2)
    hi = 1.0 + (abs(cub.b) + abs(cub.c) + abs(cub.d)) / abs(cub.a)
    lo = 0.0
    while hi - lo > 1e-12 * max(hi, 1.0):
        mid = 0.5 * (lo + hi)
        if cub.evaluate(mid) > 0.0:
            lo = mid
        else:
            hi = mid
    return 0.5 * (lo + hi) / sigma2


def critical_duration_2_second(sigma2: float, v0: float, v1: float, v2: float) -> float:
    """Largest horizon for which both measurements at 0 is optimal; equals the
    one-measure critical duration with prior v0 || v1 and sensor v2."""
    _check_positive(sigma2=sigma2)
    _check_finite(v0=v0, v1=v1, v2=v2)
    return critical_duration_1(sigma2, parallel_sum(v0, v1), v2)


def critical_duration_2_first(sigma2: float, v0: float, v1: float, v2: float) -> float:
    """Largest horizon for which the first measurement stays at 0."""
    _check_positive(sigma2=sigma2)
    _check_finite(v0=v0, v1=v1, v2=v2)
    spacing = critical_spacing(sigma2, v0, v1, v2)
    return duration_from_instant(sigma2, spacing, parallel_sum(v0, v1), v2)


def classify_regime(
    sigma2: float, T: float, v0: float, v1: float, v2: float
) -> TwoMeasureRegime:
    """Regime of the optimal schedule; a horizon exactly equal to a critical
    duration belongs to the lower regime."""
    _check_positive(sigma2=sigma2, T=T)
    if T <= critical_duration_2_second(sigma2, v0, v1, v2):
        return TwoMeasureRegime.REGIME1
    if T <= critical_duration_2_first(sigma2, v0, v1, v2):
        return TwoMeasureRegime.REGIME2
    return TwoMeasureRegime.REGIME3


def optimal_gap(
    sigma2: float, T: float, v0: float, v1: float, v2: float, t1: float
) -> float:
    """Best spacing t2 - t1 when the first measurement is pinned at t1
    (one-measure reduction over the remaining horizon); nonincreasing in t1
    and continued by 0 for t1 >= T."""
    _check_positive(sigma2=sigma2, T=T)
    _check_domain(t1=t1)
    if t1 >= T:
        return 0.0
    prior = parallel_sum(v0 + sigma2 * t1, v1)
    return optimal_instant_1(sigma2, T - t1, prior, v2).t_opt


def equilibrium_gap(
    sigma2: float, v0: float, v1: float, v2: float, t1: float
) -> float:
    """Spacing that makes the first measurement stationary when it happens at
    t1 (critical spacing for the inflated prior v0 + sigma2*t1); strictly
    increasing in t1."""
    _check_domain(t1=t1)
    return critical_spacing(sigma2, v0 + sigma2 * t1, v1, v2)


def _stationarity_root(
    sigma2: float, T: float, v0: float, v1: float, v2: float, tol: float
) -> tuple[float, float]:
    def gap_mismatch(t1: float) -> float:
        return optimal_gap(sigma2, T, v0, v1, v2, t1) - equilibrium_gap(
            sigma2, v0, v1, v2, t1
        )

    # Exactly on the regime-2/3 boundary (up to rounding) the root is t1 = 0.
    if gap_mismatch(0.0) <= 0.0:
        return 0.0, equilibrium_gap(sigma2, v0, v1, v2, 0.0)
    t1 = bisect_root(gap_mismatch, 0.0, T, tol=tol)
    return t1, t1 + equilibrium_gap(sigma2, v0, v1, v2, t1)


def solve_stationarity(
    sigma2: float, T: float, v0: float, v1: float, v2: float, tol: float = 1e-12
) -> tuple[float, float]:
    """Regime-3 optimum from the stationarity system.

    The gap between optimal_gap (nonincreasing in t1) and equilibrium_gap
    (strictly increasing) changes sign exactly once on [0, T]; bisection on it
    gives t1, and t2 = t1 + equilibrium_gap(t1).
    """
    _check_positive(sigma2=sigma2, T=T)
    if classify_regime(sigma2, T, v0, v1, v2) is not TwoMeasureRegime.REGIME3:
        raise ValueError(
            "solve_stationarity requires regime 3 "
            f"(T={T} does not exceed the first critical duration)"
        )
    return _stationarity_root(sigma2, T, v0, v1, v2, tol)


def optimize_two(
    sigma2: float,
    T: float,
    v0: float,
    v1: float,
    v2: float,
    options: DescentOptions | None = None,
    with_trace: bool = False,
) -> TwoMeasureSolution:
    """Optimal schedule of two measurements on [0, T].

    Regime 1 returns (0, 0) and regime 2 returns (0, t2) with t2 the
    one-measure optimum for the merged prior; both are closed-form.  Regime 3
    runs coordinate descent from that point: the t2 update is the one-measure
    reduction, the t1 update is a golden-section line search, and iteration
    stops when both coordinate steps drop below ``options.step_tol``.  The
    result is cross-checked against :func:`solve_stationarity` unless
    disabled.
    """
    opts = options or DescentOptions()
    _check_positive(sigma2=sigma2, T=T)
    _check_finite(v0=v0, v1=v1, v2=v2)
    t2_crit = critical_duration_2_second(sigma2, v0, v1, v2)
    t1_crit = critical_duration_2_first(sigma2, v0, v1, v2)
    regime = classify_regime(sigma2, T, v0, v1, v2)
    merged = parallel_sum(v0, v1)

    if T <= t2_crit:
        return TwoMeasureSolution(
            t1_opt=0.0,
            t2_opt=0.0,
            regime=regime,
            cost_at_opt=cost_pair(sigma2, T, v0, v1, v2, 0.0, 0.0),
            T2_crit=t2_crit,
            T1_crit=t1_crit,
        )

    t2_first = optimal_instant_1(sigma2, T, merged, v2).t_opt
    # An exact prior degenerates the boundary cubic to 0 and forces regime 3
    # for every positive horizon, so the sign test only applies when v0 > 0.
    if v0 > 0.0 and cubic_coeffs(v0, v1, v2).evaluate(sigma2 * t2_first) >= 0.0:
        return TwoMeasureSolution(
            t1_opt=0.0,
            t2_opt=t2_first,
            regime=regime,
            cost_at_opt=cost_pair(sigma2, T, v0, v1, v2, 0.0, t2_first),
            T2_crit=t2_crit,
            T1_crit=t1_crit,
        )

    def line_cost(u: float, t2: float) -> float:
        return cost_pair(sigma2, T, v0, v1, v2, u, t2)

    t2 = t2_first
    t1 = _line_search_t1(sigma2, T, v0, v1, v2, t2, opts.golden_tol)
    steps = [(t1, t2, line_cost(t1, t2), math.nan, math.nan)]
    converged = False
    for _ in range(opts.max_iterations):
        t2_new = t1 + optimal_gap(sigma2, T, v0, v1, v2, t1)
        t1_new = _line_search_t1(sigma2, T, v0, v1, v2, t2_new, opts.golden_tol)
        d1, d2 = abs(t1_new - t1), abs(t2_new - t2)
        t1, t2 = t1_new, t2_new
        steps.append((t1, t2, line_cost(t1, t2), d1, d2))
        if d1 < opts.step_tol and d2 < opts.step_tol:
            converged = True
            break
    if not converged:
        raise RuntimeError(
            f"coordinate descent did not converge within {opts.max_iterations} "
            f"iterations (last steps {steps[-1][3]:.3e}, {steps[-1][4]:.3e})"
        )

    if opts.cross_check:
        b1, b2 = _stationarity_root(sigma2, T, v0, v1, v2, tol=1e-12)
        if max(abs(b1 - t1), abs(b2 - t2)) > opts.cross_check_tol:
            raise RuntimeError(
                "coordinate descent and the stationarity solver disagree: "
                f"descent ({t1}, {t2}) vs bisection ({b1}, {b2})"
            )

    gap_residual = optimal_gap(sigma2, T, v0, v1, v2, t1) - equilibrium_gap(
        sigma2, v0, v1, v2, t1
    )
    trace = DescentTrace(
        iterations=tuple(steps), converged=converged, final_gap=gap_residual
    )
    return TwoMeasureSolution(
        t1_opt=t1,
        t2_opt=t2,
        regime=regime,
        cost_at_opt=cost_pair(sigma2, T, v0, v1, v2, t1, t2),
        T2_crit=t2_crit,
        T1_crit=t1_crit,
        trace=trace if with_trace else None,
    )
