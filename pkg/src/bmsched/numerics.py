"""Generic numeric kernels and brute-force grid oracles.

The oracles evaluate the integral cost directly from the variance recursion on
a dense lattice, independently of any closed-form optimizer, so they can serve
as ground truth in tests.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np

from .kalman import ModelParams

__all__ = [
    "GOLDEN_RATIO_CONJUGATE",
    "GridOracleResult",
    "golden_section_min",
    "bisect_root",
    "finite_diff",
    "grid_oracle_1",
    "grid_oracle_2",
]

GOLDEN_RATIO_CONJUGATE = (math.sqrt(5.0) - 1.0) / 2.0


@dataclass(frozen=True)
class GridOracleResult:
    """Argmin of an exhaustive lattice search, optionally refined locally.

    For the two-instant oracle, ``lattice_cwlms`` lists every lattice point
    that no single-coordinate step can improve; lattice points of that kind
    that touch (8-connectivity) are one minimum at grid resolution and are
    reported once, by their best node.
    """

    argmin: tuple[float, ...]
    min_value: float
    grid_step: float
    refined: bool
    lattice_cwlms: tuple[tuple[float, float], ...] | None = None


def golden_section_min(
    f: Callable[[float], float],
    lo: float,
    hi: float,
    tol: float,
    trace: list | None = None,
) -> float:
    """Minimize a quasi-convex function on [lo, hi] to within tol.

    The bracket shrinks by the golden ratio conjugate per iteration with one
    function evaluation each; if ``trace`` is a list, the bracket (lo, hi) is
    appended after every shrink.
    """
    if not lo < hi:
        raise ValueError(f"golden_section_min needs lo < hi, got [{lo}, {hi}]")
    if not tol > 0:
        raise ValueError(f"tol must be positive, got {tol}")
    rho = GOLDEN_RATIO_CONJUGATE
    a, b = lo, hi
    c = b - rho * (b - a)
    d = a + rho * (b - a)
    fc, fd = f(c), f(d)
    while b - a > tol:
        if fc < fd:
            b, d, fd = d, c, fc
            c = b - rho * (b - a)
            fc = f(c)
        else:
            a, c, fc = c, d, fd
            d = a + rho * (b - a)
            fd = f(d)
        if trace is not None:
            trace.append((a, b))
    return 0.5 * (a + b)


def bisect_root(
    g: Callable[[float], float],
    lo: float,
    hi: float,
    tol: float,
    trace: list | None = None,
) -> float:
    """Root of a sign-changing function by bisection, to within tol."""
    if not lo < hi:
        raise ValueError(f"bisect_root needs lo < hi, got [{lo}, {hi}]")
    if not tol > 0:
        raise ValueError(f"tol must be positive, got {tol}")
    glo, ghi = g(lo), g(hi)
    if glo * ghi > 0:
        raise ValueError(f"bisect_root needs a sign change, got g(lo)={glo}, g(hi)={ghi}")
    if glo == 0.0:
        return lo
    if ghi == 0.0:
        return hi
    while hi - lo > tol:
        mid = 0.5 * (lo + hi)
        gm = g(mid)
        if gm == 0.0:
            return mid
        if glo * gm < 0:
            hi, ghi = mid, gm
        else:
            lo, glo = mid, gm
        if trace is not None:
            trace.append((lo, hi))
    return 0.5 * (lo + hi)


def finite_diff(f: Callable[[float], float], x: float, h: float) -> float:
    """Central difference (f(x+h) - f(x-h)) / (2h)."""
    if not h > 0:
        raise ValueError(f"h must be positive, got {h}")
    return (f(x + h) - f(x - h)) / (2.0 * h)


def _lattice(T: float, step: float) -> np.ndarray:
    if not step > 0:
        raise ValueError(f"step must be positive, got {step}")
    n = max(1, int(round(T / step)))
    return np.linspace(0.0, T, n + 1)


def _post_variance(v_sensor: float, pre: np.ndarray) -> np.ndarray:
    """Vectorized parallel sum of a scalar sensor variance and pre-measurement
    variances (handles the 0 and inf conventions)."""
    if v_sensor == 0.0:
        return np.zeros_like(pre)
    if math.isinf(v_sensor):
        return pre.copy()
    with np.errstate(divide="ignore", invalid="ignore"):
        out = v_sensor * pre / (v_sensor + pre)
    return np.where(pre == 0.0, 0.0, out)


def _cost_one_lattice(
    sigma2: float, T: float, v0: float, v1: float, t1: np.ndarray
) -> np.ndarray:
    post = _post_variance(v1, v0 + sigma2 * t1)
    return (
        0.5 * sigma2 * t1 * t1
        + v0 * t1
        + 0.5 * sigma2 * (T - t1) ** 2
        + post * (T - t1)
    )


def _cost_two_lattice(sigma2, T, v0, v1, v2, t1, t2):
    g1 = _post_variance(v1, v0 + sigma2 * t1)
    g2 = _post_variance(v2, g1 + sigma2 * (t2 - t1))
    return (
        0.5 * sigma2 * t1 * t1
        + v0 * t1
        + 0.5 * sigma2 * (t2 - t1) ** 2
        + g1 * (t2 - t1)
        + 0.5 * sigma2 * (T - t2) ** 2
        + g2 * (T - t2)
    )


def grid_oracle_1(params: ModelParams, sensor: float, step: float) -> GridOracleResult:
    """Exhaustive search of the one-measurement cost over a t1 lattice,
    followed by a golden-section refinement inside the winning cells."""
    s, T, v0 = params.sigma2, params.horizon, params.prior_variance
    t = _lattice(T, step)
    J = _cost_one_lattice(s, T, v0, sensor, t)
    k = int(np.argmin(J))
    best_t, best_J = float(t[k]), float(J[k])
    lo = float(t[max(0, k - 1)])
    hi = float(t[min(len(t) - 1, k + 1)])
    refined = False
    if hi > lo:
        cand = golden_section_min(
            lambda x: _cost_one_lattice(s, T, v0, sensor, np.asarray(x)),
            lo,
            hi,
            tol=1e-10,
        )
        cand_J = float(_cost_one_lattice(s, T, v0, sensor, np.asarray(cand)))
        # keep the lattice point on ties so boundary optima stay exact
        if cand_J < best_J:
            best_t, best_J = float(cand), cand_J
            refined = True
    return GridOracleResult(
        argmin=(best_t,), min_value=best_J, grid_step=step, refined=refined
    )


def _cwlm_nodes(J: np.ndarray, tol: float = 1e-12) -> np.ndarray:
    """Boolean mask of lattice points not improvable by one axis step.

    Comparisons are against the 4 axis neighbors that lie inside the domain
    (J is inf outside); ties within tol count as no improvement.
    """
    ok = np.isfinite(J)
    ok[:-1, :] &= J[:-1, :] <= J[1:, :] + tol
    ok[1:, :] &= J[1:, :] <= J[:-1, :] + tol
    ok[:, :-1] &= J[:, :-1] <= J[:, 1:] + tol
    ok[:, 1:] &= J[:, 1:] <= J[:, :-1] + tol
    return ok


def _merge_touching(nodes: list[tuple[int, int]], J: np.ndarray) -> list[tuple[int, int]]:
    """One representative (the best node) per 8-connected group of nodes."""
    nodeset = set(nodes)
    seen: set[tuple[int, int]] = set()
    reps = []
    for nd in nodes:
        if nd in seen:
            continue
        stack = [nd]
        seen.add(nd)
        comp = []
        while stack:
            i, j = stack.pop()
            comp.append((i, j))
            for di in (-1, 0, 1):
                for dj in (-1, 0, 1):
                    nb = (i + di, j + dj)
                    if nb in nodeset and nb not in seen:
                        seen.add(nb)
                        stack.append(nb)
        reps.append(min(comp, key=lambda ij: J[ij]))
    reps.sort()
    return reps


def grid_oracle_2(
    params: ModelParams, sensors: Sequence[float], step: float
) -> GridOracleResult:
    """Exhaustive search of the two-measurement cost over the lattice on the
    triangle 0 <= t1 <= t2 <= T, plus coordinatewise refinement.

    The lattice contains the boundary lines t1 = 0, t2 = T and the diagonal
    exactly.  Also reports the lattice points that are coordinatewise
    unimprovable (see :class:`GridOracleResult`).
    """
    if len(sensors) != 2:
        raise ValueError(f"sensors must have exactly 2 entries, got {len(sensors)}")
    s, T, v0 = params.sigma2, params.horizon, params.prior_variance
    v1, v2 = float(sensors[0]), float(sensors[1])
    t = _lattice(T, step)
    m = len(t)
    J = np.empty((m, m))
    block = max(1, (1 << 20) // m)  # bound temporaries to a few MB per block
    for i0 in range(0, m, block):
        i1 = min(m, i0 + block)
        J[i0:i1] = _cost_two_lattice(s, T, v0, v1, v2, t[i0:i1, None], t[None, :])
    J[t[None, :] < t[:, None]] = np.inf

    k = int(np.argmin(J))
    i, j = divmod(k, m)
    best = (float(t[i]), float(t[j]))
    best_J = float(J[i, j])

    nodes = [tuple(ix) for ix in np.argwhere(_cwlm_nodes(J))]
    reps = _merge_touching(nodes, J)
    cwlms = tuple((float(t[a]), float(t[b])) for a, b in reps)

    def J_scalar(x1, x2):
        return float(
            _cost_two_lattice(s, T, v0, v1, v2, np.asarray(x1), np.asarray(x2))
        )

    # coordinatewise golden refinement around the winning node; each move is
    # kept only if it strictly improves, so exact boundary optima stay put
    refined = False
    x1, x2 = best
    val = best_J
    for _ in range(8):
        moved = 0.0
        lo1, hi1 = max(0.0, x1 - step), min(x2, x1 + step)
        if hi1 > lo1:
            cand = golden_section_min(lambda u: J_scalar(u, x2), lo1, hi1, tol=1e-10)
            cand_J = J_scalar(cand, x2)
            if cand_J < val:
                moved = max(moved, abs(cand - x1))
                x1, val = cand, cand_J
        lo2, hi2 = max(x1, x2 - step), min(T, x2 + step)
        if hi2 > lo2:
            cand = golden_section_min(lambda u: J_scalar(x1, u), lo2, hi2, tol=1e-10)
            cand_J = J_scalar(x1, cand)
            if cand_J < val:
                moved = max(moved, abs(cand - x2))
                x2, val = cand, cand_J
        if moved < 1e-9:
            break
    if val < best_J:
        best, best_J = (x1, x2), val
        refined = True

    return GridOracleResult(
        argmin=best,
        min_value=best_J,
        grid_step=step,
        refined=refined,
        lattice_cwlms=cwlms,
    )
