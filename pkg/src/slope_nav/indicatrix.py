"""Closed-form indicatrix curves and resultant-speed analysis.

Everything here lives in the tangent plane at one point, with the
orthonormal frame {e1 along the wind (steepest downhill), e2 across}.
Angles are measured clockwise from the steepest-downhill axis; in frame
coordinates the control direction is simply (cos theta, sin theta).
The parametric indicatrix

    X = (1 - eta * k * cos(theta)) * cos(theta) + k
    Y = (1 - eta * k * cos(theta)) * sin(theta)

with k the wind force is the analytic ground truth against which the
root-solved metric and the ODE fronts are tested.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import FrameUndefinedError
from .geometry import SurfaceChart, metric_at

__all__ = [
    "IndicatrixCurve",
    "SpeedProfile",
    "indicatrix_point",
    "indicatrix_curve",
    "implicit_residual",
    "speed_extrema",
    "speed_bifurcation",
    "comparison_profiles",
    "downhill_frame",
    "frame_to_chart",
    "chart_to_frame",
]


@dataclass(frozen=True)
class IndicatrixCurve:
    """Sampled indicatrix: rows (theta, X, Y, speed, theta_resultant)."""

    eta_tilde: float
    wind_norm: float
    samples: np.ndarray


@dataclass(frozen=True)
class SpeedProfile:
    """Stationary points of the resultant speed over the control angle.

    ``classification`` is ``"twin_maxima"`` once the global maximum leaves
    the downhill axis and splits into a symmetric pair.
    """

    eta_tilde: float
    wind_norm: float
    maxima: list[tuple[float, float]]
    minima: list[tuple[float, float]]
    classification: str


def indicatrix_point(eta_tilde: float, wind_norm: float, theta: float) -> tuple[float, float]:
    """Frame coordinates of the resultant velocity for control angle theta."""
    m = 1.0 - eta_tilde * wind_norm * math.cos(theta)
    return m * math.cos(theta) + wind_norm, m * math.sin(theta)


def implicit_residual(eta_tilde: float, wind_norm: float, x: float, y: float) -> float:
    """Defect of the theta-free indicatrix relation at a frame point."""
    k = wind_norm
    poly = x * x + y * y - (2.0 - eta_tilde) * x * k + (1.0 - eta_tilde) * k * k
    return poly - math.hypot(x - k, y)


def resultant_angle(x: float, y: float) -> float:
    """Clockwise angle of a frame vector from the downhill axis, in [0, 2pi)."""
    return math.atan2(y, x) % (2.0 * math.pi)


def indicatrix_curve(eta_tilde: float, wind_norm: float, n_samples: int = 360) -> IndicatrixCurve:
    """Sample the indicatrix on a uniform theta grid."""
    thetas = 2.0 * math.pi * np.arange(n_samples) / n_samples
    rows = np.empty((n_samples, 5))
    for i, theta in enumerate(thetas):
        x, y = indicatrix_point(eta_tilde, wind_norm, theta)
        rows[i] = (theta, x, y, math.hypot(x, y), resultant_angle(x, y))
    return IndicatrixCurve(eta_tilde=eta_tilde, wind_norm=wind_norm, samples=rows)


def _speed_sq(eta: float, k: float, theta: float) -> float:
    x, y = indicatrix_point(eta, k, theta)
    return x * x + y * y


def _speed_sq_deriv(eta: float, k: float, theta: float) -> float:
    # d(speed^2)/dtheta = 2 k sin(theta) [ (eta - 1) + (2 - eta) eta k cos(theta) ]
    return 2.0 * k * math.sin(theta) * ((eta - 1.0) + (2.0 - eta) * eta * k * math.cos(theta))


def _bisect_root(func, lo: float, hi: float, flo: float, tol: float = 1e-12) -> float:
    while hi - lo > tol:
        mid = 0.5 * (lo + hi)
        fm = func(mid)
        if fm == 0.0:
            return mid
        if flo * fm < 0.0:
            hi = mid
        else:
            lo, flo = mid, fm
    return 0.5 * (lo + hi)


def _off_axis_condition(eta: float, k: float) -> float:
    """Positive exactly when the stationary equation has off-axis roots.

    The speed derivative factors as 2 k sin(theta) * [(eta - 1) +
    (2 - eta) eta k cos(theta)]; the bracket reaches zero in (0, pi) iff
    this expression is positive.
    """
    return (2.0 - eta) * eta * k - (1.0 - eta)


def speed_extrema(eta_tilde: float, wind_norm: float, scan_points: int = 720) -> SpeedProfile:
    """Locate and classify all stationary speeds over theta in [0, 2pi).

    The analytic derivative of speed^2 is scanned on a uniform grid and
    every bracketed sign change is refined by bisection to 1e-12 in theta.
    The derivative's monotone bracket factor is scanned as well, so the
    off-axis stationary pair is caught even when it hugs the downhill axis
    near the bifurcation.
    """
    eta, k = eta_tilde, wind_norm
    if k == 0.0:
        return SpeedProfile(eta, k, maxima=[], minima=[], classification="single_max_single_min")

    two_pi = 2.0 * math.pi
    grid = np.linspace(0.0, two_pi, scan_points + 1)
    roots: list[float] = [0.0, math.pi]  # sin(theta) factor

    deriv = lambda t: _speed_sq_deriv(eta, k, t)
    vals = np.array([deriv(t) for t in grid])
    for i in range(scan_points):
        fa, fb = vals[i], vals[i + 1]
        if fa == 0.0:
            roots.append(grid[i])
        elif fa * fb < 0.0:
            roots.append(_bisect_root(deriv, grid[i], grid[i + 1], fa))

    bracket = lambda t: (eta - 1.0) + (2.0 - eta) * eta * k * math.cos(t)
    bvals = np.array([bracket(t) for t in grid])
    for i in range(scan_points):
        fa, fb = bvals[i], bvals[i + 1]
        if fa == 0.0:
            roots.append(grid[i])
        elif fa * fb < 0.0:
            roots.append(_bisect_root(bracket, grid[i], grid[i + 1], fa))

    merged: list[float] = []
    for t in sorted(r % two_pi for r in roots):
        if t > two_pi - 1e-9:
            continue
        if merged and abs(t - merged[-1]) < 1e-9:
            continue
        merged.append(t)

    maxima: list[tuple[float, float]] = []
    minima: list[tuple[float, float]] = []
    for idx, t in enumerate(merged):
        # probe within a third of the gap to the neighboring roots so close
        # pairs near the bifurcation are still separated
        prev_t = merged[idx - 1] - (two_pi if idx == 0 else 0.0)
        next_t = merged[idx + 1] if idx + 1 < len(merged) else merged[0] + two_pi
        delta = min((t - prev_t) / 3.0, (next_t - t) / 3.0, math.pi / scan_points)
        here = _speed_sq(eta, k, t)
        left = _speed_sq(eta, k, t - delta)
        right = _speed_sq(eta, k, t + delta)
        speed = math.sqrt(here)
        if here >= left and here >= right:
            maxima.append((t, speed))
        elif here <= left and here <= right:
            minima.append((t, speed))
        # saddle-flat points (degenerate exactly at the bifurcation) drop out

    twin = eta > 0.0 and _off_axis_condition(eta, k) > 0.0
    classification = "twin_maxima" if twin else "single_max_single_min"
    return SpeedProfile(eta, k, maxima=maxima, minima=minima, classification=classification)


def speed_bifurcation(wind_norm: float, tol: float = 1e-9) -> float:
    """Traction coefficient where the speed maximum leaves the downhill axis.

    Found by bisection on the classification flip of :func:`speed_extrema`.
    """
    k = wind_norm
    if k <= 0.0:
        raise ValueError("bifurcation requires a positive wind force")

    def is_twin(eta: float) -> bool:
        return speed_extrema(eta, k).classification == "twin_maxima"

    lo, hi = 0.0, 1.0
    if not is_twin(hi):
        raise ValueError(f"no twin-maxima regime up to eta=1 at wind force {k:.6g}")
    while hi - lo > tol:
        mid = 0.5 * (lo + hi)
        if is_twin(mid):
            hi = mid
        else:
            lo = mid
    return 0.5 * (lo + hi)


def comparison_profiles(wind_norm: float, n_samples: int = 360) -> dict:
    """Reference indicatrices: Riemannian circle, Zermelo, cross-slope, Matsumoto.

    The Matsumoto curve keeps the resultant collinear with the control
    direction, speed 1 + k cos(theta); it is flagged as incapable of strong
    convexity once the wind force reaches 1/2.
    """
    k = wind_norm
    thetas = 2.0 * math.pi * np.arange(n_samples) / n_samples
    riemann = np.column_stack(
        [thetas, np.cos(thetas), np.sin(thetas), np.ones_like(thetas), thetas]
    )
    mats_speed = 1.0 + k * np.cos(thetas)
    mats = np.column_stack(
        [
            thetas,
            mats_speed * np.cos(thetas),
            mats_speed * np.sin(thetas),
            np.abs(mats_speed),
            thetas,
        ]
    )
    return {
        "riemannian": riemann,
        "zermelo": indicatrix_curve(0.0, k, n_samples).samples,
        "cross_slope": indicatrix_curve(1.0, k, n_samples).samples,
        "matsumoto": mats,
        "matsumoto_convex_capable": bool(k < 0.5),
    }


def downhill_frame(chart: SurfaceChart, point) -> tuple[np.ndarray, np.ndarray]:
    """h-orthonormal frame (e1, e2) with e1 along the wind, in chart coords.

    The frame is a property of the surface alone: the wind direction is the
    negative height gradient regardless of the gravity rescaling.
    """
    tensor = metric_at(chart, point)
    p = chart.height_gradient(point)
    omega = tensor.inverse @ p
    norm_sq = float(p @ omega)
    if norm_sq <= 0.0:
        raise FrameUndefinedError(
            f"wind vanishes at {tuple(point)}; the downhill frame is undefined"
        )
    e1 = -omega / math.sqrt(norm_sq)
    low = tensor.components @ e1
    sqrt_det = math.sqrt(tensor.determinant)
    e2 = np.array([-low[1], low[0]]) / sqrt_det
    return e1, e2


def frame_to_chart(chart: SurfaceChart, point, x: float, y: float) -> np.ndarray:
    """Map frame coordinates (X, Y) to chart components of a tangent vector."""
    e1, e2 = downhill_frame(chart, point)
    return x * e1 + y * e2


def chart_to_frame(chart: SurfaceChart, point, vector) -> tuple[float, float]:
    """Inverse of :func:`frame_to_chart` via h-inner products with the frame."""
    tensor = metric_at(chart, point)
    e1, e2 = downhill_frame(chart, point)
    v = np.asarray(vector, dtype=float)
    return float(e1 @ tensor.components @ v), float(e2 @ tensor.components @ v)
