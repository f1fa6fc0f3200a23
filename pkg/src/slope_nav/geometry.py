"""Differential geometry of parametrized hillside surfaces.

A surface is a graph ``z = f(x1, x2)`` over a 2-D chart (Cartesian, or polar
for rotationally symmetric bells).  This module exposes the induced metric,
its Christoffel symbols, the gravitational wind blowing in the steepest
downhill direction, and the covariant wind-variation quantities consumed by
the geodesic spray.

Built-in charts carry closed-form first and second height derivatives;
custom charts may supply only a height callable, in which case derivatives
fall back to central differences with step ``1e-6 * (1 + |coordinate|)``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from enum import Enum
from typing import Callable, Optional

import numpy as np

from . import kernels
from .errors import DegenerateMetricError, DomainError
from .policy import DEFAULT_POLICY

__all__ = [
    "ChartKind",
    "SurfaceChart",
    "MetricTensor",
    "WindSample",
    "RQuantities",
    "inclined_plane",
    "gaussian_bell",
    "custom_surface",
    "metric_at",
    "christoffel_at",
    "gravitational_wind_at",
    "r_quantities_at",
]

# default working-domain radius for the bell charts; the planar chart is global
GAUSS_RHO_MAX = 4.0
GAUSS_RHO_MIN = 1e-6  # polar chart only: coordinate singularity at the apex


class ChartKind(Enum):
    INCLINED_PLANE = "inclined_plane"
    GAUSSIAN_BELL = "gaussian_bell"
    CUSTOM = "custom"


@dataclass(frozen=True)
class SurfaceChart:
    """A parametrized surface patch with a twice-differentiable height.

    ``parameter`` is the slope for the inclined plane and the amplitude for
    the Gaussian bell.  ``polar`` selects the polar chart of the bell
    (coordinates (rho, phi)); the built-in plane is always Cartesian.
    """

    kind: ChartKind
    parameter: float = 0.0
    polar: bool = False
    coordinate_labels: tuple[str, str] = ("x", "y")
    height_fn: Optional[Callable[[float, float], float]] = None
    gradient_fn: Optional[Callable[[float, float], tuple[float, float]]] = None
    hessian_fn: Optional[Callable[[float, float], tuple[float, float, float]]] = None
    fd_step_scale: float = field(default=DEFAULT_POLICY.fd_step_scale)

    # -- chart identity ------------------------------------------------

    def kernel_code(self) -> Optional[tuple[int, float]]:
        """(code, parameter) for the compiled kernels, or None for custom."""
        if self.kind is ChartKind.INCLINED_PLANE:
            return kernels.CHART_PLANE, self.parameter
        if self.kind is ChartKind.GAUSSIAN_BELL:
            code = kernels.CHART_GAUSS_POLAR if self.polar else kernels.CHART_GAUSS_CART
            return code, self.parameter
        return None

    # -- domain ----------------------------------------------------------

    def domain_margin(self, point) -> float:
        """Signed margin to the domain boundary (positive strictly inside)."""
        x0, x1 = float(point[0]), float(point[1])
        if self.kind is ChartKind.GAUSSIAN_BELL:
            if self.polar:
                return min(x0 - GAUSS_RHO_MIN, GAUSS_RHO_MAX - x0)
            return GAUSS_RHO_MAX - math.hypot(x0, x1)
        return math.inf

    def contains(self, point) -> bool:
        return self.domain_margin(point) > 0.0

    # -- height and its derivatives ---------------------------------------

    def height(self, point) -> float:
        x0, x1 = float(point[0]), float(point[1])
        if self.kind is ChartKind.INCLINED_PLANE:
            return self.parameter * x0
        if self.kind is ChartKind.GAUSSIAN_BELL:
            if self.polar:
                return self.parameter * math.exp(-x0 * x0)
            return self.parameter * math.exp(-(x0 * x0 + x1 * x1))
        return float(self.height_fn(x0, x1))

    def height_gradient(self, point) -> np.ndarray:
        """Coordinate partials (p_1, p_2) of the height in this chart."""
        code = self.kernel_code()
        if code is not None:
            geom = kernels._chart_geometry(code[0], code[1], float(point[0]), float(point[1]))
            return np.array([geom[9], geom[10]])
        if self.gradient_fn is not None:
            g = self.gradient_fn(float(point[0]), float(point[1]))
            return np.array([float(g[0]), float(g[1])])
        return self._fd_gradient(point)

    def height_hessian(self, point) -> np.ndarray:
        """Coordinate second partials of the height (2x2 symmetric)."""
        code = self.kernel_code()
        if code is not None:
            geom = kernels._chart_geometry(code[0], code[1], float(point[0]), float(point[1]))
            return np.array([[geom[11], geom[12]], [geom[12], geom[13]]])
        if self.hessian_fn is not None:
            p11, p12, p22 = self.hessian_fn(float(point[0]), float(point[1]))
            return np.array([[p11, p12], [p12, p22]], dtype=float)
        return self._fd_hessian(point)

    def _fd_gradient(self, point) -> np.ndarray:
        x = np.asarray(point, dtype=float)
        grad = np.empty(2)
        for i in range(2):
            h = self.fd_step_scale * (1.0 + abs(x[i]))
            e = np.zeros(2)
            e[i] = h
            grad[i] = (self.height(x + e) - self.height(x - e)) / (2.0 * h)
        return grad

    def _fd_hessian(self, point) -> np.ndarray:
        # differences the (possibly analytic) gradient so a user-supplied
        # gradient_fn yields a clean Hessian
        x = np.asarray(point, dtype=float)
        grad_at = (
            (lambda q: np.array(self.gradient_fn(q[0], q[1]), dtype=float))
            if self.gradient_fn is not None
            else self._fd_gradient
        )
        hess = np.empty((2, 2))
        for j in range(2):
            h = self.fd_step_scale * (1.0 + abs(x[j]))
            e = np.zeros(2)
            e[j] = h
            hess[:, j] = (grad_at(x + e) - grad_at(x - e)) / (2.0 * h)
        return 0.5 * (hess + hess.T)

    # -- induced metric ----------------------------------------------------

    def metric_components(self, point) -> np.ndarray:
        code = self.kernel_code()
        if code is not None:
            g = kernels._chart_geometry(code[0], code[1], float(point[0]), float(point[1]))
            return np.array([[g[0], g[1]], [g[1], g[2]]])
        p = self.height_gradient(point)
        return np.eye(2) + np.outer(p, p)

    def metric_derivatives(self, point) -> np.ndarray:
        """dh[k, i, j] = d h_ij / d x^k, from the height derivatives."""
        code = self.kernel_code()
        if code is not None:
            g = kernels._chart_geometry(code[0], code[1], float(point[0]), float(point[1]))
            return np.array(
                [
                    [[g[3], g[4]], [g[4], g[5]]],
                    [[g[6], g[7]], [g[7], g[8]]],
                ]
            )
        p = self.height_gradient(point)
        pp = self.height_hessian(point)
        dh = np.empty((2, 2, 2))
        for k in range(2):
            dh[k] = np.outer(pp[:, k], p) + np.outer(p, pp[:, k])
        return dh


def inclined_plane(slope: float) -> SurfaceChart:
    """Planar slope z = slope * x1 in the global Cartesian chart."""
    return SurfaceChart(
        kind=ChartKind.INCLINED_PLANE,
        parameter=float(slope),
        coordinate_labels=("x", "y"),
    )


def gaussian_bell(amplitude: float, polar: bool = True) -> SurfaceChart:
    """Rotationally symmetric bell z = amplitude * exp(-(x^2 + y^2)).

    The polar chart (rho, phi) is the default for geodesic work; it excludes
    a small disk around the apex where the chart degenerates.
    """
    labels = ("rho", "phi") if polar else ("x", "y")
    return SurfaceChart(
        kind=ChartKind.GAUSSIAN_BELL,
        parameter=float(amplitude),
        polar=polar,
        coordinate_labels=labels,
    )


def custom_surface(
    height: Callable[[float, float], float],
    gradient: Optional[Callable] = None,
    hessian: Optional[Callable] = None,
    coordinate_labels: tuple[str, str] = ("x", "y"),
) -> SurfaceChart:
    """Graph surface over a Cartesian chart with a user height function."""
    return SurfaceChart(
        kind=ChartKind.CUSTOM,
        coordinate_labels=coordinate_labels,
        height_fn=height,
        gradient_fn=gradient,
        hessian_fn=hessian,
    )


@dataclass(frozen=True)
class MetricTensor:
    """Induced metric at a point: components, inverse, determinant."""

    components: np.ndarray
    inverse: np.ndarray
    determinant: float


@dataclass(frozen=True)
class WindSample:
    """Gravitational wind at a point.

    ``components`` are contravariant, ``lowered`` the metric-lowered
    covector, ``norm`` the h-norm (in units of the unit self-speed).
    """

    components: np.ndarray
    lowered: np.ndarray
    norm: float


@dataclass(frozen=True)
class RQuantities:
    """Covariant wind-variation contractions entering the spray.

    ``r00_form[i, j]`` contracted with y^i y^j gives the quadratic scalar;
    ``r0_covector`` with y^i the linear one.  All vanish when the wind force
    is constant over the chart.
    """

    r00_form: np.ndarray
    r0_covector: np.ndarray
    r_scalar: float
    r_upper: np.ndarray


def metric_at(chart: SurfaceChart, point) -> MetricTensor:
    """Induced metric h_ij at a chart point, with inverse and determinant."""
    if not chart.contains(point):
        raise DomainError(f"point {tuple(point)} outside the chart domain")
    h = chart.metric_components(point)
    if not np.all(np.isfinite(h)):
        raise DomainError(f"non-finite height derivatives at {tuple(point)}")
    det = float(h[0, 0] * h[1, 1] - h[0, 1] * h[1, 0])
    if det <= 0.0 or h[0, 0] <= 0.0:
        raise DegenerateMetricError(f"metric not positive definite at {tuple(point)}")
    inv = np.array([[h[1, 1], -h[0, 1]], [-h[1, 0], h[0, 0]]]) / det
    return MetricTensor(components=h, inverse=inv, determinant=det)


def christoffel_at(chart: SurfaceChart, point, method: str = "analytic") -> np.ndarray:
    """Christoffel symbols Gamma[k, i, j] of the induced metric.

    ``method="analytic"`` uses the chart's height derivatives;
    ``method="fd"`` central-differences the metric components directly
    (step ``1e-6 * (1 + |point|)``), mainly as a cross-check.
    """
    tensor = metric_at(chart, point)
    if method == "analytic":
        dh = chart.metric_derivatives(point)
    elif method == "fd":
        x = np.asarray(point, dtype=float)
        dh = np.empty((2, 2, 2))
        for k in range(2):
            step = DEFAULT_POLICY.fd_step_scale * (1.0 + abs(x[k]))
            e = np.zeros(2)
            e[k] = step
            dh[k] = (chart.metric_components(x + e) - chart.metric_components(x - e)) / (
                2.0 * step
            )
    else:
        raise ValueError(f"unknown method {method!r}")
    lower = np.empty((2, 2, 2))  # lower[m, i, j]
    for m in range(2):
        for i in range(2):
            for j in range(2):
                lower[m, i, j] = 0.5 * (dh[i, j, m] + dh[j, i, m] - dh[m, i, j])
    return np.einsum("km,mij->kij", tensor.inverse, lower)


def gravitational_wind_at(setup, point) -> WindSample:
    """Tangential gravity component at a point, scaled by setup.gbar."""
    tensor = metric_at(setup.chart, point)
    p = setup.chart.height_gradient(point)
    if not np.all(np.isfinite(p)):
        raise DomainError(f"non-finite height derivatives at {tuple(point)}")
    omega = tensor.inverse @ p  # gradient vector of the height
    components = -setup.gbar * omega
    lowered = -setup.gbar * p
    norm_sq = float(components @ tensor.components @ components)
    return WindSample(components=components, lowered=lowered, norm=math.sqrt(max(norm_sq, 0.0)))


def r_quantities_at(setup, point) -> RQuantities:
    """Covariant wind-variation quantities at a point.

    The wind 1-form is exact (a scaled height differential), so the
    symmetrized covariant derivative captures it entirely and the quantities
    are independent of the gravity rescaling.
    """
    tensor = metric_at(setup.chart, point)
    gamma = christoffel_at(setup.chart, point)
    p = setup.chart.height_gradient(point)
    pp = setup.chart.height_hessian(point)
    r_form = pp - np.einsum("kij,k->ij", gamma, p)
    r_form = 0.5 * (r_form + r_form.T)
    omega = tensor.inverse @ p
    r_cov = r_form @ omega
    r_scalar = float(r_cov @ omega)
    r_upper = tensor.inverse @ r_cov
    return RQuantities(
        r00_form=r_form,
        r0_covector=r_cov,
        r_scalar=r_scalar,
        r_upper=r_upper,
    )
