"""Evaluation of the slippery-cross-slope metric.

The metric value at a (point, tangent vector) pair is the unique admissible
positive root of a degree-four polynomial whose coefficients are built from
the h-norm of the vector, the height 1-form, the wind force and the
along-traction coefficient.  This module wraps the kernel root solve with
typed results and errors, exposes the closed-form special cases (the
Zermelo/Randers reduction and the Matsumoto-type building block), the
strong-convexity bounds, a differenced Hessian gate, and the derivative
bundle of the normalized metric function phi.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional

import numpy as np

from . import kernels
from .errors import ConvexityError, DomainError, RootSelectionError, SingularCError, ZeroVectorError
from .geometry import (
    ChartKind,
    SurfaceChart,
    gaussian_bell,
    gravitational_wind_at,
    inclined_plane,
    metric_at,
)
from .policy import DEFAULT_POLICY, NumericPolicy

__all__ = [
    "NavigationSetup",
    "AlphaBeta",
    "MetricEvaluation",
    "PhiBundle",
    "HessianReport",
    "alpha_beta",
    "quartic_coefficients",
    "evaluate_metric",
    "randers_closed_form",
    "matsumoto_type_metric",
    "convexity_bound",
    "scenario_gravity_bound",
    "hessian_check",
    "phi_bundle",
]


@dataclass(frozen=True)
class NavigationSetup:
    """Navigation data: surface chart, rescaled gravity, along-traction.

    ``gbar`` rescales the physical gravity (the rescaling factor is the
    caller's responsibility); ``eta_tilde`` in [0, 1] scales how much of the
    longitudinal gravity component is compensated by traction.
    """

    chart: SurfaceChart
    gbar: float
    eta_tilde: float

    def __post_init__(self):
        if not (self.gbar > 0.0):
            raise ValueError(f"gbar must be positive, got {self.gbar}")
        if not (0.0 <= self.eta_tilde <= 1.0):
            raise ValueError(f"eta_tilde must lie in [0, 1], got {self.eta_tilde}")


@dataclass(frozen=True)
class AlphaBeta:
    """Scalar metric data at one (point, vector): h-norm, 1-form, ratio."""

    alpha: float
    beta: float
    s: float
    wind_norm: float


@dataclass(frozen=True)
class MetricEvaluation:
    """Metric value with root diagnostics.

    ``root_multiplicity_flag`` is ``"degenerate_cubic"`` when the quartic's
    leading coefficient vanished and a lower-degree polynomial was solved.
    ``convexity_warning`` records an advisory-mode evaluation past the
    strong-convexity bound.
    """

    value: float
    residual_irrational: float
    residual_quartic: float
    root_multiplicity_flag: str
    convexity_warning: bool = False


@dataclass(frozen=True)
class PhiBundle:
    """The normalized metric function and its closed-form derivatives.

    ``phi`` is the metric divided by alpha; subscripts 1 and 2 denote
    derivatives in the squared wind-form norm and in s respectively.
    """

    phi: float
    phi1: float
    phi2: float
    phi12: float
    phi22: float
    A: float
    B: float
    C: float
    H: float


@dataclass(frozen=True)
class HessianReport:
    """Differenced fundamental tensor and its definiteness verdict."""

    matrix: np.ndarray
    is_positive_definite: bool
    eigenvalues: np.ndarray


def alpha_beta(setup: NavigationSetup, point, y) -> AlphaBeta:
    """h-norm alpha, 1-form value beta and their ratio at (point, y)."""
    y = np.asarray(y, dtype=float)
    if not np.any(y != 0.0):
        raise ZeroVectorError("alpha_beta requires a nonzero tangent vector")
    tensor = metric_at(setup.chart, point)
    alpha = math.sqrt(float(y @ tensor.components @ y))
    p = setup.chart.height_gradient(point)
    beta = float(p @ y)  # equals -h(y, wind)/gbar
    wind = gravitational_wind_at(setup, point)
    return AlphaBeta(alpha=alpha, beta=beta, s=beta / alpha, wind_norm=wind.norm)


def quartic_coefficients(eta_tilde: float, wind_norm: float, alpha: float, beta_bar: float):
    """Coefficients (c4, c3, c2, c1, c0) of the metric's quartic equation.

    ``beta_bar`` denotes gbar * beta.
    """
    return kernels.metric_quartic_coefficients(eta_tilde, wind_norm, alpha, beta_bar)


def convexity_bound(eta_tilde: float) -> float:
    """Supremum wind force keeping the metric strongly convex."""
    if not (0.0 <= eta_tilde <= 1.0):
        raise DomainError(f"eta_tilde must lie in [0, 1], got {eta_tilde}")
    if eta_tilde <= 1.0 / 3.0:
        return 1.0 / (1.0 - eta_tilde)
    return 1.0 / (2.0 * eta_tilde)


def _supremum_wind_factor(chart: SurfaceChart) -> float:
    """sup over the chart of ||G^T||_h / gbar."""
    if chart.kind is ChartKind.INCLINED_PLANE:
        q = chart.parameter * chart.parameter
        if q == 0.0:
            return 0.0
        return math.sqrt(q / (q + 1.0))
    if chart.kind is ChartKind.GAUSSIAN_BELL:
        # q(rho) = 4 a^2 rho^2 exp(-2 rho^2) peaks at rho = 1/sqrt(2)
        a = chart.parameter
        q_max = 2.0 * a * a / math.e
        return math.sqrt(q_max / (q_max + 1.0))
    raise DomainError("scenario gravity bound is only defined for built-in charts")


def scenario_gravity_bound(chart: SurfaceChart | ChartKind, eta_tilde: float) -> float:
    """Largest gbar keeping the whole built-in surface strongly convex.

    A bare ``ChartKind`` selects the reference surfaces (slope 1/2 plane,
    amplitude 3/2 bell).
    """
    if isinstance(chart, ChartKind):
        if chart is ChartKind.INCLINED_PLANE:
            chart = inclined_plane(0.5)
        elif chart is ChartKind.GAUSSIAN_BELL:
            chart = gaussian_bell(1.5)
        else:
            raise DomainError("scenario gravity bound is only defined for built-in charts")
    factor = _supremum_wind_factor(chart)
    if factor == 0.0:
        return math.inf
    return convexity_bound(eta_tilde) / factor


def _root_flag(degenerate: int) -> str:
    return "degenerate_cubic" if degenerate else "unique"


def evaluate_metric(
    setup: NavigationSetup,
    point,
    y,
    strict: bool = False,
    policy: NumericPolicy = DEFAULT_POLICY,
) -> MetricEvaluation:
    """Metric value at (point, y) as the admissible quartic root.

    In strict mode the call refuses points where the wind force reaches the
    strong-convexity bound; by default it evaluates anyway and records a
    warning flag, so exploratory sweeps past the bound stay possible.
    """
    ab = alpha_beta(setup, point, y)
    bound = convexity_bound(setup.eta_tilde)
    warn = ab.wind_norm >= bound
    if strict and warn:
        raise ConvexityError(
            f"wind force {ab.wind_norm:.6g} >= strong-convexity bound {bound:.6g}"
        )
    value, res_irr, res_q, degenerate, status = kernels.solve_metric(
        setup.eta_tilde, ab.wind_norm, ab.alpha, setup.gbar * ab.beta
    )
    if status != kernels.STATUS_OK:
        coeffs = np.array(
            quartic_coefficients(setup.eta_tilde, ab.wind_norm, ab.alpha, setup.gbar * ab.beta)
        )
        nz = np.nonzero(np.abs(coeffs) > 0)[0]
        candidates = np.roots(coeffs[nz[0] :]) if nz.size else np.array([])
        raise RootSelectionError(
            "no admissible positive root of the metric equation "
            f"(eta={setup.eta_tilde:.6g}, wind={ab.wind_norm:.6g}, "
            f"alpha={ab.alpha:.6g}, gbar*beta={setup.gbar * ab.beta:.6g})",
            candidates=candidates,
        )
    return MetricEvaluation(
        value=value,
        residual_irrational=res_irr,
        residual_quartic=res_q,
        root_multiplicity_flag=_root_flag(degenerate),
        convexity_warning=bool(warn),
    )


def randers_closed_form(wind_norm: float, alpha: float, beta_bar: float) -> float:
    """Closed-form metric of the zero-traction (Zermelo) reduction."""
    if wind_norm >= 1.0:
        raise ConvexityError(
            f"the Randers reduction requires wind force < 1, got {wind_norm:.6g}"
        )
    k2 = wind_norm * wind_norm
    return (math.sqrt(alpha * alpha * (1.0 - k2) + beta_bar * beta_bar) + beta_bar) / (1.0 - k2)


def matsumoto_type_metric(setup: NavigationSetup, point, y) -> float:
    """Deformed building-block metric alpha^2 / (alpha + eta * gbar * beta).

    This is the direction-dependent deformation stage, not the final
    navigation metric; it must stay positive, which holds when the wind
    force is below 1/(2 eta).
    """
    ab = alpha_beta(setup, point, y)
    denom = ab.alpha + setup.eta_tilde * setup.gbar * ab.beta
    if denom <= 0.0:
        raise DomainError(
            f"nonpositive denominator {denom:.6g} in the deformed metric "
            "(wind too strong for this traction)"
        )
    return ab.alpha * ab.alpha / denom


def hessian_check(
    setup: NavigationSetup,
    point,
    y,
    step: Optional[float] = None,
    policy: NumericPolicy = DEFAULT_POLICY,
) -> HessianReport:
    """Fundamental tensor g_ij = (1/2) d^2 F^2 / dy^i dy^j by differencing.

    Central differences at two step sizes (ratio 2) combined by Richardson
    extrapolation; positive definiteness is judged on the eigenvalues with a
    small margin.
    """
    y = np.asarray(y, dtype=float)
    if not np.any(y != 0.0):
        raise ZeroVectorError("hessian_check requires a nonzero tangent vector")

    def f2(vec) -> float:
        ev = evaluate_metric(setup, point, vec, strict=False, policy=policy)
        return ev.value * ev.value

    base = (step if step is not None else policy.hessian_rel_step) * float(np.linalg.norm(y))

    def second_diff(h: float) -> np.ndarray:
        g = np.empty((2, 2))
        f0 = f2(y)
        for i in range(2):
            e = np.zeros(2)
            e[i] = h
            g[i, i] = (f2(y + e) - 2.0 * f0 + f2(y - e)) / (h * h)
        e0 = np.array([h, 0.0])
        e1 = np.array([0.0, h])
        cross = (f2(y + e0 + e1) - f2(y + e0 - e1) - f2(y - e0 + e1) + f2(y - e0 - e1)) / (
            4.0 * h * h
        )
        g[0, 1] = g[1, 0] = cross
        return g

    coarse = second_diff(base)
    fine = second_diff(0.5 * base)
    matrix = 0.5 * (4.0 * fine - coarse) / 3.0  # includes the overall 1/2
    matrix = 0.5 * (matrix + matrix.T)
    eigenvalues = np.linalg.eigvalsh(matrix)
    return HessianReport(
        matrix=matrix,
        is_positive_definite=bool(np.all(eigenvalues > policy.hessian_margin)),
        eigenvalues=eigenvalues,
    )


def phi_bundle(
    setup: NavigationSetup,
    ab: AlphaBeta,
    policy: NumericPolicy = DEFAULT_POLICY,
) -> PhiBundle:
    """phi = F/alpha and its derivatives from the closed identities.

    The A, B, C scalars come from their printed cubic-in-phi forms; all four
    derivatives follow from the differentiated root identity, so no
    differencing is involved.
    """
    eta = setup.eta_tilde
    gbar = setup.gbar
    k = ab.wind_norm
    gs = gbar * ab.s
    phi, _ri, _rq, _deg, status = kernels.solve_metric(eta, k, 1.0, gs)
    if status != kernels.STATUS_OK:
        raise RootSelectionError(
            f"no admissible root for phi at s={ab.s:.6g}, wind={k:.6g}"
        )
    a_val, b_val, c_val = kernels.phi_coefficients(eta, k, phi, gs)
    if abs(c_val) < policy.singular_c_tol:
        raise SingularCError(
            f"C denominator {c_val:.3e} vanished at s={ab.s:.6g}, wind={k:.6g}"
        )
    phi2 = gbar * a_val * phi / c_val
    phi22 = gbar * gbar / c_val**3 * (a_val * a_val * b_val + eta * eta * phi**4)
    lam = (1.0 - eta) * b_val - eta * phi * phi
    phi1 = gbar * gbar / (2.0 * c_val) * lam * phi * phi
    h_val = 2.0 + gs * phi
    phi12 = (
        gbar**3
        / (2.0 * c_val**3)
        * (a_val * (b_val + c_val * phi) * lam + eta * eta * h_val * phi**4)
        * phi
    )
    return PhiBundle(
        phi=phi,
        phi1=phi1,
        phi2=phi2,
        phi12=phi12,
        phi22=phi22,
        A=a_val,
        B=b_val,
        C=c_val,
        H=h_val,
    )
