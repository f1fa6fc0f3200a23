"""Geodesic spray of the slippery-cross-slope metric.

The spray coefficients decompose into the background Riemannian spray plus
wind-variation corrections built from nine scalar terms and the covariant
wind quantities.  ``slope_spray`` assembles them in closed form for any
chart; ``spray_fd_oracle`` recomputes the coefficients purely by central
differencing of the metric value, providing an independent check of every
sign and power in the assembly.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import kernels
from .errors import NearSingularEError, OracleUnavailableError, ZeroVectorError
from .geometry import SurfaceChart, christoffel_at, gravitational_wind_at, metric_at, r_quantities_at
from .policy import DEFAULT_POLICY, NumericPolicy
from .slope_metric import NavigationSetup, alpha_beta, evaluate_metric, hessian_check

__all__ = [
    "SprayTerms",
    "SprayCoefficients",
    "riemannian_spray",
    "spray_terms",
    "slope_spray",
    "spray_fd_oracle",
]


@dataclass(frozen=True)
class SprayTerms:
    """Scalar bundle entering the spray of the slope metric.

    E appears in every denominator of the Theta/Psi/Omega/Pi terms and is
    bounded away from zero on the strong-convexity domain.
    """

    A: float
    B: float
    C: float
    E: float
    R: float
    Theta: float
    Psi: float
    Omega: float
    Pi: float
    F_value: float


@dataclass(frozen=True)
class SprayCoefficients:
    """Spray values and their background Riemannian part, chart components."""

    values: np.ndarray
    riemannian_part: np.ndarray


def riemannian_spray(chart: SurfaceChart, point, y) -> np.ndarray:
    """Background spray (1/2) Gamma^i_jk y^j y^k of the induced metric."""
    y = np.asarray(y, dtype=float)
    gamma = christoffel_at(chart, point)
    return 0.5 * np.einsum("kij,i,j->k", gamma, y, y)


def spray_terms(
    setup: NavigationSetup,
    point,
    y,
    policy: NumericPolicy = DEFAULT_POLICY,
) -> SprayTerms:
    """All nine scalar terms at (point, y), using the solved metric value."""
    ab = alpha_beta(setup, point, y)
    evaluation = evaluate_metric(setup, point, y, policy=policy)
    (a_val, b_val, c_val, e_val, r_val, theta, psi, omega, pi_val, status) = (
        kernels.spray_terms_kernel(
            setup.eta_tilde, setup.gbar, ab.wind_norm, ab.alpha, ab.beta, evaluation.value
        )
    )
    if status == kernels.STATUS_SMALL_E:
        raise NearSingularEError(
            f"|E| = {abs(e_val):.3e} below {policy.near_singular_e_rel:.1e} * alpha^6 "
            f"at alpha={ab.alpha:.6g}, s={ab.s:.6g}, wind={ab.wind_norm:.6g}"
        )
    return SprayTerms(
        A=a_val,
        B=b_val,
        C=c_val,
        E=e_val,
        R=r_val,
        Theta=theta,
        Psi=psi,
        Omega=omega,
        Pi=pi_val,
        F_value=evaluation.value,
    )


def slope_spray(
    setup: NavigationSetup,
    point,
    y,
    policy: NumericPolicy = DEFAULT_POLICY,
) -> SprayCoefficients:
    """Closed-form spray coefficients of the slope metric at (point, y)."""
    y = np.asarray(y, dtype=float)
    tensor = metric_at(setup.chart, point)
    terms = spray_terms(setup, point, y, policy=policy)
    rq = r_quantities_at(setup, point)
    wind = gravitational_wind_at(setup, point)
    base = riemannian_spray(setup.chart, point, y)

    alpha = math.sqrt(float(y @ tensor.components @ y))
    a2 = alpha * alpha
    r00 = float(y @ rq.r00_form @ y)
    r0 = float(rq.r0_covector @ y)
    core = r00 + 2.0 * a2 * terms.R * rq.r_scalar
    along = (terms.Theta * core + alpha * terms.Omega * r0) / alpha
    cross = terms.Psi * core + alpha * terms.Pi * r0
    values = (
        base
        + along * y
        - cross * (wind.components / setup.gbar)
        - a2 * terms.R * rq.r_upper
    )
    return SprayCoefficients(values=values, riemannian_part=base)


def spray_fd_oracle(
    setup: NavigationSetup,
    point,
    y,
    rel_step: float = 1e-5,
    policy: NumericPolicy = DEFAULT_POLICY,
) -> np.ndarray:
    """Spray coefficients from the variational formula by pure differencing.

    Computes (1/4) g^{il} ( [F^2]_{x^k y^l} y^k - [F^2]_{x^l} ) with every
    derivative taken by Richardson-extrapolated central differences of the
    root-solved metric, and g from :func:`hessian_check`.  Shares no
    assembled formula with :func:`slope_spray`.
    """
    x = np.asarray(point, dtype=float)
    y = np.asarray(y, dtype=float)
    if not np.any(y != 0.0):
        raise ZeroVectorError("spray oracle requires a nonzero tangent vector")

    def f2(px, py) -> float:
        val = evaluate_metric(setup, px, py, policy=policy).value
        return val * val

    speed = float(np.linalg.norm(y))
    hx = rel_step * (1.0 + np.abs(x))
    hy = rel_step * speed

    def rhs_vector(sx, sy) -> np.ndarray:
        dF2x = np.empty(2)
        for ell in range(2):
            e = np.zeros(2)
            e[ell] = sx[ell]
            dF2x[ell] = (f2(x + e, y) - f2(x - e, y)) / (2.0 * sx[ell])
        mixed = np.zeros(2)
        for ell in range(2):
            ev = np.zeros(2)
            ev[ell] = sy
            for kk in range(2):
                ex = np.zeros(2)
                ex[kk] = sx[kk]
                d = (
                    f2(x + ex, y + ev)
                    - f2(x + ex, y - ev)
                    - f2(x - ex, y + ev)
                    + f2(x - ex, y - ev)
                ) / (4.0 * sx[kk] * sy)
                mixed[ell] += d * y[kk]
        return mixed - dF2x

    coarse = rhs_vector(hx, hy)
    fine = rhs_vector(0.5 * hx, 0.5 * hy)
    rhs = (4.0 * fine - coarse) / 3.0

    report = hessian_check(setup, x, y, policy=policy)
    g = report.matrix
    det = g[0, 0] * g[1, 1] - g[0, 1] * g[1, 0]
    scale = max(abs(g).max(), 1e-30)
    if not np.isfinite(det) or abs(det) < 1e-10 * scale * scale:
        raise OracleUnavailableError(
            f"fundamental tensor too ill-conditioned to invert (det={det:.3e})"
        )
    ginv = np.array([[g[1, 1], -g[0, 1]], [-g[1, 0], g[0, 0]]]) / det
    return 0.25 * ginv @ rhs
