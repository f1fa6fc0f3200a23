"""Scalar numeric kernels for the slippery-cross-slope metric.

Everything on the hot path lives here: the degree-four root solve with its
admissibility filter, the scalar term bundle feeding the geodesic spray, the
closed-form geometry of the built-in charts, and the full geodesic
right-hand side for those charts.

The functions are written in a numba-compatible subset of Python.  When
numba is importable they are compiled with ``@njit``; otherwise (or when the
environment variable ``SLOPE_NAV_NUMBA`` is set to ``0``/``off``) the same
source runs as plain Python on top of numpy.  ``JIT_ENABLED`` reports which
path was selected.  Run ``benchmarks/bench_kernels.py`` to compare the two.

Status codes returned by the kernels (module constants):

====================  =====================================================
``STATUS_OK``         result is valid
``STATUS_NO_ROOT``    no admissible positive root passed the sign filter
``STATUS_BAD_METRIC`` chart metric singular / non-finite at the point
``STATUS_SMALL_E``    the E denominator fell below the safe threshold
====================  =====================================================
"""

import math
import os

import numpy as np

STATUS_OK = 0
STATUS_NO_ROOT = 1
STATUS_BAD_METRIC = 2
STATUS_SMALL_E = 3

# chart codes understood by _chart_geometry / geodesic_rhs
CHART_PLANE = 0
CHART_GAUSS_CART = 1
CHART_GAUSS_POLAR = 2

_IMAG_TOL = 1e-10
_DEGENERATE_TOL = 1e-12
_E_FLOOR_REL = 1e-8
_RESID_CAP_REL = 1e-6


def _select_jit():
    flag = os.environ.get("SLOPE_NAV_NUMBA", "auto").strip().lower()
    if flag in ("0", "off", "false", "no"):
        return False
    if flag in ("1", "on", "true", "yes"):
        import numba  # noqa: F401  -- fail loudly if forced on but missing

        return True
    try:
        import numba  # noqa: F401
    except ImportError:
        return False
    return True


JIT_ENABLED = _select_jit()

if JIT_ENABLED:
    from numba import njit as _njit

    def _maybe_jit(func):
        return _njit(cache=True)(func)

else:

    def _maybe_jit(func):
        return func


@_maybe_jit
def poly_roots(coeffs):
    """All complex roots of a real polynomial via companion eigenvalues.

    ``coeffs`` is highest-degree first and the leading coefficient must be
    nonzero.  The companion matrix is built complex so the eigensolve never
    changes numeric domain.
    """
    n = coeffs.shape[0] - 1
    comp = np.zeros((n, n), dtype=np.complex128)
    lead = coeffs[0]
    for j in range(n):
        comp[0, j] = -coeffs[j + 1] / lead
    for i in range(1, n):
        comp[i, i - 1] = 1.0
    return np.linalg.eigvals(comp)


@_maybe_jit
def metric_quartic_coefficients(eta, wind_norm, alpha, gbeta):
    """Coefficients (c4..c0) of the degree-four metric equation."""
    k2 = wind_norm * wind_norm
    a2 = alpha * alpha
    one_m = 1.0 - eta
    two_m = 2.0 - eta
    c4 = k2 * (1.0 - one_m * one_m * k2)
    c3 = 2.0 * (1.0 - two_m * one_m * k2) * gbeta
    c2 = (1.0 - 2.0 * one_m * k2) * a2 - two_m * two_m * gbeta * gbeta
    c1 = -2.0 * two_m * a2 * gbeta
    c0 = -a2 * a2
    return c4, c3, c2, c1, c0


@_maybe_jit
def _irrational_sides(eta, wind_norm, alpha, gbeta, value):
    """Both sides of the pre-squared metric equation at a candidate root.

    Returns (lhs, rhs, radicand).  The radicand is the squared h-norm of the
    wind-shifted vector, so a genuinely admissible root keeps it >= 0.
    """
    a2 = alpha * alpha
    k2 = wind_norm * wind_norm
    rad = a2 + 2.0 * gbeta * value + k2 * value * value
    rhs = a2 + (2.0 - eta) * gbeta * value + (1.0 - eta) * k2 * value * value
    if rad < 0.0:
        lhs = -1.0  # forces a visible defect; caller checks rad separately
    else:
        lhs = value * math.sqrt(rad)
    return lhs, rhs, rad


@_maybe_jit
def solve_metric(eta, wind_norm, alpha, gbeta):
    """Evaluate the slope metric as the admissible root of its quartic.

    Parameters are the along-traction coefficient, the wind force
    ``||G^T||_h``, ``alpha = ||y||_h`` and ``gbeta`` = (rescaled gravity) x
    (the 1-form value at y).

    The quartic is solved in the alpha-normalized variable (metric value
    over alpha), whose constant coefficient is exactly -1: this keeps the
    companion matrix well scaled for any vector length and makes the
    returned value homogeneous in the tangent vector by construction.

    Returns ``(value, res_irrational, res_quartic, degenerate, status)``
    with both residuals evaluated on the original (unnormalized) equations.
    ``degenerate`` is 1 when the leading coefficient was dropped and a lower
    degree polynomial was solved.  ``status`` is ``STATUS_NO_ROOT`` when no
    positive real root passes the sign filter; the least-bad positive root
    (or 0.0 if none) is still reported for diagnostics.
    """
    if not (alpha > 0.0) or not math.isfinite(alpha):
        return 0.0, 0.0, 0.0, 0, STATUS_NO_ROOT
    gs = gbeta / alpha
    c4, c3, c2, c1, c0 = metric_quartic_coefficients(eta, wind_norm, 1.0, gs)

    coeffs = np.empty(5, dtype=np.float64)
    coeffs[0] = c4
    coeffs[1] = c3
    coeffs[2] = c2
    coeffs[3] = c1
    coeffs[4] = c0  # exactly -1
    tol = _DEGENERATE_TOL  # = tol * max(1, |c0|) with |c0| = 1
    start = 0
    while start < 4 and abs(coeffs[start]) < tol:
        start += 1
    degenerate = 1 if start > 0 else 0

    roots = poly_roots(coeffs[start:])

    # Clearing the variational denominator makes the quartic admit an
    # artifact root where the wind-shifted vector itself vanishes: there
    # both sides of the pre-squared equation are 0, so a residual-minimal
    # rule can latch onto it.  The artifact always lies above the true root
    # (their ratio is eta * wind_norm < 1), so among roots passing the sign
    # and residual gates we keep the smallest.
    k2 = wind_norm * wind_norm
    best_phi = math.inf
    found = False
    fallback_phi = -1.0
    fallback_res = math.inf
    for idx in range(roots.shape[0]):
        z = roots[idx]
        mag = abs(z)
        if mag == 0.0:
            continue
        if abs(z.imag) > _IMAG_TOL * mag:
            continue
        phi = z.real
        if phi <= 0.0:
            continue
        # polish on the trimmed polynomial (roots of eigensolves are close
        # but two Newton steps buy several digits of residual)
        for _ in range(2):
            p = 0.0
            dp = 0.0
            for j in range(start, 5):
                dp = dp * phi + p
                p = p * phi + coeffs[j]
            if dp != 0.0:
                step = p / dp
                if abs(step) < 0.5 * phi:
                    phi -= step
        if phi <= 0.0:
            continue
        lhs, rhs, rad = _irrational_sides(eta, wind_norm, 1.0, gs, phi)
        res = lhs - rhs
        if abs(res) < fallback_res:
            fallback_res = abs(res)
            fallback_phi = phi
        eq_scale = 1.0 + 2.0 * abs(gs) * phi + k2 * phi * phi
        floor = -1e-12 * eq_scale
        if rad < floor:
            continue
        if rhs < floor:
            continue
        if abs(res) > _RESID_CAP_REL * eq_scale:
            continue
        if phi < best_phi:
            best_phi = phi
            found = True

    status = STATUS_OK
    if not found:
        if fallback_phi <= 0.0:
            return 0.0, 0.0, -(alpha ** 4), degenerate, STATUS_NO_ROOT
        best_phi = fallback_phi
        status = STATUS_NO_ROOT

    val = alpha * best_phi
    lhs, rhs, rad = _irrational_sides(eta, wind_norm, alpha, gbeta, val)
    res_irr = lhs - rhs
    q4, q3, q2, q1, q0 = metric_quartic_coefficients(eta, wind_norm, alpha, gbeta)
    res_quartic = (((q4 * val + q3) * val + q2) * val + q1) * val + q0
    return val, res_irr, res_quartic, degenerate, status


@_maybe_jit
def phi_coefficients(eta, wind_norm, phi, gs):
    """The A, B, C scalars of the metric's derivative identities.

    ``phi`` is the metric value normalized by alpha and ``gs`` the rescaled
    gravity times beta/alpha.  Zero-homogeneous in the tangent vector.
    """
    k2 = wind_norm * wind_norm
    one_m = 1.0 - eta
    two_m = 2.0 - eta
    t4 = 1.0 - one_m * one_m * k2
    t3 = 1.0 - two_m * one_m * k2
    t2 = 1.0 - 2.0 * one_m * k2
    a_val = -t3 * phi * phi + two_m * two_m * gs * phi + two_m
    b_val = -t2 * phi * phi + 2.0 * two_m * gs * phi + 2.0
    c_val = (
        2.0 * k2 * t4 * phi * phi * phi
        + 3.0 * t3 * gs * phi * phi
        + (t2 - two_m * two_m * gs * gs) * phi
        - two_m * gs
    )
    return a_val, b_val, c_val


@_maybe_jit
def spray_terms_kernel(eta, gbar, wind_norm, alpha, beta, f_value):
    """Scalar bundle (A, B, C, E, R, Theta, Psi, Omega, Pi) of the spray.

    Uses the already-solved metric value ``f_value`` at the same (point,
    vector).  Returns the nine scalars plus a status that flags a vanishing
    E denominator.
    """
    a2 = alpha * alpha
    a4 = a2 * a2
    a6 = a4 * a2
    k2 = wind_norm * wind_norm
    gb = gbar * beta
    f2 = f_value * f_value
    f4 = f2 * f2
    f5 = f4 * f_value
    f6 = f4 * f2
    one_m = 1.0 - eta
    two_m = 2.0 - eta
    eta2 = eta * eta

    t3 = 1.0 - two_m * one_m * k2
    t2 = 1.0 - 2.0 * one_m * k2

    a_val = -(t3 * f2 - two_m * two_m * gb * f_value - two_m * a2) / a2
    b_val = -(t2 * f2 - 2.0 * two_m * gb * f_value - 2.0 * a2) / a2
    c_val = (a2 * b_val + gb * a_val * f_value) / (alpha * f_value)
    e_val = a6 * b_val * c_val * c_val + (k2 * a2 - gb * gb) * (
        a4 * a_val * a_val * b_val + eta2 * f4
    )

    status = STATUS_OK
    if abs(e_val) <= _E_FLOOR_REL * a6:
        status = STATUS_SMALL_E

    lam = one_m * a2 * b_val - eta * f2
    r_val = gbar * gbar / (2.0 * a4 * b_val) * lam * f2
    theta = gbar * alpha / (2.0 * e_val * f_value) * (
        a6 * a_val * b_val * b_val - eta2 * gb * f5
    )
    psi = gbar * gbar * a2 / (2.0 * e_val) * (a4 * a_val * a_val * b_val + eta2 * f4)
    omega = gbar * gbar / (a2 * b_val * e_val) * (
        lam * (a6 * b_val * b_val * b_val + eta2 * k2 * f6)
        - eta2 * a2 * f5 * (gb * b_val + k2 * a_val * f_value)
    )
    pi_val = gbar * gbar * gbar / (2.0 * a2 * alpha * b_val * e_val) * (
        lam * (2.0 * a6 * a_val * b_val * b_val - eta2 * gb * f5)
        + eta2 * a2 * b_val * f4 * (2.0 * a2 + gb * f_value)
    ) * f_value
    return a_val, b_val, c_val, e_val, r_val, theta, psi, omega, pi_val, status


@_maybe_jit
def _chart_geometry(code, par, x0, x1):
    """Closed-form geometry of a built-in chart at one point.

    Returns the metric components (h11, h12, h22), their coordinate
    derivatives (dh_kij for k in {0,1}, ij in {11,12,22}), the height
    differential (p1, p2) and its coordinate Hessian (p11, p12, p22).
    """
    h11 = 1.0
    h12 = 0.0
    h22 = 1.0
    d011 = 0.0
    d012 = 0.0
    d022 = 0.0
    d111 = 0.0
    d112 = 0.0
    d122 = 0.0
    p1 = 0.0
    p2 = 0.0
    p11 = 0.0
    p12 = 0.0
    p22 = 0.0
    if code == CHART_PLANE:
        p1 = par
        h11 = 1.0 + par * par
    elif code == CHART_GAUSS_CART:
        e = par * math.exp(-(x0 * x0 + x1 * x1))
        p1 = -2.0 * x0 * e
        p2 = -2.0 * x1 * e
        p11 = (4.0 * x0 * x0 - 2.0) * e
        p12 = 4.0 * x0 * x1 * e
        p22 = (4.0 * x1 * x1 - 2.0) * e
        h11 = 1.0 + p1 * p1
        h12 = p1 * p2
        h22 = 1.0 + p2 * p2
        # dh_kij = p_ik p_j + p_i p_jk on a graph chart
        d011 = 2.0 * p11 * p1
        d012 = p11 * p2 + p1 * p12
        d022 = 2.0 * p12 * p2
        d111 = 2.0 * p12 * p1
        d112 = p12 * p2 + p1 * p22
        d122 = 2.0 * p22 * p2
    else:  # CHART_GAUSS_POLAR, x0 = radius
        rho = x0
        e = par * math.exp(-rho * rho)
        pr = -2.0 * rho * e
        prr = -2.0 * e * (1.0 - 2.0 * rho * rho)
        p1 = pr
        p11 = prr
        h11 = 1.0 + pr * pr
        h22 = rho * rho
        d011 = 2.0 * pr * prr
        d022 = 2.0 * rho
    return h11, h12, h22, d011, d012, d022, d111, d112, d122, p1, p2, p11, p12, p22


@_maybe_jit
def geodesic_rhs(code, par, gbar, eta, x0, x1, v0, v1):
    """Acceleration of the time-parametrized geodesic flow on a built-in chart.

    Returns ``(a0, a1, status)`` with the acceleration already including the
    factor -2 of the geodesic equation.
    """
    (h11, h12, h22, d011, d012, d022, d111, d112, d122,
     p1, p2, p11, p12, p22) = _chart_geometry(code, par, x0, x1)

    det = h11 * h22 - h12 * h12
    if not (det > 0.0) or not math.isfinite(det):
        return math.nan, math.nan, STATUS_BAD_METRIC
    i11 = h22 / det
    i12 = -h12 / det
    i22 = h11 / det

    # lower Christoffel symbols L_mij = (d_i h_jm + d_j h_im - d_m h_ij)/2
    l111 = 0.5 * d011
    l112 = 0.5 * d111
    l122 = d112 - 0.5 * d022
    l211 = d012 - 0.5 * d111
    l212 = 0.5 * d022
    l222 = 0.5 * d122
    # raise: Gamma^k_ij = h^{km} L_mij
    g111 = i11 * l111 + i12 * l211
    g112 = i11 * l112 + i12 * l212
    g122 = i11 * l122 + i12 * l222
    g211 = i12 * l111 + i22 * l211
    g212 = i12 * l112 + i22 * l212
    g222 = i12 * l122 + i22 * l222

    ga0 = 0.5 * (g111 * v0 * v0 + 2.0 * g112 * v0 * v1 + g122 * v1 * v1)
    ga1 = 0.5 * (g211 * v0 * v0 + 2.0 * g212 * v0 * v1 + g222 * v1 * v1)

    # gradient of the height and the wind
    om0 = i11 * p1 + i12 * p2
    om1 = i12 * p1 + i22 * p2
    b2 = p1 * om0 + p2 * om1
    if b2 < 0.0:
        b2 = 0.0
    wind_norm = gbar * math.sqrt(b2)

    a2 = h11 * v0 * v0 + 2.0 * h12 * v0 * v1 + h22 * v1 * v1
    alpha = math.sqrt(a2)
    if alpha == 0.0:
        return math.nan, math.nan, STATUS_BAD_METRIC
    beta = p1 * v0 + p2 * v1

    f_value, _ri, _rq, _deg, status = solve_metric(eta, wind_norm, alpha, gbar * beta)
    if status != STATUS_OK:
        return math.nan, math.nan, status

    (_a, _b, _c, _e, r_coef, theta, psi, omega, pi_val, status) = spray_terms_kernel(
        eta, gbar, wind_norm, alpha, beta, f_value
    )
    if status != STATUS_OK:
        return math.nan, math.nan, status

    # covariant wind variation: r_ij = p_ij - Gamma^k_ij p_k
    r11 = p11 - (g111 * p1 + g211 * p2)
    r12 = p12 - (g112 * p1 + g212 * p2)
    r22 = p22 - (g122 * p1 + g222 * p2)
    r00 = r11 * v0 * v0 + 2.0 * r12 * v0 * v1 + r22 * v1 * v1
    rl0 = r11 * om0 + r12 * om1  # r_i = r_ij om^j
    rl1 = r12 * om0 + r22 * om1
    r0 = rl0 * v0 + rl1 * v1
    r_scalar = rl0 * om0 + rl1 * om1
    ru0 = i11 * rl0 + i12 * rl1
    ru1 = i12 * rl0 + i22 * rl1

    core = r00 + 2.0 * a2 * r_coef * r_scalar
    along = (theta * core + alpha * omega * r0) / alpha
    # w^i / gbar = -om^i
    cross = psi * core + alpha * pi_val * r0

    gs0 = ga0 + along * v0 + cross * om0 - a2 * r_coef * ru0
    gs1 = ga1 + along * v1 + cross * om1 - a2 * r_coef * ru1
    return -2.0 * gs0, -2.0 * gs1, STATUS_OK


@_maybe_jit
def wind_norm_at(code, par, gbar, x0, x1):
    """Wind force ||G^T||_h at a point of a built-in chart."""
    (h11, h12, h22, _d011, _d012, _d022, _d111, _d112, _d122,
     p1, p2, _p11, _p12, _p22) = _chart_geometry(code, par, x0, x1)
    det = h11 * h22 - h12 * h12
    om0 = (h22 * p1 - h12 * p2) / det
    om1 = (-h12 * p1 + h11 * p2) / det
    b2 = p1 * om0 + p2 * om1
    if b2 < 0.0:
        b2 = 0.0
    return gbar * math.sqrt(b2)


@_maybe_jit
def metric_value_at(code, par, gbar, eta, x0, x1, v0, v1):
    """Metric value at a chart point and tangent vector (built-in charts)."""
    (h11, h12, h22, _d011, _d012, _d022, _d111, _d112, _d122,
     p1, p2, _p11, _p12, _p22) = _chart_geometry(code, par, x0, x1)
    a2 = h11 * v0 * v0 + 2.0 * h12 * v0 * v1 + h22 * v1 * v1
    alpha = math.sqrt(a2)
    wind_norm = wind_norm_at(code, par, gbar, x0, x1)
    beta = p1 * v0 + p2 * v1
    value, _ri, _rq, _deg, status = solve_metric(eta, wind_norm, alpha, gbar * beta)
    if status != STATUS_OK:
        return math.nan
    return value


@_maybe_jit
def solve_metric_batch(eta, wind_norm, alpha, gbeta, out):
    """Vectorized metric solve: fills ``out`` columns (value, res_irr, res_q).

    Returns the number of samples whose status was not OK.
    """
    bad = 0
    for i in range(eta.shape[0]):
        val, ri, rq, _deg, status = solve_metric(eta[i], wind_norm[i], alpha[i], gbeta[i])
        out[i, 0] = val
        out[i, 1] = ri
        out[i, 2] = rq
        if status != STATUS_OK:
            bad += 1
    return bad
