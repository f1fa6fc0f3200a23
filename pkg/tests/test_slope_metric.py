import math

import numpy as np
import numpy.testing as npt
import pytest

from slope_nav import (
    AlphaBeta,
    ConvexityError,
    DomainError,
    NavigationSetup,
    ZeroVectorError,
    alpha_beta,
    convexity_bound,
    custom_surface,
    downhill_frame,
    evaluate_metric,
    gaussian_bell,
    hessian_check,
    inclined_plane,
    matsumoto_type_metric,
    metric_at,
    phi_bundle,
    quartic_coefficients,
    randers_closed_form,
    scenario_gravity_bound,
)
from slope_nav import kernels

from conftest import convexity_sup, plane_setup, random_domain_samples


def irrational_sides(eta, k, alpha, gbeta, value):
    """Both sides of the pre-squared metric equation (test-local oracle)."""
    rad = alpha**2 + 2.0 * gbeta * value + k * k * value * value
    lhs = value * math.sqrt(max(rad, 0.0))
    rhs = alpha**2 + (2.0 - eta) * gbeta * value + (1.0 - eta) * k * k * value * value
    return lhs, rhs


# --- alpha/beta -------------------------------------------------------------


def test_alpha_beta_downhill_unit_vector():
    setup = plane_setup(0.0, wind_norm=0.49)
    e1, _ = downhill_frame(setup.chart, (0.0, 0.0))
    ab = alpha_beta(setup, (0.0, 0.0), e1)
    assert ab.alpha == pytest.approx(1.0, rel=1e-14)
    assert setup.gbar * ab.beta == pytest.approx(-0.49, rel=1e-14)
    assert ab.wind_norm == pytest.approx(0.49, rel=1e-14)


def test_alpha_beta_orthogonal_vector_has_zero_beta():
    setup = plane_setup(0.5)
    _, e2 = downhill_frame(setup.chart, (0.0, 0.0))
    ab = alpha_beta(setup, (0.0, 0.0), e2)
    assert abs(ab.beta) < 1e-15
    assert ab.s == pytest.approx(0.0, abs=1e-15)


def test_alpha_beta_zero_wind_zero_beta():
    setup = NavigationSetup(inclined_plane(0.0), 1.0, 0.3)
    ab = alpha_beta(setup, (0.0, 0.0), (0.7, -0.2))
    assert ab.beta == 0.0
    assert ab.wind_norm == 0.0


def test_alpha_beta_rejects_zero_vector():
    setup = plane_setup(0.5)
    with pytest.raises(ZeroVectorError):
        alpha_beta(setup, (0.0, 0.0), (0.0, 0.0))


def test_alpha_beta_cauchy_schwarz():
    rng = np.random.default_rng(17)
    setup = NavigationSetup(gaussian_bell(1.5), 0.63, 0.5)
    for _ in range(200):
        pt = (rng.uniform(0.2, 3.0), rng.uniform(0.0, 2 * math.pi))
        ab = alpha_beta(setup, pt, rng.normal(size=2))
        assert abs(ab.s) <= ab.wind_norm / setup.gbar + 1e-12


# --- quartic coefficients ----------------------------------------------------


def test_quartic_coefficients_zero_wind():
    alpha = 1.7
    c = quartic_coefficients(0.4, 0.0, alpha, 0.0)
    npt.assert_allclose(c, (0.0, 0.0, alpha**2, 0.0, -(alpha**4)), atol=0)


def test_quartic_coefficients_full_traction_matches_cross_slope():
    k, alpha, gbeta = 0.43, 1.3, -0.31
    c = quartic_coefficients(1.0, k, alpha, gbeta)
    expected = (
        k * k,
        2.0 * gbeta,
        alpha**2 - gbeta**2,
        -2.0 * gbeta * alpha**2,
        -(alpha**4),
    )
    npt.assert_allclose(c, expected, rtol=1e-15)


def test_quartic_leading_coefficient_degenerates_at_unit_wind():
    c = quartic_coefficients(0.0, 1.0, 1.2, -0.4)
    assert c[0] == 0.0


# --- metric evaluation -------------------------------------------------------


def test_evaluate_metric_zermelo_downhill():
    setup = plane_setup(0.0, wind_norm=0.49)
    e1, _ = downhill_frame(setup.chart, (0.0, 0.0))
    ev = evaluate_metric(setup, (0.0, 0.0), e1)
    assert ev.value == pytest.approx(0.51 / 0.7599, rel=1e-12)
    assert 1.0 / ev.value == pytest.approx(1.49, rel=1e-12)
    assert ev.root_multiplicity_flag == "unique"
    assert not ev.convexity_warning


def test_evaluate_metric_zero_wind_returns_alpha():
    setup = NavigationSetup(inclined_plane(0.0), 1.0, 0.6)
    y = np.array([0.8, -0.6])
    ev = evaluate_metric(setup, (0.0, 0.0), y)
    assert ev.value == pytest.approx(1.0, rel=1e-13)
    assert ev.root_multiplicity_flag == "degenerate_cubic"


def test_evaluate_metric_downhill_third_traction():
    # oracle: the parametric indicatrix speed at theta = 0 is
    # (1 - eta*k) + k, and the metric of a unit-h vector is 1/speed
    setup = plane_setup(1.0 / 3.0, wind_norm=0.49)
    e1, _ = downhill_frame(setup.chart, (0.0, 0.0))
    speed = (1.0 - 0.49 / 3.0) + 0.49
    ev = evaluate_metric(setup, (0.0, 0.0), e1)
    assert ev.value == pytest.approx(1.0 / speed, rel=1e-12)
    assert ev.value == pytest.approx(0.753769, abs=5e-7)


def test_evaluate_metric_rejects_zero_vector():
    setup = plane_setup(0.5)
    with pytest.raises(ZeroVectorError):
        evaluate_metric(setup, (0.0, 0.0), (0.0, 0.0))


def test_evaluate_metric_strict_gate_and_advisory_warning():
    setup = plane_setup(1.0, wind_norm=0.6)  # bound for full traction is 1/2
    with pytest.raises(ConvexityError):
        evaluate_metric(setup, (0.0, 0.0), (1.0, 0.2), strict=True)
    ev = evaluate_metric(setup, (0.0, 0.0), (1.0, 0.2))
    assert ev.convexity_warning
    assert ev.value > 0.0


def test_root_correctness_random_sweep():
    rng = np.random.default_rng(42)
    for eta, k, alpha, s in random_domain_samples(rng, 2000):
        gbeta = s * alpha
        setup_free = kernels.solve_metric(eta, k, alpha, gbeta)
        value, res_irr, res_q, _deg, status = setup_free
        assert status == kernels.STATUS_OK
        assert abs(res_irr) < 1e-8 * max(1.0, value**2)
        assert abs(res_q) < 1e-9 * max(1.0, value**4)
        lhs, rhs = irrational_sides(eta, k, alpha, gbeta, value)
        assert lhs >= 0.0 and rhs >= -1e-12 * max(1.0, alpha**2)


def test_exactly_one_admissible_positive_root():
    # recompute the quartic roots independently and count how many pass the
    # sign filter of the pre-squared equation
    rng = np.random.default_rng(43)
    for eta, k, alpha, s in random_domain_samples(rng, 400):
        gbeta = s * alpha
        coeffs = np.array(quartic_coefficients(eta, k, alpha, gbeta))
        nz = np.nonzero(np.abs(coeffs) > 1e-12 * max(1.0, abs(coeffs[-1])))[0]
        roots = np.roots(coeffs[nz[0] :])
        admissible = 0
        for z in roots:
            if abs(z.imag) > 1e-8 * abs(z) or z.real <= 0.0:
                continue
            val = z.real
            rad = alpha**2 + 2 * gbeta * val + k * k * val * val
            lhs, rhs = irrational_sides(eta, k, alpha, gbeta, val)
            scale = alpha**2 + 2 * abs(gbeta) * val + k * k * val * val
            if rad < -1e-9 * scale or rhs < -1e-9 * scale:
                continue
            if abs(lhs - rhs) > 1e-6 * scale:
                continue
            admissible += 1
        assert admissible == 1


def test_homogeneity_in_the_tangent_vector():
    setup = NavigationSetup(gaussian_bell(1.5), 0.63, 2.0 / 3.0)
    rng = np.random.default_rng(5)
    for _ in range(100):
        pt = (rng.uniform(0.2, 3.0), rng.uniform(0.0, 2 * math.pi))
        y = rng.normal(size=2)
        base = evaluate_metric(setup, pt, y).value
        for c in (0.1, 2.0, 17.0):
            scaled = evaluate_metric(setup, pt, c * y).value
            assert scaled == pytest.approx(c * base, rel=1e-10)


def test_zero_traction_reduces_to_randers_closed_form():
    rng = np.random.default_rng(77)
    for _ in range(1000):
        k = rng.uniform(0.0, 0.999)
        alpha = rng.uniform(0.1, 5.0)
        s = rng.uniform(-k, k)
        value, *_rest, status = kernels.solve_metric(0.0, k, alpha, s * alpha)
        assert status == kernels.STATUS_OK
        ref = randers_closed_form(k, alpha, s * alpha)
        assert value == pytest.approx(ref, rel=1e-10)


def test_full_traction_root_satisfies_cross_slope_quartic():
    rng = np.random.default_rng(78)
    for _ in range(1000):
        k = rng.uniform(0.0, 0.499)
        alpha = rng.uniform(0.1, 5.0)
        s = rng.uniform(-k, k)
        gbeta = s * alpha
        value, *_rest, status = kernels.solve_metric(1.0, k, alpha, gbeta)
        assert status == kernels.STATUS_OK
        residual = (
            k * k * value**4
            + 2.0 * gbeta * value**3
            + (alpha**2 - gbeta**2) * value**2
            - 2.0 * gbeta * alpha**2 * value
            - alpha**4
        )
        assert abs(residual) < 1e-9 * max(1.0, value**4)


# --- closed-form special cases ------------------------------------------------


def test_randers_closed_form_values():
    assert randers_closed_form(0.0, 1.3, 0.0) == pytest.approx(1.3, rel=0)
    val = randers_closed_form(0.49, 1.0, -0.49)
    assert val == pytest.approx((math.sqrt(0.7599 + 0.2401) - 0.49) / 0.7599, rel=1e-15)
    assert randers_closed_form(0.49, 1.0, 0.0) == pytest.approx(
        1.0 / math.sqrt(0.7599), rel=1e-13
    )
    # the h-unit vector along the fixed intersection direction (k, 1)/|(k, 1)|
    # travels at speed sqrt(1 + k^2): 1/F there is about 1.1136
    k = 0.49
    norm = math.hypot(k, 1.0)
    beta_bar = -k * k / norm
    inter = randers_closed_form(k, 1.0, beta_bar)
    assert 1.0 / inter == pytest.approx(norm, rel=1e-12)
    assert 1.0 / inter == pytest.approx(1.1136, abs=5e-5)
    with pytest.raises(ConvexityError):
        randers_closed_form(1.0, 1.0, 0.0)


def test_matsumoto_type_metric_cases():
    setup0 = plane_setup(0.0)
    e1, e2 = downhill_frame(setup0.chart, (0.0, 0.0))
    assert matsumoto_type_metric(setup0, (0.0, 0.0), e1) == pytest.approx(1.0, rel=1e-13)
    setup1 = plane_setup(1.0, wind_norm=0.3)
    assert matsumoto_type_metric(setup1, (0.0, 0.0), e2) == pytest.approx(1.0, rel=1e-13)
    # eta = 1, alpha = 1, gbar*beta = -0.3 (downhill unit vector)
    assert matsumoto_type_metric(setup1, (0.0, 0.0), e1) == pytest.approx(
        1.0 / 0.7, rel=1e-13
    )
    bad = plane_setup(1.0, wind_norm=1.2)
    with pytest.raises(DomainError):
        matsumoto_type_metric(bad, (0.0, 0.0), e1)


# --- convexity bounds ----------------------------------------------------------


@pytest.mark.parametrize(
    "eta, expected",
    [(0.0, 1.0), (0.2, 1.25), (1.0 / 3.0, 1.5), (0.5, 1.0), (1.0, 0.5)],
)
def test_convexity_bound_values(eta, expected):
    assert convexity_bound(eta) == pytest.approx(expected, abs=1e-15)


def test_convexity_bound_continuous_at_breakpoint():
    third = 1.0 / 3.0
    assert convexity_bound(third) == pytest.approx(1.5, abs=1e-12)
    assert convexity_bound(third + 1e-12) == pytest.approx(1.5, abs=1e-9)


def test_convexity_bound_rejects_out_of_range():
    with pytest.raises(DomainError):
        convexity_bound(-0.1)
    with pytest.raises(DomainError):
        convexity_bound(1.1)


def test_scenario_gravity_bounds(plane, gauss_polar):
    assert scenario_gravity_bound(plane, 1.0) == pytest.approx(
        math.sqrt(5.0) / 2.0, rel=1e-15
    )
    assert scenario_gravity_bound(plane, 0.0) == pytest.approx(math.sqrt(5.0), rel=1e-15)
    root = math.sqrt(2.0 * math.e + 9.0)
    assert scenario_gravity_bound(gauss_polar, 1.0) == pytest.approx(root / 6.0, rel=1e-15)
    assert scenario_gravity_bound(gauss_polar, 1.0) == pytest.approx(0.633, abs=5e-4)
    assert scenario_gravity_bound(gauss_polar, 0.0) == pytest.approx(root / 3.0, rel=1e-15)
    assert scenario_gravity_bound(gauss_polar, 0.0) == pytest.approx(1.27, abs=5e-3)
    with pytest.raises(DomainError):
        scenario_gravity_bound(custom_surface(lambda x, y: x * y), 0.5)


# --- Hessian gate ---------------------------------------------------------------


def test_hessian_equals_background_metric_without_wind():
    setup = NavigationSetup(inclined_plane(0.0), 1.0, 0.4)
    report = hessian_check(setup, (0.0, 0.0), (0.6, 0.8))
    npt.assert_allclose(report.matrix, np.eye(2), atol=1e-6)
    assert report.is_positive_definite


def test_hessian_positive_definite_past_unit_wind():
    # wind force 1.24 stays below the bound 1.5 at traction 1/3
    setup = plane_setup(1.0 / 3.0, wind_norm=1.24)
    for theta in np.linspace(0.0, 2.0 * math.pi, 64, endpoint=False):
        y = np.array([math.cos(theta), math.sin(theta)])
        assert hessian_check(setup, (0.0, 0.0), y).is_positive_definite


def test_hessian_fails_beyond_bound():
    setup = plane_setup(1.0, wind_norm=0.6)  # bound is 1/2
    failures = 0
    for theta in np.linspace(0.0, 2.0 * math.pi, 360, endpoint=False):
        y = np.array([math.cos(theta), math.sin(theta)])
        if not hessian_check(setup, (0.0, 0.0), y).is_positive_definite:
            failures += 1
    assert failures >= 1


# --- phi bundle -------------------------------------------------------------------


def phi_from_solver(eta, gbar, b2, s):
    k = gbar * math.sqrt(b2)
    value, _ri, _rq, _deg, status = kernels.solve_metric(eta, k, 1.0, gbar * s)
    assert status == kernels.STATUS_OK
    return value


def bundle_for(eta, gbar, k, s):
    chart = inclined_plane(0.5)
    setup = NavigationSetup(chart, gbar, eta)
    ab = AlphaBeta(alpha=1.0, beta=s, s=s, wind_norm=k)
    return phi_bundle(setup, ab)


def test_phi_bundle_zero_wind():
    bundle = bundle_for(0.7, 1.0, 0.0, 0.0)
    assert bundle.phi == pytest.approx(1.0, rel=1e-13)
    assert bundle.phi2 == pytest.approx(0.0, abs=1e-12)
    assert bundle.H == pytest.approx(2.0, rel=1e-13)


def test_phi_identity_reduction_at_zero_traction():
    # (2 - eta) B - 2 A = eta phi^2 collapses to 2B - 2A = 0 at eta = 0
    bundle = bundle_for(0.0, 1.0, 0.49, -0.2)
    assert 2.0 * bundle.B - 2.0 * bundle.A == pytest.approx(0.0, abs=1e-12)


def test_lemma_identities_random_sweep():
    rng = np.random.default_rng(31)
    for eta, k, _alpha, _s in random_domain_samples(rng, 2000, wind_frac=0.999):
        gbar = rng.uniform(0.3, 2.0)
        b = k / gbar
        s = rng.uniform(-b, b)
        bundle = bundle_for(eta, gbar, k, s)
        phi, a_v, b_v, c_v = bundle.phi, bundle.A, bundle.B, bundle.C
        gs = gbar * s
        assert c_v * bundle.phi2 == pytest.approx(gbar * a_v * phi, abs=1e-9)
        assert c_v * (phi - s * bundle.phi2) == pytest.approx(b_v, abs=1e-9)
        assert c_v * phi == pytest.approx(b_v + gs * a_v * phi, abs=1e-9)
        assert (2.0 - eta) * b_v - 2.0 * a_v == pytest.approx(eta * phi * phi, abs=1e-9)
        assert abs(b_v) > 1e-6 and abs(c_v) > 1e-6


def test_prop1_strong_convexity_inequality_in_two_dims():
    rng = np.random.default_rng(32)
    for _ in range(2000):
        eta = rng.uniform(0.0, 1.0)
        gbar = rng.uniform(0.3, 2.0)
        k = rng.uniform(1e-4, 0.999 * convexity_sup(eta))
        b = k / gbar
        s = rng.uniform(-b, b)
        bundle = bundle_for(eta, gbar, k, s)
        crit = bundle.phi - s * bundle.phi2 + (b * b - s * s) * bundle.phi22
        assert crit > 0.0


def test_phi_derivatives_match_central_differences():
    # oracle: re-solve the quartic at perturbed s and squared-form-norm;
    # second derivatives use two step sizes with Richardson combination
    rng = np.random.default_rng(33)
    for _ in range(250):
        eta = rng.uniform(0.0, 1.0)
        gbar = rng.uniform(0.4, 1.8)
        k = rng.uniform(0.05, 0.9 * convexity_sup(eta))
        b = k / gbar
        s = rng.uniform(-0.98 * b, 0.98 * b)
        bundle = bundle_for(eta, gbar, k, s)
        b2 = b * b

        f = lambda bb2, ss: phi_from_solver(eta, gbar, bb2, ss)
        h1 = 6e-6 * (1.0 + abs(s))
        hb1 = min(6e-6 * (1.0 + b2), 0.45 * b2)
        fd2 = (f(b2, s + h1) - f(b2, s - h1)) / (2.0 * h1)
        fd1 = (f(b2 + hb1, s) - f(b2 - hb1, s)) / (2.0 * hb1)

        def second(h):
            return (f(b2, s + h) - 2.0 * bundle.phi + f(b2, s - h)) / (h * h)

        h2 = 2e-4 * (1.0 + abs(s))
        fd22 = (4.0 * second(0.5 * h2) - second(h2)) / 3.0

        def mixed(hb, hs):
            return (
                f(b2 + hb, s + hs)
                - f(b2 + hb, s - hs)
                - f(b2 - hb, s + hs)
                + f(b2 - hb, s - hs)
            ) / (4.0 * hb * hs)

        hb2 = min(2e-4 * (1.0 + b2), 0.45 * b2)
        fd12 = (4.0 * mixed(0.5 * hb2, 0.5 * h2) - mixed(hb2, h2)) / 3.0

        scale = lambda z: max(1.0, abs(z))
        assert abs(fd2 - bundle.phi2) / scale(bundle.phi2) < 1e-5
        assert abs(fd1 - bundle.phi1) / scale(bundle.phi1) < 1e-5
        assert abs(fd22 - bundle.phi22) / scale(bundle.phi22) < 1e-5
        assert abs(fd12 - bundle.phi12) / scale(bundle.phi12) < 1e-5
