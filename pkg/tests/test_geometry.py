import math

import numpy as np
import numpy.testing as npt
import pytest

from slope_nav import (
    DomainError,
    NavigationSetup,
    christoffel_at,
    custom_surface,
    gaussian_bell,
    gravitational_wind_at,
    inclined_plane,
    metric_at,
    r_quantities_at,
)

from conftest import random_gauss_points


def flat_chart():
    return custom_surface(lambda x, y: 0.0)


# --- induced metric ---------------------------------------------------------


def test_plane_metric_is_constant_diagonal(plane):
    tensor = metric_at(plane, (0.3, -1.7))
    npt.assert_allclose(tensor.components, np.diag([1.25, 1.0]), rtol=0, atol=0)
    npt.assert_allclose(tensor.components @ tensor.inverse, np.eye(2), atol=1e-12)
    assert tensor.determinant == pytest.approx(1.25, abs=0)


def test_gauss_polar_metric_at_rho_one(gauss_polar):
    tensor = metric_at(gauss_polar, (1.0, 0.0))
    npt.assert_allclose(
        tensor.components, np.diag([9.0 * math.exp(-2.0) + 1.0, 1.0]), rtol=1e-15
    )


def test_flat_chart_metric_is_identity():
    tensor = metric_at(flat_chart(), (0.4, 2.0))
    npt.assert_allclose(tensor.components, np.eye(2), atol=1e-12)


def test_metric_positive_definite_random_points(plane, gauss_polar, gauss_cart):
    rng = np.random.default_rng(101)
    for chart, pts in (
        (plane, rng.normal(size=(1000, 2)) * 5.0),
        (gauss_polar, random_gauss_points(rng, 1000)),
        (gauss_cart, rng.uniform(-2.5, 2.5, size=(1000, 2))),
    ):
        for pt in pts:
            tensor = metric_at(chart, pt)
            eigs = np.linalg.eigvalsh(tensor.components)
            assert eigs.min() > 0.0
            npt.assert_allclose(
                tensor.components @ tensor.inverse, np.eye(2), atol=1e-12
            )


def test_polar_chart_domain_errors(gauss_polar):
    with pytest.raises(DomainError):
        metric_at(gauss_polar, (4.5, 0.0))
    with pytest.raises(DomainError):
        metric_at(gauss_polar, (1e-9, 0.0))


# --- Christoffel symbols ----------------------------------------------------


def test_christoffel_vanishes_on_constant_metrics(plane):
    npt.assert_allclose(christoffel_at(plane, (2.0, 3.0)), 0.0, atol=0)
    npt.assert_allclose(christoffel_at(flat_chart(), (0.5, -0.5)), 0.0, atol=1e-10)


def test_christoffel_gauss_polar_angular_symbol(gauss_polar):
    # finite-difference the polar metric matrix and assemble the symbols
    # independently, then read off the rho-phi entry (expected 1/rho)
    point = np.array([1.0, 0.3])
    gamma_fd = christoffel_at(gauss_polar, point, method="fd")
    gamma = christoffel_at(gauss_polar, point)
    assert gamma_fd[1, 0, 1] == pytest.approx(1.0, rel=1e-9)
    assert gamma[1, 0, 1] == pytest.approx(1.0, rel=1e-14)


def test_christoffel_analytic_matches_fd(gauss_polar, gauss_cart):
    rng = np.random.default_rng(7)
    for chart, pts in (
        (gauss_polar, random_gauss_points(rng, 50, rho_range=(0.3, 2.5))),
        (gauss_cart, rng.uniform(-1.8, 1.8, size=(50, 2))),
    ):
        for pt in pts:
            analytic = christoffel_at(chart, pt)
            fd = christoffel_at(chart, pt, method="fd")
            scale = max(1.0, np.abs(analytic).max())
            assert np.abs(analytic - fd).max() / scale < 1e-6


def test_christoffel_symmetric_in_lower_indices(gauss_cart):
    rng = np.random.default_rng(8)
    for pt in rng.uniform(-2.0, 2.0, size=(100, 2)):
        gamma = christoffel_at(gauss_cart, pt)
        npt.assert_allclose(gamma, np.swapaxes(gamma, 1, 2), atol=1e-14)


# --- gravitational wind -----------------------------------------------------


def test_plane_wind_norm_and_components(plane):
    setup = NavigationSetup(plane, 1.0, 0.0)
    wind = gravitational_wind_at(setup, (0.0, 0.0))
    assert wind.norm == pytest.approx(1.0 / math.sqrt(5.0), rel=1e-15)
    npt.assert_allclose(wind.components, [-2.0 / 5.0, 0.0], atol=1e-15)


def test_gauss_wind_peak(gauss_polar):
    setup = NavigationSetup(gauss_polar, 1.0, 0.0)
    wind = gravitational_wind_at(setup, (1.0 / math.sqrt(2.0), 0.7))
    assert wind.norm == pytest.approx(3.0 / math.sqrt(2.0 * math.e + 9.0), rel=1e-14)
    # ~0.79 gbar, the strongest wind anywhere on the bell
    assert wind.norm == pytest.approx(0.79, abs=0.01)


def test_wind_vanishes_at_critical_point(gauss_cart):
    setup = NavigationSetup(gauss_cart, 2.0, 0.5)
    wind = gravitational_wind_at(setup, (0.0, 0.0))
    npt.assert_allclose(wind.components, 0.0, atol=1e-15)
    assert wind.norm == 0.0


@pytest.mark.parametrize("gbar", [0.3, 1.0, 2.2])
def test_wind_norm_consistency(gbar, plane, gauss_polar, gauss_cart):
    rng = np.random.default_rng(55)
    cases = [
        (plane, rng.normal(size=(40, 2)) * 3.0),
        (gauss_polar, random_gauss_points(rng, 40)),
        (gauss_cart, rng.uniform(-2.0, 2.0, size=(40, 2))),
    ]
    for chart, pts in cases:
        setup = NavigationSetup(chart, gbar, 0.0)
        for pt in pts:
            tensor = metric_at(chart, pt)
            wind = gravitational_wind_at(setup, pt)
            norm_sq = float(wind.components @ tensor.components @ wind.components)
            assert norm_sq == pytest.approx(wind.norm**2, rel=1e-12, abs=1e-15)
            # norm^2 = gbar^2 q / (q + 1) with q the squared slope steepness
            grad = chart.height_gradient(pt)
            if chart is gauss_polar:
                q = grad[0] ** 2
            else:
                q = float(grad @ grad)
            assert wind.norm**2 == pytest.approx(
                gbar * gbar * q / (q + 1.0), rel=1e-12, abs=1e-15
            )
            npt.assert_allclose(
                wind.lowered, tensor.components @ wind.components, atol=1e-12
            )


def test_wind_one_form_is_closed(gauss_cart, gauss_polar):
    # the skew part of the covariant wind derivative must vanish; computed
    # here from raw partial derivatives of the lowered wind (the symbol
    # contraction cancels in the skew part)
    rng = np.random.default_rng(21)
    for chart, pts in (
        (gauss_cart, rng.uniform(-2.0, 2.0, size=(60, 2))),
        (gauss_polar, random_gauss_points(rng, 60, rho_range=(0.3, 2.5))),
    ):
        setup = NavigationSetup(chart, 1.3, 0.0)
        for pt in pts:
            pt = np.asarray(pt)
            jac = np.empty((2, 2))
            for j in range(2):
                h = 1e-6 * (1.0 + abs(pt[j]))
                e = np.zeros(2)
                e[j] = h
                wp = gravitational_wind_at(setup, pt + e).lowered
                wm = gravitational_wind_at(setup, pt - e).lowered
                jac[:, j] = (wp - wm) / (2.0 * h)
            skew = 0.5 * (jac - jac.T)
            assert np.abs(skew).max() < 1e-8


# --- covariant wind variation -----------------------------------------------


def test_plane_r_quantities_all_vanish(plane):
    setup = NavigationSetup(plane, 1.9, 0.7)
    rq = r_quantities_at(setup, (1.0, -2.0))
    assert np.abs(rq.r00_form).max() < 1e-10
    assert np.abs(rq.r0_covector).max() < 1e-10
    assert abs(rq.r_scalar) < 1e-10
    assert np.abs(rq.r_upper).max() < 1e-10


def _gauss_closed_forms(rho):
    """Printed closed forms of the covariant wind quantities on the bell."""
    u = 9.0 * rho**2 * math.exp(-2.0 * rho**2) + 1.0
    r11 = -3.0 * (1.0 - 2.0 * rho**2) * math.exp(-(rho**2)) / u
    r22 = -3.0 * rho**2 * math.exp(-(rho**2)) / u
    r1 = 9.0 * rho * (1.0 - 2.0 * rho**2) * math.exp(-2.0 * rho**2) / u**2
    r = -27.0 * rho**2 * (1.0 - 2.0 * rho**2) * math.exp(-3.0 * rho**2) / u**3
    r_up1 = 9.0 * rho * (1.0 - 2.0 * rho**2) * math.exp(-2.0 * rho**2) / u**3
    return r11, r22, r1, r, r_up1


def test_gauss_r_quantities_match_closed_forms(gauss_polar):
    setup = NavigationSetup(gauss_polar, 0.63, 1.0 / 3.0)
    for rho in np.linspace(0.1, 3.0, 59):
        rq = r_quantities_at(setup, (rho, 1.1))
        r11, r22, r1, r, r_up1 = _gauss_closed_forms(rho)
        for got, want in [
            (rq.r00_form[0, 0], r11),
            (rq.r00_form[1, 1], r22),
            (rq.r0_covector[0], r1),
            (rq.r_scalar, r),
            (rq.r_upper[0], r_up1),
        ]:
            assert got == pytest.approx(want, rel=1e-8, abs=1e-14)
        assert abs(rq.r00_form[0, 1]) < 1e-14
        assert abs(rq.r0_covector[1]) < 1e-14
        assert abs(rq.r_upper[1]) < 1e-14


def test_gauss_r_quantities_vanish_on_peak_parallel(gauss_polar):
    # at rho = 1/sqrt(2) the wind force is stationary and every contraction
    # carrying the (1 - 2 rho^2) factor dies
    setup = NavigationSetup(gauss_polar, 0.63, 0.0)
    rq = r_quantities_at(setup, (1.0 / math.sqrt(2.0), 0.2))
    assert abs(rq.r0_covector[0]) < 1e-10
    assert abs(rq.r_scalar) < 1e-10
    assert np.abs(rq.r_upper).max() < 1e-10


# --- custom charts ----------------------------------------------------------


def test_custom_chart_matches_builtin_bell(gauss_cart):
    surf = custom_surface(lambda x, y: 1.5 * math.exp(-(x * x + y * y)))
    rng = np.random.default_rng(3)
    for pt in rng.uniform(-1.5, 1.5, size=(25, 2)):
        h_custom = metric_at(surf, pt).components
        h_builtin = metric_at(gauss_cart, pt).components
        npt.assert_allclose(h_custom, h_builtin, atol=5e-9)
        gamma_custom = christoffel_at(surf, pt)
        gamma_builtin = christoffel_at(gauss_cart, pt)
        npt.assert_allclose(gamma_custom, gamma_builtin, atol=5e-4)


def test_custom_chart_with_analytic_gradient(gauss_cart):
    def height(x, y):
        return 1.5 * math.exp(-(x * x + y * y))

    def grad(x, y):
        e = 1.5 * math.exp(-(x * x + y * y))
        return (-2.0 * x * e, -2.0 * y * e)

    surf = custom_surface(height, gradient=grad)
    rng = np.random.default_rng(4)
    setup_a = NavigationSetup(surf, 0.63, 0.0)
    setup_b = NavigationSetup(gauss_cart, 0.63, 0.0)
    for pt in rng.uniform(-1.5, 1.5, size=(25, 2)):
        wa = gravitational_wind_at(setup_a, pt)
        wb = gravitational_wind_at(setup_b, pt)
        npt.assert_allclose(wa.components, wb.components, atol=1e-12)
        gamma = christoffel_at(surf, pt)
        npt.assert_allclose(gamma, christoffel_at(gauss_cart, pt), atol=5e-9)
