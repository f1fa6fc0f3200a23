import math

import numpy as np
import pytest

from slope_nav import NavigationSetup, gaussian_bell, inclined_plane


@pytest.fixture
def plane():
    return inclined_plane(0.5)


@pytest.fixture
def gauss_polar():
    return gaussian_bell(1.5)


@pytest.fixture
def gauss_cart():
    return gaussian_bell(1.5, polar=False)


@pytest.fixture
def plane_setup_049():
    """Inclined-plane setup tuned so the wind force is exactly 0.49."""
    chart = inclined_plane(0.5)
    return NavigationSetup(chart, 0.49 * math.sqrt(5.0), 0.0)


def plane_setup(eta, wind_norm=0.49):
    """Plane setup builder with an exact target wind force."""
    return NavigationSetup(inclined_plane(0.5), wind_norm * math.sqrt(5.0), eta)


@pytest.fixture
def fig9_setup():
    """Bell scenario used throughout the geodesic figures."""
    return NavigationSetup(gaussian_bell(1.5), 0.63, 1.0 / 3.0)


def convexity_sup(eta):
    return 1.0 / (1.0 - eta) if eta <= 1.0 / 3.0 else 1.0 / (2.0 * eta)


def random_domain_samples(rng, n, wind_frac=0.95, alpha_range=(0.2, 4.0)):
    """(eta, wind, alpha, s) tuples strictly inside the convexity domain."""
    out = []
    for _ in range(n):
        eta = rng.uniform(0.0, 1.0)
        wind = rng.uniform(0.0, wind_frac * convexity_sup(eta))
        alpha = rng.uniform(*alpha_range)
        s = rng.uniform(-wind, wind)  # |s| <= b = wind/gbar with gbar = 1
        out.append((eta, wind, alpha, s))
    return out


def random_gauss_points(rng, n, rho_range=(0.15, 3.0)):
    return np.column_stack(
        [rng.uniform(*rho_range, n), rng.uniform(0.0, 2.0 * math.pi, n)]
    )
