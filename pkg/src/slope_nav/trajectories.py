"""Time-parametrized geodesics and unit time fronts.

Geodesics solve the second-order system ``x'' = -2 G(x, x')`` with the
spray of the slope metric; parametrized by time, the metric value along a
geodesic stays exactly 1, so the recorded drift measures integrator
quality.  Fronts sweep a fan of initial directions (clockwise from the
steepest-downhill axis) and collect the endpoints after a fixed horizon.

Integration uses an adaptive embedded 5(4) Runge-Kutta pair with dense
output.  Built-in charts run through the compiled right-hand side;
custom charts fall back to the python assembly.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Optional

import numpy as np
from scipy.integrate import solve_ivp

from . import kernels
from .errors import DomainError, FrontFailureError
from .geometry import gravitational_wind_at, metric_at
from .indicatrix import downhill_frame
from .policy import DEFAULT_POLICY, NumericPolicy
from .slope_metric import NavigationSetup, convexity_bound, evaluate_metric

__all__ = [
    "GeodesicState",
    "Trajectory",
    "FrontPoint",
    "TimeFront",
    "IntegrationOptions",
    "TIME_REACHED",
    "LEFT_DOMAIN",
    "CONVEXITY_VIOLATION",
    "STEP_FAILURE",
    "initial_velocity",
    "integrate_geodesic",
    "compute_time_front",
]

TIME_REACHED = "time_reached"
LEFT_DOMAIN = "left_domain"
CONVEXITY_VIOLATION = "convexity_violation"
STEP_FAILURE = "step_failure"


@dataclass(frozen=True)
class GeodesicState:
    """Position, velocity and elapsed time of a moving craft."""

    position: np.ndarray
    velocity: np.ndarray
    time: float


@dataclass(frozen=True)
class Trajectory:
    """Sampled geodesic with its metric-drift record.

    ``f_residuals[i]`` is the metric value minus 1 at sample i; the maximum
    absolute value is ``norm_drift``.  Early exits keep the partial
    trajectory and label the reason.
    """

    samples: list[GeodesicState]
    norm_drift: float
    termination: str
    f_residuals: np.ndarray = field(default_factory=lambda: np.zeros(0))


@dataclass(frozen=True)
class FrontPoint:
    theta: float
    endpoint: Optional[np.ndarray]
    trajectory: Optional[Trajectory]
    termination: str


@dataclass(frozen=True)
class TimeFront:
    """Endpoints of the unit-horizon geodesic fan from a common origin."""

    horizon: float
    points: list[FrontPoint]
    origin: np.ndarray


@dataclass(frozen=True)
class IntegrationOptions:
    """Knobs of the geodesic integrator.

    ``renormalize_every`` (a time interval) optionally projects the velocity
    back onto the unit level set between chunks; off by default so the
    recorded drift stays an honest fidelity metric.
    """

    rtol: float = DEFAULT_POLICY.ode_rtol
    atol: float = DEFAULT_POLICY.ode_atol
    n_samples: int = 101
    enforce_convexity: bool = True
    renormalize_every: Optional[float] = None
    max_step: float = math.inf


def initial_velocity(setup: NavigationSetup, point, theta: float) -> np.ndarray:
    """Resultant velocity for a control direction theta, in chart components.

    Builds the unit control vector in the downhill frame and adds the full
    cross-wind plus the traction-scaled share of the along-wind component.
    The result lies on the unit level set of the metric by construction.
    At wind-free points the control vector itself is returned, expressed in
    an h-orthonormalized coordinate frame.
    """
    tensor = metric_at(setup.chart, point)
    wind = gravitational_wind_at(setup, point)
    if wind.norm <= 1e-14 * setup.gbar:
        e1 = np.array([1.0, 0.0]) / math.sqrt(tensor.components[0, 0])
        raw = np.array([0.0, 1.0])
        raw = raw - float(e1 @ tensor.components @ raw) * e1
        e2 = raw / math.sqrt(float(raw @ tensor.components @ raw))
        return math.cos(theta) * e1 + math.sin(theta) * e2
    e1, e2 = downhill_frame(setup.chart, point)
    u = math.cos(theta) * e1 + math.sin(theta) * e2
    along = float(wind.components @ tensor.components @ u)  # h(w, u), u is h-unit
    return u + wind.components - setup.eta_tilde * along * u


def _rhs_function(setup: NavigationSetup, policy: NumericPolicy):
    code = setup.chart.kernel_code()
    if code is not None:
        chart_code, par = code
        gbar, eta = setup.gbar, setup.eta_tilde

        def rhs(t, state):
            a0, a1, status = kernels.geodesic_rhs(
                chart_code, par, gbar, eta, state[0], state[1], state[2], state[3]
            )
            return (state[2], state[3], a0, a1)

        return rhs

    from .spray import slope_spray  # deferred: spray imports this module's sibling

    def rhs(t, state):
        try:
            coeffs = slope_spray(setup, state[:2], state[2:], policy=policy)
        except Exception:
            return (state[2], state[3], math.nan, math.nan)
        acc = -2.0 * coeffs.values
        return (state[2], state[3], acc[0], acc[1])

    return rhs


def _metric_value_fn(setup: NavigationSetup, policy: NumericPolicy):
    code = setup.chart.kernel_code()
    if code is not None:
        chart_code, par = code
        gbar, eta = setup.gbar, setup.eta_tilde

        def value(x, v):
            return kernels.metric_value_at(chart_code, par, gbar, eta, x[0], x[1], v[0], v[1])

        return value

    def value(x, v):
        try:
            return evaluate_metric(setup, x, v, policy=policy).value
        except Exception:
            return math.nan

    return value


def _make_events(setup: NavigationSetup, options: IntegrationOptions, position):
    events = []
    labels = []

    chart = setup.chart
    if math.isfinite(chart.domain_margin(position)):

        def domain_event(t, state, _chart=chart):
            return _chart.domain_margin(state[:2])

        domain_event.terminal = True
        domain_event.direction = -1
        events.append(domain_event)
        labels.append(LEFT_DOMAIN)

    if options.enforce_convexity:
        bound = convexity_bound(setup.eta_tilde)
        code = chart.kernel_code()
        if code is not None:
            chart_code, par = code
            gbar = setup.gbar

            def convexity_event(t, state):
                return bound - kernels.wind_norm_at(chart_code, par, gbar, state[0], state[1])

        else:

            def convexity_event(t, state):
                return bound - gravitational_wind_at(setup, state[:2]).norm

        convexity_event.terminal = True
        convexity_event.direction = -1
        events.append(convexity_event)
        labels.append(CONVEXITY_VIOLATION)

    return events, labels


def _integrate_chunk(rhs, t0, t1, state, options: IntegrationOptions, events):
    return solve_ivp(
        rhs,
        (t0, t1),
        state,
        method="RK45",
        rtol=options.rtol,
        atol=options.atol,
        dense_output=True,
        events=events,
        max_step=options.max_step,
    )


def integrate_geodesic(
    setup: NavigationSetup,
    start: GeodesicState,
    horizon: float,
    options: Optional[IntegrationOptions] = None,
    policy: NumericPolicy = DEFAULT_POLICY,
) -> Trajectory:
    """Integrate the geodesic flow from a unit-metric initial state.

    The caller must normalize the initial velocity to metric value 1 (use
    homogeneity: divide by the metric value); the horizon is then literally
    the elapsed time.
    """
    options = options or IntegrationOptions()
    if horizon <= 0.0:
        raise ValueError("horizon must be positive")
    position = np.asarray(start.position, dtype=float)
    velocity = np.asarray(start.velocity, dtype=float)
    if not setup.chart.contains(position):
        raise DomainError(f"start point {tuple(position)} outside the chart domain")
    start_value = evaluate_metric(setup, position, velocity, policy=policy).value
    if abs(start_value - 1.0) > policy.unit_speed_tol:
        raise ValueError(
            f"initial velocity has metric value {start_value:.12g}; normalize to 1 first"
        )

    rhs = _rhs_function(setup, policy)
    metric_value = _metric_value_fn(setup, policy)
    events, labels = _make_events(setup, options, position)

    t0 = float(start.time)
    t_target = t0 + horizon
    chunk = options.renormalize_every or horizon
    termination = TIME_REACHED

    pieces: list[tuple[np.ndarray, object]] = []  # (t grid edges, dense sol)
    t_now = t0
    state = np.concatenate([position, velocity])
    while t_now < t_target - 1e-15:
        t_next = min(t_now + chunk, t_target)
        sol = _integrate_chunk(rhs, t_now, t_next, state, options, events)
        t_end = sol.t[-1]
        pieces.append((np.array([t_now, t_end]), sol.sol))
        if sol.status == -1:
            termination = STEP_FAILURE
            t_target = t_end
            break
        if sol.status == 1:
            hit = [i for i, te in enumerate(sol.t_events) if te.size > 0]
            termination = labels[hit[0]] if hit else STEP_FAILURE
            t_target = t_end
            break
        state = sol.y[:, -1].copy()
        if options.renormalize_every is not None and t_end < t_target:
            value = metric_value(state[:2], state[2:])
            if np.isfinite(value) and value > 0.0:
                state[2:] /= value
        t_now = t_end

    t_final = pieces[-1][0][1] if pieces else t0
    n = max(2, int(options.n_samples))
    if t_final <= t0:
        grid = np.array([t0])
    else:
        grid = np.linspace(t0, t_final, n)

    samples: list[GeodesicState] = []
    residuals = np.empty(grid.size)
    for i, t in enumerate(grid):
        y = np.concatenate([position, velocity])
        for edges, dense in pieces:
            if t <= edges[1] or (edges is pieces[-1][0]):
                y = dense(min(max(t, edges[0]), edges[1]))
                break
        samples.append(GeodesicState(position=y[:2].copy(), velocity=y[2:].copy(), time=float(t)))
        residuals[i] = metric_value(y[:2], y[2:]) - 1.0

    finite = np.isfinite(residuals)
    drift = float(np.max(np.abs(residuals[finite]))) if finite.any() else math.inf
    return Trajectory(
        samples=samples,
        norm_drift=drift,
        termination=termination,
        f_residuals=residuals,
    )


def compute_time_front(
    setup: NavigationSetup,
    origin,
    horizon: float,
    n_directions: int,
    options: Optional[IntegrationOptions] = None,
    policy: NumericPolicy = DEFAULT_POLICY,
) -> TimeFront:
    """Sweep a uniform clockwise fan of directions into a time front.

    Each direction integrates independently; directions that fail carry
    their termination label instead of aborting the sweep.
    """
    if n_directions < 8:
        raise ValueError("a front needs at least 8 directions")
    origin = np.asarray(origin, dtype=float)
    points: list[FrontPoint] = []
    successes = 0
    for i in range(n_directions):
        theta = 2.0 * math.pi * i / n_directions
        try:
            velocity = initial_velocity(setup, origin, theta)
            start = GeodesicState(position=origin, velocity=velocity, time=0.0)
            trajectory = integrate_geodesic(setup, start, horizon, options, policy=policy)
        except Exception as exc:  # noqa: BLE001 - per-direction isolation
            points.append(
                FrontPoint(theta=theta, endpoint=None, trajectory=None, termination=type(exc).__name__)
            )
            continue
        endpoint = trajectory.samples[-1].position
        points.append(
            FrontPoint(
                theta=theta,
                endpoint=endpoint,
                trajectory=trajectory,
                termination=trajectory.termination,
            )
        )
        if trajectory.termination == TIME_REACHED:
            successes += 1
    if successes == 0:
        raise FrontFailureError(
            f"all {n_directions} directions failed from origin {tuple(origin)}"
        )
    return TimeFront(horizon=horizon, points=points, origin=origin)
