"""Single source of truth for the numeric tolerances used across the package.

Every routine that filters roots, differences a function, or gates on
convexity reads its thresholds from a :class:`NumericPolicy` instance, so
tests and production code can never drift apart on what "small" means.
"""

from dataclasses import dataclass


@dataclass(frozen=True)
class NumericPolicy:
    """Immutable bundle of tolerances and step sizes.

    Attributes
    ----------
    quartic_rel_residual:
        Accepted metric root must leave a degree-four residual below
        ``quartic_rel_residual * max(1, value**4)``.
    irrational_rel_residual:
        Bound on the defect of the irrational (pre-squared) metric equation,
        relative to ``max(1, value**2)``.
    root_imag_tol:
        A companion-matrix eigenvalue counts as real when its imaginary part
        is below ``root_imag_tol`` times its magnitude.
    degenerate_leading_tol:
        The quartic degrades to a cubic when ``|c4| < tol * max(1, |c0|)``.
    fd_step_scale:
        Central-difference step for chart quantities: ``scale * (1 + |x|)``.
    hessian_rel_step:
        Relative step for the velocity-Hessian differencing (Richardson
        extrapolated with a second step of half the size).  Second
        differences floor out at eps/step^2, so the step must stay two
        orders above the square root of machine epsilon.
    hessian_margin:
        Eigenvalue margin for declaring the fundamental tensor positive
        definite.
    ode_rtol, ode_atol:
        Tolerances of the adaptive 5(4) geodesic integrator.
    ode_min_step:
        Below this step size the integrator reports step failure.
    unit_speed_tol:
        Allowed deviation of the metric value from 1 for an initial state.
    norm_drift_tol:
        Advisory bound on metric drift along a trajectory (recorded, not
        enforced).
    singular_c_tol:
        Absolute threshold under which the C denominator counts as singular.
    near_singular_e_rel:
        |E| must exceed ``near_singular_e_rel * alpha**6`` in the spray terms.
    """

    quartic_rel_residual: float = 1e-9
    irrational_rel_residual: float = 1e-8
    root_imag_tol: float = 1e-10
    degenerate_leading_tol: float = 1e-12
    fd_step_scale: float = 1e-6
    hessian_rel_step: float = 1e-4
    hessian_margin: float = 1e-7
    ode_rtol: float = 1e-9
    ode_atol: float = 1e-11
    ode_min_step: float = 1e-12
    unit_speed_tol: float = 1e-9
    norm_drift_tol: float = 1e-6
    singular_c_tol: float = 1e-12
    near_singular_e_rel: float = 1e-8


DEFAULT_POLICY = NumericPolicy()
