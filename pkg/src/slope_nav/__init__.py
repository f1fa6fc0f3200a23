"""Time-optimal navigation on slippery cross slopes.

Evaluates the direction-dependent travel-time metric induced by a
gravitational wind on a hillside under partial along-track traction,
verifies its strong-convexity domain, integrates the time-minimizing
geodesics via closed-form spray coefficients, and reproduces the
two-dimensional reference scenarios (inclined plane, Gaussian bell):
indicatrices, speed profiles and unit time fronts.
"""

from .errors import (
    ConfigError,
    ConvexityError,
    DegenerateMetricError,
    DomainError,
    FrameUndefinedError,
    FrontFailureError,
    NearSingularEError,
    OracleUnavailableError,
    RootSelectionError,
    SingularCError,
    SlopeNavError,
    ZeroVectorError,
)
from .geometry import (
    ChartKind,
    MetricTensor,
    RQuantities,
    SurfaceChart,
    WindSample,
    christoffel_at,
    custom_surface,
    gaussian_bell,
    gravitational_wind_at,
    inclined_plane,
    metric_at,
    r_quantities_at,
)
from .indicatrix import (
    IndicatrixCurve,
    SpeedProfile,
    chart_to_frame,
    comparison_profiles,
    downhill_frame,
    frame_to_chart,
    implicit_residual,
    indicatrix_curve,
    indicatrix_point,
    speed_bifurcation,
    speed_extrema,
)
from .kernels import JIT_ENABLED
from .policy import DEFAULT_POLICY, NumericPolicy
from .slope_metric import (
    AlphaBeta,
    HessianReport,
    MetricEvaluation,
    NavigationSetup,
    PhiBundle,
    alpha_beta,
    convexity_bound,
    evaluate_metric,
    hessian_check,
    matsumoto_type_metric,
    phi_bundle,
    quartic_coefficients,
    randers_closed_form,
    scenario_gravity_bound,
)
from .spray import (
    SprayCoefficients,
    SprayTerms,
    riemannian_spray,
    slope_spray,
    spray_fd_oracle,
    spray_terms,
)
from .trajectories import (
    GeodesicState,
    IntegrationOptions,
    TimeFront,
    Trajectory,
    compute_time_front,
    initial_velocity,
    integrate_geodesic,
)

__version__ = "0.1.0"
