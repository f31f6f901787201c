"""Weak geodesics, convex envelopes and Newton bodies of toric psh functions.

Everything works in logarithmic coordinates x_i = log|z_i|, where toric
plurisubharmonic functions become convex increasing functions on the negative
orthant.  The package computes discrete Legendre conjugates and envelopes,
geodesic slices between two such endpoints, asymptotic slopes (Lelong
numbers) along monomial curves, Newton bodies, and runs the two-sided
endpoint-convergence check that ties them together.
"""

from .errors import (
    DegenerateGeodesicError,
    DimensionError,
    GridMismatchError,
    NoLimitError,
    ParameterError,
    PoleConditionError,
    ProtocolError,
    ToricError,
    UndefinedConjugateError,
)
from .lattice import (
    DomainSpec,
    GridNd,
    SampledFunction,
    build_grid,
    evaluate_toric,
    measure_pushforward,
    sample,
    validate_pole_condition,
)
from .funcspec import (
    FunctionSpec,
    LinearSpec,
    MaxLinearSpec,
    RadialPowerSpec,
    SamplesSpec,
    SumSpec,
    load_spec,
    spec_from_json,
)
from .legendre import (
    ConjugateFunction,
    DualGrid,
    biconjugate,
    conjugate,
    conjugate_bruteforce,
    convexify,
    dual_grid_for,
)
from .envelopes import (
    RooftopResult,
    RooftopSchedule,
    check_1d_endpoint,
    envelope_pair,
    envelope_pair_via_conjugates,
    rooftop_limit,
)
from .asymptotics import (
    CurveSpec,
    NewtonBody,
    SlopeValue,
    default_curves,
    directional_slope,
    newton_body,
    newton_inclusion,
    slope_condition,
)
from .geodesics import (
    ConvergenceReport,
    GeodesicSlice,
    endpoint_measure_trace,
    geodesic_at,
    geodesic_family,
    geodesic_oracle,
    slice_spec,
    theorem_check,
)
from .models import EnergyEstimate, RadialProfile, energy_e1, lelong_at_origin, radial_power

__version__ = "0.1.0"

__all__ = [
    "ToricError",
    "ParameterError",
    "PoleConditionError",
    "GridMismatchError",
    "DimensionError",
    "UndefinedConjugateError",
    "ProtocolError",
    "NoLimitError",
    "DegenerateGeodesicError",
    "DomainSpec",
    "GridNd",
    "SampledFunction",
    "build_grid",
    "sample",
    "evaluate_toric",
    "validate_pole_condition",
    "measure_pushforward",
    "FunctionSpec",
    "LinearSpec",
    "RadialPowerSpec",
    "MaxLinearSpec",
    "SumSpec",
    "SamplesSpec",
    "spec_from_json",
    "load_spec",
    "DualGrid",
    "ConjugateFunction",
    "conjugate",
    "conjugate_bruteforce",
    "biconjugate",
    "convexify",
    "dual_grid_for",
    "envelope_pair",
    "envelope_pair_via_conjugates",
    "RooftopSchedule",
    "RooftopResult",
    "rooftop_limit",
    "check_1d_endpoint",
    "CurveSpec",
    "SlopeValue",
    "directional_slope",
    "NewtonBody",
    "newton_body",
    "newton_inclusion",
    "slope_condition",
    "default_curves",
    "GeodesicSlice",
    "geodesic_at",
    "geodesic_family",
    "geodesic_oracle",
    "slice_spec",
    "endpoint_measure_trace",
    "theorem_check",
    "ConvergenceReport",
    "RadialProfile",
    "EnergyEstimate",
    "radial_power",
    "lelong_at_origin",
    "energy_e1",
]
