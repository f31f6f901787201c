"""Weak-geodesic slices between toric endpoints and the two-sided theorem check.

A toric geodesic reduces to a family of convex functions u_t that is itself
convex in (x, t) with boundary data f at t = 0 and g at t = 1.  The default
("fast") path computes each slice as the conjugate of the affine interpolation
(1 - t) f* + t g*; the ground-truth oracle convexifies the boundary-constraint
function jointly in (x, t) and is what the fast path is validated against.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import DegenerateGeodesicError, ParameterError
from .lattice import (
    BIG,
    DomainSpec,
    GridNd,
    SampledFunction,
    build_grid,
    measure_pushforward,
    node_mask_to_cell_mask,
    sample,
)
from .legendre import DualGrid, _augmented_dual, _transform, biconjugate, dual_grid_for


@dataclass(frozen=True)
class GeodesicSlice:
    """u_t on the spatial grid, t strictly inside (0, 1)."""

    t: float
    values: SampledFunction

    def __post_init__(self):
        if not (0.0 < self.t < 1.0):
            raise ParameterError(f"slice time must lie in (0, 1), got {self.t}")


def _shared_dual(fs: SampledFunction, gs: SampledFunction) -> DualGrid:
    """One dual grid for both endpoints, holding their exact envelope slopes.

    With the exact slopes present the round trip through the dual reproduces
    each convex endpoint itself, so a slice between equal endpoints is that
    endpoint and not a one-dual-cell undershoot of it.
    """
    base = dual_grid_for(fs, gs)
    return _augmented_dual(gs, base=_augmented_dual(fs, base=base))


def _slice_from_conjugates(grid, dual_axes, fstar, gstar, t):
    h = (1.0 - t) * fstar + t * gstar
    # r + INF = INF: a slope missing from either conjugate is missing from h
    h[np.maximum(fstar, gstar) >= BIG / 2] = BIG
    if np.all(h >= BIG / 2):
        raise DegenerateGeodesicError("conjugates of the endpoints share no finite slope")
    u = _transform(dual_axes, h, grid.axes)
    if np.any(np.abs(u) >= BIG / 2):
        raise DegenerateGeodesicError("geodesic slice is unbounded on the grid")
    return SampledFunction.from_values(grid, u)


def geodesic_at(
    f_spec,
    g_spec,
    t: float,
    grid: GridNd | None = None,
    depth: float = 8.0,
    resolution: int = 257,
) -> GeodesicSlice:
    """Fast-path slice u_t = ((1 - t) f* + t g*)^* on a shared grid."""
    if not (0.0 < t < 1.0):
        raise ParameterError(f"t must lie in (0, 1), got {t}")
    n = f_spec.dimension
    if g_spec.dimension != n:
        raise ParameterError("geodesic endpoints must share a dimension")
    if grid is None:
        grid = build_grid(DomainSpec(n, depth=depth), resolution)
    fs = sample(f_spec, grid)
    gs = sample(g_spec, grid)
    dual = _shared_dual(fs, gs)
    fstar = _transform(grid.axes, fs.values, dual.axes)
    gstar = _transform(grid.axes, gs.values, dual.axes)
    return GeodesicSlice(t=t, values=_slice_from_conjugates(grid, dual.axes, fstar, gstar, t))


def geodesic_family(
    f_spec, g_spec, t_values, grid: GridNd | None = None, depth: float = 8.0, resolution: int = 257
) -> list:
    """Fast-path slices at several times, sharing one pair of conjugates."""
    n = f_spec.dimension
    if grid is None:
        grid = build_grid(DomainSpec(n, depth=depth), resolution)
    fs = sample(f_spec, grid)
    gs = sample(g_spec, grid)
    dual = _shared_dual(fs, gs)
    fstar = _transform(grid.axes, fs.values, dual.axes)
    gstar = _transform(grid.axes, gs.values, dual.axes)
    return [
        GeodesicSlice(t=float(t), values=_slice_from_conjugates(grid, dual.axes, fstar, gstar, float(t)))
        for t in t_values
    ]


def geodesic_oracle(
    f_spec,
    g_spec,
    grid: GridNd,
    time_resolution: int = 33,
) -> list:
    """Ground-truth slices: joint (x, t) convexification of the boundary data.

    The constraint function equals f on the t = 0 layer, g on the t = 1 layer
    and 0 in between (candidates are <= 0); its greatest convex minorant in
    (x, t), read strictly inside (0, 1), is the discrete geodesic.
    """
    if time_resolution < 8:
        raise ParameterError(f"time resolution must be >= 8, got {time_resolution}")
    n = grid.dimension
    if f_spec.dimension != n or g_spec.dimension != n:
        raise ParameterError("endpoint dimension does not match the grid")
    t_axis = np.linspace(0.0, 1.0, int(time_resolution))
    joint = GridNd(axes=grid.axes + (t_axis,))
    fs = sample(f_spec, grid)
    gs = sample(g_spec, grid)
    F = np.zeros(grid.shape + (t_axis.size,))
    F[..., 0] = fs.values
    F[..., -1] = gs.values
    env = biconjugate(SampledFunction.from_values(joint, F), exact=(n == 1))
    slices = []
    for k in range(1, t_axis.size - 1):
        vals = env.values[..., k]
        slices.append(
            GeodesicSlice(t=float(t_axis[k]), values=SampledFunction.from_values(grid, vals))
        )
    return slices


@dataclass(frozen=True)
class _SliceSpec:
    """Point-evaluable wrapper of the fast path with depth-adaptive grids.

    Used to probe a slice far beyond any fixed grid (asymptotic slopes): each
    batch gets its own grid, deep enough that truncation cannot reach the
    requested points at this t.
    """

    f_spec: object
    g_spec: object
    t: float
    resolution: int = 257

    kind = "geodesic_slice"

    @property
    def dimension(self) -> int:
        return self.f_spec.dimension

    def evaluate(self, points):
        pts = np.asarray(points, dtype=np.float64)
        flat = pts.reshape(-1, self.dimension)
        reach = float(np.max(np.abs(flat))) if flat.size else 1.0
        margin = min(self.t, 1.0 - self.t)
        depth = max(8.0, 4.0 * reach / margin)
        sl = geodesic_at(self.f_spec, self.g_spec, self.t, depth=depth, resolution=self.resolution)
        from scipy.interpolate import RegularGridInterpolator

        interp = RegularGridInterpolator(
            sl.values.grid.axes,
            sl.values.values,
            method="linear",
            bounds_error=False,
            fill_value=None,
        )
        return interp(flat).reshape(pts.shape[:-1])


def slice_spec(f_spec, g_spec, t: float, resolution: int = 257) -> _SliceSpec:
    return _SliceSpec(f_spec=f_spec, g_spec=g_spec, t=float(t), resolution=resolution)


def endpoint_measure_trace(
    f_spec,
    g_spec,
    epsilon: float = 0.1,
    t_values=(0.2, 0.1, 0.05, 0.025),
    depth: float = 8.0,
    resolution: int = 257,
) -> tuple:
    """Lebesgue measure (in z-space) of {|u_t - f| > epsilon} for each t.

    This is the capacity proxy: the trace tending to 0 as t -> 0 is the
    discrete signature of endpoint convergence.
    """
    if epsilon <= 0:
        raise ParameterError(f"epsilon must be positive, got {epsilon}")
    if any(not (0.0 < t < 1.0) for t in t_values):
        raise ParameterError("trace times must lie in (0, 1)")
    n = f_spec.dimension
    grid = build_grid(DomainSpec(n, depth=depth), resolution)
    f_vals = sample(f_spec, grid).values
    out = []
    for sl in geodesic_family(f_spec, g_spec, t_values, grid=grid):
        node_mask = np.abs(sl.values.values - f_vals) > epsilon
        m = measure_pushforward(grid, node_mask_to_cell_mask(node_mask))
        out.append((sl.t, m))
    return tuple(out)


@dataclass(frozen=True)
class ConvergenceReport:
    """Two independent verdicts on endpoint convergence plus diagnostics."""

    verdict_slopes: bool
    verdict_rooftop: bool
    measure_trace: tuple
    agreement: bool
    diagnostics: dict


def theorem_check(
    f_spec,
    g_spec,
    b_max: int = 5,
    epsilon: float = 0.1,
    trace_times=(0.2, 0.1, 0.05, 0.025),
    rooftop_kwargs: dict | None = None,
) -> ConvergenceReport:
    """Run the slope criterion and the rooftop criterion side by side.

    The two verdicts are computed along fully independent routes (asymptotic
    slopes along monomial curves vs the envelope limit P(f, g + c)); a
    disagreement is reported as data, never silently resolved.
    """
    from .asymptotics import default_curves, slope_condition
    from .envelopes import rooftop_limit

    curves = default_curves(f_spec.dimension, b_max=b_max)
    slopes = slope_condition(f_spec, g_spec, curves)
    rooftop = rooftop_limit(f_spec, g_spec, **(rooftop_kwargs or {}))
    trace = endpoint_measure_trace(f_spec, g_spec, epsilon=epsilon, t_values=trace_times)
    return ConvergenceReport(
        verdict_slopes=bool(slopes.holds),
        verdict_rooftop=bool(rooftop.converged_to_f),
        measure_trace=trace,
        agreement=bool(slopes.holds) == bool(rooftop.converged_to_f),
        diagnostics={
            "worst_curve": list(slopes.worst_curve.exponents),
            "worst_slope_gap": slopes.worst_gap,
            "rooftop_residual": rooftop.residual,
            "rooftop_tol": rooftop.verdict_tol,
            "rooftop_steps": len(rooftop.history),
        },
    )
