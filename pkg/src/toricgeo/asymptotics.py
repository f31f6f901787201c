"""Asymptotic slopes along monomial curves and Newton convex bodies.

The slope lim_{t -> -inf} f(a + t b)/t along an integer direction b equals the
Lelong number of the corresponding toric function along the curve
zeta -> (a_1 zeta^{b_1}, ..., a_n zeta^{b_n}); the Newton body is the set of
linear slopes dominated by f up to a constant, i.e. the finite region of f*.
Both are computed here, by independent routes, because their agreement
(slope(b) = min over the body of <lambda, b>) is one of the checked identities.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass

import numpy as np

from .errors import NoLimitError, ParameterError
from .lattice import BIG, DomainSpec, GridNd, build_grid, sample
from .legendre import DualGrid, conjugate, slope_range_warning


@dataclass(frozen=True)
class CurveSpec:
    """Monomial curve data: integer exponents b, coefficient moduli |a_i|.

    The coefficients enter only through their logs, which shift the base
    point of the ray x = a0 + t b; the slope limit is invariant under that
    shift, which is itself a tested property.
    """

    exponents: tuple
    coefficients: tuple = None
    base_point: tuple = None

    def __post_init__(self):
        b = tuple(self.exponents)
        if not b or any(int(v) != v or v < 1 for v in b):
            raise ParameterError("curve exponents must be positive integers")
        object.__setattr__(self, "exponents", tuple(int(v) for v in b))
        coeff = self.coefficients
        if coeff is not None:
            coeff = tuple(float(c) for c in coeff)
            if len(coeff) != len(b) or any(c <= 0 for c in coeff):
                raise ParameterError("curve coefficient moduli must be positive")
        object.__setattr__(self, "coefficients", coeff)
        base = self.base_point
        if base is None:
            if coeff is not None:
                base = tuple(min(math.log(c), -1.0) for c in coeff)
            else:
                base = (-1.0,) * len(b)
        else:
            base = tuple(float(v) for v in base)
            if len(base) != len(b):
                raise ParameterError("base point dimension must match exponents")
        object.__setattr__(self, "base_point", base)

    @property
    def dimension(self) -> int:
        return len(self.exponents)


@dataclass(frozen=True)
class SlopeValue:
    """Stabilized estimate of the slope at -inf along one curve."""

    estimate: float
    history: tuple  # (t_k, difference quotient) pairs
    stable: bool


def directional_slope(
    f_spec,
    curve: CurveSpec,
    max_doublings: int = 50,
    tol_stab: float | None = None,
) -> SlopeValue:
    """lim_{t -> -inf} f(a + t b)/t on the geometric sequence t_k = -2^k.

    Difference quotients r_k = (f(a + t_k b) - f(a))/t_k are monotone for a
    convex f, which already pins the limit; Aitken extrapolation on r_k
    removes the slowly decaying power tails of the non-linear profiles.
    """
    b = np.array(curve.exponents, dtype=np.float64)
    a = np.array(curve.base_point, dtype=np.float64)
    if f_spec.dimension != curve.dimension:
        raise ParameterError("curve dimension does not match the function spec")

    t = -np.power(2.0, np.arange(max_doublings + 1))
    pts = a[None, :] + t[:, None] * b[None, :]
    vals = np.asarray(f_spec.evaluate(pts), dtype=np.float64)
    f0 = float(np.asarray(f_spec.evaluate(a[None, :]))[0])
    r = (vals - f0) / t

    # Aitken delta-squared; fall back to the raw value once increments vanish.
    acc = r.copy()
    d1 = r[1:-1] - r[:-2]
    d2 = r[2:] - 2.0 * r[1:-1] + r[:-2]
    safe = np.abs(d2) > 1e-14 * (1.0 + np.abs(r[2:]))
    acc[2:] = np.where(safe, r[2:] - (r[2:] - r[1:-1]) ** 2 / np.where(safe, d2, 1.0), r[2:])

    estimate = float(acc[-1])
    tol = tol_stab if tol_stab is not None else 1e-3 * (1.0 + abs(estimate))
    osc = r[1:] - r[:-1]
    if np.any(osc > tol * 10.0):
        raise NoLimitError("difference quotients increase along the ray; input is not convex")
    stable = abs(acc[-1] - acc[-2]) < tol
    if not stable:
        raise NoLimitError("slope history failed to stabilize within the doubling budget")
    estimate = max(estimate, 0.0) if estimate > -tol else estimate
    history = tuple((float(tk), float(rk)) for tk, rk in zip(t, r))
    return SlopeValue(estimate=estimate, history=history, stable=stable)


@dataclass(frozen=True)
class NewtonBody:
    """Truncation-stable finite region of the conjugate on a dual grid."""

    dual_grid: DualGrid
    mask: np.ndarray  # boolean, dual grid shape
    margin: np.ndarray  # per-node |f*_2L - f*_L| stability gap


def newton_body(
    f_spec,
    dual: DualGrid,
    depth: float = 8.0,
    resolution: int = 513,
    tol_factor: float = 1e-3,
) -> NewtonBody:
    """Membership mask {lambda : f*(lambda) finite and truncation-stable}.

    The conjugate is computed at depths L and 2L; a slope node belongs to the
    body when the two values agree to tol (the supremum has genuinely
    converged) and is excluded when it keeps growing with the window.
    """
    slope_range_warning(dual)
    n = f_spec.dimension
    # the deeper grid extends the shallow one with the same spacing, so a
    # truncation-stable supremum gives bit-identical values at both depths
    upper = DomainSpec(n, depth=depth).upper
    h = (upper + depth) / (resolution - 1)
    vals = []
    for extent in (resolution - 1, 2 * (resolution - 1)):
        axis = upper - h * np.arange(extent, -1, -1)
        grid = GridNd(axes=(axis,) * n)
        fs = sample(f_spec, grid)
        vals.append(conjugate(fs, dual).values)
    v1, v2 = vals
    gap = np.abs(v2 - v1)
    tol = tol_factor * (1.0 + np.abs(v2))
    mask = (gap < tol) & (np.abs(v2) < BIG / 2)
    return NewtonBody(dual_grid=dual, mask=mask, margin=gap)


@dataclass(frozen=True)
class InclusionReport:
    included: bool
    excess: float  # how far mask(f) sticks out of mask(g), in slope units
    slack: float  # allowed boundary slack (one dual cell diagonal)


def newton_inclusion(f_spec, g_spec, dual: DualGrid, **body_kwargs) -> InclusionReport:
    """Test mask(f) subset-of mask(g) up to one dual-grid cell of slack."""
    bf = newton_body(f_spec, dual, **body_kwargs)
    bg = newton_body(g_spec, dual, **body_kwargs)
    cell = list(dual.cell_sizes())
    slack = math.sqrt(sum(c * c for c in cell))
    outside = bf.mask & ~bg.mask
    if not outside.any():
        return InclusionReport(included=True, excess=0.0, slack=slack)
    if not bg.mask.any():
        return InclusionReport(included=False, excess=math.inf, slack=slack)
    from scipy.ndimage import distance_transform_edt

    sampling = [max(c, 1e-12) for c in cell]
    dist = distance_transform_edt(~bg.mask, sampling=sampling)
    excess = float(dist[outside].max())
    return InclusionReport(included=excess <= slack, excess=excess, slack=slack)


def default_curves(dimension: int, b_max: int = 5) -> list:
    """All integer directions with entries in {1, ..., b_max}."""
    if b_max < 1:
        raise ParameterError("b_max must be at least 1")
    curves = [
        CurveSpec(exponents=b)
        for b in itertools.product(range(1, b_max + 1), repeat=dimension)
    ]
    return curves


@dataclass(frozen=True)
class SlopeConditionReport:
    holds: bool
    worst_curve: CurveSpec
    worst_gap: float  # min over curves of slope_f - slope_g
    slopes: tuple  # (curve, slope_f, slope_g) triples


def slope_condition(f_spec, g_spec, curves=None, tol: float = 0.02) -> SlopeConditionReport:
    """slope_f(b) >= slope_g(b) - tol for every curve in the set."""
    if curves is None:
        curves = default_curves(f_spec.dimension)
    if not curves:
        raise ParameterError("slope_condition needs a nonempty curve set")
    worst = None
    rows = []
    for curve in curves:
        sf = directional_slope(f_spec, curve).estimate
        sg = directional_slope(g_spec, curve).estimate
        gap = sf - sg
        rows.append((curve, sf, sg))
        if worst is None or gap < worst[1]:
            worst = (curve, gap)
    return SlopeConditionReport(
        holds=worst[1] >= -tol,
        worst_curve=worst[0],
        worst_gap=worst[1],
        slopes=tuple(rows),
    )


def body_support_slope(body: NewtonBody, exponents) -> float:
    """min over the membership mask of <lambda, b>: the dual-route slope."""
    if not body.mask.any():
        raise ParameterError("empty Newton body has no support slope")
    pts = body.dual_grid.points()[body.mask.ravel()]
    b = np.array(exponents, dtype=np.float64)
    return float((pts @ b).min())
