"""Randomized property suites: duality identities, envelope oracles,
and the equivalence of the slope and Newton-body criteria.

Each suite draws seeded random piecewise-linear data, runs an identity
through two independent code paths, and reports a failure count.  The CLI
`verify` command and the acceptance tests are thin wrappers around these.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .funcspec import MaxLinearSpec
from .lattice import DomainSpec, SampledFunction, build_grid, sample
from .legendre import (
    biconjugate,
    conjugate,
    dual_grid_for,
    fenchel_young_violation,
    lower_convex_envelope_1d,
)


@dataclass
class SuiteReport:
    name: str
    cases: int
    failures: int = 0
    details: list = field(default_factory=list)

    def fail(self, case: int, what: str):
        self.failures += 1
        self.details.append({"case": case, "check": what})

    def to_json(self) -> dict:
        return {
            "suite": self.name,
            "cases": self.cases,
            "failures": self.failures,
            "details": self.details,
        }


def random_max_linear(rng, dimension: int, max_pieces: int = 4,
                      slope_hi: float = 3.0) -> MaxLinearSpec:
    k = int(rng.integers(2, max_pieces + 1))
    pieces = rng.uniform(0.0, slope_hi, size=(k, dimension))
    offsets = rng.uniform(-2.0, 0.0, size=k)
    return MaxLinearSpec(pieces=tuple(map(tuple, pieces)), offsets=tuple(offsets))


def run_conjugate_identity_suite(seed: int = 0, cases: int = 200, resolution: int = 257) -> SuiteReport:
    """Conjugate identities: min/max duality, constant shift, antitonicity,
    triple-conjugate idempotence, the Fenchel-Young inequality, and
    continuity along decreasing sequences."""
    rng = np.random.default_rng(seed)
    report = SuiteReport(name="conjugate", cases=cases)
    grid = build_grid(DomainSpec(1, depth=4.0), resolution)
    for case in range(cases):
        f = sample(random_max_linear(rng, 1), grid)
        g = sample(random_max_linear(rng, 1), grid)
        dual = dual_grid_for(f, g)

        fstar = conjugate(f, dual).values
        gstar = conjugate(g, dual).values

        # (min(f, g))* = max(f*, g*), exact
        mstar = conjugate(f.pointwise_min(g), dual).values
        if np.max(np.abs(mstar - np.maximum(fstar, gstar))) > 1e-12:
            report.fail(case, "min-max duality")

        # (f + c)* = f* - c, exact
        c = float(rng.uniform(-5.0, 5.0))
        if np.max(np.abs(conjugate(f.shift(c), dual).values - (fstar - c))) > 1e-12:
            report.fail(case, "constant shift")

        # f <= g implies f* >= g*
        h = SampledFunction.from_values(grid, f.values + np.abs(rng.normal(0, 1, f.values.shape)))
        if np.min(fstar - conjugate(h, dual).values) < -1e-12:
            report.fail(case, "antitonicity")

        # f*** = f*: conjugating the biconjugate changes nothing
        fss = biconjugate(f)
        if np.max(np.abs(conjugate(fss, dual).values - fstar)) > 1e-9:
            report.fail(case, "triple conjugate")

        if fenchel_young_violation(f, conjugate(f, dual)) > 1e-9:
            report.fail(case, "fenchel-young")

        # f_j decreasing to f: f_j* increases to f*
        lo = float(np.min(f.values))
        prev = None
        ok = True
        for level in np.linspace(lo + 2.0, lo - 1.0, 5):
            fj = SampledFunction.from_values(grid, np.maximum(f.values, level))
            star = conjugate(fj, dual).values
            if prev is not None and np.min(star - prev) < -1e-12:
                ok = False
            if np.min(fstar - star) < -1e-12:
                ok = False
            prev = star
        if not ok or np.max(np.abs(prev - fstar)) > 1e-12:
            report.fail(case, "monotone convergence")
    return report


def convex_combination_envelope(points: np.ndarray, values: np.ndarray) -> np.ndarray:
    """Envelope oracle: min of sum w_i f(p_i) over convex weights hitting x.

    By Caratheodory the minimum sits on the lower hull of the lifted points,
    so it equals the max of the lower-facet planes; evaluated directly from
    the facets, independently of any transform.
    """
    from scipy.spatial import ConvexHull

    pts = np.asarray(points, dtype=np.float64)
    vals = np.asarray(values, dtype=np.float64)
    n = pts.shape[1]
    hull = ConvexHull(np.column_stack([pts, vals]), qhull_options="Qt")
    eqs = hull.equations
    lower = eqs[:, n] < -1e-12
    a = -eqs[lower, :n] / eqs[lower, n][:, None]
    b = -eqs[lower, n + 1] / eqs[lower, n]
    planes = pts @ a.T + b[None, :]
    return planes.max(axis=1)


def envelope_lp_oracle(points: np.ndarray, values: np.ndarray, query: np.ndarray) -> np.ndarray:
    """Direct linear-program envelope at selected query points (slow)."""
    from scipy.optimize import linprog

    pts = np.asarray(points, dtype=np.float64)
    vals = np.asarray(values, dtype=np.float64)
    A_eq = np.vstack([pts.T, np.ones(pts.shape[0])])
    out = np.empty(query.shape[0])
    for i, q in enumerate(query):
        b_eq = np.concatenate([q, [1.0]])
        res = linprog(vals, A_eq=A_eq, b_eq=b_eq, bounds=(0, 1), method="highs")
        out[i] = res.fun
    return out


def run_envelope_suite(
    seed: int = 0,
    cases_1d: int = 100,
    cases_2d: int = 20,
    resolution_1d: int = 1024,
    resolution_2d: int = 17,
    lp_spot_checks: int = 12,
) -> SuiteReport:
    """Biconjugate against the gift-wrapping hull (1D) and the
    convex-combination oracle (2D), on random non-convex samples."""
    rng = np.random.default_rng(seed)
    report = SuiteReport(name="envelope", cases=cases_1d + cases_2d)
    grid1 = build_grid(DomainSpec(1, depth=4.0), resolution_1d)
    for case in range(cases_1d):
        vals = rng.uniform(-3.0, 0.0, grid1.shape)
        f = SampledFunction.from_values(grid1, vals)
        env = biconjugate(f).values
        oracle = lower_convex_envelope_1d(grid1.axes[0], vals)
        if np.max(np.abs(env - oracle)) > 1e-9:
            report.fail(case, "1d hull oracle")

    grid2 = build_grid(DomainSpec(2, depth=4.0), resolution_2d)
    pts = grid2.points()
    for case in range(cases_2d):
        vals = rng.uniform(-3.0, 0.0, grid2.shape)
        f = SampledFunction.from_values(grid2, vals)
        env = biconjugate(f).values.ravel()
        oracle = convex_combination_envelope(pts, vals.ravel())
        if np.max(np.abs(env - oracle)) > 1e-6:
            report.fail(cases_1d + case, "2d convex-combination oracle")
        if lp_spot_checks:
            stride = max(1, pts.shape[0] // lp_spot_checks)
            sel = np.arange(0, pts.shape[0], stride)
            lp = envelope_lp_oracle(pts, vals.ravel(), pts[sel])
            if np.max(np.abs(env[sel] - lp)) > 1e-6:
                report.fail(cases_1d + case, "2d linear-program spot check")
    return report


def _exact_slope(spec: MaxLinearSpec, b: np.ndarray) -> float:
    return float(min(np.dot(p, b) for p in spec.pieces))


def _exact_inclusion(f: MaxLinearSpec, g: MaxLinearSpec, margin: float = 0.0) -> bool:
    """Gamma(f) within Gamma(g) exactly: every slope of f lies in
    conv(slopes of g) + positive orthant, shrunk by ``margin``."""
    from scipy.optimize import linprog

    gp = np.array(g.pieces)
    k = gp.shape[0]
    for p in f.pieces:
        target = np.array(p) - margin
        # w >= 0, sum w = 1, sum w g_j <= target  (slack s >= 0 absorbed)
        res = linprog(
            np.zeros(k),
            A_ub=gp.T,
            b_ub=target,
            A_eq=np.ones((1, k)),
            b_eq=[1.0],
            bounds=(0, 1),
            method="highs",
        )
        if not res.success:
            return False
    return True


def _robust_pair(rng, dimension: int, b_max: int, delta: float = 0.3):
    """Draw a max-linear pair whose verdict is decidable at grid resolution.

    Cases are resampled until either the inclusion holds with slope margin
    ``delta`` in every direction, or some integer direction b <= b_max
    separates the slopes by more than ``delta`` (so both the curve sweep and
    the dual-grid masks can see it).
    """
    import itertools

    dirs = np.array(
        list(itertools.product(range(1, b_max + 1), repeat=dimension)), dtype=np.float64
    )
    norms = np.linalg.norm(dirs, axis=1)
    while True:
        f = random_max_linear(rng, dimension)
        g = random_max_linear(rng, dimension)
        sf = np.array([_exact_slope(f, b) for b in dirs])
        sg = np.array([_exact_slope(g, b) for b in dirs])
        gaps = (sf - sg) / norms
        if np.min(gaps) <= -delta:
            return f, g, False
        if _exact_inclusion(f, g, margin=delta):
            return f, g, True
        # ambiguous at this resolution; draw again


def run_equivalence_suite(
    seed: int = 0,
    cases_per_dim: int = 100,
    dimensions=(1, 2, 3),
    b_max: int = 5,
    delta: float = 0.3,
) -> SuiteReport:
    """Slope criterion vs Newton-body inclusion on random max-linear pairs.

    The two verdicts are produced by disjoint machinery (deep-ray slope
    limits vs truncation-stable conjugate masks) and must agree on every
    case; the generator only filters out pairs that no finite grid could
    decide (boundary-margin below one dual cell).
    """
    from .asymptotics import default_curves, newton_inclusion, slope_condition
    from .legendre import DualGrid

    rng = np.random.default_rng(seed)
    report = SuiteReport(name="equivalence", cases=cases_per_dim * len(dimensions))
    case = 0
    for n in dimensions:
        dual_axis = np.linspace(-0.5, 3.5, 41)
        dual = DualGrid(axes=(dual_axis,) * n)
        curves = default_curves(n, b_max=b_max)
        resolution = {1: 513, 2: 129, 3: 49}[n]
        for _ in range(cases_per_dim):
            f, g, _expected = _robust_pair(rng, n, b_max, delta)
            v_slope = slope_condition(f, g, curves).holds
            v_newton = newton_inclusion(f, g, dual, resolution=resolution).included
            if v_slope != v_newton:
                report.fail(case, f"verdict mismatch n={n}")
            case += 1
    return report


def run_endpoint_suite(seed: int = 0, cases: int = 40) -> SuiteReport:
    """1D endpoint criterion: the slope inequality at -inf predicts whether
    the rooftop limit recovers f, on random pairs with a decisive margin."""
    from .envelopes import check_1d_endpoint, rooftop_limit

    rng = np.random.default_rng(seed)
    report = SuiteReport(name="endpoint", cases=cases + 1)
    done = 0
    case = 0
    while done < cases:
        f = random_max_linear(rng, 1)
        g = random_max_linear(rng, 1)
        sf = _exact_slope(f, np.ones(1))
        sg = _exact_slope(g, np.ones(1))
        if abs(sf - sg) < 0.3:
            continue
        done += 1
        v_slope = check_1d_endpoint(f, g)
        v_roof = rooftop_limit(f, g).converged_to_f
        if v_slope != v_roof:
            report.fail(case, "slope vs rooftop verdict")
        case += 1
    # degenerate pair: both endpoints identically zero must converge
    zero = MaxLinearSpec(pieces=((0.0,),))
    if not (check_1d_endpoint(zero, zero) and rooftop_limit(zero, zero).converged_to_f):
        report.fail(case, "degenerate zero pair")
    return report


SUITES = {
    "conjugate": run_conjugate_identity_suite,
    "envelope": run_envelope_suite,
    "equivalence": run_equivalence_suite,
    "endpoint": run_endpoint_suite,
}
