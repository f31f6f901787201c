"""End-to-end acceptance gate.

Each test checks one headline guarantee at its stated tolerance and runtime
budget, and prints a single pass/fail line so the whole gate can be read off
``pytest -s`` output at a glance.
"""

import time

import numpy as np
import pytest

from toricgeo import (
    DomainSpec,
    LinearSpec,
    MaxLinearSpec,
    RadialPowerSpec,
    build_grid,
    conjugate,
    directional_slope,
    endpoint_measure_trace,
    energy_e1,
    geodesic_at,
    geodesic_oracle,
    rooftop_limit,
    sample,
    slice_spec,
    theorem_check,
)
from toricgeo.asymptotics import CurveSpec
from toricgeo.legendre import conjugate_bruteforce, dual_grid_for
from toricgeo.models import RadialProfile
from toricgeo.verify import (
    random_max_linear,
    run_envelope_suite,
    run_equivalence_suite,
    run_conjugate_identity_suite,
)

ZERO = MaxLinearSpec(pieces=((0.0,),))


def _verdict(label, ok):
    print(f"\n[acceptance] {label}: {'PASS' if ok else 'FAIL'}")
    assert ok, label


def test_criterion_1_fast_conjugate_matches_bruteforce():
    rng = np.random.default_rng(0)
    grid = build_grid(DomainSpec(1, depth=8.0), 4096)
    warm = sample(random_max_linear(rng, 1), grid)
    warm_dual = dual_grid_for(warm, factor=1)
    conjugate(warm, warm_dual)
    conjugate_bruteforce(warm, warm_dual)

    start = time.perf_counter()
    t_fast = t_brute = 0.0
    worst = 0.0
    for _ in range(200):
        f = sample(random_max_linear(rng, 1), grid)
        dual = dual_grid_for(f, factor=1)
        a = time.perf_counter()
        fast = conjugate(f, dual)
        b = time.perf_counter()
        brute = conjugate_bruteforce(f, dual)
        c = time.perf_counter()
        t_fast += b - a
        t_brute += c - b
        worst = max(worst, float(np.max(np.abs(fast.values - brute.values))))
    elapsed = time.perf_counter() - start
    speedup = t_brute / t_fast
    ok = worst <= 1e-9 and speedup >= 20.0 and elapsed < 5.0
    _verdict(
        f"1 transform correctness (max diff {worst:.2e}, speedup {speedup:.0f}x, "
        f"{elapsed:.2f}s)",
        ok,
    )


def test_criterion_2_conjugate_identity_suite():
    start = time.perf_counter()
    report = run_conjugate_identity_suite(seed=0, cases=200)
    elapsed = time.perf_counter() - start
    ok = report.failures == 0 and elapsed < 5.0
    _verdict(
        f"2 conjugate identities ({report.cases} cases, {report.failures} failures, "
        f"{elapsed:.2f}s)",
        ok,
    )


def test_criterion_3_envelope_oracles():
    start = time.perf_counter()
    report = run_envelope_suite(seed=0, cases_1d=100, cases_2d=20)
    elapsed = time.perf_counter() - start
    ok = report.failures == 0 and elapsed < 10.0
    _verdict(
        f"3 envelope oracles ({report.cases} cases, {report.failures} failures, "
        f"{elapsed:.2f}s)",
        ok,
    )


def test_criterion_4_power_profile_dichotomy():
    start = time.perf_counter()
    problems = []
    for alpha in (0.3, 0.5, 0.7, 0.9):
        rep = theorem_check(ZERO, RadialPowerSpec(alpha=alpha))
        if not (rep.verdict_slopes and rep.verdict_rooftop and rep.agreement):
            problems.append(f"alpha={alpha} did not converge")
        if rep.diagnostics["rooftop_residual"] >= rep.diagnostics["rooftop_tol"]:
            problems.append(f"alpha={alpha} residual too large")
    rep = theorem_check(ZERO, RadialPowerSpec(alpha=1.0))
    if rep.verdict_slopes or rep.verdict_rooftop or not rep.agreement:
        problems.append("alpha=1.0 did not diverge with agreement")
    roof = rooftop_limit(ZERO, RadialPowerSpec(alpha=1.0))
    x = roof.probe_points[:, 0]
    if np.max(np.abs(roof.estimate - x)) > 0.05 * np.max(np.abs(x)):
        problems.append("alpha=1.0 rooftop estimate strays from the line")
    elapsed = time.perf_counter() - start
    ok = not problems and elapsed < 30.0
    _verdict(
        f"4 endpoint dichotomy ({'; '.join(problems) or 'all five verdicts agree'}, "
        f"{elapsed:.2f}s)",
        ok,
    )


def test_criterion_5_slope_newton_equivalence():
    start = time.perf_counter()
    report = run_equivalence_suite(seed=0, cases_per_dim=100, dimensions=(1, 2, 3))
    elapsed = time.perf_counter() - start
    ok = report.failures == 0 and elapsed < 60.0
    _verdict(
        f"5 slope/Newton-body equivalence ({report.cases} cases, "
        f"{report.failures} failures, {elapsed:.2f}s)",
        ok,
    )


def test_criterion_6_geodesic_oracle_agreement():
    start = time.perf_counter()
    rng = np.random.default_rng(0)
    grid = build_grid(DomainSpec(1, depth=8.0), 257)
    cell = grid.spacing[0]
    worst = 0.0
    for _ in range(50):
        f = random_max_linear(rng, 1)
        g = random_max_linear(rng, 1)
        for sl in geodesic_oracle(f, g, grid, time_resolution=33):
            fast = geodesic_at(f, g, sl.t, grid=grid)
            worst = max(worst, float(np.max(np.abs(fast.values.values - sl.values.values))))
    tol = 2.0 * 3.0 * cell  # generator slopes lie in [0, 3]
    problems = [] if worst <= tol else [f"fast/oracle gap {worst:.3g} > {tol:.3g}"]

    x = grid.axes[0]
    line = LinearSpec(slopes=(1.0,))
    for sl in geodesic_oracle(ZERO, line, grid, time_resolution=33):
        region = x >= -8.0 * sl.t + cell  # clear of the grid-truncation plateau
        if np.max(np.abs(sl.values.values[region] - x[region])) > cell:
            problems.append(f"oracle slice at t={sl.t:.3f} misses the line")
            break
    for t in (0.25, 0.5, 0.75):
        est = directional_slope(slice_spec(ZERO, line, t), CurveSpec(exponents=(1,))).estimate
        if abs(est - 1.0) > 0.02:
            problems.append(f"slice slope {est:.3f} != 1 at t={t}")
    elapsed = time.perf_counter() - start
    ok = not problems and elapsed < 60.0
    _verdict(
        f"6 geodesic oracle agreement ({'; '.join(problems) or f'max gap {worst:.2e}'}, "
        f"{elapsed:.2f}s)",
        ok,
    )


def test_criterion_7_energy_dichotomy():
    start = time.perf_counter()
    problems = []
    for alpha in (0.40, 0.45, 0.48):
        if energy_e1(RadialProfile.power(alpha)).verdict != "finite":
            problems.append(f"alpha={alpha} not finite")
    for alpha in (0.50, 0.55, 0.60):
        if energy_e1(RadialProfile.power(alpha)).verdict != "diverging":
            problems.append(f"alpha={alpha} not diverging")
    calibration = energy_e1(RadialProfile.power(0.4)).calibration
    if abs(calibration - 1.0) > 1e-6:
        problems.append(f"calibration {calibration} != 1")
    elapsed = time.perf_counter() - start
    ok = not problems and elapsed < 5.0
    _verdict(
        f"7 energy dichotomy ({'; '.join(problems) or 'six verdicts + calibration'}, "
        f"{elapsed:.2f}s)",
        ok,
    )


def test_criterion_8_measure_trace_trend():
    start = time.perf_counter()
    problems = []
    trace = endpoint_measure_trace(ZERO, RadialPowerSpec(alpha=0.5), epsilon=0.1)
    values = [m for _, m in trace]
    if not all(a > b for a, b in zip(values, values[1:])):
        problems.append("subcritical trace not strictly decreasing")
    if not values[-1] < values[0] / 4.0:
        problems.append("subcritical trace does not drop below a quarter")
    flat = [m for _, m in endpoint_measure_trace(ZERO, LinearSpec(slopes=(1.0,)), epsilon=0.1)]
    if max(flat) - min(flat) > 0.05 * max(flat):
        problems.append("line-obstacle trace not constant within 5%")
    elapsed = time.perf_counter() - start
    ok = not problems and elapsed < 10.0
    _verdict(
        f"8 measure-proxy trend ({'; '.join(problems) or 'decreasing vs flat as expected'}, "
        f"{elapsed:.2f}s)",
        ok,
    )
