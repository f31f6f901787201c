import numpy as np
import pytest

from toricgeo import (
    DimensionError,
    DomainSpec,
    GridMismatchError,
    LinearSpec,
    MaxLinearSpec,
    ProtocolError,
    RadialPowerSpec,
    RooftopSchedule,
    SampledFunction,
    build_grid,
    check_1d_endpoint,
    envelope_pair,
    envelope_pair_via_conjugates,
    rooftop_limit,
    sample,
)

ZERO = MaxLinearSpec(pieces=((0.0,),))


def _grid(n=257, depth=4.0):
    return build_grid(DomainSpec(1, depth=depth, boundary_margin=1e-12), n)


def test_envelope_of_function_with_itself():
    grid = _grid()
    f = sample(RadialPowerSpec(alpha=0.5), grid)
    np.testing.assert_allclose(envelope_pair(f, f).values, f.values, atol=1e-9)


def test_envelope_zero_and_shifted_line():
    grid = _grid()
    x = grid.axes[0]
    f = sample(ZERO, grid)
    g = SampledFunction.from_values(grid, x + 1.0)
    np.testing.assert_allclose(envelope_pair(f, g).values, 0.75 * x, atol=1e-9)


def test_envelope_of_two_lines_is_their_min():
    grid = _grid()
    f = sample(LinearSpec(slopes=(1.0,)), grid)
    g = sample(LinearSpec(slopes=(2.0,)), grid)
    np.testing.assert_allclose(
        envelope_pair(f, g).values, np.minimum(f.values, g.values), atol=1e-9
    )


def test_envelope_grid_mismatch():
    f = sample(ZERO, _grid(129))
    g = sample(ZERO, _grid(257))
    with pytest.raises(GridMismatchError):
        envelope_pair(f, g)


def test_conjugate_route_identity():
    rng = np.random.default_rng(21)
    grid = _grid()
    for _ in range(5):
        f = SampledFunction.from_values(grid, rng.uniform(-3.0, 0.0, grid.shape))
        g = SampledFunction.from_values(grid, rng.uniform(-3.0, 0.0, grid.shape))
        a = envelope_pair(f, g).values
        b = envelope_pair_via_conjugates(f, g).values
        np.testing.assert_allclose(a, b, atol=1e-9)


def test_envelope_monotone_in_c():
    grid = _grid()
    f = sample(ZERO, grid)
    g = sample(LinearSpec(slopes=(1.0,)), grid)
    prev = None
    for c in (0.0, 0.1, 0.2, 0.4):
        env = envelope_pair(f, g.shift(c)).values
        assert np.all(env <= f.values + 1e-9)
        if prev is not None:
            assert np.all(env >= prev - 1e-9)
        prev = env


def test_schedule_rejects_shallow_depths():
    with pytest.raises(ProtocolError):
        RooftopSchedule(c_values=(1.0, 2.0), depths=(5.0, 40.0))
    with pytest.raises(ProtocolError):
        RooftopSchedule(c_values=(2.0, 1.0), depths=(40.0, 40.0))


def test_default_schedule_shape():
    sched = RooftopSchedule.default()
    assert sched.c_values[0] == 1.0
    assert all(d >= 10 * c for c, d in zip(sched.c_values, sched.depths))


def test_rooftop_recovers_f_for_subcritical_power():
    result = rooftop_limit(ZERO, RadialPowerSpec(alpha=0.5))
    assert result.converged_to_f
    assert result.residual < result.verdict_tol


def test_rooftop_detects_positive_slope_obstacle():
    result = rooftop_limit(ZERO, LinearSpec(slopes=(1.0,)))
    assert not result.converged_to_f
    # the limit estimate stays close to the line x on the probe window
    x = result.probe_points[:, 0]
    assert np.max(np.abs(result.estimate - x)) <= 0.05 * np.max(np.abs(x))


def test_rooftop_identical_endpoints():
    spec = MaxLinearSpec(pieces=((0.5,), (2.0,)), offsets=(0.0, -1.0))
    result = rooftop_limit(spec, spec)
    assert result.converged_to_f
    assert result.residual < 1e-6


def test_rooftop_estimate_is_convex_on_probe_window():
    result = rooftop_limit(ZERO, RadialPowerSpec(alpha=0.9))
    second = np.diff(result.estimate, 2)
    assert np.min(second) > -1e-6


def test_rooftop_dimension_mismatch():
    with pytest.raises(DimensionError):
        rooftop_limit(ZERO, LinearSpec(slopes=(1.0, 1.0)))


def test_check_1d_endpoint_examples():
    assert check_1d_endpoint(LinearSpec(slopes=(2.0,)), LinearSpec(slopes=(1.0,)))
    assert not check_1d_endpoint(ZERO, LinearSpec(slopes=(1.0,)))
    assert check_1d_endpoint(ZERO, RadialPowerSpec(alpha=0.9))


def test_check_1d_endpoint_rejects_higher_dimension():
    with pytest.raises(DimensionError):
        check_1d_endpoint(LinearSpec(slopes=(1.0, 1.0)), LinearSpec(slopes=(1.0, 1.0)))
