import json
import math

import numpy as np
import pytest

from toricgeo import (
    LinearSpec,
    MaxLinearSpec,
    ParameterError,
    RadialPowerSpec,
    SamplesSpec,
    SumSpec,
    load_spec,
    spec_from_json,
)
from toricgeo.lattice import GridNd


def test_linear_eval_and_validation():
    spec = LinearSpec(slopes=(1.0, 2.0))
    assert spec.evaluate(np.array([[-1.0, -2.0]]))[0] == pytest.approx(-5.0)
    with pytest.raises(ParameterError):
        LinearSpec(slopes=(-1.0,))
    with pytest.raises(ParameterError):
        LinearSpec(slopes=())


def test_linear_zero_slope_times_neg_inf_is_zero():
    spec = LinearSpec(slopes=(0.0, 1.0))
    val = spec.evaluate(np.array([[-np.inf, -2.0]]))[0]
    assert val == pytest.approx(-2.0)


def test_radial_power_validation_and_values():
    with pytest.raises(ParameterError):
        RadialPowerSpec(alpha=0.0)
    with pytest.raises(ParameterError):
        RadialPowerSpec(alpha=1.5)
    spec = RadialPowerSpec(alpha=0.3)
    assert spec.evaluate(np.array([[-1.0]]))[0] == pytest.approx(-1.0)
    assert RadialPowerSpec(alpha=1.0).evaluate(np.array([[-3.0]]))[0] == pytest.approx(-3.0)


def test_max_linear_eval():
    spec = MaxLinearSpec(pieces=((1.0, 0.0), (0.0, 2.0)))
    assert spec.evaluate(np.array([[-1.0, -1.0]]))[0] == pytest.approx(-1.0)
    assert spec.evaluate(np.array([[-3.0, -1.0]]))[0] == pytest.approx(-2.0)


def test_max_linear_validation():
    with pytest.raises(ParameterError):
        MaxLinearSpec(pieces=((1.0,), (1.0, 2.0)))
    with pytest.raises(ParameterError):
        MaxLinearSpec(pieces=((1.0,),), offsets=(0.0, 1.0))


def test_sum_spec():
    spec = SumSpec(terms=(LinearSpec(slopes=(1.0,)), RadialPowerSpec(alpha=0.5)))
    assert spec.evaluate(np.array([[-4.0]]))[0] == pytest.approx(-6.0)
    with pytest.raises(ParameterError):
        SumSpec(terms=(LinearSpec(slopes=(1.0,)), LinearSpec(slopes=(1.0, 1.0))))


def test_samples_spec_interpolates_and_extrapolates():
    grid = GridNd(axes=(np.linspace(-4.0, 0.0, 5),))
    spec = SamplesSpec(grid=grid, values=2.0 * np.linspace(-4.0, 0.0, 5))
    assert spec.evaluate(np.array([[-1.5]]))[0] == pytest.approx(-3.0)
    # linear extrapolation continues the boundary slope
    assert spec.evaluate(np.array([[-8.0]]))[0] == pytest.approx(-16.0)


def test_json_roundtrip_all_kinds():
    specs = [
        LinearSpec(slopes=(1.0, 0.5)),
        RadialPowerSpec(alpha=0.7),
        MaxLinearSpec(pieces=((1.0,), (2.0,)), offsets=(0.0, -1.0)),
        SumSpec(terms=(LinearSpec(slopes=(1.0,)), RadialPowerSpec(alpha=0.5))),
    ]
    for spec in specs:
        again = spec_from_json(json.loads(json.dumps(spec.to_json())))
        pts = -np.abs(np.random.default_rng(0).normal(1, 1, (7, spec.dimension)))
        np.testing.assert_allclose(again.evaluate(pts), spec.evaluate(pts))


def test_json_samples_with_inf_literal():
    obj = {
        "kind": "samples",
        "grid": {"axes": [[-2.0, -1.0, 0.0]]},
        "values": [-2.0, "inf", 0.0],
    }
    spec = spec_from_json(obj)
    assert math.isinf(spec.values[1])
    back = spec.to_json()
    assert back["values"][1] == "inf"


def test_json_errors():
    with pytest.raises(ParameterError):
        spec_from_json({"kind": "mystery"})
    with pytest.raises(ParameterError):
        spec_from_json({"kind": "linear"})
    with pytest.raises(ParameterError):
        spec_from_json([1, 2, 3])


def test_load_spec(tmp_path):
    path = tmp_path / "spec.json"
    path.write_text(json.dumps({"kind": "linear", "lambda": [2.0]}))
    spec = load_spec(path)
    assert spec.evaluate(np.array([[-1.0]]))[0] == pytest.approx(-2.0)
