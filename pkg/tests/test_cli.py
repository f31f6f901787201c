import csv
import json

import pytest

from toricgeo.cli import main


def _write(path, obj):
    path.write_text(json.dumps(obj))
    return str(path)


@pytest.fixture
def specs(tmp_path):
    return {
        "zero": _write(tmp_path / "zero.json", {"kind": "max_linear", "pieces": [[0.0]]}),
        "line": _write(tmp_path / "line.json", {"kind": "linear", "lambda": [1.0]}),
        "sqrt": _write(tmp_path / "sqrt.json", {"kind": "radial_power", "alpha": 0.5}),
    }


def _rows(path):
    with open(path, newline="") as fh:
        return list(csv.reader(fh))


def _report(out, name):
    with open(out / name) as fh:
        return json.load(fh)


def test_conjugate_outputs(tmp_path, specs):
    out = tmp_path / "o"
    rc = main(["conjugate", "--spec", specs["line"], "--grid-size", "65", "--out", str(out)])
    assert rc == 0
    rep = _report(out, "conjugate_report.json")
    rows = _rows(out / "conjugate_values.csv")
    assert rows[0] == ["x1", "value"]
    assert len(rows) - 1 == rep["dual_shape"][0]
    assert rep["finite_nodes"] >= 1


def test_envelope_row_count_matches_grid(tmp_path, specs):
    out = tmp_path / "o"
    rc = main(
        ["envelope", "--u0", specs["zero"], "--u1", specs["line"],
         "--grid-size", "33", "--out", str(out)]
    )
    assert rc == 0
    rows = _rows(out / "envelope_values.csv")
    assert len(rows) == 1 + 33
    assert _report(out, "envelope_report.json")["min_value"] <= 0.0


def test_rooftop_verdicts(tmp_path, specs):
    out_a = tmp_path / "a"
    assert main(["rooftop", "--u0", specs["zero"], "--u1", specs["sqrt"],
                 "--grid-size", "129", "--out", str(out_a)]) == 0
    assert _report(out_a, "rooftop_report.json")["converged_to_f"] is True

    out_b = tmp_path / "b"
    assert main(["rooftop", "--u0", specs["zero"], "--u1", specs["line"],
                 "--grid-size", "129", "--out", str(out_b)]) == 0
    assert _report(out_b, "rooftop_report.json")["converged_to_f"] is False


def test_newton_member_count(tmp_path, specs):
    out = tmp_path / "o"
    rc = main(["newton", "--spec", specs["line"], "--dual-size", "41", "--out", str(out)])
    assert rc == 0
    rep = _report(out, "newton_report.json")
    # nodes of [-0.5, 3.5] with 41 points lying in [1, 3.5]
    assert rep["member_nodes"] == 26
    assert len(_rows(out / "newton_values.csv")) == 1 + 41


def test_slopes_report(tmp_path, specs):
    out = tmp_path / "o"
    rc = main(["slopes", "--u0", specs["zero"], "--u1", specs["line"],
               "--bmax", "3", "--out", str(out)])
    assert rc == 0
    rep = _report(out, "slopes_report.json")
    assert rep["holds"] is False
    assert len(rep["slopes"]) == 3


def test_geodesic_fast_and_oracle(tmp_path, specs):
    for extra in ([], ["--oracle", "--time-res", "9"]):
        out = tmp_path / ("o" + str(len(extra)))
        rc = main(["geodesic", "--u0", specs["zero"], "--u1", specs["line"],
                   "--t", "0.5", "--grid-size", "65", "--out", str(out)] + extra)
        assert rc == 0
        rep = _report(out, "geodesic_report.json")
        assert rep["is_convex"] is True
        assert abs(rep["t"] - 0.5) <= 0.1


def test_energy_command(tmp_path):
    out = tmp_path / "o"
    assert main(["energy", "--alpha", "0.4", "--out", str(out)]) == 0
    rep = _report(out, "energy_report.json")
    assert rep["verdict"] == "finite"
    assert rep["calibration"] == pytest.approx(1.0, abs=1e-6)

    out2 = tmp_path / "o2"
    assert main(["energy", "--alpha", "0.6", "--out", str(out2)]) == 0
    assert _report(out2, "energy_report.json")["verdict"] == "diverging"


def test_check_strict_agreement_exits_zero(tmp_path, specs):
    out = tmp_path / "o"
    rc = main(["check", "--u0", specs["zero"], "--u1", specs["sqrt"],
               "--strict", "--out", str(out)])
    assert rc == 0
    rep = _report(out, "check_report.json")
    assert rep["agreement"] is True
    assert rep["verdict_slopes"] is True and rep["verdict_rooftop"] is True


def test_verify_suite_deterministic(tmp_path):
    out_a, out_b = tmp_path / "a", tmp_path / "b"
    assert main(["verify", "--suite", "conjugate", "--seed", "7", "--out", str(out_a)]) == 0
    assert main(["verify", "--suite", "conjugate", "--seed", "7", "--out", str(out_b)]) == 0
    bytes_a = (out_a / "verify_report.json").read_bytes()
    bytes_b = (out_b / "verify_report.json").read_bytes()
    # the config echoes the output directory, which differs by construction
    assert bytes_a.replace(str(out_a).encode(), b"") == bytes_b.replace(str(out_b).encode(), b"")
    rep = _report(out_a, "verify_report.json")
    assert rep["suites"][0]["failures"] == 0


def test_malformed_json_exit_code(tmp_path, capsys):
    bad = tmp_path / "bad.json"
    bad.write_text('{"kind": "linear", "lambda": [1.0')
    rc = main(["conjugate", "--spec", str(bad), "--out", str(tmp_path / "o")])
    assert rc == 2
    err = capsys.readouterr().err
    assert "line" in err and "column" in err


def test_missing_file_exit_code(tmp_path):
    rc = main(["conjugate", "--spec", str(tmp_path / "nope.json"), "--out", str(tmp_path)])
    assert rc == 2


def test_dimension_mismatch_exit_code(tmp_path, specs):
    wide = _write(tmp_path / "wide.json", {"kind": "linear", "lambda": [1.0, 1.0]})
    rc = main(["rooftop", "--u0", specs["zero"], "--u1", wide, "--out", str(tmp_path / "o")])
    assert rc == 2


def test_unknown_command_exit_code():
    assert main(["frobnicate"]) == 2


def test_bad_parameter_exit_code(tmp_path, specs):
    rc = main(["geodesic", "--u0", specs["zero"], "--u1", specs["line"],
               "--t", "1.5", "--out", str(tmp_path / "o")])
    assert rc == 2
