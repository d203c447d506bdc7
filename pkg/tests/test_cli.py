import json
import math

import pytest

from qcloning import cli, sweep


def run(capsys, *argv):
    code = cli.main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


@pytest.mark.parametrize("text, value", [("pi/4", math.pi / 4), ("0.5*pi", math.pi / 2), ("pi", math.pi), ("0.3", 0.3), ("2pi/8", math.pi / 4)])
def test_parse_angle(text, value):
    assert cli.parse_angle(text) == pytest.approx(value)


def test_point_trivial(capsys):
    code, out, _ = run(capsys, "point", "--b", "0", "--gamma", "1", "--theta", "0")
    assert code == 0
    doc = json.loads(out)
    assert doc["fidelity"]["general"] == pytest.approx(1.0)
    for key in ("concurrence", "discord", "tangle"):
        assert doc["correlations"][key] == pytest.approx(0.0, abs=1e-12)
    assert doc["cross_check"]["passed"]


def test_point_identical_inputs(capsys):
    code, out, _ = run(capsys, "point", "--b", str(1 / (2 * math.sqrt(2))), "--gamma", "1", "--theta", "pi/4")
    assert code == 0
    assert json.loads(out)["fidelity"]["branches"]["1+"] == pytest.approx(1.0, abs=1e-12)


def test_point_degenerate_range(capsys):
    code, out, _ = run(capsys, "point", "--b", "0", "--gamma", "0.25", "--s", "0.5")
    assert code == 0
    assert json.loads(out)["b_range"]["degenerate"] is True


def test_point_infeasible(capsys):
    code, _, err = run(capsys, "point", "--b", "0", "--gamma", "0.2", "--s", "0.5")
    assert code == 1
    assert "gamma < (1-s)/2" in err


@pytest.mark.parametrize("argv", [["point", "--b", "0", "--gamma", "1"], ["bogus"], ["point", "--b", "x", "--gamma", "1", "--s", "0"], ["verify", "--trials", "-1"]])
def test_usage_errors_exit_one(capsys, argv):
    code, _, err = run(capsys, *argv)
    assert code == 1 and err


def test_verify_command(capsys):
    code, out, _ = run(capsys, "verify", "--seed", "1", "--trials", "5")
    assert code == 0 and "status: PASS" in out
    code, out, _ = run(capsys, "verify", "--trials", "0")
    assert code == 0 and "vacuous" in out


def test_verify_failure_exit_two(capsys, monkeypatch):
    from qcloning import fidelity as fid

    monkeypatch.setattr(fid, "fidelity_general", lambda p, t: 2.0)
    code, out, _ = run(capsys, "verify", "--trials", "3")
    assert code == 2 and "fidelity_general" in out


def test_nocorr_command(capsys):
    code, out, _ = run(capsys, "nocorr", "--s", "0.3333333333")
    assert code == 0
    doc = json.loads(out)
    assert doc["f_no"] == pytest.approx(0.9811, abs=5e-4)
    assert set(doc["branches"]) == {"1", "2"}
    assert all(b["passed"] for b in doc["branches"].values())


def test_nocorr_domain(capsys):
    code, _, err = run(capsys, "nocorr", "--s", "2")
    assert code == 1 and "outside" in err


def test_sweep_csv_to_file(tmp_path, capsys):
    out = tmp_path / "f.csv"
    code, _, _ = run(capsys, "sweep", "--figure", "fig5", "--b-points", "5", "--thetas", "0,pi/20", "--gammas", "1", "--out", str(out))
    assert code == 0
    lines = out.read_text().splitlines()
    assert lines[0] == ",".join(sweep.COLUMNS) and len(lines) == 11


def test_sweep_json_stdout(capsys):
    code, out, _ = run(capsys, "sweep", "--figure", "fig2", "--s-points", "4", "--gammas", "1", "--json")
    assert code == 0
    assert len(json.loads(out)["records"]) == 4


def test_config_precedence(tmp_path):
    cfg = tmp_path / "c.json"
    cfg.write_text(json.dumps({"figure": "fig1", "b_points": 11, "gammas": [0.9], "thetas": ["pi/20"]}))
    args = cli.make_parser().parse_args(["sweep", "--config", str(cfg), "--b-points", "7"])
    spec = cli.build_spec(args)
    assert spec.figure == "fig1" and spec.b_points == 7
    assert spec.gammas == (0.9,) and spec.thetas == pytest.approx((math.pi / 20,))
    assert spec.s_points == 501


def test_config_unknown_key(tmp_path, capsys):
    cfg = tmp_path / "c.json"
    cfg.write_text(json.dumps({"bpoints": 3}))
    code, _, err = run(capsys, "sweep", "--figure", "fig1", "--config", str(cfg))
    assert code == 1 and "bpoints" in err


@pytest.mark.parametrize("figure", ["fig1", "fig3", "fig5", "fig6"])
def test_records_reproducible_by_point(figure):
    spec = sweep.SweepSpec.for_figure(figure, b_points=5, s_points=3, discord_grid=16,
                                      thetas=(math.pi / 20,), gammas=(0.9,))
    key = sweep.FIGURES[figure][1]
    for r in sweep.figure_sweep(spec):
        doc = cli.point_report(r.b, r.gamma, r.theta, r.branch, discord_grid=16)
        assert doc["correlations"][key] == pytest.approx(r.correlation, abs=1e-11)
        assert doc["fidelity"]["partially_optimal"] == pytest.approx(r.fidelity, abs=1e-11)
        assert doc["fidelity"]["argmax_branch"] == r.branch
