"""Config handling, experiment registry, report files, CLI exit codes."""

import json

import numpy as np
import pytest

from hardyloc import cli, harness
from hardyloc.harness import DEFAULT_THRESHOLDS, EXPERIMENTS, ExperimentConfig


def write_config(tmp_path, payload, name="cfg.json"):
    path = tmp_path / name
    path.write_text(json.dumps(payload))
    return str(path)


def test_config_validation_errors():
    with pytest.raises(ValueError):
        ExperimentConfig.from_dict({})
    with pytest.raises(ValueError):
        ExperimentConfig.from_dict({"experiment": "nope"})
    with pytest.raises(ValueError):
        ExperimentConfig.from_dict({"experiment": "theorem1-equivalence", "bogus": 1})
    with pytest.raises(ValueError):
        ExperimentConfig.from_dict(
            {"experiment": "theorem1-equivalence", "thresholds": {"bad_key": 1}}
        )


def test_config_resolves_grid_defaults():
    cfg = ExperimentConfig.from_dict(
        {"experiment": "theorem1-equivalence", "points_per_axis": 257}
    ).resolved()
    assert cfg.t_min == cfg.base_h
    assert cfg.atom_side_lo == 8 * cfg.base_h
    refined = cfg.refined()
    assert refined.points_per_axis == 513
    assert refined.t_min == cfg.t_min  # ladder frozen at base resolution


def test_config_echo_round_trip():
    cfg = ExperimentConfig.from_dict(
        {
            "experiment": "theoremC",
            "weight": {"family": "power_log", "alpha": 1.0, "beta": 2.0},
            "thetas": [0.25],
            "seed": 5,
        }
    ).resolved()
    echo = cfg.to_dict()
    assert echo["weight"] == {"family": "power_log", "alpha": 1.0, "beta": 2.0}
    assert echo["thetas"] == [0.25]
    assert set(echo["thresholds"]) == set(DEFAULT_THRESHOLDS)


@pytest.mark.parametrize("exp", sorted(EXPERIMENTS))
def test_every_experiment_runs_and_serializes(exp):
    cfg = ExperimentConfig.from_dict(
        {"experiment": exp, "cases": 6, "thetas": [0.5]}
    ).resolved()
    rep = harness.run_experiment(cfg)
    payload = json.dumps(rep.to_dict(), sort_keys=True)
    assert rep.columns
    assert rep.cases
    assert json.loads(payload)["experiment"] == exp
    for crit in rep.criteria.values():
        assert crit["passed"]


def test_experiments_run_in_dim_2():
    for exp in ("theorem1-equivalence", "kernel-bound-36"):
        cfg = ExperimentConfig.from_dict(
            {
                "experiment": exp,
                "dim": 2,
                "half_width": 4.0,
                "points_per_axis": 65,
                "cases": 5,
            }
        ).resolved()
        rep = harness.run_experiment(cfg)
        assert all(v["passed"] for v in rep.criteria.values())


def test_theorem1_csv_columns(tmp_path):
    cfg = ExperimentConfig.from_dict(
        {"experiment": "theorem1-equivalence", "cases": 5, "seed": 2}
    ).resolved()
    rep = harness.run_experiment(cfg)
    assert rep.columns == ["case_id", "descriptor", "h1_norm", "l1_norm", "riesz_l1_sum", "ratio"]
    _, csv_path = harness.write_report(rep, str(tmp_path / "out"))
    header = open(csv_path).readline().strip()
    assert header == "case_id,descriptor,h1_norm,l1_norm,riesz_l1_sum,ratio"


def test_run_round_trip_is_byte_identical(tmp_path):
    cfg_path = write_config(
        tmp_path,
        {"experiment": "theorem1-equivalence", "cases": 8, "seed": 123},
    )
    assert harness.run(cfg_path, out_dir=str(tmp_path / "a")) == 0
    assert harness.run(cfg_path, out_dir=str(tmp_path / "b")) == 0
    for name in ("report.json", "cases.csv"):
        a = (tmp_path / "a" / name).read_bytes()
        b = (tmp_path / "b" / name).read_bytes()
        assert a == b


def test_run_unknown_id_exits_1(tmp_path, capsys):
    cfg_path = write_config(tmp_path, {"experiment": "foo"})
    assert harness.run(cfg_path) == 1
    err = capsys.readouterr().err
    assert "theorem1-equivalence" in err  # lists the valid ids


def test_run_malformed_config_exits_1(tmp_path):
    path = tmp_path / "bad.json"
    path.write_text("{not json")
    assert harness.run(str(path)) == 1
    assert harness.run(str(tmp_path / "missing.json")) == 1


def test_run_failing_criterion_exits_2(tmp_path):
    cfg_path = write_config(
        tmp_path,
        {
            "experiment": "theorem1-equivalence",
            "cases": 5,
            "seed": 3,
            "thresholds": {"spread_max": 1.0},
        },
    )
    assert harness.run(cfg_path, out_dir=str(tmp_path / "o")) == 2
    report = json.loads((tmp_path / "o" / "report.json").read_text())
    assert report["passed"] is False


def test_run_with_refinement_appends_deltas(tmp_path):
    cfg_path = write_config(
        tmp_path,
        {"experiment": "theorem1-equivalence", "cases": 6, "seed": 4, "points_per_axis": 129},
    )
    code = harness.run(cfg_path, out_dir=str(tmp_path / "r"), refine=True)
    report = json.loads((tmp_path / "r" / "report.json").read_text())
    assert report["refinement"]["points_per_axis"] == 257
    assert "spread" in report["refinement"]["deltas"]
    assert code in (0, 2)


def test_cli_list_and_run(tmp_path, capsys):
    assert cli.main(["list"]) == 0
    out = capsys.readouterr().out
    assert "atom-decay-37" in out
    cfg_path = write_config(tmp_path, {"experiment": "weight-duality", "points_per_axis": 129})
    assert cli.main(["run", "--config", cfg_path, "--out", str(tmp_path / "cli")]) == 0


def test_cli_seed_override_changes_report(tmp_path):
    cfg_path = write_config(
        tmp_path, {"experiment": "theorem1-equivalence", "cases": 5, "seed": 1}
    )
    harness.run(cfg_path, out_dir=str(tmp_path / "s1"))
    harness.run(cfg_path, out_dir=str(tmp_path / "s2"), seed=2)
    a = json.loads((tmp_path / "s1" / "report.json").read_text())
    b = json.loads((tmp_path / "s2" / "report.json").read_text())
    assert a["config"]["seed"] != b["config"]["seed"]
    assert a["summary"]["spread"] != b["summary"]["spread"]


def test_scale_ratio_knob(tmp_path):
    cfg_path = write_config(
        tmp_path, {"experiment": "theorem1-equivalence", "cases": 5, "seed": 9}
    )
    assert harness.run(
        cfg_path, out_dir=str(tmp_path / "sr"), scale_ratio=float(np.sqrt(2.0)), t_min=0.1
    ) == 0
    report = json.loads((tmp_path / "sr" / "report.json").read_text())
    assert report["config"]["scale_ratio"] == pytest.approx(np.sqrt(2.0))
    assert report["config"]["t_min"] == 0.1
