"""Acceptance suite: one test per criterion, at the pinned tolerances.

Each test prints a single `[criterion NN] PASS/FAIL` line (visible with
`pytest -v -s`); the test outcome mirrors that line. Runtime budgets are
asserted where a criterion carries one.
"""

import json
import time

import numpy as np

import hardyloc as hl
from hardyloc import harness
from hardyloc.harness import ExperimentConfig, apply_refinement, run_experiment


def _report(num, ok, detail):
    print(f"[criterion {num:02d}] {'PASS' if ok else 'FAIL'} - {detail}")
    return ok


def test_criterion_01_convolution_oracle_equivalence():
    started = time.perf_counter()
    worst = 0.0
    for seed in range(20):
        rng = np.random.default_rng(seed)
        g = hl.make_grid(1, 8.0, 257)
        f = g.with_values(rng.standard_normal(257))
        k = g.with_values(rng.standard_normal(257))
        orc = hl.convolve_oracle(f, k).values
        err = np.abs(hl.convolve_fast(f, k).values - orc).max() / np.abs(orc).max()
        worst = max(worst, err)
        g2 = hl.make_grid(2, 4.0, 65)
        f2 = g2.with_values(rng.standard_normal((65, 65)))
        k2 = g2.with_values(rng.standard_normal((65, 65)))
        orc2 = hl.convolve_oracle(f2, k2).values
        err2 = np.abs(hl.convolve_fast(f2, k2).values - orc2).max() / np.abs(orc2).max()
        worst = max(worst, err2)
    elapsed = time.perf_counter() - started
    ok = worst <= 1e-10 and elapsed < 30.0
    assert _report(1, ok, f"max rel err {worst:.3e} (tol 1e-10), {elapsed:.1f}s (< 30s)")


def test_criterion_02_weight_constants():
    started = time.perf_counter()
    g257 = hl.make_grid(1, 8.0, 257)
    w1 = hl.make_weight(hl.WeightFamily("constant"), g257)
    exact = all(hl.ap_loc_constant(w1, p, 1.0) == 1.0 for p in (1.0, 2.0, 4.0))
    we = hl.make_weight(hl.WeightFamily("exponential", c=1.0), g257)
    c257 = hl.ap_loc_constant(we, 1.0, 1.0)
    g129 = hl.make_grid(1, 8.0, 129)
    c129 = hl.ap_loc_constant(
        hl.make_weight(hl.WeightFamily("exponential", c=1.0), g129), 1.0, 1.0
    )
    delta = abs(c257 - c129) / c129
    locality = hl.ap_loc_constant(we, 1.0, 4.0) / c257
    elapsed = time.perf_counter() - started
    ok = (
        exact
        and np.isfinite(c257)
        and delta < 0.05
        and locality >= 2.0
        and elapsed < 60.0
    )
    assert _report(
        2,
        ok,
        f"unit exact={exact}, exp const {c257:.4f}, refine delta {delta:.4%} (< 5%), "
        f"locality x{locality:.2f} (>= 2), {elapsed:.1f}s (< 60s)",
    )


def test_criterion_03_exponential_cube_growth():
    g = hl.make_grid(1, 8.0, 257)
    we = hl.make_weight(hl.WeightFamily("exponential", c=1.0), g)
    slope, residual, _ = harness._growth_fit(we, 1)
    ok = residual < 0.10
    assert _report(3, ok, f"log-linear fit residual {residual:.4f} (< 0.10), slope {slope:.3f}")


def test_criterion_04_norm_equivalence():
    started = time.perf_counter()
    details = []
    ok = True
    for family in ({"family": "exponential", "c": 1.0}, {"family": "constant"}):
        cfg = ExperimentConfig.from_dict(
            {
                "experiment": "theorem1-equivalence",
                "dim": 1,
                "points_per_axis": 257,
                "weight": family,
                "cases": 50,
                "seed": 20250801,
            }
        ).resolved()
        report = apply_refinement(cfg, run_experiment(cfg))
        spread = report.summary["spread"]
        spread_delta = report.criteria["refine_spread"]["value"]
        scaling = report.criteria["scaling_exact"]["passed"]
        ok &= spread <= 50.0 and spread_delta < 0.20 and scaling
        details.append(
            f"{family['family']}: spread {spread:.2f} (<= 50), "
            f"refine {spread_delta:.3%} (< 20%), scaling exact={scaling}"
        )
    elapsed = time.perf_counter() - started
    ok &= elapsed < 120.0
    assert _report(4, ok, "; ".join(details) + f"; {elapsed:.1f}s (< 2min)")


def test_criterion_05_atom_h1_bound():
    cfg = ExperimentConfig.from_dict(
        {"experiment": "atom-h1-bound-35", "cases": 100, "seed": 7}
    ).resolved()
    report = apply_refinement(cfg, run_experiment(cfg))
    max_h1 = report.summary["max_h1"]
    delta = report.criteria["refine_max_h1"]["value"]
    ok = np.isfinite(max_h1) and delta < 0.30
    assert _report(
        5, ok, f"max |M(R_j a)|_L1w = {max_h1:.4f} over 100 atoms, refine delta {delta:.3%} (< 30%)"
    )


def test_criterion_06_kernel_bound():
    cfg = ExperimentConfig.from_dict(
        {"experiment": "kernel-bound-36", "points_per_axis": 257, "seed": 1}
    ).resolved()
    report = apply_refinement(cfg, run_experiment(cfg))
    d0 = report.criteria["refine_max_stat_order0"]["value"]
    d1 = report.criteria["refine_max_stat_order1"]["value"]
    ok = d0 < 0.25 and d1 < 0.25
    assert _report(
        6,
        ok,
        f"normalized sup stats {report.summary['max_stat_order0']:.3f} / "
        f"{report.summary['max_stat_order1']:.3f}, refine deltas {d0:.3%}, {d1:.3%} (< 25%)",
    )


def test_criterion_07_atom_decay():
    cfg = ExperimentConfig.from_dict(
        {"experiment": "atom-decay-37", "cases": 50, "seed": 3}
    ).resolved()
    report = apply_refinement(cfg, run_experiment(cfg))
    stat = report.summary["max_stat"]
    delta = report.criteria["refine_max_stat"]["value"]
    ok = np.isfinite(stat) and delta < 0.30
    assert _report(7, ok, f"decay stat {stat:.4f} over 50 atoms, refine delta {delta:.3%} (< 30%)")


def test_criterion_08_transform_boundedness():
    details = []
    ok = True
    for family in (
        {"family": "exponential", "c": 1.0},
        {"family": "power_log", "alpha": 1.0, "beta": 2.0},
    ):
        cfg = ExperimentConfig.from_dict(
            {"experiment": "lemma32-boundedness", "weight": family, "cases": 30, "seed": 5}
        ).resolved()
        report = apply_refinement(cfg, run_experiment(cfg))
        l2 = report.summary["max_l2_ratio"]
        weak = report.summary["max_weak_ratio"]
        dl2 = report.criteria["refine_max_l2_ratio"]["value"]
        dweak = report.criteria["refine_max_weak_ratio"]["value"]
        ok &= np.isfinite(l2) and np.isfinite(weak) and dl2 < 0.30 and dweak < 0.30
        details.append(
            f"{family['family']}: L2 {l2:.2f} (refine {dl2:.2%}), weak {weak:.2f} (refine {dweak:.2%})"
        )
    assert _report(8, ok, "; ".join(details) + " (< 30%)")


def test_criterion_09_strong_operator():
    cfg = ExperimentConfig.from_dict(
        {"experiment": "theoremC", "cases": 28, "seed": 11, "thetas": [0.25, 0.5]}
    ).resolved()
    report = apply_refinement(cfg, run_experiment(cfg))
    finite = all(np.isfinite(v) for v in report.summary.values())
    band_checks = {k: v for k, v in report.criteria.items() if k.startswith("refine_")}
    ok = finite and all(v["passed"] for v in band_checks.values())
    worst = max(
        (v["value"] / max(v["threshold"], 1e-300) for v in band_checks.values()),
       default=0.0,
    )
    assert _report(
        9,
        ok,
        f"{len(band_checks)} ratio stats finite={finite}, all within two-delta bands "
        f"(worst gap/band {worst:.2f})",
    )


def test_criterion_10_determinism(tmp_path):
    cfg = {
        "experiment": "theorem1-equivalence",
        "cases": 20,
        "seed": 424242,
    }
    cfg_path = tmp_path / "cfg.json"
    cfg_path.write_text(json.dumps(cfg))
    assert harness.run(str(cfg_path), out_dir=str(tmp_path / "a")) == 0
    assert harness.run(str(cfg_path), out_dir=str(tmp_path / "b")) == 0
    same = all(
        (tmp_path / "a" / name).read_bytes() == (tmp_path / "b" / name).read_bytes()
        for name in ("report.json", "cases.csv")
    )
    assert _report(10, same, "report.json and cases.csv byte-identical across reruns")
