"""Experiment registry, configuration, and report emission.

Configs are single JSON objects with a documented schema (see README);
every knob has a default. Reports are deterministic: given the same config
and seed, report.json and cases.csv are byte-identical on reruns (wall
time is printed to the console, never serialized). Exit codes: 0 when all
criteria pass, 2 when any fails, 1 on configuration or I/O errors.
"""

from __future__ import annotations

import csv
import io
import json
import os
import sys
import time
from dataclasses import dataclass, field, replace

import numpy as np

from . import families
from .atoms import AtomSpec, atom_h1_bound_experiment, make_atom, snapped_atom_cube
from .grid import Cube, make_grid
from .maximal import BumpSpec, ScaleLadder, h1_norm, local_hl_maximal
from .riesz import atom_decay_check, kernel_bound_check, riesz_transform
from .singular import strong_boundedness_experiment
from .weights import Weight, WeightFamily, ap_loc_constant, lp_norm, make_weight, weak_l1_norm

DEFAULT_THRESHOLDS = {
    "spread_max": 50.0,
    "spread_refine_tol": 0.20,
    "ap_refine_tol": 0.05,
    "locality_min": 2.0,
    "fit_residual_max": 0.10,
    "kernel_refine_tol": 0.25,
    "atom_h1_refine_tol": 0.30,
    "decay_refine_tol": 0.30,
    "boundedness_refine_tol": 0.30,
}


@dataclass(frozen=True)
class ExperimentConfig:
    experiment: str
    dim: int = 1
    half_width: float = 8.0
    points_per_axis: int = 257
    weight: WeightFamily = WeightFamily("exponential", c=1.0)
    seed: int = 20250801
    cases: int = 50
    q: float = 2.0
    t_min: float | None = None
    scale_ratio: float = 2.0
    thetas: tuple[float, ...] = (0.25, 0.5)
    atom_side_lo: float | None = None
    thresholds: dict = field(default_factory=dict)
    out: str | None = None

    @property
    def base_h(self) -> float:
        return 2.0 * self.half_width / (self.points_per_axis - 1)

    def threshold(self, key: str) -> float:
        return float(self.thresholds.get(key, DEFAULT_THRESHOLDS[key]))

    def resolved(self) -> "ExperimentConfig":
        """Fill grid-dependent defaults from the base grid, so a refined
        rerun keeps the same ladder and family parameters."""
        t_min = self.base_h if self.t_min is None else self.t_min
        side_lo = 8 * self.base_h if self.atom_side_lo is None else self.atom_side_lo
        merged = dict(DEFAULT_THRESHOLDS)
        merged.update({k: float(v) for k, v in self.thresholds.items()})
        return replace(self, t_min=t_min, atom_side_lo=side_lo, thresholds=merged)

    def refined(self) -> "ExperimentConfig":
        """Same experiment at doubled resolution (N -> 2N - 1 keeps N odd)."""
        return replace(self, points_per_axis=2 * self.points_per_axis - 1)

    def to_dict(self) -> dict:
        return {
            "experiment": self.experiment,
            "dim": self.dim,
            "half_width": self.half_width,
            "points_per_axis": self.points_per_axis,
            "weight": self.weight.to_config(),
            "seed": self.seed,
            "cases": self.cases,
            "q": self.q,
            "t_min": self.t_min,
            "scale_ratio": self.scale_ratio,
            "thetas": list(self.thetas),
            "atom_side_lo": self.atom_side_lo,
            "thresholds": dict(sorted(self.thresholds.items())),
        }

    @classmethod
    def from_dict(cls, cfg: dict) -> "ExperimentConfig":
        if not isinstance(cfg, dict):
            raise ValueError("config must be a JSON object")
        if "experiment" not in cfg:
            raise ValueError("config needs an 'experiment' key")
        experiment = cfg["experiment"]
        if experiment not in EXPERIMENTS:
            raise ValueError(
                f"unknown experiment id {experiment!r}; valid ids: {', '.join(EXPERIMENTS)}"
            )
        known = {
            "experiment", "dim", "half_width", "points_per_axis", "weight", "seed",
            "cases", "q", "t_min", "scale_ratio", "thetas", "atom_side_lo",
            "thresholds", "out",
        }
        extra = set(cfg) - known
        if extra:
            raise ValueError(f"unknown config keys: {sorted(extra)}")
        kwargs = {"experiment": experiment}
        if "dim" in cfg:
            kwargs["dim"] = int(cfg["dim"])
        if "half_width" in cfg:
            kwargs["half_width"] = float(cfg["half_width"])
        if "points_per_axis" in cfg:
            kwargs["points_per_axis"] = int(cfg["points_per_axis"])
        if "weight" in cfg:
            kwargs["weight"] = WeightFamily.from_config(cfg["weight"])
        if "seed" in cfg:
            kwargs["seed"] = int(cfg["seed"])
        if "cases" in cfg:
            kwargs["cases"] = int(cfg["cases"])
        if "q" in cfg:
            kwargs["q"] = float(cfg["q"])
        if cfg.get("t_min") is not None:
            kwargs["t_min"] = float(cfg["t_min"])
        if "scale_ratio" in cfg:
            kwargs["scale_ratio"] = float(cfg["scale_ratio"])
        if "thetas" in cfg:
            kwargs["thetas"] = tuple(float(t) for t in cfg["thetas"])
        if cfg.get("atom_side_lo") is not None:
            kwargs["atom_side_lo"] = float(cfg["atom_side_lo"])
        if "thresholds" in cfg:
            if not isinstance(cfg["thresholds"], dict):
                raise ValueError("'thresholds' must be an object")
            unknown = set(cfg["thresholds"]) - set(DEFAULT_THRESHOLDS)
            if unknown:
                raise ValueError(f"unknown threshold keys: {sorted(unknown)}")
            kwargs["thresholds"] = dict(cfg["thresholds"])
        if cfg.get("out") is not None:
            kwargs["out"] = str(cfg["out"])
        return cls(**kwargs)

    @classmethod
    def from_file(cls, path: str) -> "ExperimentConfig":
        with open(path, encoding="utf-8") as fh:
            try:
                data = json.load(fh)
            except json.JSONDecodeError as exc:
                raise ValueError(f"config {path}: invalid JSON ({exc})") from exc
        return cls.from_dict(data)


@dataclass
class ExperimentReport:
    experiment: str
    config: dict
    columns: list
    cases: list
    summary: dict
    criteria: dict
    skipped: list = field(default_factory=list)
    stability: list = field(default_factory=list)
    refinement: dict | None = None

    @property
    def passed(self) -> bool:
        return all(c["passed"] for c in self.criteria.values())

    def to_dict(self) -> dict:
        return _to_py(
            {
                "schema": 1,
                "experiment": self.experiment,
                "config": self.config,
                "columns": self.columns,
                "cases": self.cases,
                "summary": self.summary,
                "criteria": self.criteria,
                "skipped": self.skipped,
                "refinement": self.refinement,
                "passed": self.passed,
            }
        )


def _to_py(obj):
    if isinstance(obj, dict):
        return {str(k): _to_py(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_to_py(v) for v in obj]
    if isinstance(obj, (np.floating, np.integer)):
        return obj.item()
    if isinstance(obj, np.bool_):
        return bool(obj)
    return obj


def _criterion(value, passed, threshold=None) -> dict:
    out = {"value": value, "passed": bool(passed)}
    if threshold is not None:
        out["threshold"] = threshold
    return out


def _context(cfg: ExperimentConfig):
    grid = make_grid(cfg.dim, cfg.half_width, cfg.points_per_axis)
    weight = make_weight(cfg.weight, grid)
    bump = BumpSpec()
    ladder = ScaleLadder(cfg.t_min, cfg.scale_ratio)
    return grid, weight, bump, ladder


# ---------------------------------------------------------------------------
# experiment runners

def theorem1_equivalence(cfg: ExperimentConfig) -> ExperimentReport:
    """Ratio study r(f) = |f|_h1 / (|f|_L1 + sum_j |R_j f|_L1) over the
    versioned mixed family; reports min, max, and spread = max/min."""
    cfg = cfg.resolved()
    grid, weight, bump, ladder = _context(cfg)
    family = families.theorem1_family(
        grid, weight, cfg.cases, cfg.seed, q=cfg.q, side_lo=cfg.atom_side_lo
    )
    columns = ["case_id", "descriptor", "h1_norm", "l1_norm", "riesz_l1_sum", "ratio"]
    rows = []
    skipped = []
    ratios = []
    scale_gap = None
    for case in family:
        f = case.values
        h1 = h1_norm(f, weight, bump, ladder)
        l1 = lp_norm(f, weight, 1.0)
        rsum = sum(
            lp_norm(riesz_transform(f, j), weight, 1.0) for j in range(1, grid.dim + 1)
        )
        denom = l1 + rsum
        if denom <= 0:
            skipped.append(f"{case.case_id}: zero denominator")
            continue
        ratio = h1 / denom
        ratios.append(ratio)
        rows.append(
            {
                "case_id": case.case_id,
                "descriptor": case.descriptor,
                "h1_norm": h1,
                "l1_norm": l1,
                "riesz_l1_sum": rsum,
                "ratio": ratio,
            }
        )
        if scale_gap is None:
            # power-of-two rescale keeps every float operation exact, so the
            # homogeneity identity r(c f) = r(f) must hold bitwise
            g = f.with_values(f.values * 4.0)
            h1s = h1_norm(g, weight, bump, ladder)
            l1s = lp_norm(g, weight, 1.0)
            rsums = sum(
                lp_norm(riesz_transform(g, j), weight, 1.0) for j in range(1, grid.dim + 1)
            )
            scale_gap = abs(h1s / (l1s + rsums) - ratio)
    if not ratios:
        raise ValueError("every family member was skipped")
    arr = np.asarray(ratios)
    spread = float(arr.max() / arr.min())
    summary = {
        "ratio_min": float(arr.min()),
        "ratio_max": float(arr.max()),
        "ratio_median": float(np.median(arr)),
        "spread": spread,
        "n_cases": len(rows),
        "family_version": families.FAMILY_VERSION,
    }
    criteria = {
        "spread_within_bound": _criterion(spread, spread <= cfg.threshold("spread_max"),
                                          cfg.threshold("spread_max")),
        "scaling_exact": _criterion(scale_gap, scale_gap == 0.0, 0.0),
    }
    return ExperimentReport(
        cfg.experiment, cfg.to_dict(), columns, rows, summary, criteria, skipped,
        stability=[{"key": "spread", "tol_key": "spread_refine_tol", "kind": "relative"}],
    )


_LEMMA21_FAMILIES = (
    WeightFamily("constant"),
    WeightFamily("exponential", c=1.0),
    WeightFamily("power_log", alpha=0.0, beta=1.0),
    WeightFamily("power_log", alpha=1.0, beta=2.0),
)


def _growth_fit(w: Weight, dim: int) -> tuple[float, float, list]:
    """Least-squares line through ln(w(tQ)/w(Q)) on t in [1, 8], Q the unit
    cube at the origin; returns (slope, relative residual, per-t rows)."""
    q0 = Cube((0.0,) * dim, 1.0)
    base = w.cube_measure(q0)
    ts = np.linspace(1.0, 8.0, 15)
    ys = np.array([np.log(w.cube_measure(q0.dilate(t)) / base) for t in ts])
    slope, intercept = np.polyfit(ts, ys, 1)
    fit = slope * ts + intercept
    rel_residual = float(np.linalg.norm(ys - fit) / np.linalg.norm(ys))
    rows = [{"t": float(t), "log_ratio": float(y)} for t, y in zip(ts, ys)]
    return float(slope), rel_residual, rows


def lemma21_properties(cfg: ExperimentConfig) -> ExperimentReport:
    """Weight-class property checks: constants finite and nonincreasing in p,
    open-ended below p = 2, duality, exponential cube growth, and maximal-
    operator boundedness ratios, over the built-in families."""
    cfg = cfg.resolved()
    grid, _, bump, ladder = _context(cfg)
    columns = ["case_id", "descriptor", "metric", "value"]
    rows = []
    criteria = {}
    summary = {}
    n_funcs = max(10, min(cfg.cases, 50))
    case_no = 0

    def add_row(descriptor, metric, value):
        nonlocal case_no
        rows.append(
            {
                "case_id": f"{case_no:03d}",
                "descriptor": descriptor,
                "metric": metric,
                "value": value,
            }
        )
        case_no += 1

    all_finite = True
    monotone_ok = True
    duality_ok = True
    maximal_ok = True
    weak_ok = True
    for fam in _LEMMA21_FAMILIES:
        w = make_weight(fam, grid)
        name = fam.descriptor()
        consts = {}
        for p in (1.0, 1.5, 1.9, 2.0):
            c = ap_loc_constant(w, p, 1.0)
            consts[p] = c
            all_finite &= bool(np.isfinite(c))
            add_row(name, f"ap_constant_p{p:g}", c)
        ordered = [consts[1.0], consts[1.5], consts[1.9], consts[2.0]]
        monotone_ok &= all(
            b <= a * (1 + 1e-9) for a, b in zip(ordered, ordered[1:])
        )
        dual_dens = w.base.values ** (-1.0)  # dual density at p = 2
        dual = Weight(grid.with_values(dual_dens))
        cdual = ap_loc_constant(dual, 2.0, 1.0)
        duality_ok &= bool(np.isfinite(cdual))
        add_row(name, "dual_ap_constant_p2", cdual)
        fcases = families.boundedness_family(grid, w, n_funcs, cfg.seed)
        l2_ratios = []
        for case in fcases:
            den = lp_norm(case.values, w, 2.0)
            if den > 0:
                l2_ratios.append(lp_norm(local_hl_maximal(case.values), w, 2.0) / den)
        max_l2 = float(np.max(l2_ratios))
        maximal_ok &= bool(np.isfinite(max_l2))
        add_row(name, "maximal_l2_ratio_max", max_l2)
        scases = families.spike_family(grid, n_funcs, cfg.seed + 1)
        weak_ratios = []
        for case in scases:
            den = lp_norm(case.values, w, 1.0)
            if den > 0:
                weak_ratios.append(weak_l1_norm(local_hl_maximal(case.values), w) / den)
        max_weak = float(np.max(weak_ratios))
        weak_ok &= bool(np.isfinite(max_weak))
        add_row(name, "maximal_weak_ratio_max", max_weak)
        if fam.family == "exponential":
            summary["ap_exponential_p1"] = consts[1.0]
            slope, residual, fit_rows = _growth_fit(w, grid.dim)
            for fr in fit_rows:
                add_row(name, f"growth_log_ratio_t{fr['t']:g}", fr["log_ratio"])
            summary["growth_slope"] = slope
            summary["growth_fit_residual"] = residual
            c4 = ap_loc_constant(w, 1.0, 4.0)
            summary["ap_exponential_p1_side4"] = c4
            add_row(name, "ap_constant_p1_side4", c4)
    locality = summary["ap_exponential_p1_side4"] / summary["ap_exponential_p1"]
    summary["locality_factor"] = locality
    criteria["constants_finite"] = _criterion(all_finite, all_finite)
    criteria["constants_nonincreasing_in_p"] = _criterion(monotone_ok, monotone_ok)
    criteria["duality_finite"] = _criterion(duality_ok, duality_ok)
    criteria["growth_fit_residual"] = _criterion(
        summary["growth_fit_residual"],
        summary["growth_fit_residual"] < cfg.threshold("fit_residual_max"),
        cfg.threshold("fit_residual_max"),
    )
    criteria["locality_separation"] = _criterion(
        locality, locality >= cfg.threshold("locality_min"), cfg.threshold("locality_min")
    )
    criteria["maximal_l2_finite"] = _criterion(maximal_ok, maximal_ok)
    criteria["maximal_weak_finite"] = _criterion(weak_ok, weak_ok)
    return ExperimentReport(
        cfg.experiment, cfg.to_dict(), columns, rows, summary, criteria,
        stability=[
            {"key": "ap_exponential_p1", "tol_key": "ap_refine_tol", "kind": "relative"},
            {"key": "growth_fit_residual", "tol_key": "ap_refine_tol", "kind": "absolute"},
        ],
    )


def weight_duality(cfg: ExperimentConfig) -> ExperimentReport:
    """Dual-weight check: for each built-in family and applicable p, the
    constant of w^(-1/(p-1)) at the conjugate exponent stays finite."""
    cfg = cfg.resolved()
    grid, _, _, _ = _context(cfg)
    columns = ["case_id", "descriptor", "p", "ap_constant", "dual_ap_constant"]
    rows = []
    all_finite = True
    max_dual = 0.0
    plan = [
        (WeightFamily("exponential", c=1.0), (1.5, 2.0, 3.0)),
        (WeightFamily("power_log", alpha=0.0, beta=1.0), (1.5, 2.0, 3.0)),
        (WeightFamily("power_log", alpha=1.0, beta=2.0), (1.5, 2.0, 3.0)),
        (WeightFamily("power", a=0.5), (2.0, 3.0)),
    ]
    case_no = 0
    for fam, ps in plan:
        w = make_weight(fam, grid)
        for p in ps:
            pprime = p / (p - 1.0)
            c = ap_loc_constant(w, p, 1.0)
            dual = Weight(grid.with_values(w.base.values ** (-1.0 / (p - 1.0))))
            cdual = ap_loc_constant(dual, pprime, 1.0)
            all_finite &= bool(np.isfinite(c) and np.isfinite(cdual))
            max_dual = max(max_dual, cdual)
            rows.append(
                {
                    "case_id": f"{case_no:03d}",
                    "descriptor": fam.descriptor(),
                    "p": p,
                    "ap_constant": c,
                    "dual_ap_constant": cdual,
                }
            )
            case_no += 1
    summary = {"max_dual_constant": max_dual}
    criteria = {"duality_finite": _criterion(all_finite, all_finite)}
    return ExperimentReport(
        cfg.experiment, cfg.to_dict(), columns, rows, summary, criteria,
        stability=[
            {"key": "max_dual_constant", "tol_key": "boundedness_refine_tol", "kind": "relative"}
        ],
    )


def _operator_ratio_rows(cfg, grid, weight, apply_op, op_name):
    """L^2 ratios over the smooth family and weak-(1,1) ratios over spikes."""
    fam = families.boundedness_family(grid, weight, cfg.cases, cfg.seed, q=cfg.q)
    rows = []
    skipped = []
    l2 = []
    for case in fam:
        den = lp_norm(case.values, weight, 2.0)
        if den <= 0:
            skipped.append(f"{case.case_id}: zero denominator")
            continue
        ratio = lp_norm(apply_op(case.values), weight, 2.0) / den
        l2.append(ratio)
        rows.append(
            {
                "case_id": case.case_id,
                "descriptor": case.descriptor,
                "metric": f"{op_name}_l2_ratio",
                "ratio": ratio,
            }
        )
    spikes = families.spike_family(grid, max(10, cfg.cases // 2), cfg.seed + 1)
    weak = []
    for case in spikes:
        den = lp_norm(case.values, weight, 1.0)
        if den <= 0:
            skipped.append(f"{case.case_id}: zero denominator")
            continue
        ratio = weak_l1_norm(apply_op(case.values), weight) / den
        weak.append(ratio)
        rows.append(
            {
                "case_id": "w" + case.case_id,
                "descriptor": case.descriptor,
                "metric": f"{op_name}_weak11_ratio",
                "ratio": ratio,
            }
        )
    return rows, skipped, float(np.max(l2)), float(np.max(weak))


def lemma32_boundedness(cfg: ExperimentConfig) -> ExperimentReport:
    """Truncated-transform boundedness ratios: L^2 over the smooth family,
    weak-(1,1) over spikes, for the configured weight."""
    cfg = cfg.resolved()
    grid, weight, _, _ = _context(cfg)
    columns = ["case_id", "descriptor", "metric", "ratio"]
    rows = []
    skipped = []
    max_l2 = 0.0
    max_weak = 0.0
    for j in range(1, grid.dim + 1):
        jrows, jskip, l2, weak = _operator_ratio_rows(
            cfg, grid, weight, lambda f, j=j: riesz_transform(f, j), f"riesz{j}"
        )
        rows.extend(jrows)
        skipped.extend(jskip)
        max_l2 = max(max_l2, l2)
        max_weak = max(max_weak, weak)
    summary = {"max_l2_ratio": max_l2, "max_weak_ratio": max_weak}
    criteria = {
        "l2_ratio_finite": _criterion(max_l2, np.isfinite(max_l2)),
        "weak_ratio_finite": _criterion(max_weak, np.isfinite(max_weak)),
    }
    return ExperimentReport(
        cfg.experiment, cfg.to_dict(), columns, rows, summary, criteria, skipped,
        stability=[
            {"key": "max_l2_ratio", "tol_key": "boundedness_refine_tol", "kind": "relative"},
            {"key": "max_weak_ratio", "tol_key": "boundedness_refine_tol", "kind": "relative"},
        ],
    )


def maximal_boundedness(cfg: ExperimentConfig) -> ExperimentReport:
    """Local maximal operator boundedness ratios for the configured weight."""
    cfg = cfg.resolved()
    grid, weight, _, _ = _context(cfg)
    columns = ["case_id", "descriptor", "metric", "ratio"]
    rows, skipped, max_l2, max_weak = _operator_ratio_rows(
        cfg, grid, weight, local_hl_maximal, "maximal"
    )
    summary = {"max_l2_ratio": max_l2, "max_weak_ratio": max_weak}
    criteria = {
        "l2_ratio_finite": _criterion(max_l2, np.isfinite(max_l2)),
        "weak_ratio_finite": _criterion(max_weak, np.isfinite(max_weak)),
    }
    return ExperimentReport(
        cfg.experiment, cfg.to_dict(), columns, rows, summary, criteria, skipped,
        stability=[
            {"key": "max_l2_ratio", "tol_key": "boundedness_refine_tol", "kind": "relative"},
            {"key": "max_weak_ratio", "tol_key": "boundedness_refine_tol", "kind": "relative"},
        ],
    )


def kernel_bound_36(cfg: ExperimentConfig) -> ExperimentReport:
    """Normalized sup of the smoothed kernels and their first derivatives
    over the annulus, per component."""
    cfg = cfg.resolved()
    grid, _, bump, ladder = _context(cfg)
    columns = ["case_id", "descriptor", "component", "beta", "max_stat"]
    rows = []
    max0 = 0.0
    max1 = 0.0
    case_no = 0
    for j in range(1, grid.dim + 1):
        betas = [(0,) * grid.dim]
        for axis in range(grid.dim):
            e = [0] * grid.dim
            e[axis] = 1
            betas.append(tuple(e))
        for beta in betas:
            rep = kernel_bound_check(grid, j, bump, ladder, beta)
            rows.append(
                {
                    "case_id": f"{case_no:03d}",
                    "descriptor": f"component={j},beta={beta}",
                    "component": j,
                    "beta": str(beta),
                    "max_stat": rep.max_stat,
                }
            )
            case_no += 1
            if sum(beta) == 0:
                max0 = max(max0, rep.max_stat)
            else:
                max1 = max(max1, rep.max_stat)
    summary = {"max_stat_order0": max0, "max_stat_order1": max1}
    criteria = {
        "order0_finite": _criterion(max0, np.isfinite(max0)),
        "order1_finite": _criterion(max1, np.isfinite(max1)),
    }
    return ExperimentReport(
        cfg.experiment, cfg.to_dict(), columns, rows, summary, criteria,
        stability=[
            {"key": "max_stat_order0", "tol_key": "kernel_refine_tol", "kind": "relative"},
            {"key": "max_stat_order1", "tol_key": "kernel_refine_tol", "kind": "relative"},
        ],
    )


def atom_decay_37(cfg: ExperimentConfig) -> ExperimentReport:
    """Far-field decay statistic over a family of random small atoms."""
    cfg = cfg.resolved()
    grid, weight, bump, ladder = _context(cfg)
    rng = np.random.default_rng(cfg.seed)
    if cfg.atom_side_lo > 0.5:
        raise ValueError(
            f"atom_side_lo {cfg.atom_side_lo} leaves no sides at or below 0.5; refine the grid"
        )
    columns = ["case_id", "descriptor", "component", "max_stat"]
    rows = []
    max_stat = 0.0
    margin = 3.0 + 4 * grid.h
    for i in range(cfg.cases):
        side = float(np.exp(rng.uniform(np.log(cfg.atom_side_lo), np.log(0.5))))
        reach = max(grid.half_width - margin - side / 2, 0.0)
        center = tuple(rng.uniform(-reach, reach) for _ in range(grid.dim))
        spec = AtomSpec(weight, cfg.q, int(rng.integers(2**62)), center, side)
        a = make_atom(spec)
        cube = snapped_atom_cube(spec)
        for j in range(1, grid.dim + 1):
            rep = atom_decay_check(a, cube, j, bump, ladder, weight)
            rows.append(
                {
                    "case_id": f"{i:03d}-j{j}",
                    "descriptor": f"atom(side={side:.6g},center={tuple(round(c, 6) for c in center)})",
                    "component": j,
                    "max_stat": rep.max_stat,
                }
            )
            max_stat = max(max_stat, rep.max_stat)
    summary = {"max_stat": max_stat}
    criteria = {"decay_stat_finite": _criterion(max_stat, np.isfinite(max_stat))}
    return ExperimentReport(
        cfg.experiment, cfg.to_dict(), columns, rows, summary, criteria,
        stability=[{"key": "max_stat", "tol_key": "decay_refine_tol", "kind": "relative"}],
    )


def atom_h1_bound_35(cfg: ExperimentConfig) -> ExperimentReport:
    """Uniform h^1 bound for transformed saturating atoms plus the single
    atom's Cauchy-Schwarz route."""
    cfg = cfg.resolved()
    grid, weight, bump, ladder = _context(cfg)
    rep = atom_h1_bound_experiment(
        cfg.cases, cfg.q, weight, bump, ladder, seed=cfg.seed,
        side_bounds=(cfg.atom_side_lo, 2.0),
    )
    columns = ["case_id", "descriptor", "component", "h1_norm"]
    rows = []
    for case in rep.cases:
        for j, val in case["h1_by_component"].items():
            rows.append(
                {
                    "case_id": f"{case['case_id']}-j{j}",
                    "descriptor": f"atom(side={case['side']:.6g})",
                    "component": j,
                    "h1_norm": val,
                }
            )
    for j, val in rep.single_h1.items():
        rows.append(
            {
                "case_id": f"single-j{j}",
                "descriptor": "single_atom",
                "component": j,
                "h1_norm": val,
            }
        )
    summary = {
        "max_h1": rep.max_h1,
        "single_cs_ratio_max": max(rep.single_cs_ratio.values()),
    }
    criteria = {
        "atom_h1_finite": _criterion(rep.max_h1, np.isfinite(rep.max_h1)),
        "single_cs_finite": _criterion(
            summary["single_cs_ratio_max"], np.isfinite(summary["single_cs_ratio_max"])
        ),
    }
    return ExperimentReport(
        cfg.experiment, cfg.to_dict(), columns, rows, summary, criteria,
        stability=[{"key": "max_h1", "tol_key": "atom_h1_refine_tol", "kind": "relative"}],
    )


def _strong_runner(cfg: ExperimentConfig, metrics: str) -> ExperimentReport:
    cfg = cfg.resolved()
    grid, weight, bump, ladder = _context(cfg)
    family = families.strong_family(grid, weight, cfg.cases, cfg.seed, q=cfg.q)
    for case in family:
        if case.kind in ("atom", "atom_sum"):
            case.extra["h1"] = h1_norm(case.values, weight, bump, ladder)
    columns = [
        "case_id", "descriptor", "kind", "theta", "p", "ratio", "band",
        "atom_l1_ratio", "atom_l1_band", "atom_h1_ratio", "atom_h1_band",
    ]
    rows = []
    skipped = []
    summary = {}
    criteria = {}
    stability = []
    for theta in cfg.thetas:
        key = f"theta{theta:g}"
        ps = (2.0, 1.0) if metrics == "full" else (2.0,)
        for p in ps:
            rep = strong_boundedness_experiment(
                weight, p, family, bump, ladder, theta=theta,
                atom_metrics=(p == 2.0),
            )
            for row in rep.rows:
                out = dict(row)
                out["theta"] = theta
                out["p"] = p
                out["case_id"] = f"{key}-p{p:g}-{row['case_id']}"
                rows.append(out)
            skipped.extend(f"{key}-p{p:g}-{s}" for s in rep.skipped)
            tag = "l2" if p == 2.0 else "weak"
            if metrics == "full":
                summary[f"max_{tag}_ratio_{key}"] = rep.summary["max_ratio"]
                summary[f"max_{tag}_ratio_{key}_band"] = rep.summary["max_ratio_band"]
                criteria[f"{tag}_ratio_finite_{key}"] = _criterion(
                    rep.summary["max_ratio"], np.isfinite(rep.summary["max_ratio"])
                )
                stability.append(
                    {"key": f"max_{tag}_ratio_{key}", "kind": "band",
                     "band_key": f"max_{tag}_ratio_{key}_band"}
                )
            if p == 2.0:
                if metrics == "full":
                    summary[f"max_atom_l1_ratio_{key}"] = rep.summary["max_atom_l1_ratio"]
                    summary[f"max_atom_l1_ratio_{key}_band"] = rep.summary["max_atom_l1_band"]
                    criteria[f"atom_l1_ratio_finite_{key}"] = _criterion(
                        rep.summary["max_atom_l1_ratio"],
                        np.isfinite(rep.summary["max_atom_l1_ratio"]),
                    )
                    stability.append(
                        {"key": f"max_atom_l1_ratio_{key}", "kind": "band",
                         "band_key": f"max_atom_l1_ratio_{key}_band"}
                    )
                summary[f"max_atom_h1_ratio_{key}"] = rep.summary["max_atom_h1_ratio"]
                summary[f"max_atom_h1_ratio_{key}_band"] = rep.summary["max_atom_h1_band"]
                criteria[f"atom_h1_ratio_finite_{key}"] = _criterion(
                    rep.summary["max_atom_h1_ratio"],
                    np.isfinite(rep.summary["max_atom_h1_ratio"]),
                )
                stability.append(
                    {"key": f"max_atom_h1_ratio_{key}", "kind": "band",
                     "band_key": f"max_atom_h1_ratio_{key}_band"}
                )
    return ExperimentReport(
        cfg.experiment, cfg.to_dict(), columns, rows, summary, criteria, skipped,
        stability=stability,
    )


def theorem_c(cfg: ExperimentConfig) -> ExperimentReport:
    """Strongly singular operator ratios: L^2, weak-(1,1), and the atom
    L^1-vs-h^1 route, per oscillation exponent, with two-delta bands."""
    return _strong_runner(cfg, "full")


def corollary_1(cfg: ExperimentConfig) -> ExperimentReport:
    """Strongly singular h^1-to-h^1 ratios over atoms, with two-delta bands."""
    return _strong_runner(cfg, "h1")


EXPERIMENTS = {
    "theorem1-equivalence": theorem1_equivalence,
    "lemma21-properties": lemma21_properties,
    "lemma32-boundedness": lemma32_boundedness,
    "maximal-boundedness": maximal_boundedness,
    "kernel-bound-36": kernel_bound_36,
    "atom-decay-37": atom_decay_37,
    "atom-h1-bound-35": atom_h1_bound_35,
    "theoremC": theorem_c,
    "corollary1": corollary_1,
    "weight-duality": weight_duality,
}


def run_experiment(cfg: ExperimentConfig) -> ExperimentReport:
    return EXPERIMENTS[cfg.experiment](cfg)


def apply_refinement(cfg: ExperimentConfig, report: ExperimentReport) -> ExperimentReport:
    """Rerun at doubled N and append refinement deltas and criteria."""
    cfg = cfg.resolved()
    refined = run_experiment(cfg.refined())
    deltas = {}
    for spec in report.stability:
        key = spec["key"]
        base_val = report.summary[key]
        ref_val = refined.summary[key]
        entry = {"base": base_val, "refined": ref_val}
        if spec["kind"] == "band":
            band = report.summary[spec["band_key"]] + refined.summary[spec["band_key"]]
            gap = abs(ref_val - base_val)
            entry["gap"] = gap
            entry["band"] = band
            passed = gap <= band + 1e-12
            report.criteria[f"refine_{key}"] = _criterion(gap, passed, band)
        else:
            denom = max(abs(base_val), 1e-300)
            delta = abs(ref_val - base_val) / denom
            if spec["kind"] == "absolute":
                delta = abs(ref_val - base_val)
            tol = cfg.threshold(spec["tol_key"])
            entry["delta"] = delta
            passed = delta <= tol
            report.criteria[f"refine_{key}"] = _criterion(delta, passed, tol)
        deltas[key] = entry
    report.refinement = {
        "points_per_axis": 2 * cfg.points_per_axis - 1,
        "summary_refined": refined.summary,
        "deltas": deltas,
    }
    return report


def _csv_bytes(columns, rows) -> bytes:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(columns)
    for row in rows:
        writer.writerow([row.get(col, "") for col in columns])
    return buf.getvalue().encode("utf-8")


def write_report(report: ExperimentReport, out_dir: str) -> tuple[str, str]:
    os.makedirs(out_dir, exist_ok=True)
    json_path = os.path.join(out_dir, "report.json")
    csv_path = os.path.join(out_dir, "cases.csv")
    payload = json.dumps(report.to_dict(), sort_keys=True, indent=2) + "\n"
    with open(json_path, "w", encoding="utf-8") as fh:
        fh.write(payload)
    rows = sorted(report.cases, key=lambda r: str(r.get("case_id", "")))
    with open(csv_path, "wb") as fh:
        fh.write(_csv_bytes(report.columns, rows))
    return json_path, csv_path


def run(
    config_path: str,
    out_dir: str | None = None,
    seed: int | None = None,
    refine: bool = False,
    t_min: float | None = None,
    scale_ratio: float | None = None,
) -> int:
    """Load a config, run the experiment, write report.json and cases.csv.

    Returns 0 when every criterion passes, 2 when any fails, 1 on errors.
    """
    started = time.perf_counter()
    try:
        cfg = ExperimentConfig.from_file(config_path)
        if seed is not None:
            cfg = replace(cfg, seed=int(seed))
        if t_min is not None:
            cfg = replace(cfg, t_min=float(t_min))
        if scale_ratio is not None:
            cfg = replace(cfg, scale_ratio=float(scale_ratio))
        cfg = cfg.resolved()
        out = out_dir or cfg.out or "hardyloc_out"
    except (ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    try:
        report = run_experiment(cfg)
        if refine:
            report = apply_refinement(cfg, report)
    except (ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    json_path, csv_path = write_report(report, out)
    for name, crit in sorted(report.criteria.items()):
        status = "PASS" if crit["passed"] else "FAIL"
        extra = f" (threshold {crit['threshold']})" if "threshold" in crit else ""
        print(f"[{status}] {name}: {crit['value']}{extra}")
    elapsed = time.perf_counter() - started
    print(f"wrote {json_path} and {csv_path} in {elapsed:.1f}s")
    return 0 if report.passed else 2
