"""Strongly singular convolution operator with oscillatory kernel.

The kernel exp(i |x|^-theta) |x|^-dim v(x) is not odd, so symmetry gives
no cancellation; its principal value exists through oscillation. On the
grid the oscillation is unresolvable below the spacing, so the quadrature
truncates the kernel inside radius delta (default one cell) and every
experiment carries a two-delta band (delta vs 2*delta) as its uncertainty
instead of a convergence claim.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .grid import GridFunction, convolve_fast
from .maximal import BumpSpec, ScaleLadder, h1_norm
from .riesz import CutoffSpec
from .weights import Weight, lp_norm, weak_l1_norm


@dataclass(frozen=True)
class StrongKernelSpec:
    """Oscillation exponent, radial cutoff, and inner truncation radius."""

    theta: float
    delta: float
    cutoff: CutoffSpec = CutoffSpec()
    conjugate: bool = False

    def __post_init__(self):
        if not self.theta > 0:
            raise ValueError(f"theta must be positive, got {self.theta}")
        if not self.delta > 0:
            raise ValueError(f"delta must be positive, got {self.delta}")


def strong_kernel_eval(spec: StrongKernelSpec, x):
    """Exact pointwise kernel value; undefined (raises) at the origin."""
    xv = np.atleast_1d(np.asarray(x, dtype=float))
    dim = xv.size
    if dim not in (1, 2):
        raise ValueError(f"points must have 1 or 2 coordinates, got {dim}")
    r = float(np.sqrt(np.sum(xv**2)))
    if r == 0:
        raise ValueError("strongly singular kernel is undefined at the origin")
    sign = -1.0 if spec.conjugate else 1.0
    return complex(spec.cutoff(np.array([r]))[0] / r**dim * np.exp(1j * sign * r**-spec.theta))


def sample_strong_kernel(spec: StrongKernelSpec, grid: GridFunction) -> GridFunction:
    """Kernel sampled on the grid with all nodes inside radius delta zeroed."""
    if spec.delta < grid.h / 2:
        raise ValueError(f"delta {spec.delta} is below half a cell {grid.h / 2}")
    r = grid.radii()
    mask = r >= spec.delta
    vals = np.zeros(r.shape, dtype=complex)
    rm = r[mask]
    sign = -1.0 if spec.conjugate else 1.0
    vals[mask] = spec.cutoff(rm) / rm**grid.dim * np.exp(1j * sign * rm**-spec.theta)
    return grid.with_values(vals)


def strong_transform(f: GridFunction, spec: StrongKernelSpec) -> GridFunction:
    """Convolution with the truncated oscillatory kernel; complex output."""
    return convolve_fast(f, sample_strong_kernel(spec, f))


def delta_band(f: GridFunction, spec: StrongKernelSpec) -> tuple[GridFunction, GridFunction]:
    """Transforms at truncation delta and 2*delta; their gap is the
    quadrature-uncertainty band reported with every experiment."""
    t1 = strong_transform(f, spec)
    t2 = strong_transform(
        f, StrongKernelSpec(spec.theta, 2 * spec.delta, spec.cutoff, spec.conjugate)
    )
    return t1, t2


@dataclass(frozen=True)
class StrongReport:
    theta: float
    p: float
    rows: list
    skipped: list
    summary: dict


def strong_boundedness_experiment(
    w: Weight,
    p: float,
    family,
    bump: BumpSpec,
    ladder: ScaleLadder,
    theta: float = 0.5,
    cutoff: CutoffSpec | None = None,
    atom_metrics: bool = True,
) -> StrongReport:
    """Operator-norm ratio study for the strongly singular transform.

    For each family member f the primary ratio is |Tf|_{L^2_w} / |f|_{L^2_w}
    when p = 2, or the weak-(1,1) ratio when p = 1. Atom members also get
    the L^1-vs-h^1 ratio |Ta|_{L^1_w} / |a|_{h^1_w} and the h^1-vs-h^1
    ratio |Ta|_{h^1_w} / |a|_{h^1_w}. Every ratio is computed at delta = h
    and delta = 2h; the gap is the reported uncertainty band.
    """
    family = list(family)
    if not family:
        raise ValueError("empty test family")
    if p not in (1, 2):
        raise ValueError(f"p must be 1 (weak) or 2, got {p}")
    grid = w.base
    spec = StrongKernelSpec(theta, grid.h, cutoff or CutoffSpec())
    rows = []
    skipped = []
    max_ratio = 0.0
    max_band = 0.0
    max_atom_l1 = 0.0
    max_atom_l1_band = 0.0
    max_atom_h1 = 0.0
    max_atom_h1_band = 0.0
    for case in family:
        f = case.values
        tf1, tf2 = delta_band(f, spec)
        if p == 2:
            den = lp_norm(f, w, 2.0)
            num1, num2 = lp_norm(tf1, w, 2.0), lp_norm(tf2, w, 2.0)
        else:
            den = lp_norm(f, w, 1.0)
            num1, num2 = weak_l1_norm(tf1, w), weak_l1_norm(tf2, w)
        if den <= 0:
            skipped.append(f"{case.case_id}: zero denominator")
            continue
        ratio = num1 / den
        band = abs(num1 - num2) / den
        row = {
            "case_id": case.case_id,
            "descriptor": case.descriptor,
            "kind": case.kind,
            "ratio": ratio,
            "band": band,
            "atom_l1_ratio": "",
            "atom_l1_band": "",
            "atom_h1_ratio": "",
            "atom_h1_band": "",
        }
        max_ratio = max(max_ratio, ratio)
        max_band = max(max_band, band)
        if atom_metrics and case.kind in ("atom", "atom_sum"):
            den_h1 = case.extra.get("h1")
            if den_h1 is None:
                den_h1 = h1_norm(f, w, bump, ladder)
            if den_h1 > 0:
                l1a = lp_norm(tf1, w, 1.0) / den_h1
                l1b = lp_norm(tf2, w, 1.0) / den_h1
                h1a = h1_norm(tf1, w, bump, ladder) / den_h1
                h1b = h1_norm(tf2, w, bump, ladder) / den_h1
                row["atom_l1_ratio"] = l1a
                row["atom_l1_band"] = abs(l1a - l1b)
                row["atom_h1_ratio"] = h1a
                row["atom_h1_band"] = abs(h1a - h1b)
                max_atom_l1 = max(max_atom_l1, l1a)
                max_atom_l1_band = max(max_atom_l1_band, abs(l1a - l1b))
                max_atom_h1 = max(max_atom_h1, h1a)
                max_atom_h1_band = max(max_atom_h1_band, abs(h1a - h1b))
        rows.append(row)
    if not rows:
        raise ValueError("every family member was skipped")
    summary = {
        "max_ratio": max_ratio,
        "max_ratio_band": max_band,
        "max_atom_l1_ratio": max_atom_l1,
        "max_atom_l1_band": max_atom_l1_band,
        "max_atom_h1_ratio": max_atom_h1,
        "max_atom_h1_band": max_atom_h1_band,
    }
    return StrongReport(theta=theta, p=p, rows=rows, skipped=skipped, summary=summary)
