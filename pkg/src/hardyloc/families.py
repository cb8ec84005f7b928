"""Versioned deterministic test-function families for the experiments.

The family compositions are fixed here (and stamped with FAMILY_VERSION)
so reported ratio spreads are comparable across machines and reruns.
Every member is reproducible from the experiment seed alone; parameters
are drawn in continuum units, so the same family refines cleanly onto a
finer grid.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .atoms import AtomSpec, make_atom
from .grid import GridFunction, sample
from .maximal import _mollifier_profile
from .weights import Weight

FAMILY_VERSION = 1


@dataclass(frozen=True, eq=False)
class Case:
    case_id: str
    descriptor: str
    kind: str
    values: GridFunction
    extra: dict = field(default_factory=dict)


def _fmt(x) -> str:
    if isinstance(x, tuple):
        return "(" + ",".join(f"{v:.6g}" for v in x) + ")"
    return f"{x:.6g}"


def gaussian_case(grid: GridFunction, sigma: float, center) -> GridFunction:
    center = tuple(np.atleast_1d(center))

    def descr(*coords):
        d2 = sum((c - y) ** 2 for c, y in zip(coords, center))
        return np.exp(-d2 / sigma**2)

    return sample(descr, grid)


def bump_case(grid: GridFunction, scale: float, center) -> GridFunction:
    center = tuple(np.atleast_1d(center))

    def descr(*coords):
        d2 = sum((c - y) ** 2 for c, y in zip(coords, center))
        return _mollifier_profile(np.sqrt(d2) / scale)

    return sample(descr, grid)


def _random_atom(grid, weight, q, rng, side_lo, side_hi, margin):
    side = float(np.exp(rng.uniform(np.log(side_lo), np.log(side_hi))))
    reach = max(grid.half_width - margin - side / 2, 0.0)
    center = tuple(rng.uniform(-reach, reach) for _ in range(grid.dim))
    spec = AtomSpec(weight, q, int(rng.integers(2**62)), center, side)
    return make_atom(spec), side, center


def theorem1_family(
    grid: GridFunction,
    weight: Weight,
    n_cases: int,
    seed: int,
    q: float = 2.0,
    side_lo: float | None = None,
) -> list[Case]:
    """Mixed family for the norm-equivalence study.

    Composition cycles atom, atom, atom_sum, gaussian, bump (40% atoms,
    20% each of the rest). Gaussian widths and bump scales stay at or
    below 1; supports stay well inside the box so transforms do not clip.
    """
    if n_cases < 1:
        raise ValueError(f"need at least one case, got {n_cases}")
    rng = np.random.default_rng(seed)
    side_lo = 8 * grid.h if side_lo is None else side_lo
    margin = 3.0 + 4 * grid.h
    pattern = ("atom", "atom", "atom_sum", "gaussian", "bump")
    cases = []
    for i in range(n_cases):
        kind = pattern[i % len(pattern)]
        if kind == "atom":
            vals, side, center = _random_atom(grid, weight, q, rng, side_lo, 2.0, margin)
            descr = f"atom(side={_fmt(side)},center={_fmt(center)})"
        elif kind == "atom_sum":
            k = int(rng.integers(2, 4))
            pieces = []
            coeffs = rng.standard_normal(k)
            total = None
            for c in coeffs:
                a, side, center = _random_atom(grid, weight, q, rng, side_lo, 1.0, margin)
                total = a.values * c if total is None else total + a.values * c
                pieces.append(_fmt(side))
            vals = grid.with_values(total)
            descr = f"atom_sum(k={k},sides=[{','.join(pieces)}])"
        elif kind == "gaussian":
            sigma = float(rng.uniform(0.1, 1.0))
            center = tuple(rng.uniform(-2.0, 2.0) for _ in range(grid.dim))
            vals = gaussian_case(grid, sigma, center)
            descr = f"gaussian(sigma={_fmt(sigma)},center={_fmt(center)})"
        else:
            scale = float(rng.uniform(0.2, 1.0))
            center = tuple(rng.uniform(-2.0, 2.0) for _ in range(grid.dim))
            vals = bump_case(grid, scale, center)
            descr = f"bump(scale={_fmt(scale)},center={_fmt(center)})"
        cases.append(Case(f"{i:03d}-{kind}", descr, kind, vals))
    return cases


def boundedness_family(
    grid: GridFunction, weight: Weight, n_cases: int, seed: int, q: float = 2.0
) -> list[Case]:
    """Smooth bumps, Gaussians, and atoms for L^p operator-ratio studies."""
    if n_cases < 1:
        raise ValueError(f"need at least one case, got {n_cases}")
    rng = np.random.default_rng(seed)
    margin = 3.0 + 4 * grid.h
    pattern = ("gaussian", "bump", "atom")
    cases = []
    for i in range(n_cases):
        kind = pattern[i % len(pattern)]
        if kind == "gaussian":
            sigma = float(rng.uniform(0.1, 1.0))
            center = tuple(rng.uniform(-2.0, 2.0) for _ in range(grid.dim))
            vals = gaussian_case(grid, sigma, center)
            descr = f"gaussian(sigma={_fmt(sigma)},center={_fmt(center)})"
        elif kind == "bump":
            scale = float(rng.uniform(0.2, 1.0))
            center = tuple(rng.uniform(-2.0, 2.0) for _ in range(grid.dim))
            vals = bump_case(grid, scale, center)
            descr = f"bump(scale={_fmt(scale)},center={_fmt(center)})"
        else:
            vals, side, center = _random_atom(grid, weight, q, rng, 8 * grid.h, 1.5, margin)
            descr = f"atom(side={_fmt(side)},center={_fmt(center)})"
        cases.append(Case(f"{i:03d}-{kind}", descr, kind, vals))
    return cases


def spike_family(grid: GridFunction, n_cases: int, seed: int) -> list[Case]:
    """Near-delta inputs for weak-(1,1) studies: unit-mass cell spikes and
    narrow Gaussians with widths between one and four cells."""
    if n_cases < 1:
        raise ValueError(f"need at least one case, got {n_cases}")
    rng = np.random.default_rng(seed)
    n = grid.points_per_axis
    quarter = n // 4
    cases = []
    for i in range(n_cases):
        if i % 2 == 0:
            idx = tuple(int(rng.integers(quarter, n - quarter)) for _ in range(grid.dim))
            vals = np.zeros((n,) * grid.dim)
            vals[idx] = grid.h**-grid.dim
            node = tuple(-grid.half_width + k * grid.h for k in idx)
            cases.append(
                Case(
                    f"{i:03d}-cell_spike",
                    f"cell_spike(node={_fmt(node)})",
                    "cell_spike",
                    grid.with_values(vals),
                )
            )
        else:
            sigma = float(rng.uniform(grid.h, 4 * grid.h))
            center = tuple(rng.uniform(-grid.half_width / 2, grid.half_width / 2) for _ in range(grid.dim))
            cases.append(
                Case(
                    f"{i:03d}-narrow_gaussian",
                    f"narrow_gaussian(sigma={_fmt(sigma)},center={_fmt(center)})",
                    "narrow_gaussian",
                    gaussian_case(grid, sigma, center),
                )
            )
    return cases


def strong_family(
    grid: GridFunction, weight: Weight, n_cases: int, seed: int, q: float = 2.0
) -> list[Case]:
    """Atoms (roughly 70%) plus smooth bumps for the strongly singular study."""
    if n_cases < 1:
        raise ValueError(f"need at least one case, got {n_cases}")
    rng = np.random.default_rng(seed)
    margin = 3.0 + 4 * grid.h
    pattern = ("atom", "atom", "atom", "atom", "atom", "bump", "bump")
    cases = []
    for i in range(n_cases):
        kind = pattern[i % len(pattern)]
        if kind == "atom":
            vals, side, center = _random_atom(grid, weight, q, rng, 8 * grid.h, 1.5, margin)
            descr = f"atom(side={_fmt(side)},center={_fmt(center)})"
        else:
            scale = float(rng.uniform(0.2, 1.0))
            center = tuple(rng.uniform(-2.0, 2.0) for _ in range(grid.dim))
            vals = bump_case(grid, scale, center)
            descr = f"bump(scale={_fmt(scale)},center={_fmt(center)})"
        cases.append(Case(f"{i:03d}-{kind}", descr, kind, vals))
    return cases
