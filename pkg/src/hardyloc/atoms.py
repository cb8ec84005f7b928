"""Weighted atoms: generation, validation, and the atom-level h^1 bound study.

A cube atom is supported in a node-corner cube Q, has weighted L^q norm
exactly equal to w(Q)^(1/q - 1) (the bound is saturated, the worst case
for the inequalities under test), and has exact zero plain-sum integral
when |Q| < 1. A single atom lives on the whole box, which stands in for
the full space, and saturates w(box)^(1/q - 1) with no cancellation.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .grid import Cube, GridFunction, integrate
from .maximal import BumpSpec, ScaleLadder, h1_norm
from .riesz import CutoffSpec, riesz_transform
from .weights import Weight, lp_norm


@dataclass(frozen=True, eq=False)
class AtomSpec:
    """Seeded description of one atom relative to a weight."""

    weight: Weight
    q: float
    seed: int
    center: tuple[float, ...] | None = None
    side: float | None = None
    single: bool = False

    def __post_init__(self):
        if not self.q > 1:
            raise ValueError(f"atom exponent q must exceed 1, got {self.q}")
        if self.single:
            if self.center is not None or self.side is not None:
                raise ValueError("single atoms carry no cube")
            return
        if self.center is None or self.side is None:
            raise ValueError("cube atoms need a center and a side")
        object.__setattr__(
            self, "center", tuple(float(x) for x in np.atleast_1d(self.center))
        )
        if not 0 < self.side <= 2:
            raise ValueError(f"atom side must lie in (0, 2], got {self.side}")


def snapped_atom_cube(spec: AtomSpec) -> Cube:
    """The node-corner cube an atom is actually realized on.

    The center snaps to the nearest node and the half-side to a whole
    number of cells, so the realized cube has corners on nodes and an odd
    number of nodes per axis.
    """
    if spec.single:
        raise ValueError("single atoms carry no cube")
    grid = spec.weight.base
    h = grid.h
    n = grid.points_per_axis
    rho = max(1, int(round(spec.side / (2 * h))))
    if 2 * rho > n - 1:
        raise ValueError(f"atom side {spec.side} does not fit in the box")
    centers = []
    for x in spec.center:
        c = int(round((x + grid.half_width) / h))
        if c - rho < 0 or c + rho > n - 1:
            raise ValueError(f"atom cube at {spec.center} with side {spec.side} leaves the box")
        centers.append(-grid.half_width + c * h)
    return Cube(tuple(centers), 2 * rho * h)


def _cube_mask(grid: GridFunction, cube: Cube) -> np.ndarray:
    coords = grid.coords()
    half = cube.side / 2 + grid.h / 4  # node-inclusive tolerance
    mask = np.ones_like(coords[0], dtype=bool)
    for c, y in zip(coords, cube.center):
        mask &= np.abs(c - y) <= half
    return mask


def _bump_mixture(grid: GridFunction, centers, widths, amps) -> np.ndarray:
    coords = grid.coords()
    vals = np.zeros_like(coords[0])
    for ctr, wid, amp in zip(centers, widths, amps):
        d2 = sum((c - x) ** 2 for c, x in zip(coords, ctr))
        vals += amp * np.exp(-d2 / wid**2)
    return vals


def make_atom(spec: AtomSpec) -> GridFunction:
    """Seeded random profile on Q, mean-projected if |Q| < 1, norm-saturated."""
    if spec.single:
        raise ValueError("use make_single_atom for single atoms")
    grid = spec.weight.base
    cube = snapped_atom_cube(spec)
    mask = _cube_mask(grid, cube)
    rng = np.random.default_rng(spec.seed)
    vals = None
    for _ in range(10):
        centers = [
            tuple(y + rng.uniform(-0.35, 0.35) * cube.side for y in cube.center)
            for _ in range(4)
        ]
        widths = rng.uniform(cube.side / 8, cube.side / 3, size=4)
        amps = rng.standard_normal(4)
        cand = np.where(mask, _bump_mixture(grid, centers, widths, amps), 0.0)
        if cube.volume < 1:
            cand[mask] -= cand[mask].mean()
        if np.max(np.abs(cand)) > 1e-12 * max(1.0, float(np.max(np.abs(amps)))):
            vals = cand
            break
    if vals is None:
        raise ValueError(f"degenerate atom profile after 10 attempts (seed {spec.seed})")
    g = grid.with_values(vals)
    target = spec.weight.cube_measure(cube) ** (1.0 / spec.q - 1.0)
    return g.with_values(vals * (target / lp_norm(g, spec.weight, spec.q)))


def make_single_atom(
    q: float, w: Weight, seed: int = 0, profile: GridFunction | None = None
) -> GridFunction:
    """Atom on the whole box saturating w(box)^(1/q - 1), no cancellation."""
    if not q > 1:
        raise ValueError(f"atom exponent q must exceed 1, got {q}")
    grid = w.base
    if profile is None:
        rng = np.random.default_rng(seed)
        span = grid.half_width
        centers = [
            tuple(rng.uniform(-span / 2, span / 2) for _ in range(grid.dim))
            for _ in range(6)
        ]
        widths = rng.uniform(span / 6, span / 2, size=6)
        amps = rng.standard_normal(6)
        vals = _bump_mixture(grid, centers, widths, amps)
    else:
        if not profile.same_grid(grid):
            raise ValueError("profile grid does not match the weight grid")
        vals = np.asarray(profile.values, dtype=float)
    if np.max(np.abs(vals)) == 0:
        raise ValueError("degenerate (zero) single-atom profile")
    g = grid.with_values(vals)
    target = w.box_measure() ** (1.0 / q - 1.0)
    return g.with_values(vals * (target / lp_norm(g, w, q)))


@dataclass(frozen=True)
class ValidationReport:
    support_ok: bool
    norm_ok: bool
    mean_ok: bool
    details: dict = field(default_factory=dict)

    @property
    def ok(self) -> bool:
        return self.support_ok and self.norm_ok and self.mean_ok


def validate_atom(a: GridFunction, spec: AtomSpec) -> ValidationReport:
    """Check support, norm bound, and cancellation with measured slack.

    The mean check is vacuously true for single atoms and for cubes with
    |Q| >= 1.
    """
    w = spec.weight
    details: dict = {"q": spec.q}
    amax = float(np.max(np.abs(a.values)))
    if spec.single:
        support_ok = True
        mean_ok = True
        bound = w.box_measure() ** (1.0 / spec.q - 1.0)
        details["mean_required"] = False
    else:
        cube = snapped_atom_cube(spec)
        mask = _cube_mask(a, cube)
        leak = float(np.max(np.abs(np.where(mask, 0.0, a.values)))) if (~mask).any() else 0.0
        support_ok = leak <= 1e-12 * max(amax, 1e-300)
        details["support_leak"] = leak
        small = cube.volume < 1
        details["mean_required"] = small
        if small:
            l1 = float(np.sum(np.abs(a.values))) * a.h**a.dim
            mean_abs = abs(float(np.real(integrate(a))))
            mean_ok = mean_abs <= 1e-10 * max(l1, 1e-300)
            details["mean_abs"] = mean_abs
            details["l1_norm"] = l1
        else:
            mean_ok = True
        bound = w.cube_measure(cube) ** (1.0 / spec.q - 1.0)
    norm = lp_norm(a, w, spec.q)
    norm_ok = norm <= bound * (1 + 1e-9)
    details["norm_value"] = norm
    details["norm_bound"] = bound
    return ValidationReport(support_ok, norm_ok, mean_ok, details)


@dataclass(frozen=True)
class AtomH1Report:
    cases: list
    max_h1: float
    single_h1: dict
    single_cs_ratio: dict


def atom_h1_bound_experiment(
    n_atoms: int,
    q: float,
    w: Weight,
    bump: BumpSpec,
    ladder: ScaleLadder,
    seed: int = 0,
    side_bounds: tuple[float, float] | None = None,
    cutoff: CutoffSpec | None = None,
) -> AtomH1Report:
    """Max of |M(R_j a)|_{L^1_w} over seeded saturating atoms plus one single atom.

    Sides are log-uniform in ``side_bounds`` (default [8h, 2]); for the
    single atom the Cauchy-Schwarz route is also recorded as the ratio
    h1 / (|R_j a|_{L^2_w} * w(box)^(1/2)).
    """
    if n_atoms < 1:
        raise ValueError(f"need at least one atom, got {n_atoms}")
    grid = w.base
    h = grid.h
    lo, hi = side_bounds if side_bounds is not None else (8 * h, 2.0)
    rng = np.random.default_rng(seed)
    margin = 3.0 + 4 * h  # room for the kernel support and one bump width
    cases = []
    max_h1 = 0.0
    for i in range(n_atoms):
        side = float(np.exp(rng.uniform(np.log(lo), np.log(hi))))
        reach = max(grid.half_width - margin - side / 2, 0.0)
        center = tuple(rng.uniform(-reach, reach) for _ in range(grid.dim))
        spec = AtomSpec(w, q, int(rng.integers(2**62)), center, side)
        a = make_atom(spec)
        norms = {}
        for j in range(1, grid.dim + 1):
            val = h1_norm(riesz_transform(a, j, cutoff), w, bump, ladder)
            norms[j] = val
            max_h1 = max(max_h1, val)
        cases.append(
            {
                "case_id": f"atom-{i:03d}",
                "side": side,
                "center": center,
                "h1_by_component": norms,
            }
        )
    single = make_single_atom(q, w, seed=int(rng.integers(2**62)))
    root_box = np.sqrt(w.box_measure())
    single_h1 = {}
    single_cs = {}
    for j in range(1, grid.dim + 1):
        rj = riesz_transform(single, j, cutoff)
        lhs = h1_norm(rj, w, bump, ladder)
        single_h1[j] = lhs
        single_cs[j] = lhs / (lp_norm(rj, w, 2.0) * root_box)
        max_h1 = max(max_h1, lhs)
    return AtomH1Report(cases, max_h1, single_h1, single_cs)
