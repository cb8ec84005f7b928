"""Truncated Riesz transforms, smoothed kernels, and the kernel-decay checks.

The component-j kernel is z_j |z|^(-dim-1) Phi(z) with Phi a smooth radial
cutoff that is 1 inside radius 1 and 0 outside radius 2. The kernel is odd
and the grid is origin-symmetric with the origin sample set to 0, so the
discrete convolution realizes the principal value by exact pairwise
cancellation.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .grid import Cube, GridFunction, convolve_fast
from .maximal import BumpSpec, ScaleLadder
from .weights import Weight


def _smoothstep(u: np.ndarray) -> np.ndarray:
    """C-infinity monotone step: 0 for u <= 0, 1 for u >= 1."""
    u = np.asarray(u, dtype=float)
    out = np.zeros_like(u)
    out[u >= 1.0] = 1.0
    mid = (u > 0.0) & (u < 1.0)
    a = np.exp(-1.0 / u[mid])
    b = np.exp(-1.0 / (1.0 - u[mid]))
    out[mid] = a / (a + b)
    return out


@dataclass(frozen=True)
class CutoffSpec:
    """Radial C-infinity cutoff: 1 inside ``inner``, 0 outside ``outer``."""

    family: str = "smooth_radial_step"
    inner: float = 1.0
    outer: float = 2.0

    def __post_init__(self):
        if self.family != "smooth_radial_step":
            raise ValueError(f"unknown cutoff family {self.family!r}")
        if not 0 < self.inner < self.outer:
            raise ValueError(f"need 0 < inner < outer, got {self.inner}, {self.outer}")

    def __call__(self, r: np.ndarray) -> np.ndarray:
        r = np.asarray(r, dtype=float)
        return _smoothstep((self.outer - r) / (self.outer - self.inner))


def make_cutoff(inner: float = 1.0, outer: float = 2.0) -> CutoffSpec:
    """Evaluable smooth radial cutoff."""
    return CutoffSpec(inner=inner, outer=outer)


@dataclass(frozen=True, eq=False)
class RieszKernel:
    """Sampled truncated kernel for one component."""

    component: int
    cutoff: CutoffSpec
    sampled: GridFunction


def make_riesz_kernel(grid: GridFunction, component: int, cutoff: CutoffSpec | None = None) -> RieszKernel:
    """Sample z_j |z|^(-dim-1) Phi(|z|) with the origin node set to 0."""
    if not 1 <= component <= grid.dim:
        raise ValueError(f"component {component} out of range for dim {grid.dim}")
    cutoff = cutoff or CutoffSpec()
    r = grid.radii()
    zj = grid.coords()[component - 1]
    vals = np.zeros_like(r)
    mask = r > 0
    vals[mask] = zj[mask] / r[mask] ** (grid.dim + 1) * cutoff(r[mask])
    return RieszKernel(component, cutoff, grid.with_values(vals))


def riesz_transform(f: GridFunction, component: int, cutoff: CutoffSpec | None = None) -> GridFunction:
    """Convolve f with the sampled truncated kernel of one component."""
    kernel = make_riesz_kernel(f, component, cutoff)
    return convolve_fast(f, kernel.sampled)


def smoothed_kernel(
    grid: GridFunction,
    component: int,
    t: float,
    bump: BumpSpec,
    cutoff: CutoffSpec | None = None,
) -> GridFunction:
    """The scale-t mollification phi_t * K_j of the sampled kernel."""
    if not 0 < t < 1:
        raise ValueError(f"scale t must lie in (0, 1), got {t}")
    kernel = make_riesz_kernel(grid, component, cutoff)
    return convolve_fast(kernel.sampled, bump.sample_dilate(grid, t))


def _directional_diff(values: np.ndarray, axis: int, h: float) -> np.ndarray:
    """Centered difference with zeroed boundary ring."""
    out = np.zeros_like(values)
    if values.ndim == 1:
        out[1:-1] = (values[2:] - values[:-2]) / (2 * h)
        return out
    if axis == 0:
        out[1:-1, :] = (values[2:, :] - values[:-2, :]) / (2 * h)
    else:
        out[:, 1:-1] = (values[:, 2:] - values[:, :-2]) / (2 * h)
    return out


@dataclass(frozen=True)
class KernelBoundReport:
    component: int
    beta: tuple[int, ...]
    r_min: float
    r_max: float
    max_stat: float
    node_count: int


def kernel_bound_check(
    grid: GridFunction,
    component: int,
    bump: BumpSpec,
    ladder: ScaleLadder,
    beta: tuple[int, ...],
    r_min: float = 0.1,
    r_max: float | None = None,
    cutoff: CutoffSpec | None = None,
) -> KernelBoundReport:
    """Normalized decay statistic of the smoothed kernels over an annulus.

    Computes max over annulus nodes of sup_t |d^beta (phi_t * K_j)(x)|
    times |x|^(dim + |beta|), derivatives by centered differences. The
    caller judges stability by comparing two resolutions.
    """
    beta = tuple(int(b) for b in beta)
    if len(beta) != grid.dim or any(b < 0 for b in beta) or sum(beta) > 1:
        raise ValueError(f"beta must be a multi-index of order <= 1 for dim {grid.dim}")
    if r_max is None:
        r_max = 8.0 * grid.dim
    r = grid.radii()
    mask = (r >= r_min) & (r <= r_max)
    if sum(beta) == 1:
        interior = np.zeros_like(mask)
        interior[(slice(1, -1),) * grid.dim] = True
        mask &= interior
    if not mask.any():
        raise ValueError(f"annulus [{r_min}, {r_max}] contains no grid nodes")
    sup = np.zeros_like(r)
    for t in ladder.scales():
        kt = smoothed_kernel(grid, component, t, bump, cutoff).values
        if sum(beta) == 1:
            kt = _directional_diff(kt, beta.index(1), grid.h)
        np.maximum(sup, np.abs(kt), sup)
    stat = sup * r ** (grid.dim + sum(beta))
    return KernelBoundReport(
        component=component,
        beta=beta,
        r_min=float(r_min),
        r_max=float(r_max),
        max_stat=float(stat[mask].max()),
        node_count=int(mask.sum()),
    )


@dataclass(frozen=True)
class DecayReport:
    component: int
    side: float
    max_stat: float
    node_count: int


def atom_decay_check(
    a: GridFunction,
    cube: Cube,
    component: int,
    bump: BumpSpec,
    ladder: ScaleLadder,
    w: Weight,
    cutoff: CutoffSpec | None = None,
) -> DecayReport:
    """Far-field decay statistic for the smoothed transform of a small atom.

    For nodes x with |x - y0| >= 2 * side, computes
    sup_t |(R_j a * phi_t)(x)| * |x - y0|^(dim+1) * side^-(dim+1) * w(Q)
    and reports the max. Only claimed for sides below 1 (the mean-zero
    branch); larger cubes raise.
    """
    if cube.side >= 1:
        raise ValueError(f"decay statistic requires side < 1, got {cube.side}")
    ra = riesz_transform(a, component, cutoff)
    sup = None
    for t in ladder.scales():
        mag = np.abs(convolve_fast(ra, bump.sample_dilate(a, t)).values)
        sup = mag if sup is None else np.maximum(sup, mag)
    coords = a.coords()
    dist = np.sqrt(sum((c - y) ** 2 for c, y in zip(coords, cube.center)))
    mask = dist >= 2 * cube.side
    wq = w.cube_measure(cube)
    stat = sup * dist ** (a.dim + 1) * cube.side ** -(a.dim + 1) * wq
    max_stat = float(stat[mask].max()) if mask.any() else 0.0
    return DecayReport(
        component=component,
        side=float(cube.side),
        max_stat=max_stat,
        node_count=int(mask.sum()),
    )
