"""Local Hardy-Littlewood and smooth maximal operators; the weighted h^1 norm.

The local maximal operator takes, at each node, the largest plain window
mean of |f| over node windows of side m*h below the side limit that contain
the node (windows need not be centered). Window means come from prefix
sums; the max over window positions is a sliding-window maximum.

The smooth maximal function is the pointwise sup over a dyadic scale
ladder t in (t_min, 1) of |phi_t * f| for a fixed smooth bump phi with
unit mass. Sampled dilates phi_t are renormalized to exact unit discrete
mass, so convolving the constant field gives exactly 1 at interior nodes
at every scale.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from . import _kernels
from .grid import GridFunction, convolve_fast
from .weights import Weight, lp_norm


def _mollifier_profile(r: np.ndarray) -> np.ndarray:
    """exp(-1/(1 - r^2)) inside the unit ball, 0 outside; C-infinity."""
    r = np.asarray(r, dtype=float)
    out = np.zeros_like(r)
    inside = r < 1.0
    out[inside] = np.exp(-1.0 / (1.0 - r[inside] ** 2))
    return out


@lru_cache(maxsize=None)
def _mollifier_mass(dim: int) -> float:
    # dense midpoint quadrature of the radial profile, cached per dimension
    n = 200_001
    r = (np.arange(n) + 0.5) / n
    prof = _mollifier_profile(r)
    if dim == 1:
        return float(2.0 * prof.sum() / n)
    return float(2.0 * np.pi * (r * prof).sum() / n)


@dataclass(frozen=True)
class BumpSpec:
    """Smooth bump supported in the unit ball with unit integral."""

    family: str = "standard_mollifier"

    def __post_init__(self):
        if self.family != "standard_mollifier":
            raise ValueError(f"unknown bump family {self.family!r}")

    def normalization(self, dim: int) -> float:
        """Scalar making the continuum integral equal to 1."""
        return 1.0 / _mollifier_mass(dim)

    def max_value(self, dim: int) -> float:
        return self.normalization(dim) * np.exp(-1.0)

    def sample_dilate(self, grid: GridFunction, t: float) -> GridFunction:
        """Sample phi_t(z) = t^-dim phi(z/t), rescaled to unit discrete mass."""
        if not t > 0:
            raise ValueError(f"scale must be positive, got {t}")
        vals = _mollifier_profile(grid.radii() / t) * (
            self.normalization(grid.dim) / t**grid.dim
        )
        mass = vals.sum() * grid.h**grid.dim
        if mass <= 0:
            raise ValueError(f"scale {t} is unresolvable at spacing {grid.h}")
        return grid.with_values(vals / mass)


@dataclass(frozen=True)
class ScaleLadder:
    """Dyadic scale set {ratio^-k} intersected with (t_min, 1)."""

    t_min: float
    ratio: float = 2.0

    def __post_init__(self):
        if not 0 < self.t_min < 1:
            raise ValueError(f"t_min must lie in (0, 1), got {self.t_min}")
        if not self.ratio > 1:
            raise ValueError(f"ratio must exceed 1, got {self.ratio}")
        if not 1.0 / self.ratio > self.t_min:
            raise ValueError(
                f"empty scale ladder: 1/ratio = {1.0 / self.ratio} <= t_min = {self.t_min}"
            )

    def scales(self) -> list[float]:
        out = []
        t = 1.0 / self.ratio
        while t > self.t_min:
            out.append(t)
            t /= self.ratio
        return out

    @classmethod
    def for_grid(cls, grid: GridFunction, ratio: float = 2.0, t_min: float | None = None):
        return cls(grid.h if t_min is None else t_min, ratio)


def _window_means(absvals: np.ndarray, m: int, dim: int) -> np.ndarray:
    """Plain mean over every contiguous window of m nodes per axis."""
    if dim == 1:
        p = np.concatenate(([0.0], np.cumsum(absvals)))
        return (p[m:] - p[: absvals.shape[0] - m + 1]) / m
    p = np.zeros((absvals.shape[0] + 1, absvals.shape[1] + 1))
    p[1:, 1:] = absvals.cumsum(axis=0).cumsum(axis=1)
    kk = absvals.shape[0] - m + 1
    s = p[m:, m:] - p[:kk, m:] - p[m:, :kk] + p[:kk, :kk]
    return s / m**dim


def _covering_max(arr: np.ndarray, m: int, dim: int) -> np.ndarray:
    """Max over all windows of m starts containing each node (per axis)."""
    if dim == 1:
        return _kernels.containing_window_max(arr, m)
    rows = np.stack([_kernels.containing_window_max(row, m) for row in arr])
    return np.stack(
        [_kernels.containing_window_max(rows[:, j], m) for j in range(rows.shape[1])],
        axis=1,
    )


def local_hl_maximal(f: GridFunction, side_limit: float = 1.0) -> GridFunction:
    """Largest window mean of |f| over node windows of side < side_limit.

    Window node counts sweep the geometric ladder {1, 2, 4, ...} plus the
    largest admissible count; all window positions containing a node are
    considered, so the operator is non-centered.
    """
    n = f.points_per_axis
    h = f.h
    m_max = min(n, int(np.ceil(side_limit / h - 1e-12)) - 1)
    if m_max < 1:
        raise ValueError(f"side_limit {side_limit} leaves no admissible window at spacing {h}")
    ms = set()
    m = 1
    while m <= m_max:
        ms.add(m)
        m *= 2
    ms.add(m_max)
    absf = np.abs(f.values)
    out = np.zeros_like(absf)
    for m in sorted(ms):
        means = _window_means(absf, m, f.dim)
        np.maximum(out, _covering_max(means, m, f.dim), out)
    return f.with_values(out)


def smooth_maximal(f: GridFunction, bump: BumpSpec, ladder: ScaleLadder) -> GridFunction:
    """Pointwise sup over ladder scales of |phi_t * f|."""
    if ladder.t_min < f.h:
        raise ValueError(f"ladder t_min {ladder.t_min} is below grid spacing {f.h}")
    out = None
    for t in ladder.scales():
        conv = convolve_fast(f, bump.sample_dilate(f, t))
        mag = np.abs(conv.values)
        out = mag if out is None else np.maximum(out, mag)
    return f.with_values(out)


def h1_norm(f: GridFunction, w: Weight, bump: BumpSpec, ladder: ScaleLadder) -> float:
    """Weighted L^1 norm of the smooth maximal function."""
    return lp_norm(smooth_maximal(f, bump, ladder), w, 1.0)
