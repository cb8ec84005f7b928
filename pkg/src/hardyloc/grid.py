"""Scalar fields on uniform centered grids: sampling, quadrature, convolution.

Fields live on the box [-L, L]^dim (dim 1 or 2), sampled at N equispaced
nodes per axis with spacing h = 2L/(N - 1). N must be odd so the origin is
a node: odd convolution kernels then cancel in exact pairs, which is the
discrete analogue of a principal value. Functions are extended by zero
outside the box, so all convolutions are zero-padded and linear (never
circular).

Quadrature convention: ``integrate`` is the plain node-cell Riemann sum
h^dim * sum(values); the golden value for the constant-1 field on
[-8, 8] at N = 257 is 257 * 0.0625 = 16.0625. The cube-query machinery in
``weights`` uses a trapezoid rule on node-corner cubes instead (exact for
constants); both conventions are pinned by tests.
"""

from __future__ import annotations

from dataclasses import dataclass, replace

import numpy as np

from . import _kernels


class GridMismatchError(ValueError):
    """Raised when two fields do not live on the same grid."""


@dataclass(frozen=True, eq=False)
class GridFunction:
    """A real or complex scalar field sampled on a uniform centered grid."""

    dim: int
    half_width: float
    points_per_axis: int
    values: np.ndarray

    def __post_init__(self):
        if self.dim not in (1, 2):
            raise ValueError(f"dim must be 1 or 2, got {self.dim}")
        n = self.points_per_axis
        if n < 3 or n % 2 == 0:
            raise ValueError(f"points_per_axis must be odd and >= 3, got {n}")
        if not self.half_width > 0:
            raise ValueError(f"half_width must be positive, got {self.half_width}")
        vals = np.asarray(self.values)
        if vals.shape != (n,) * self.dim:
            raise ValueError(
                f"values shape {vals.shape} does not match grid shape {(n,) * self.dim}"
            )
        if not np.all(np.isfinite(vals)):
            raise ValueError("field values must be finite")
        object.__setattr__(self, "values", vals)

    @property
    def h(self) -> float:
        """Grid spacing 2L/(N - 1)."""
        return 2.0 * self.half_width / (self.points_per_axis - 1)

    @property
    def center_index(self) -> int:
        return (self.points_per_axis - 1) // 2

    def axis_nodes(self) -> np.ndarray:
        return np.linspace(-self.half_width, self.half_width, self.points_per_axis)

    def coords(self) -> tuple[np.ndarray, ...]:
        """Coordinate arrays shaped like ``values`` (meshgrid 'ij' in dim 2)."""
        xs = self.axis_nodes()
        if self.dim == 1:
            return (xs,)
        X, Y = np.meshgrid(xs, xs, indexing="ij")
        return (X, Y)

    def radii(self) -> np.ndarray:
        """Euclidean distance from the origin at every node."""
        if self.dim == 1:
            return np.abs(self.axis_nodes())
        X, Y = self.coords()
        return np.hypot(X, Y)

    def same_grid(self, other: "GridFunction") -> bool:
        return (
            self.dim == other.dim
            and self.points_per_axis == other.points_per_axis
            and self.half_width == other.half_width
        )

    def with_values(self, values: np.ndarray) -> "GridFunction":
        return replace(self, values=values)


def _require_same_grid(f: GridFunction, g: GridFunction) -> None:
    if not f.same_grid(g):
        raise GridMismatchError(
            f"grids differ: dim {f.dim}/{g.dim}, N {f.points_per_axis}/{g.points_per_axis}, "
            f"L {f.half_width}/{g.half_width}"
        )


def make_grid(dim: int, half_width: float, points_per_axis: int) -> GridFunction:
    """Zero-initialized field on [-half_width, half_width]^dim."""
    if dim not in (1, 2):
        raise ValueError(f"dim must be 1 or 2, got {dim}")
    n = points_per_axis
    if n < 3 or n % 2 == 0:
        raise ValueError(f"points_per_axis must be odd and >= 3, got {n}")
    return GridFunction(dim, float(half_width), n, np.zeros((n,) * dim))


def sample(descriptor, grid: GridFunction) -> GridFunction:
    """Evaluate an analytic descriptor at every node.

    ``descriptor`` receives one coordinate array per dimension (vectorized)
    and must return finite values everywhere.
    """
    vals = np.asarray(descriptor(*grid.coords()))
    if vals.shape == ():
        vals = np.full((grid.points_per_axis,) * grid.dim, vals[()])
    if not np.all(np.isfinite(vals)):
        raise ValueError("descriptor produced non-finite values on the grid")
    return grid.with_values(vals)


def indicator_box(grid: GridFunction, bounds) -> GridFunction:
    """Cell-averaged indicator of an axis-aligned box.

    ``bounds`` is one (lo, hi) pair per axis. Each node takes the fraction
    of its own cell [x - h/2, x + h/2] covered by the box, so the plain-sum
    integral of the result reproduces the box volume exactly and weighted
    integrals converge at O(h^2).
    """
    if grid.dim == 1:
        bounds = [tuple(np.ravel(bounds))] if np.ndim(bounds) == 1 else list(bounds)
    h = grid.h
    xs = grid.axis_nodes()
    fracs = []
    for lo, hi in bounds:
        if not hi > lo:
            raise ValueError(f"empty box side ({lo}, {hi})")
        overlap = np.minimum(hi, xs + h / 2) - np.maximum(lo, xs - h / 2)
        fracs.append(np.clip(overlap / h, 0.0, 1.0))
    if len(fracs) != grid.dim:
        raise ValueError(f"expected {grid.dim} bound pairs, got {len(fracs)}")
    if grid.dim == 1:
        return grid.with_values(fracs[0])
    return grid.with_values(np.outer(fracs[0], fracs[1]))


def integrate(f: GridFunction):
    """Plain Riemann sum h^dim * sum(values); complex in, complex out."""
    tot = f.values.sum() * f.h**f.dim
    return complex(tot) if np.iscomplexobj(f.values) else float(tot)


def convolve_fast(f: GridFunction, k: GridFunction) -> GridFunction:
    """Zero-padded linear convolution h^dim * (f * k) via padded FFTs.

    The result is restricted to the original box; entries equal
    h^dim * sum_j k[i - j + c] f[j] with the kernel taken as zero outside
    its sampled box.
    """
    _require_same_grid(f, k)
    n = f.points_per_axis
    c = f.center_index
    size = 1 << (2 * n - 2).bit_length()  # power of two >= 2N - 1
    shape = (size,) * f.dim
    axes = tuple(range(f.dim))
    conv = np.fft.ifftn(
        np.fft.fftn(f.values, s=shape, axes=axes) * np.fft.fftn(k.values, s=shape, axes=axes),
        axes=axes,
    )
    sl = tuple(slice(c, c + n) for _ in range(f.dim))
    out = conv[sl] * f.h**f.dim
    if not (np.iscomplexobj(f.values) or np.iscomplexobj(k.values)):
        out = out.real
    return f.with_values(np.ascontiguousarray(out))


def convolve_oracle(f: GridFunction, k: GridFunction) -> GridFunction:
    """Direct double-sum convolution; the independent check for convolve_fast."""
    _require_same_grid(f, k)
    if f.dim == 1:
        out = _kernels.direct_convolve_1d(f.values, k.values, f.h)
    else:
        out = _kernels.direct_convolve_2d(f.values, k.values, f.h)
    return f.with_values(out)


@dataclass(frozen=True)
class Cube:
    """Axis-aligned cube given by center and sidelength."""

    center: tuple[float, ...]
    side: float

    def __post_init__(self):
        center = tuple(float(x) for x in np.atleast_1d(np.asarray(self.center, dtype=float)))
        if len(center) not in (1, 2):
            raise ValueError(f"cube center must have 1 or 2 coordinates, got {len(center)}")
        object.__setattr__(self, "center", center)
        if not self.side > 0:
            raise ValueError(f"cube side must be positive, got {self.side}")

    @property
    def dim(self) -> int:
        return len(self.center)

    @property
    def volume(self) -> float:
        return self.side**self.dim

    def dilate(self, lam: float) -> "Cube":
        """Concentric dilate: same center, side scaled by lam."""
        if not lam > 0:
            raise ValueError(f"dilation factor must be positive, got {lam}")
        return Cube(self.center, lam * self.side)


def snap_cube(grid: GridFunction, cube: Cube) -> tuple[tuple[int, ...], int]:
    """Snap a cube to the nearest node-corner cube fully inside the box.

    Returns (start indices, m) where the realized cube spans nodes
    start..start+m per axis: corners on nodes, side m*h.
    """
    if cube.dim != grid.dim:
        raise ValueError(f"cube dim {cube.dim} does not match grid dim {grid.dim}")
    n = grid.points_per_axis
    h = grid.h
    m = int(round(cube.side / h))
    m = min(max(m, 1), n - 1)
    starts = []
    for x in cube.center:
        a = int(round((x - cube.side / 2 + grid.half_width) / h))
        starts.append(min(max(a, 0), n - 1 - m))
    return tuple(starts), m


def realized_cube(grid: GridFunction, cube: Cube) -> Cube:
    """The node-corner cube that ``snap_cube`` actually uses."""
    starts, m = snap_cube(grid, cube)
    h = grid.h
    center = tuple(-grid.half_width + (a + m / 2.0) * h for a in starts)
    return Cube(center, m * h)
