"""Local Muckenhoupt weights: cube integrals, constants, weighted norms.

A :class:`Weight` wraps a strictly positive field with summed-area tables
so integrals over grid-aligned cubes cost O(1) per query. Cube quadrature
is the tensor trapezoid rule on node-corner cubes (corners on nodes, side
m*h for m >= 1 intervals): exact for constants, so the local Muckenhoupt
constant of the unit weight is exactly 1 on every admissible cube, and
O(h^2) accurate for smooth weights. Whole-box integrals keep the plain
node-cell convention of :func:`hardyloc.grid.integrate`.

The supremum over all cubes of volume <= max_side^dim is replaced by the
maximum over grid-aligned cubes fully inside the box, with sides swept
over the geometric ladder {h, 2h, 4h, ...} plus the largest admissible
side. This is a lower estimate of the true constant; refinement stability
is the acceptance signal.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import _kernels
from .grid import Cube, GridFunction, GridMismatchError, integrate, snap_cube

_FAMILIES = ("constant", "exponential", "power_log", "power")


@dataclass(frozen=True)
class WeightFamily:
    """Built-in analytic weight families, all radial.

    constant      1
    exponential   exp(c |x|)
    power_log     (1 + |x| log^alpha(2 + |x|))^beta   (alpha >= 0)
    power         |x|^a
    """

    family: str
    c: float = 1.0
    alpha: float = 0.0
    beta: float = 1.0
    a: float = 1.0

    def __post_init__(self):
        if self.family not in _FAMILIES:
            raise ValueError(f"unknown weight family {self.family!r}; choose from {_FAMILIES}")
        if self.family == "power_log" and self.alpha < 0:
            raise ValueError(f"power_log requires alpha >= 0, got {self.alpha}")

    def evaluate(self, r: np.ndarray) -> np.ndarray:
        """Evaluate the radial profile at |x| = r (r >= 0)."""
        r = np.asarray(r, dtype=float)
        if self.family == "constant":
            return np.ones_like(r)
        if self.family == "exponential":
            return np.exp(self.c * r)
        if self.family == "power_log":
            return (1.0 + r * np.log(2.0 + r) ** self.alpha) ** self.beta
        if self.a == 0:
            return np.ones_like(r)
        with np.errstate(divide="ignore"):
            return r**self.a

    def descriptor(self) -> str:
        if self.family == "constant":
            return "constant"
        if self.family == "exponential":
            return f"exponential(c={self.c:g})"
        if self.family == "power_log":
            return f"power_log(alpha={self.alpha:g},beta={self.beta:g})"
        return f"power(a={self.a:g})"

    def to_config(self) -> dict:
        cfg = {"family": self.family}
        if self.family == "exponential":
            cfg["c"] = self.c
        elif self.family == "power_log":
            cfg["alpha"] = self.alpha
            cfg["beta"] = self.beta
        elif self.family == "power":
            cfg["a"] = self.a
        return cfg

    @classmethod
    def from_config(cls, cfg: dict) -> "WeightFamily":
        if "family" not in cfg:
            raise ValueError("weight config needs a 'family' key")
        family = cfg["family"]
        allowed = {
            "constant": set(),
            "exponential": {"c"},
            "power_log": {"alpha", "beta"},
            "power": {"a"},
        }.get(family)
        if allowed is None:
            raise ValueError(f"unknown weight family {family!r}; choose from {_FAMILIES}")
        extra = set(cfg) - {"family"} - allowed
        if extra:
            raise ValueError(f"unexpected keys {sorted(extra)} for weight family {family!r}")
        return cls(family, **{k: float(v) for k, v in cfg.items() if k != "family"})


class _TrapTable:
    """Summed-area tables answering trapezoid sums over node-corner cubes."""

    def __init__(self, values: np.ndarray, h: float, dim: int):
        self.v = values
        self.h = h
        self.dim = dim
        if dim == 1:
            self.P = np.concatenate(([0.0], np.cumsum(values)))
        else:
            n0, n1 = values.shape
            P = np.zeros((n0 + 1, n1 + 1))
            P[1:, 1:] = values.cumsum(axis=0).cumsum(axis=1)
            self.P = P
            C0 = np.zeros((n0 + 1, n1))
            C0[1:, :] = values.cumsum(axis=0)
            self.C0 = C0
            C1 = np.zeros((n0, n1 + 1))
            C1[:, 1:] = values.cumsum(axis=1)
            self.C1 = C1

    def query(self, starts, m: int) -> float:
        """Trapezoid integral over the cube spanning nodes a..a+m per axis."""
        v, h = self.v, self.h
        if self.dim == 1:
            (a,) = starts
            s = self.P[a + m + 1] - self.P[a]
            return h * (s - 0.5 * (v[a] + v[a + m]))
        a0, a1 = starts
        P, C0, C1 = self.P, self.C0, self.C1
        s = P[a0 + m + 1, a1 + m + 1] - P[a0, a1 + m + 1] - P[a0 + m + 1, a1] + P[a0, a1]
        rtop = C1[a0, a1 + m + 1] - C1[a0, a1]
        rbot = C1[a0 + m, a1 + m + 1] - C1[a0 + m, a1]
        cle = C0[a0 + m + 1, a1] - C0[a0, a1]
        cri = C0[a0 + m + 1, a1 + m] - C0[a0, a1 + m]
        corners = v[a0, a1] + v[a0, a1 + m] + v[a0 + m, a1] + v[a0 + m, a1 + m]
        return h * h * (s - 0.5 * (rtop + rbot + cle + cri) + 0.25 * corners)

    def all_sums(self, m: int) -> np.ndarray:
        """Trapezoid integrals for every start position of interval count m."""
        v, h = self.v, self.h
        n = v.shape[0]
        kk = n - m
        if self.dim == 1:
            s = self.P[m + 1 :] - self.P[:kk]
            return h * (s - 0.5 * (v[:kk] + v[m:]))
        P, C0, C1 = self.P, self.C0, self.C1
        s = P[m + 1 :, m + 1 :] - P[:kk, m + 1 :] - P[m + 1 :, :kk] + P[:kk, :kk]
        rtop = C1[:kk, m + 1 :] - C1[:kk, :kk]
        rbot = C1[m:n, m + 1 :] - C1[m:n, :kk]
        cle = C0[m + 1 :, :kk] - C0[:kk, :kk]
        cri = C0[m + 1 :, m:n] - C0[:kk, m:n]
        corners = v[:kk, :kk] + v[:kk, m:] + v[m:, :kk] + v[m:, m:]
        return h * h * (s - 0.5 * (rtop + rbot + cle + cri) + 0.25 * corners)


class _MinTable:
    """Sparse table for O(1) minima over square node windows."""

    def __init__(self, values: np.ndarray):
        self.dim = values.ndim
        n = values.shape[0]
        if self.dim == 1:
            levels = [values.copy()]
            k = 1
            while (1 << k) <= n:
                prev = levels[-1]
                half = 1 << (k - 1)
                levels.append(np.minimum(prev[: n - (1 << k) + 1], prev[half : n - (1 << k) + 1 + half]))
                k += 1
            self.levels = levels
        else:
            level = values.copy()
            levels = [level]
            k = 1
            while (1 << k) <= n:
                prev = levels[-1]
                half = 1 << (k - 1)
                size = n - (1 << k) + 1
                a = np.minimum(prev[:size, :size], prev[half : size + half, :size])
                b = np.minimum(prev[:size, half : size + half], prev[half : size + half, half : size + half])
                levels.append(np.minimum(a, b))
                k += 1
            self.levels = levels

    def query(self, starts, w: int) -> float:
        """Min over the window of w nodes per axis starting at ``starts``."""
        k = w.bit_length() - 1
        s = 1 << k
        t = self.levels[k]
        if self.dim == 1:
            (a,) = starts
            return float(min(t[a], t[a + w - s]))
        a0, a1 = starts
        return float(
            min(t[a0, a1], t[a0 + w - s, a1], t[a0, a1 + w - s], t[a0 + w - s, a1 + w - s])
        )


class Weight:
    """Strictly positive weight with prefix tables for O(1) cube queries.

    Construction is single-writer; afterwards the object is immutable
    except for lazily built caches and safe to share.
    """

    def __init__(self, base: GridFunction):
        vals = base.values
        if np.iscomplexobj(vals):
            raise ValueError("weights must be real-valued")
        if np.any(vals <= 0) or not np.all(np.isfinite(vals)):
            raise ValueError("weights must be strictly positive and finite")
        self.base = base
        self._trap = _TrapTable(vals, base.h, base.dim)
        self._dual: dict[float, _TrapTable] = {}
        self._min_table: _MinTable | None = None

    @property
    def grid(self) -> GridFunction:
        return self.base

    def box_measure(self) -> float:
        """Weight of the whole computational box (plain-sum convention)."""
        return float(integrate(self.base))

    def cube_sum(self, starts, m: int) -> float:
        return self._trap.query(starts, m)

    def cube_measure(self, cube: Cube) -> float:
        starts, m = snap_cube(self.base, cube)
        return self._trap.query(starts, m)

    def dual_trap(self, p: float) -> _TrapTable:
        """Prefix table of the dual density w^(-1/(p-1)), built per exponent."""
        key = float(p)
        table = self._dual.get(key)
        if table is None:
            dens = self.base.values ** (-1.0 / (p - 1.0))
            if not np.all(np.isfinite(dens)):
                raise ValueError(f"dual density overflows for p = {p}")
            table = _TrapTable(dens, self.base.h, self.base.dim)
            self._dual[key] = table
        return table

    def window_min_all(self, m: int) -> np.ndarray:
        """Min of the weight over every node-corner cube with m intervals."""
        v = self.base.values
        if self.base.dim == 1:
            return _kernels.sliding_window_min(v, m + 1)
        rows = np.stack([_kernels.sliding_window_min(row, m + 1) for row in v])
        return np.stack(
            [_kernels.sliding_window_min(rows[:, j], m + 1) for j in range(rows.shape[1])],
            axis=1,
        )

    def cube_min(self, cube: Cube) -> float:
        starts, m = snap_cube(self.base, cube)
        if self._min_table is None:
            self._min_table = _MinTable(self.base.values)
        return self._min_table.query(starts, m + 1)


def make_weight(family: WeightFamily, grid: GridFunction) -> Weight:
    """Sample a built-in family on the grid and build its prefix tables.

    The power family |x|^a is singular or vanishing at the origin; the
    origin node takes the average of |x|^a over its own cell (64 midpoints
    per axis), which is finite and positive for a > -dim.
    """
    vals = family.evaluate(grid.radii())
    if family.family == "power" and family.a != 0:
        vals = vals.copy()
        h = grid.h
        sub = -h / 2 + (np.arange(64) + 0.5) * h / 64
        if grid.dim == 1:
            cell = np.abs(sub) ** family.a
            vals[grid.center_index] = float(np.mean(cell))
        else:
            sx, sy = np.meshgrid(sub, sub, indexing="ij")
            cell = np.hypot(sx, sy) ** family.a
            c = grid.center_index
            vals[c, c] = float(np.mean(cell))
    if np.any(vals <= 0) or not np.all(np.isfinite(vals)):
        raise ValueError(f"family {family.descriptor()} is not strictly positive on this grid")
    return Weight(grid.with_values(vals))


def _side_ladder(m_max: int) -> list[int]:
    """Geometric interval-count ladder {1, 2, 4, ...} plus m_max itself."""
    ms = set()
    m = 1
    while m <= m_max:
        ms.add(m)
        m *= 2
    ms.add(m_max)
    return sorted(ms)


def ap_loc_constant(w: Weight, p: float, max_side: float) -> float:
    """Grid lower estimate of the local Muckenhoupt constant.

    For p > 1 the cube expression is |Q|^(-p) (int_Q w) (int_Q w^(-1/(p-1)))^(p-1);
    for p = 1 it is |Q|^(-1) (int_Q w) / min_Q w. The maximum runs over
    node-corner cubes with side in the geometric ladder up to ``max_side``,
    at every position fully inside the box.
    """
    if p < 1:
        raise ValueError(f"exponent p must be >= 1, got {p}")
    grid = w.base
    h = grid.h
    m_max = min(int(np.floor(max_side / h + 1e-9)), grid.points_per_axis - 1)
    if m_max < 1:
        raise ValueError(f"max_side {max_side} is below one grid cell {h}")
    best = 0.0
    for m in _side_ladder(m_max):
        vol = (m * h) ** grid.dim
        iw = w._trap.all_sums(m)
        if p == 1:
            val = float(np.max(iw / w.window_min_all(m))) / vol
        else:
            idual = w.dual_trap(p).all_sums(m)
            val = float(np.max(iw * idual ** (p - 1.0))) / vol**p
        best = max(best, val)
    return best


def cube_measure(w: Weight, cube: Cube) -> float:
    """Weight of the cube snapped to the nearest node-corner cube."""
    return w.cube_measure(cube)


def lp_norm(f: GridFunction, w: Weight, p: float) -> float:
    """Weighted L^p norm (plain-sum quadrature); p = inf is the unweighted sup."""
    if not f.same_grid(w.base):
        raise GridMismatchError("field and weight live on different grids")
    if np.isinf(p):
        return float(np.max(np.abs(f.values)))
    if p <= 0:
        raise ValueError(f"exponent p must be positive, got {p}")
    dens = np.abs(f.values) ** p * w.base.values
    return float((f.h**f.dim * dens.sum()) ** (1.0 / p))


def weak_l1_norm(f: GridFunction, w: Weight) -> float:
    """Exact discrete weak-L1 quasi-norm sup_lam lam * w({|f| > lam}).

    Nodes are sorted by |f| descending; the supremum is attained just below
    each distinct value, i.e. at max_k |f|_(k) * sum_{j<=k} w_j h^dim.
    """
    if not f.same_grid(w.base):
        raise GridMismatchError("field and weight live on different grids")
    mags = np.abs(f.values).ravel()
    mass = w.base.values.ravel() * f.h**f.dim
    order = np.argsort(-mags, kind="stable")
    lam = mags[order]
    if lam[0] == 0:
        return 0.0
    return float(np.max(lam * np.cumsum(mass[order])))
