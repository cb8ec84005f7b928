"""Hot numeric kernels: numba-jitted loops with pure-numpy fallbacks.

The jitted path is used when numba imports cleanly and the environment
variable ``HARDYLOC_NO_NUMBA`` is unset. Both paths stay importable so
``benchmarks/bench_kernels.py`` can time one against the other; everything
here is single-threaded so results are bitwise deterministic.
"""

import os

import numpy as np


def _numba_wanted():
    if os.environ.get("HARDYLOC_NO_NUMBA", "").strip().lower() in {"1", "true", "yes"}:
        return False
    try:
        import numba  # noqa: F401
    except ImportError:
        return False
    return True


USE_NUMBA = _numba_wanted()


# ---------------------------------------------------------------------------
# pure-numpy implementations

def direct_convolve_1d_np(f, k, h):
    """O(N^2) zero-padded linear convolution, restricted to the input grid."""
    n = f.shape[0]
    c = (n - 1) // 2
    out = np.zeros(n, dtype=f.dtype)
    for i in range(n):
        jlo = max(0, i + c - (n - 1))
        jhi = min(n - 1, i + c)
        # kernel index i - j + c descends as j ascends
        seg = k[i + c - jhi : i + c - jlo + 1][::-1]
        out[i] = np.dot(seg, f[jlo : jhi + 1])
    return out * h


def direct_convolve_2d_np(f, k, h):
    """O(N^4) zero-padded linear convolution, restricted to the input grid."""
    n0, n1 = f.shape
    c0, c1 = (n0 - 1) // 2, (n1 - 1) // 2
    out = np.zeros((n0, n1), dtype=f.dtype)
    for i0 in range(n0):
        j0lo = max(0, i0 + c0 - (n0 - 1))
        j0hi = min(n0 - 1, i0 + c0)
        krows = k[i0 + c0 - j0hi : i0 + c0 - j0lo + 1][::-1]
        frows = f[j0lo : j0hi + 1]
        for i1 in range(n1):
            j1lo = max(0, i1 + c1 - (n1 - 1))
            j1hi = min(n1 - 1, i1 + c1)
            blk = krows[:, i1 + c1 - j1hi : i1 + c1 - j1lo + 1][:, ::-1]
            out[i0, i1] = np.sum(blk * frows[:, j1lo : j1hi + 1])
    return out * (h * h)


def sliding_window_max_np(a, w):
    """Max over each contiguous window of length w; output length n - w + 1."""
    return np.lib.stride_tricks.sliding_window_view(a, w).max(axis=-1)


def sliding_window_min_np(a, w):
    return np.lib.stride_tricks.sliding_window_view(a, w).min(axis=-1)


# ---------------------------------------------------------------------------
# numba implementations

if USE_NUMBA:
    from numba import njit

    @njit(cache=True)
    def _direct_convolve_1d_nb(f, k, h):
        n = f.shape[0]
        c = (n - 1) // 2
        out = np.zeros(n, dtype=f.dtype)
        for i in range(n):
            jlo = max(0, i + c - (n - 1))
            jhi = min(n - 1, i + c)
            acc = f[0] * k[0] * 0
            for j in range(jlo, jhi + 1):
                acc += k[i - j + c] * f[j]
            out[i] = acc
        return out * h

    @njit(cache=True)
    def _direct_convolve_2d_nb(f, k, h):
        n0, n1 = f.shape
        c0 = (n0 - 1) // 2
        c1 = (n1 - 1) // 2
        out = np.zeros((n0, n1), dtype=f.dtype)
        for i0 in range(n0):
            j0lo = max(0, i0 + c0 - (n0 - 1))
            j0hi = min(n0 - 1, i0 + c0)
            for i1 in range(n1):
                j1lo = max(0, i1 + c1 - (n1 - 1))
                j1hi = min(n1 - 1, i1 + c1)
                acc = f[0, 0] * k[0, 0] * 0
                for j0 in range(j0lo, j0hi + 1):
                    for j1 in range(j1lo, j1hi + 1):
                        acc += k[i0 - j0 + c0, i1 - j1 + c1] * f[j0, j1]
                out[i0, i1] = acc
        return out * (h * h)

    @njit(cache=True)
    def _sliding_window_max_nb(a, w):
        # monotone deque over window indices
        n = a.shape[0]
        out = np.empty(n - w + 1, dtype=a.dtype)
        idx = np.empty(n, dtype=np.int64)
        head = 0
        tail = 0
        for i in range(n):
            while tail > head and a[idx[tail - 1]] <= a[i]:
                tail -= 1
            idx[tail] = i
            tail += 1
            if idx[head] <= i - w:
                head += 1
            if i >= w - 1:
                out[i - w + 1] = a[idx[head]]
        return out


# ---------------------------------------------------------------------------
# dispatchers

def direct_convolve_1d(f, k, h):
    dt = np.result_type(f, k, np.float64)
    f = np.ascontiguousarray(f, dtype=dt)
    k = np.ascontiguousarray(k, dtype=dt)
    if USE_NUMBA:
        return _direct_convolve_1d_nb(f, k, float(h))
    return direct_convolve_1d_np(f, k, float(h))


def direct_convolve_2d(f, k, h):
    dt = np.result_type(f, k, np.float64)
    f = np.ascontiguousarray(f, dtype=dt)
    k = np.ascontiguousarray(k, dtype=dt)
    if USE_NUMBA:
        return _direct_convolve_2d_nb(f, k, float(h))
    return direct_convolve_2d_np(f, k, float(h))


def sliding_window_max(a, w):
    a = np.ascontiguousarray(a, dtype=np.float64)
    if not 1 <= w <= a.shape[0]:
        raise ValueError(f"window {w} out of range for length {a.shape[0]}")
    if USE_NUMBA:
        return _sliding_window_max_nb(a, int(w))
    return sliding_window_max_np(a, int(w))


def sliding_window_min(a, w):
    a = np.ascontiguousarray(a, dtype=np.float64)
    if not 1 <= w <= a.shape[0]:
        raise ValueError(f"window {w} out of range for length {a.shape[0]}")
    if USE_NUMBA:
        return -_sliding_window_max_nb(-a, int(w))
    return sliding_window_min_np(a, int(w))


def containing_window_max(a, w):
    """out[i] = max over a[j] for j in [i - w + 1, i] clipped to valid indices.

    Output length len(a) + w - 1: the max over every window of starts that
    could contain a given node, used by the maximal-operator sweep.
    """
    a = np.ascontiguousarray(a, dtype=np.float64)
    if w == 1:
        return a.copy()
    pad = np.full(w - 1, -np.inf)
    return sliding_window_max(np.concatenate((pad, a, pad)), w)
