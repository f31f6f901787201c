"""Numba kernels for the discrete Legendre transform.

The fast path is the classic linear-time scheme: build the lower convex hull
of each row (the conjugate ignores everything above it), then sweep the sorted
slope nodes with a monotone argmax pointer.  Ties resolve to the
smallest-index maximizer, which keeps results bit-identical across platforms.

Values >= ``big`` are +inf placeholders and are skipped; a row with no finite
entry outputs ``-big`` as an "empty supremum" marker (internal only, callers
either negate it back into +inf or reject it).
"""

import numpy as np
from numba import njit


@njit(cache=True)
def batch_conjugate_1d(x, F, p, big):
    """Row-wise 1D conjugates: out[b, j] = max_i p[j] * x[i] - F[b, i].

    x and p must be ascending.  F is (B, N); the result is (B, M).
    """
    B, N = F.shape
    M = p.shape[0]
    out = np.empty((B, M))
    hx = np.empty(N)
    hv = np.empty(N)
    for b in range(B):
        H = 0
        for i in range(N):
            fi = F[b, i]
            if fi >= big:
                continue
            while H >= 2:
                if (hv[H - 1] - hv[H - 2]) * (x[i] - hx[H - 1]) >= (fi - hv[H - 1]) * (
                    hx[H - 1] - hx[H - 2]
                ):
                    H -= 1
                else:
                    break
            hx[H] = x[i]
            hv[H] = fi
            H += 1
        if H == 0:
            for j in range(M):
                out[b, j] = -big
            continue
        k = 0
        for j in range(M):
            pj = p[j]
            while k < H - 1 and (hv[k + 1] - hv[k]) < pj * (hx[k + 1] - hx[k]):
                k += 1
            out[b, j] = pj * hx[k] - hv[k]
    return out


@njit(cache=True)
def hull_1d(x, f, big):
    """Lower-convex-hull vertex indices of the finite points of (x, f)."""
    N = x.shape[0]
    idx = np.empty(N, dtype=np.int64)
    H = 0
    for i in range(N):
        fi = f[i]
        if fi >= big:
            continue
        while H >= 2:
            a = idx[H - 2]
            c = idx[H - 1]
            if (f[c] - f[a]) * (x[i] - x[c]) >= (fi - f[c]) * (x[c] - x[a]):
                H -= 1
            else:
                break
        idx[H] = i
        H += 1
    return idx[:H]


@njit(cache=True, fastmath=True)
def brute_conjugate_1d(x, f, p, big):
    """O(N*M) reference conjugate, 1D."""
    N = x.shape[0]
    M = p.shape[0]
    out = np.full(M, -big)
    for i in range(N):
        fi = f[i]
        if fi >= big:
            continue
        xi = x[i]
        for j in range(M):
            v = p[j] * xi - fi
            if v > out[j]:
                out[j] = v
    return out


@njit(cache=True, fastmath=True)
def brute_conjugate_nd(pts, f, dual_pts, big):
    """O(P*Q) reference conjugate over flattened point sets, any dimension."""
    P, n = pts.shape
    Q = dual_pts.shape[0]
    out = np.full(Q, -big)
    for i in range(P):
        fi = f[i]
        if fi >= big:
            continue
        for q in range(Q):
            v = -fi
            for d in range(n):
                v += dual_pts[q, d] * pts[i, d]
            if v > out[q]:
                out[q] = v
    return out
