"""JIT-compiled kernels: scalar loops over pixels, parallel over rows/tiles.

Arithmetic mirrors ``_kernels_numpy`` exactly (same operations, same
order, no fastmath), so labels and squared distances are bit-identical
across backends.
"""

from __future__ import annotations

import warnings

import numpy as np

with warnings.catch_warnings():
    # TBB version probing is noisy; any available threading layer is fine.
    warnings.simplefilter("ignore")
    from numba import njit, prange

TILE = 32


@njit(cache=True, parallel=True, nogil=True)
def label_brute(x0, y0, step, width, height, segs, seg_inst):
    labels = np.empty((height, width), np.int32)
    d2out = np.empty((height, width), np.float64)
    m = segs.shape[0]
    for r in prange(height):
        py = y0 + (r + 0.5) * step
        for c in range(width):
            px = x0 + (c + 0.5) * step
            best = np.inf
            bid = -1
            for k in range(m):
                ax = segs[k, 0]
                ay = segs[k, 1]
                dx = segs[k, 2] - ax
                dy = segs[k, 3] - ay
                ell2 = dx * dx + dy * dy
                wx = px - ax
                wy = py - ay
                if ell2 > 0.0:
                    t = (wx * dx + wy * dy) / ell2
                    if t < 0.0:
                        t = 0.0
                    elif t > 1.0:
                        t = 1.0
                else:
                    t = 0.0
                ex = wx - t * dx
                ey = wy - t * dy
                d2 = ex * ex + ey * ey
                if d2 < best:
                    best = d2
                    bid = seg_inst[k]
            labels[r, c] = bid
            d2out[r, c] = best
    return labels, d2out


@njit(cache=True, parallel=True, nogil=True)
def label_tiled(x0, y0, step, width, height, segs, seg_inst, tile=TILE):
    labels = np.empty((height, width), np.int32)
    d2out = np.empty((height, width), np.float64)
    m = segs.shape[0]
    ntx = (width + tile - 1) // tile
    nty = (height + tile - 1) // tile
    for tid in prange(ntx * nty):
        ty = (tid // ntx) * tile
        tx = (tid % ntx) * tile
        th = min(tile, height - ty)
        tw = min(tile, width - tx)
        cx = x0 + (tx + 0.5 * tw) * step
        cy = y0 + (ty + 0.5 * th) * step
        r_tile = 0.5 * step * np.sqrt(float(tw * tw + th * th))
        dc = np.empty(m, np.float64)
        dmin = np.inf
        for k in range(m):
            ax = segs[k, 0]
            ay = segs[k, 1]
            dx = segs[k, 2] - ax
            dy = segs[k, 3] - ay
            ell2 = dx * dx + dy * dy
            wx = cx - ax
            wy = cy - ay
            if ell2 > 0.0:
                t = (wx * dx + wy * dy) / ell2
                if t < 0.0:
                    t = 0.0
                elif t > 1.0:
                    t = 1.0
            else:
                t = 0.0
            ex = wx - t * dx
            ey = wy - t * dy
            d = np.sqrt(ex * ex + ey * ey)
            dc[k] = d
            if d < dmin:
                dmin = d
        thr = dmin + 2.0 * r_tile + 1e-9 * (1.0 + dmin)
        cand = np.empty(m, np.int64)
        ncand = 0
        for k in range(m):
            if dc[k] <= thr:
                cand[ncand] = k
                ncand += 1
        for rr in range(th):
            py = y0 + (ty + rr + 0.5) * step
            for cc in range(tw):
                px = x0 + (tx + cc + 0.5) * step
                best = np.inf
                bid = -1
                for ci in range(ncand):
                    k = cand[ci]
                    ax = segs[k, 0]
                    ay = segs[k, 1]
                    dx = segs[k, 2] - ax
                    dy = segs[k, 3] - ay
                    ell2 = dx * dx + dy * dy
                    wx = px - ax
                    wy = py - ay
                    if ell2 > 0.0:
                        t = (wx * dx + wy * dy) / ell2
                        if t < 0.0:
                            t = 0.0
                        elif t > 1.0:
                            t = 1.0
                    else:
                        t = 0.0
                    ex = wx - t * dx
                    ey = wy - t * dy
                    d2 = ex * ex + ey * ey
                    if d2 < best:
                        best = d2
                        bid = seg_inst[k]
                labels[ty + rr, tx + cc] = bid
                d2out[ty + rr, tx + cc] = best
    return labels, d2out


@njit(cache=True, nogil=True)
def directed_max_min_dist(points, segs):
    """max over points of min over segments of distance (directed Hausdorff)."""
    worst = 0.0
    for i in range(points.shape[0]):
        px = points[i, 0]
        py = points[i, 1]
        best = np.inf
        for k in range(segs.shape[0]):
            ax = segs[k, 0]
            ay = segs[k, 1]
            dx = segs[k, 2] - ax
            dy = segs[k, 3] - ay
            ell2 = dx * dx + dy * dy
            wx = px - ax
            wy = py - ay
            if ell2 > 0.0:
                t = (wx * dx + wy * dy) / ell2
                if t < 0.0:
                    t = 0.0
                elif t > 1.0:
                    t = 1.0
            else:
                t = 0.0
            ex = wx - t * dx
            ey = wy - t * dy
            d2 = ex * ex + ey * ey
            if d2 < best:
                best = d2
        if best > worst:
            worst = best
    return np.sqrt(worst)


@njit(cache=True, nogil=True)
def walk_chains(partner):
    n_slots = partner.shape[0]
    m = n_slots // 2
    visited = np.zeros(m, np.uint8)
    order = np.empty(m, np.int64)
    starts = np.empty(m + 1, np.int64)
    closed = np.empty(max(m, 1), np.uint8)
    pos = 0
    nchains = 0
    for s in range(n_slots):
        c = s >> 1
        if visited[c] == 1 or partner[s] != -1:
            continue
        starts[nchains] = pos
        closed[nchains] = 0
        nchains += 1
        cur = s
        while True:
            c = cur >> 1
            visited[c] = 1
            order[pos] = c
            pos += 1
            nxt = partner[cur ^ 1]
            if nxt == -1:
                break
            cur = nxt
    for c0 in range(m):
        if visited[c0] == 1:
            continue
        starts[nchains] = pos
        closed[nchains] = 1
        nchains += 1
        cur = 2 * c0
        while visited[cur >> 1] == 0:
            visited[cur >> 1] = 1
            order[pos] = cur >> 1
            pos += 1
            cur = partner[cur ^ 1]
    starts[nchains] = pos
    return order, starts[: nchains + 1].copy(), closed[:nchains].copy()
