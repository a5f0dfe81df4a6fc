"""Pure-numpy kernels: the fallback backend and the reference semantics.

The numba backend must produce bit-identical labels and squared distances,
so the arithmetic here is written operation-for-operation the same way as
the scalar loops there: w = p - a, t = clip((w.d)/|d|^2, 0, 1),
e = w - t*d, dist2 = e.e, winner = first index reaching the minimum.
"""

from __future__ import annotations

import math

import numpy as np

TILE = 32


def dist2_block(px: np.ndarray, py: np.ndarray, segs: np.ndarray) -> np.ndarray:
    """Squared point-to-segment distances, shape (n_points, n_segments)."""
    ax = segs[:, 0]
    ay = segs[:, 1]
    dx = segs[:, 2] - ax
    dy = segs[:, 3] - ay
    ell2 = dx * dx + dy * dy
    wx = px[:, None] - ax[None, :]
    wy = py[:, None] - ay[None, :]
    num = wx * dx + wy * dy
    t = np.zeros_like(num)
    np.divide(num, ell2, out=t, where=ell2 > 0.0)
    np.clip(t, 0.0, 1.0, out=t)
    ex = wx - t * dx
    ey = wy - t * dy
    return ex * ex + ey * ey


def label_brute(x0, y0, step, width, height, segs, seg_inst):
    """Nearest-instance label and squared distance per pixel center."""
    labels = np.empty((height, width), np.int32)
    d2out = np.empty((height, width), np.float64)
    xs = x0 + (np.arange(width, dtype=np.float64) + 0.5) * step
    m = max(1, segs.shape[0])
    rows_per = max(1, int(4_000_000 / (m * width)))
    for r0 in range(0, height, rows_per):
        r1 = min(height, r0 + rows_per)
        ys = y0 + (np.arange(r0, r1, dtype=np.float64) + 0.5) * step
        px = np.broadcast_to(xs, (r1 - r0, width)).ravel()
        py = np.repeat(ys, width)
        d2 = dist2_block(px, py, segs)
        am = np.argmin(d2, axis=1)
        rows = np.arange(d2.shape[0])
        labels[r0:r1] = seg_inst[am].reshape(r1 - r0, width)
        d2out[r0:r1] = d2[rows, am].reshape(r1 - r0, width)
    return labels, d2out


def label_tiled(x0, y0, step, width, height, segs, seg_inst, tile: int = TILE):
    """Same result as ``label_brute`` with per-tile candidate pruning.

    For every pixel block, segments farther from the block center than
    (nearest center distance + block diagonal) can never win anywhere in
    the block, by the 1-Lipschitz property of the distance field.
    """
    labels = np.empty((height, width), np.int32)
    d2out = np.empty((height, width), np.float64)
    xs = x0 + (np.arange(width, dtype=np.float64) + 0.5) * step
    for ty in range(0, height, tile):
        th = min(tile, height - ty)
        ys = y0 + (np.arange(ty, ty + th, dtype=np.float64) + 0.5) * step
        for tx in range(0, width, tile):
            tw = min(tile, width - tx)
            cx = x0 + (tx + 0.5 * tw) * step
            cy = y0 + (ty + 0.5 * th) * step
            r_tile = 0.5 * step * math.hypot(tw, th)
            dc = np.sqrt(
                dist2_block(np.array([cx]), np.array([cy]), segs)[0]
            )
            thr = dc.min() + 2.0 * r_tile + 1e-9 * (1.0 + dc.min())
            cand = np.nonzero(dc <= thr)[0]
            px = np.broadcast_to(xs[tx : tx + tw], (th, tw)).ravel()
            py = np.repeat(ys, tw)
            d2 = dist2_block(px, py, segs[cand])
            am = np.argmin(d2, axis=1)
            rows = np.arange(d2.shape[0])
            labels[ty : ty + th, tx : tx + tw] = seg_inst[cand[am]].reshape(th, tw)
            d2out[ty : ty + th, tx : tx + tw] = d2[rows, am].reshape(th, tw)
    return labels, d2out


def directed_max_min_dist(points: np.ndarray, segs: np.ndarray) -> float:
    """max over points of min over segments of distance (directed Hausdorff)."""
    worst = 0.0
    chunk = max(1, int(2_000_000 / max(1, segs.shape[0])))
    for i0 in range(0, points.shape[0], chunk):
        d2 = dist2_block(points[i0 : i0 + chunk, 0], points[i0 : i0 + chunk, 1], segs)
        worst = max(worst, float(d2.min(axis=1).max()))
    return math.sqrt(worst)


def walk_chains(partner: np.ndarray):
    """Order linked cracks into maximal chains.

    ``partner[2*c + e]`` is the slot linked to end ``e`` of crack ``c``
    (-1 for a free end).  Returns (order, chain_offsets, closed_flags).
    """
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
