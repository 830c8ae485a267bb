"""Pure-numpy kernel implementations.

The fallback backend when numba is unavailable or disabled via
``PUZZLEBENCH_NO_NUMBA=1``.  Every function here computes bit-identical
results to its numba twin: the per-element arithmetic expressions and
accumulation orders are kept deliberately identical.
"""

from __future__ import annotations

import numpy as np


def _bbox(xmin, xmax, ymin, ymax, w, h):
    j0 = max(0, int(np.floor(xmin - 0.5)))
    j1 = min(w - 1, int(np.ceil(xmax - 0.5)))
    i0 = max(0, int(np.floor(ymin - 0.5)))
    i1 = min(h - 1, int(np.ceil(ymax - 0.5)))
    return j0, j1, i0, i1


def fill_circle(buf, cx, cy, r, c0, c1, c2):
    h, w, _ = buf.shape
    j0, j1, i0, i1 = _bbox(cx - r, cx + r, cy - r, cy + r, w, h)
    if j1 < j0 or i1 < i0:
        return
    dx = np.arange(j0, j1 + 1, dtype=np.float64) + 0.5 - cx
    dy = np.arange(i0, i1 + 1, dtype=np.float64) + 0.5 - cy
    mask = dx[None, :] * dx[None, :] + dy[:, None] * dy[:, None] <= r * r
    buf[i0:i1 + 1, j0:j1 + 1][mask] = (c0, c1, c2)


def fill_ring(buf, cx, cy, r_in, r_out, c0, c1, c2):
    h, w, _ = buf.shape
    j0, j1, i0, i1 = _bbox(cx - r_out, cx + r_out, cy - r_out, cy + r_out, w, h)
    if j1 < j0 or i1 < i0:
        return
    dx = np.arange(j0, j1 + 1, dtype=np.float64) + 0.5 - cx
    dy = np.arange(i0, i1 + 1, dtype=np.float64) + 0.5 - cy
    d2 = dx[None, :] * dx[None, :] + dy[:, None] * dy[:, None]
    mask = (d2 <= r_out * r_out) & (d2 >= r_in * r_in)
    buf[i0:i1 + 1, j0:j1 + 1][mask] = (c0, c1, c2)


def fill_capsule(buf, x1, y1, x2, y2, hw, c0, c1, c2):
    h, w, _ = buf.shape
    j0, j1, i0, i1 = _bbox(min(x1, x2) - hw, max(x1, x2) + hw,
                           min(y1, y2) - hw, max(y1, y2) + hw, w, h)
    if j1 < j0 or i1 < i0:
        return
    px = np.arange(j0, j1 + 1, dtype=np.float64) + 0.5 - x1
    py = np.arange(i0, i1 + 1, dtype=np.float64) + 0.5 - y1
    vx = x2 - x1
    vy = y2 - y1
    l2 = vx * vx + vy * vy
    if l2 > 0.0:
        t = np.clip((px[None, :] * vx + py[:, None] * vy) / l2, 0.0, 1.0)
        ddx = px[None, :] - t * vx
        ddy = py[:, None] - t * vy
    else:
        ddx = np.broadcast_to(px[None, :], (i1 - i0 + 1, j1 - j0 + 1))
        ddy = np.broadcast_to(py[:, None], (i1 - i0 + 1, j1 - j0 + 1))
    mask = ddx * ddx + ddy * ddy <= hw * hw
    buf[i0:i1 + 1, j0:j1 + 1][mask] = (c0, c1, c2)


def fill_polygon(buf, xs, ys, c0, c1, c2):
    h, w, _ = buf.shape
    j0, j1, i0, i1 = _bbox(xs.min(), xs.max(), ys.min(), ys.max(), w, h)
    if j1 < j0 or i1 < i0:
        return
    px = np.arange(j0, j1 + 1, dtype=np.float64) + 0.5
    py = np.arange(i0, i1 + 1, dtype=np.float64) + 0.5
    parity = np.zeros((i1 - i0 + 1, j1 - j0 + 1), dtype=bool)
    n = len(xs)
    for k in range(n):
        ax, ay = xs[k], ys[k]
        bx, by = xs[(k + 1) % n], ys[(k + 1) % n]
        cond = (ay > py) != (by > py)
        if not cond.any():
            continue
        with np.errstate(divide="ignore", invalid="ignore"):
            xint = ax + (py - ay) * (bx - ax) / (by - ay)
        parity ^= cond[:, None] & (px[None, :] < xint[:, None])
    buf[i0:i1 + 1, j0:j1 + 1][parity] = (c0, c1, c2)


def classify_image(img, classes, tol2):
    """Nearest palette class per pixel (-1 if outside tolerance).

    Ties break to the lowest class index; distances are exact integer
    squared RGB distances.
    """
    h, w, _ = img.shape
    img32 = img.astype(np.int32)
    best = np.full((h, w), np.iinfo(np.int32).max, dtype=np.int32)
    idx = np.full((h, w), -1, dtype=np.int16)
    for k in range(classes.shape[0]):
        dr = img32[:, :, 0] - classes[k, 0]
        dg = img32[:, :, 1] - classes[k, 1]
        db = img32[:, :, 2] - classes[k, 2]
        d = dr * dr + dg * dg + db * db
        m = d < best
        best[m] = d[m]
        idx[m] = k
    idx[best > tol2] = -1
    return idx


def ca_step(grid, table):
    n = grid.shape[0]
    s = np.zeros((n, n), dtype=np.int64)
    for dr in (-1, 0, 1):
        for dc in (-1, 0, 1):
            if dr == 0 and dc == 0:
                continue
            s += np.roll(np.roll(grid, dr, axis=0), dc, axis=1)
    states = table.shape[0]
    return table[grid, s % states].astype(grid.dtype)


def conv_valid_sep(img, kern):
    """Separable 'valid' convolution (horizontal then vertical)."""
    h, w = img.shape
    r = kern.shape[0]
    tmp = np.zeros((h, w - r + 1), dtype=np.float64)
    for t in range(r):
        tmp += kern[t] * img[:, t:w - r + 1 + t]
    out = np.zeros((h - r + 1, w - r + 1), dtype=np.float64)
    for t in range(r):
        out += kern[t] * tmp[t:h - r + 1 + t, :]
    return out
