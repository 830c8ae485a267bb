"""Numba-accelerated kernel implementations (default backend).

Each kernel mirrors the arithmetic of its numpy twin expression for
expression (no fastmath, so no reassociation or FMA contraction): the
two backends produce bit-identical buffers.
"""

from __future__ import annotations

import numpy as np
from numba import njit


@njit(cache=True)
def _clip01(t):
    if t < 0.0:
        return 0.0
    if t > 1.0:
        return 1.0
    return t


@njit(cache=True)
def fill_circle(buf, cx, cy, r, c0, c1, c2):
    h, w = buf.shape[0], buf.shape[1]
    j0 = max(0, int(np.floor(cx - r - 0.5)))
    j1 = min(w - 1, int(np.ceil(cx + r - 0.5)))
    i0 = max(0, int(np.floor(cy - r - 0.5)))
    i1 = min(h - 1, int(np.ceil(cy + r - 0.5)))
    r2 = r * r
    for i in range(i0, i1 + 1):
        dy = i + 0.5 - cy
        for j in range(j0, j1 + 1):
            dx = j + 0.5 - cx
            if dx * dx + dy * dy <= r2:
                buf[i, j, 0] = c0
                buf[i, j, 1] = c1
                buf[i, j, 2] = c2


@njit(cache=True)
def fill_ring(buf, cx, cy, r_in, r_out, c0, c1, c2):
    h, w = buf.shape[0], buf.shape[1]
    j0 = max(0, int(np.floor(cx - r_out - 0.5)))
    j1 = min(w - 1, int(np.ceil(cx + r_out - 0.5)))
    i0 = max(0, int(np.floor(cy - r_out - 0.5)))
    i1 = min(h - 1, int(np.ceil(cy + r_out - 0.5)))
    for i in range(i0, i1 + 1):
        dy = i + 0.5 - cy
        for j in range(j0, j1 + 1):
            dx = j + 0.5 - cx
            d2 = dx * dx + dy * dy
            if d2 <= r_out * r_out and d2 >= r_in * r_in:
                buf[i, j, 0] = c0
                buf[i, j, 1] = c1
                buf[i, j, 2] = c2


@njit(cache=True)
def fill_capsule(buf, x1, y1, x2, y2, hw, c0, c1, c2):
    h, w = buf.shape[0], buf.shape[1]
    xmin = min(x1, x2) - hw
    xmax = max(x1, x2) + hw
    ymin = min(y1, y2) - hw
    ymax = max(y1, y2) + hw
    j0 = max(0, int(np.floor(xmin - 0.5)))
    j1 = min(w - 1, int(np.ceil(xmax - 0.5)))
    i0 = max(0, int(np.floor(ymin - 0.5)))
    i1 = min(h - 1, int(np.ceil(ymax - 0.5)))
    vx = x2 - x1
    vy = y2 - y1
    l2 = vx * vx + vy * vy
    hw2 = hw * hw
    for i in range(i0, i1 + 1):
        py = i + 0.5 - y1
        for j in range(j0, j1 + 1):
            px = j + 0.5 - x1
            if l2 > 0.0:
                t = _clip01((px * vx + py * vy) / l2)
                ddx = px - t * vx
                ddy = py - t * vy
            else:
                ddx = px
                ddy = py
            if ddx * ddx + ddy * ddy <= hw2:
                buf[i, j, 0] = c0
                buf[i, j, 1] = c1
                buf[i, j, 2] = c2


@njit(cache=True)
def fill_polygon(buf, xs, ys, c0, c1, c2):
    h, w = buf.shape[0], buf.shape[1]
    n = xs.shape[0]
    xmin = xs[0]
    xmax = xs[0]
    ymin = ys[0]
    ymax = ys[0]
    for k in range(1, n):
        xmin = min(xmin, xs[k])
        xmax = max(xmax, xs[k])
        ymin = min(ymin, ys[k])
        ymax = max(ymax, ys[k])
    j0 = max(0, int(np.floor(xmin - 0.5)))
    j1 = min(w - 1, int(np.ceil(xmax - 0.5)))
    i0 = max(0, int(np.floor(ymin - 0.5)))
    i1 = min(h - 1, int(np.ceil(ymax - 0.5)))
    for i in range(i0, i1 + 1):
        py = i + 0.5
        for j in range(j0, j1 + 1):
            px = j + 0.5
            inside = False
            for k in range(n):
                ax = xs[k]
                ay = ys[k]
                bx = xs[(k + 1) % n]
                by = ys[(k + 1) % n]
                if (ay > py) != (by > py):
                    xint = ax + (py - ay) * (bx - ax) / (by - ay)
                    if px < xint:
                        inside = not inside
            if inside:
                buf[i, j, 0] = c0
                buf[i, j, 1] = c1
                buf[i, j, 2] = c2


@njit(cache=True)
def classify_image(img, classes, tol2):
    h, w = img.shape[0], img.shape[1]
    n = classes.shape[0]
    idx = np.full((h, w), -1, dtype=np.int16)
    for i in range(h):
        for j in range(w):
            pr = np.int32(img[i, j, 0])
            pg = np.int32(img[i, j, 1])
            pb = np.int32(img[i, j, 2])
            best = np.int32(2147483647)
            bk = -1
            for k in range(n):
                dr = pr - classes[k, 0]
                dg = pg - classes[k, 1]
                db = pb - classes[k, 2]
                d = dr * dr + dg * dg + db * db
                if d < best:
                    best = d
                    bk = k
            if best <= tol2:
                idx[i, j] = bk
    return idx


@njit(cache=True)
def ca_step(grid, table):
    n = grid.shape[0]
    states = table.shape[0]
    out = np.empty_like(grid)
    for i in range(n):
        for j in range(n):
            s = 0
            for dr in range(-1, 2):
                for dc in range(-1, 2):
                    if dr == 0 and dc == 0:
                        continue
                    s += grid[(i + dr) % n, (j + dc) % n]
            out[i, j] = table[grid[i, j], s % states]
    return out


@njit(cache=True)
def conv_valid_sep(img, kern):
    h, w = img.shape
    r = kern.shape[0]
    wo = w - r + 1
    ho = h - r + 1
    tmp = np.zeros((h, wo), dtype=np.float64)
    for i in range(h):
        for j in range(wo):
            acc = 0.0
            for t in range(r):
                acc += kern[t] * img[i, j + t]
            tmp[i, j] = acc
    out = np.zeros((ho, wo), dtype=np.float64)
    for i in range(ho):
        for j in range(wo):
            acc = 0.0
            for t in range(r):
                acc += kern[t] * tmp[i + t, j]
            out[i, j] = acc
    return out
