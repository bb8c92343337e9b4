"""Pure-Python twins of the compiled kernels in ``_kernels.pyx``."""
from __future__ import annotations

import math

import numpy as np

from .series import haagerup_raw
from .sphere import DOUBLE


def haagerup_batch(xs, ys, p, pairs, coeffs):
    """Series values at ``xs + i*ys``; returns ``(re, im, abs_sum)`` arrays."""
    n = len(xs)
    out_re = np.empty(n)
    out_im = np.empty(n)
    out_acc = np.empty(n)
    cs = [float(c) for c in coeffs]
    for i in range(n):
        out_re[i], out_im[i], out_acc[i] = haagerup_raw(
            float(xs[i]), float(ys[i]), float(p), int(pairs), cs, DOUBLE
        )
    return out_re, out_im, out_acc


def _walk(g, x0, y0, x1, y1, nx, ny):
    def mark(ix, iy):
        if 0 <= ix < nx and 0 <= iy < ny:
            g[iy][ix] = 1

    def clamp(v, hi):
        return min(max(v, 0), hi - 1)

    ix, iy = clamp(math.floor(x0), nx), clamp(math.floor(y0), ny)
    ex, ey = clamp(math.floor(x1), nx), clamp(math.floor(y1), ny)
    ddx, ddy = x1 - x0, y1 - y0
    sx = (ddx > 0) - (ddx < 0)
    sy = (ddy > 0) - (ddy < 0)
    tmx = tmy = tdx = tdy = math.inf
    if sx:
        tdx = 1.0 / abs(ddx)
        tmx = ((ix + (sx > 0)) - x0) / ddx
    if sy:
        tdy = 1.0 / abs(ddy)
        tmy = ((iy + (sy > 0)) - y0) / ddy
    guard = abs(ex - ix) + abs(ey - iy) + 4
    steps = 0
    mark(ix, iy)
    while (ix != ex or iy != ey) and steps < guard:
        if tmx < tmy:
            ix += sx
            tmx += tdx
        elif tmy < tmx:
            iy += sy
            tmy += tdy
        else:
            mark(ix + sx, iy)
            mark(ix, iy + sy)
            ix += sx
            iy += sy
            tmx += tdx
            tmy += tdy
        mark(ix, iy)
        steps += 1
    mark(ex, ey)


def rasterize(segs, xmin, ymin, xmax, ymax, nx, ny):
    """Mark every cell crossed by a segment, then dilate by one cell (8-nbhd)."""
    sx = nx / (xmax - xmin)
    sy = ny / (ymax - ymin)
    g = [[0] * nx for _ in range(ny)]
    for x0, y0, x1, y1 in np.asarray(segs, dtype=float).tolist():
        _walk(g, (x0 - xmin) * sx, (y0 - ymin) * sy, (x1 - xmin) * sx, (y1 - ymin) * sy, nx, ny)
    out = [[0] * nx for _ in range(ny)]
    for r in range(ny):
        row = g[r]
        for c in range(nx):
            if row[c]:
                for rr in range(max(r - 1, 0), min(r + 2, ny)):
                    orow = out[rr]
                    for cc in range(max(c - 1, 0), min(c + 2, nx)):
                        orow[cc] = 1
    return np.array(out, dtype=np.uint8).reshape(ny, nx)


def label4(curve):
    """4-connected labels of the zero cells; curve cells get label 0."""
    ny, nx = curve.shape
    cv = curve.tolist()
    lab = [[0] * nx for _ in range(ny)]
    count = 0
    for sr in range(ny):
        for sc in range(nx):
            if cv[sr][sc] or lab[sr][sc]:
                continue
            count += 1
            lab[sr][sc] = count
            stack = [(sr, sc)]
            while stack:
                r, c = stack.pop()
                for rr, cc in ((r - 1, c), (r + 1, c), (r, c - 1), (r, c + 1)):
                    if 0 <= rr < ny and 0 <= cc < nx and not cv[rr][cc] and not lab[rr][cc]:
                        lab[rr][cc] = count
                        stack.append((rr, cc))
    return np.array(lab, dtype=np.int32).reshape(ny, nx), count
