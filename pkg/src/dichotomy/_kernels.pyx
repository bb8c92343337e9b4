# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled hot loops.  Signatures and results mirror ``_pykernels``."""

import numpy as np
cimport numpy as cnp
from libc.math cimport exp, log, cos, sin, atan2, hypot, floor, fabs, M_PI, INFINITY

cnp.import_array()


cdef inline void _pow_neg(double x, double y, double p, double *re, double *im) noexcept nogil:
    cdef double r, theta, mag, ang
    if y == 0.0 and x > 0.0:
        re[0] = exp(-p * log(x))
        im[0] = y * 0.0
        return
    r = hypot(x, y)
    if y == 0.0:
        theta = M_PI
    else:
        theta = atan2(y + 0.0, x)
    mag = exp(-p * log(r))
    ang = -p * theta
    re[0] = mag * cos(ang)
    im[0] = mag * sin(ang)


cdef inline void _tail(double x, double y, double p, int n, double[::1] coeffs,
                       double *sre, double *sim, double *acc) noexcept nogil:
    cdef double wx = n * M_PI + x
    cdef double re, im, scale, c
    cdef Py_ssize_t j
    _pow_neg(wx, y, p - 1, &re, &im)
    scale = 1 / (M_PI * (p - 1))
    sre[0] = re * scale
    sim[0] = im * scale
    acc[0] = fabs(sre[0]) + fabs(sim[0])
    _pow_neg(wx, y, p, &re, &im)
    sre[0] += re / 2
    sim[0] += im / 2
    acc[0] += (fabs(re) + fabs(im)) / 2
    for j in range(coeffs.shape[0]):
        c = coeffs[j]
        _pow_neg(wx, y, p + 2 * (j + 1) - 1, &re, &im)
        sre[0] += c * re
        sim[0] += c * im
        acc[0] += fabs(c) * (fabs(re) + fabs(im))


def haagerup_batch(double[::1] xs, double[::1] ys, double p, int pairs, double[::1] coeffs):
    """Series values at ``xs + i*ys``; returns ``(re, im, abs_sum)`` arrays."""
    cdef Py_ssize_t n = xs.shape[0], i
    cdef int k
    out_re = np.empty(n)
    out_im = np.empty(n)
    out_acc = np.empty(n)
    cdef double[::1] ore = out_re, oim = out_im, oacc = out_acc
    cdef double x, y, mx, my, kp, sre, sim, acc, are, aim, bre, bim
    cdef double tre, tim, tacc, ure, uim, uacc
    with nogil:
        for i in range(n):
            x = xs[i]
            y = ys[i]
            mx = M_PI - x
            my = -y
            sre = 0.0
            sim = 0.0
            acc = 0.0
            for k in range(pairs):
                kp = k * M_PI
                _pow_neg(kp + x, y, p, &are, &aim)
                _pow_neg(kp + mx, my, p, &bre, &bim)
                sre += are - bre
                sim += aim - bim
                acc += fabs(are) + fabs(aim) + fabs(bre) + fabs(bim)
            _tail(x, y, p, pairs, coeffs, &tre, &tim, &tacc)
            _tail(mx, my, p, pairs, coeffs, &ure, &uim, &uacc)
            ore[i] = sre + (tre - ure)
            oim[i] = sim + (tim - uim)
            oacc[i] = acc + tacc + uacc
    return out_re, out_im, out_acc


cdef inline void _mark(cnp.uint8_t[:, ::1] g, long ix, long iy, long nx, long ny) noexcept nogil:
    if 0 <= ix < nx and 0 <= iy < ny:
        g[iy, ix] = 1


cdef void _walk(cnp.uint8_t[:, ::1] g, double x0, double y0, double x1, double y1,
                long nx, long ny) noexcept nogil:
    # supercover traversal of one clipped segment, cell units
    cdef long ix = <long>floor(x0), iy = <long>floor(y0)
    cdef long ex = <long>floor(x1), ey = <long>floor(y1)
    cdef double ddx = x1 - x0, ddy = y1 - y0
    cdef long sx = 1 if ddx > 0 else (-1 if ddx < 0 else 0)
    cdef long sy = 1 if ddy > 0 else (-1 if ddy < 0 else 0)
    cdef double tmx = INFINITY, tmy = INFINITY, tdx = INFINITY, tdy = INFINITY
    cdef long steps, guard
    if ix >= nx: ix = nx - 1
    if iy >= ny: iy = ny - 1
    if ex >= nx: ex = nx - 1
    if ey >= ny: ey = ny - 1
    if ix < 0: ix = 0
    if iy < 0: iy = 0
    if ex < 0: ex = 0
    if ey < 0: ey = 0
    if sx != 0:
        tdx = 1.0 / fabs(ddx)
        tmx = ((ix + (1 if sx > 0 else 0)) - x0) / ddx
    if sy != 0:
        tdy = 1.0 / fabs(ddy)
        tmy = ((iy + (1 if sy > 0 else 0)) - y0) / ddy
    guard = (ex - ix if ex > ix else ix - ex) + (ey - iy if ey > iy else iy - ey) + 4
    steps = 0
    _mark(g, ix, iy, nx, ny)
    while (ix != ex or iy != ey) and steps < guard:
        if tmx < tmy:
            ix += sx
            tmx += tdx
        elif tmy < tmx:
            iy += sy
            tmy += tdy
        else:
            _mark(g, ix + sx, iy, nx, ny)
            _mark(g, ix, iy + sy, nx, ny)
            ix += sx
            iy += sy
            tmx += tdx
            tmy += tdy
        _mark(g, ix, iy, nx, ny)
        steps += 1
    _mark(g, ex, ey, nx, ny)


def rasterize(double[:, ::1] segs, double xmin, double ymin, double xmax, double ymax,
              long nx, long ny):
    """Mark every cell crossed by a segment, then dilate by one cell (8-nbhd).

    ``segs`` rows are ``(x0, y0, x1, y1)`` in world coordinates, already clipped
    to the viewport.  Row 0 of the result is the bottom (``ymin``) edge.
    """
    cdef Py_ssize_t n = segs.shape[0], i
    cdef double sx = nx / (xmax - xmin), sy = ny / (ymax - ymin)
    raw = np.zeros((ny, nx), dtype=np.uint8)
    out = np.zeros((ny, nx), dtype=np.uint8)
    cdef cnp.uint8_t[:, ::1] g = raw, o = out
    cdef long r, c, dr, dc, rr, cc
    with nogil:
        for i in range(n):
            _walk(g, (segs[i, 0] - xmin) * sx, (segs[i, 1] - ymin) * sy,
                  (segs[i, 2] - xmin) * sx, (segs[i, 3] - ymin) * sy, nx, ny)
        for r in range(ny):
            for c in range(nx):
                if g[r, c]:
                    for dr in range(-1, 2):
                        rr = r + dr
                        if rr < 0 or rr >= ny:
                            continue
                        for dc in range(-1, 2):
                            cc = c + dc
                            if 0 <= cc < nx:
                                o[rr, cc] = 1
    return out


def label4(cnp.uint8_t[:, ::1] curve):
    """4-connected labels of the zero cells; curve cells get label 0.

    Labels are assigned 1, 2, ... in row-major order of each component's
    first cell.  Returns ``(labels, count)``.
    """
    cdef long ny = curve.shape[0], nx = curve.shape[1]
    labels = np.zeros((ny, nx), dtype=np.int32)
    cdef int[:, ::1] lab = labels
    stack_arr = np.empty(nx * ny + 1, dtype=np.int64)
    cdef cnp.int64_t[::1] stack = stack_arr
    cdef long top, cell, r, c, sr, sc
    cdef int count = 0
    with nogil:
        for sr in range(ny):
            for sc in range(nx):
                if curve[sr, sc] or lab[sr, sc]:
                    continue
                count += 1
                lab[sr, sc] = count
                stack[0] = sr * nx + sc
                top = 1
                while top > 0:
                    top -= 1
                    cell = stack[top]
                    r = cell // nx
                    c = cell - r * nx
                    if r > 0 and not curve[r - 1, c] and not lab[r - 1, c]:
                        lab[r - 1, c] = count
                        stack[top] = cell - nx
                        top += 1
                    if r < ny - 1 and not curve[r + 1, c] and not lab[r + 1, c]:
                        lab[r + 1, c] = count
                        stack[top] = cell + nx
                        top += 1
                    if c > 0 and not curve[r, c - 1] and not lab[r, c - 1]:
                        lab[r, c - 1] = count
                        stack[top] = cell - 1
                        top += 1
                    if c < nx - 1 and not curve[r, c + 1] and not lab[r, c + 1]:
                        lab[r, c + 1] = count
                        stack[top] = cell + 1
                        top += 1
    return labels, count
