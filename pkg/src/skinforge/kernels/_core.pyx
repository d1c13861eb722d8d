# cython: boundscheck=False, wraparound=False, initializedcheck=False
"""Compiled per-plane kernels.

Drop-in replacement for the numpy fallback backend. Floating-point
expressions are written in exactly the same order as in ``_fallback.py``
and ``colorspace.py``; together with ``-ffp-contract=off`` this keeps
results bit-identical across backends.
"""

import numpy as np

from libc.math cimport ceil, floor

NAME = "compiled"


def gray_plane(object rgb):
    cdef const unsigned char[:, :, ::1] px = rgb
    cdef Py_ssize_t h = px.shape[0], w = px.shape[1], y, x
    out = np.empty((h, w), dtype=np.float64)
    cdef double[:, ::1] o = out
    cdef double r, g, b
    for y in range(h):
        for x in range(w):
            r = <double> px[y, x, 0]
            g = <double> px[y, x, 1]
            b = <double> px[y, x, 2]
            o[y, x] = 0.299 * r + 0.587 * g + 0.114 * b
    return out


def yiq_plane(object rgb):
    cdef const unsigned char[:, :, ::1] px = rgb
    cdef Py_ssize_t h = px.shape[0], w = px.shape[1], y, x
    out = np.empty((h, w, 3), dtype=np.float64)
    cdef double[:, :, ::1] o = out
    cdef double r, g, b
    for y in range(h):
        for x in range(w):
            r = <double> px[y, x, 0]
            g = <double> px[y, x, 1]
            b = <double> px[y, x, 2]
            o[y, x, 0] = 0.299 * r + 0.587 * g + 0.114 * b
            o[y, x, 1] = 0.596 * r - 0.274 * g - 0.322 * b
            o[y, x, 2] = 0.212 * r - 0.523 * g + 0.311 * b
    return out


cdef inline double _round_half_away(double x) noexcept nogil:
    if x >= 0.0:
        return floor(x + 0.5)
    return ceil(x - 0.5)


def rgb_plane(object yiq, object inv):
    cdef const double[:, :, ::1] p = yiq
    cdef const double[:, ::1] m = np.ascontiguousarray(inv, dtype=np.float64)
    cdef Py_ssize_t h = p.shape[0], w = p.shape[1], y, x, c
    out = np.empty((h, w, 3), dtype=np.uint8)
    cdef unsigned char[:, :, ::1] o = out
    cdef double v, n
    for y in range(h):
        for x in range(w):
            for c in range(3):
                v = m[c, 0] * p[y, x, 0] + m[c, 1] * p[y, x, 1] + m[c, 2] * p[y, x, 2]
                n = _round_half_away(v)
                o[y, x, c] = 0 if n < 0.0 else (255 if n > 255.0 else <unsigned char> n)
    return out


def raw_mask(object rgb, object grad, object params):
    cdef const unsigned char[:, :, ::1] px = rgb
    cdef const double[:, ::1] gr = grad
    cdef const double[::1] pp = np.ascontiguousarray(params, dtype=np.float64)
    cdef double sum_lo = pp[0], sum_hi = pp[1], cg_lo = pp[2], cg_hi = pp[3]
    cdef double i_lo = pp[4], i_hi = pp[5], q_lo = pp[6], q_hi = pp[7]
    cdef double dark = pp[8], bright = pp[9], threshold = pp[10]
    cdef Py_ssize_t h = px.shape[0], w = px.shape[1], y, x
    out = np.empty((h, w), dtype=np.uint8)
    cdef unsigned char[:, ::1] o = out
    cdef double r, g, b, i, q, rn, gn, bn, cg, cr, s
    cdef bint iq_ok, cgcr_ok, heuristic, texture
    for y in range(h):
        for x in range(w):
            r = <double> px[y, x, 0]
            g = <double> px[y, x, 1]
            b = <double> px[y, x, 2]

            i = 0.596 * r - 0.274 * g - 0.322 * b
            q = 0.212 * r - 0.523 * g + 0.311 * b
            iq_ok = (i >= i_lo) and (i <= i_hi) and (q >= q_lo) and (q <= q_hi)

            rn = r / 255.0
            gn = g / 255.0
            bn = b / 255.0
            cg = 128.0 + (-81.085 * rn + 112.0 * gn - 30.915 * bn)
            cr = 128.0 + (112.0 * rn - 93.786 * gn - 18.214 * bn)
            s = cg + cr
            cgcr_ok = (cg >= cg_lo) and (cg <= cg_hi) and (s >= sum_lo) and (s <= sum_hi)

            heuristic = ((r < dark) and (g < dark) and (b < dark)) or (
                (r < bright) and (g < bright) and (b < bright)
                and not ((r > g) and (g > b)))
            texture = (gr[y, x] > threshold) or heuristic
            o[y, x] = 1 if (iq_ok and cgcr_ok and not texture) else 0
    return out.view(bool)


def gradient_full(object gray):
    cdef const double[:, ::1] g = gray
    cdef Py_ssize_t h = g.shape[0], w = g.shape[1], y, x, yy, xx, dy, dx
    out = np.empty((h, w), dtype=np.float64)
    cdef double[:, ::1] o = out
    cdef double lo, hi, v
    for y in range(h):
        for x in range(w):
            hi = g[y, x]
            lo = hi
            for dy in range(-1, 2):
                yy = y + dy
                if yy < 0:
                    yy = 0
                elif yy >= h:
                    yy = h - 1
                for dx in range(-1, 2):
                    xx = x + dx
                    if xx < 0:
                        xx = 0
                    elif xx >= w:
                        xx = w - 1
                    v = g[yy, xx]
                    if v > hi:
                        hi = v
                    if v < lo:
                        lo = v
            o[y, x] = hi - lo
    return out


def gradient_rows(object above, object cur, object below):
    cdef const double[::1] r0 = above
    cdef const double[::1] r1 = cur
    cdef const double[::1] r2 = below
    cdef Py_ssize_t w = r1.shape[0], x, xx, dx
    out = np.empty(w, dtype=np.float64)
    cdef double[::1] o = out
    cdef double lo, hi, v
    for x in range(w):
        hi = r1[x]
        lo = hi
        for dx in range(-1, 2):
            xx = x + dx
            if xx < 0:
                xx = 0
            elif xx >= w:
                xx = w - 1
            v = r0[xx]
            if v > hi:
                hi = v
            if v < lo:
                lo = v
            v = r1[xx]
            if v > hi:
                hi = v
            if v < lo:
                lo = v
            v = r2[xx]
            if v > hi:
                hi = v
            if v < lo:
                lo = v
        o[x] = hi - lo
    return out


def erode_full(object mask, object offsets):
    cdef const unsigned char[:, ::1] m = np.ascontiguousarray(mask).view(np.uint8)
    cdef const int[:, ::1] offs = np.ascontiguousarray(offsets, dtype=np.int32)
    cdef Py_ssize_t h = m.shape[0], w = m.shape[1], n = offs.shape[0], y, x, k, yy, xx
    out = np.empty((h, w), dtype=np.uint8)
    cdef unsigned char[:, ::1] o = out
    cdef unsigned char hit
    for y in range(h):
        for x in range(w):
            hit = 1
            for k in range(n):
                xx = x + offs[k, 0]
                yy = y + offs[k, 1]
                if xx < 0 or xx >= w or yy < 0 or yy >= h or not m[yy, xx]:
                    hit = 0
                    break
            o[y, x] = hit
    return out.view(bool)


def dilate_full(object mask, object offsets):
    cdef const unsigned char[:, ::1] m = np.ascontiguousarray(mask).view(np.uint8)
    cdef const int[:, ::1] offs = np.ascontiguousarray(offsets, dtype=np.int32)
    cdef Py_ssize_t h = m.shape[0], w = m.shape[1], n = offs.shape[0], y, x, k, yy, xx
    out = np.empty((h, w), dtype=np.uint8)
    cdef unsigned char[:, ::1] o = out
    cdef unsigned char hit
    for y in range(h):
        for x in range(w):
            hit = 0
            for k in range(n):
                xx = x + offs[k, 0]
                yy = y + offs[k, 1]
                if 0 <= xx < w and 0 <= yy < h and m[yy, xx]:
                    hit = 1
                    break
            o[y, x] = hit
    return out.view(bool)


def erode_window(object window, object offsets):
    cdef const unsigned char[:, ::1] win = np.ascontiguousarray(window).view(np.uint8)
    cdef const int[:, ::1] offs = np.ascontiguousarray(offsets, dtype=np.int32)
    cdef Py_ssize_t ry = win.shape[0] // 2, w = win.shape[1], n = offs.shape[0], x, k, xx
    out = np.empty(w, dtype=np.uint8)
    cdef unsigned char[::1] o = out
    cdef unsigned char hit
    for x in range(w):
        hit = 1
        for k in range(n):
            xx = x + offs[k, 0]
            if xx < 0 or xx >= w or not win[ry + offs[k, 1], xx]:
                hit = 0
                break
        o[x] = hit
    return out.view(bool)


def dilate_window(object window, object offsets):
    cdef const unsigned char[:, ::1] win = np.ascontiguousarray(window).view(np.uint8)
    cdef const int[:, ::1] offs = np.ascontiguousarray(offsets, dtype=np.int32)
    cdef Py_ssize_t ry = win.shape[0] // 2, w = win.shape[1], n = offs.shape[0], x, k, xx
    out = np.empty(w, dtype=np.uint8)
    cdef unsigned char[::1] o = out
    cdef unsigned char hit
    for x in range(w):
        hit = 0
        for k in range(n):
            xx = x + offs[k, 0]
            if 0 <= xx < w and win[ry + offs[k, 1], xx]:
                hit = 1
                break
        o[x] = hit
    return out.view(bool)


def adjust_plane(object yiq, object mask, double fi, double fq):
    cdef const double[:, :, ::1] p = yiq
    cdef const unsigned char[:, ::1] m = np.ascontiguousarray(mask).view(np.uint8)
    cdef Py_ssize_t h = p.shape[0], w = p.shape[1], y, x
    out = np.array(yiq, dtype=np.float64, copy=True)
    cdef double[:, :, ::1] o = out
    cdef double i, q
    for y in range(h):
        for x in range(w):
            if m[y, x]:
                i = p[y, x, 1]
                q = p[y, x, 2]
                o[y, x, 1] = i + i * fi
                o[y, x, 2] = q + q * fq
    return out
