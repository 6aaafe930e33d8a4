# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled collision/kinematics kernels.

Mirrors graphmotion._pykernels operation-for-operation; see that module
for array layouts.
"""

import numpy as np

cimport numpy as cnp
from libc.math cimport cos, sin, INFINITY

BACKEND = "c"


cdef void _fk_fill(const double[:, ::1] dh, const double[:, ::1] path,
                   Py_ssize_t row, double[:, ::1] pts) noexcept nogil:
    cdef Py_ssize_t q = dh.shape[0]
    cdef double r00 = 1.0, r01 = 0.0, r02 = 0.0
    cdef double r10 = 0.0, r11 = 1.0, r12 = 0.0
    cdef double r20 = 0.0, r21 = 0.0, r22 = 1.0
    cdef double tx = 0.0, ty = 0.0, tz = 0.0
    cdef double a, alpha, d, th, ct, st, ca, sa
    cdef double m00, m01, m02, m03, m10, m11, m12, m13, m20, m21, m22, m23
    cdef double n00, n01, n02, n10, n11, n12, n20, n21, n22
    cdef Py_ssize_t i
    pts[0, 0] = 0.0
    pts[0, 1] = 0.0
    pts[0, 2] = 0.0
    for i in range(q):
        a = dh[i, 0]
        alpha = dh[i, 1]
        d = dh[i, 2]
        th = dh[i, 3] + path[row, i]
        ct = cos(th); st = sin(th)
        ca = cos(alpha); sa = sin(alpha)
        m00 = ct; m01 = -st * ca; m02 = st * sa; m03 = a * ct
        m10 = st; m11 = ct * ca; m12 = -ct * sa; m13 = a * st
        m20 = 0.0; m21 = sa; m22 = ca; m23 = d
        n00 = r00 * m00 + r01 * m10 + r02 * m20
        n01 = r00 * m01 + r01 * m11 + r02 * m21
        n02 = r00 * m02 + r01 * m12 + r02 * m22
        n10 = r10 * m00 + r11 * m10 + r12 * m20
        n11 = r10 * m01 + r11 * m11 + r12 * m21
        n12 = r10 * m02 + r11 * m12 + r12 * m22
        n20 = r20 * m00 + r21 * m10 + r22 * m20
        n21 = r20 * m01 + r21 * m11 + r22 * m21
        n22 = r20 * m02 + r21 * m12 + r22 * m22
        tx = r00 * m03 + r01 * m13 + r02 * m23 + tx
        ty = r10 * m03 + r11 * m13 + r12 * m23 + ty
        tz = r20 * m03 + r21 * m13 + r22 * m23 + tz
        r00 = n00; r01 = n01; r02 = n02
        r10 = n10; r11 = n11; r12 = n12
        r20 = n20; r21 = n21; r22 = n22
        pts[i + 1, 0] = tx
        pts[i + 1, 1] = ty
        pts[i + 1, 2] = tz


def fk_points(const double[:, ::1] dh, const double[::1] angles):
    """Frame origins of the serial chain: base plus one point per joint."""
    cdef Py_ssize_t q = dh.shape[0]
    pts = np.zeros((q + 1, 3))
    cdef double[:, ::1] pv = pts
    cdef double[:, ::1] row = np.array(angles, dtype=float).reshape(1, q)
    _fk_fill(dh, row, 0, pv)
    return pts


cdef double _seg_box_dist2(double p0x, double p0y, double p0z,
                           double p1x, double p1y, double p1z,
                           double bminx, double bminy, double bminz,
                           double bmaxx, double bmaxy, double bmaxz) noexcept nogil:
    cdef double d[3]
    cdef double p[3]
    cdef double bmin[3]
    cdef double bmax[3]
    cdef double ts[8]
    cdef Py_ssize_t nts, ax, k, j
    cdef double t, tmp, ta, tb, tm, qa, qb, qc, lin_a, lin_b, pm, tstar, val, best
    d[0] = p1x - p0x; d[1] = p1y - p0y; d[2] = p1z - p0z
    p[0] = p0x; p[1] = p0y; p[2] = p0z
    bmin[0] = bminx; bmin[1] = bminy; bmin[2] = bminz
    bmax[0] = bmaxx; bmax[1] = bmaxy; bmax[2] = bmaxz
    ts[0] = 0.0
    ts[1] = 1.0
    nts = 2
    for ax in range(3):
        if d[ax] != 0.0:
            t = (bmin[ax] - p[ax]) / d[ax]
            if 0.0 < t < 1.0:
                ts[nts] = t; nts += 1
            t = (bmax[ax] - p[ax]) / d[ax]
            if 0.0 < t < 1.0:
                ts[nts] = t; nts += 1
    # insertion sort (nts <= 8)
    for k in range(1, nts):
        tmp = ts[k]
        j = k
        while j > 0 and ts[j - 1] > tmp:
            ts[j] = ts[j - 1]
            j -= 1
        ts[j] = tmp
    best = INFINITY
    for k in range(nts - 1):
        ta = ts[k]
        tb = ts[k + 1]
        if tb <= ta:
            continue
        tm = 0.5 * (ta + tb)
        qa = 0.0; qb = 0.0; qc = 0.0
        for ax in range(3):
            pm = p[ax] + d[ax] * tm
            if pm < bmin[ax]:
                lin_a = -d[ax]
                lin_b = bmin[ax] - p[ax]
            elif pm > bmax[ax]:
                lin_a = d[ax]
                lin_b = p[ax] - bmax[ax]
            else:
                continue
            qa += lin_a * lin_a
            qb += 2.0 * lin_a * lin_b
            qc += lin_b * lin_b
        if qa > 0.0:
            tstar = -qb / (2.0 * qa)
            if tstar < ta:
                tstar = ta
            elif tstar > tb:
                tstar = tb
        else:
            tstar = ta
        val = (qa * tstar + qb) * tstar + qc
        if val < best:
            best = val
        if best == 0.0:
            return 0.0
    return best


cdef double _seg_seg_dist2(double p1x, double p1y, double p1z,
                           double q1x, double q1y, double q1z,
                           double p2x, double p2y, double p2z,
                           double q2x, double q2y, double q2z) noexcept nogil:
    cdef double d1x = q1x - p1x, d1y = q1y - p1y, d1z = q1z - p1z
    cdef double d2x = q2x - p2x, d2y = q2y - p2y, d2z = q2z - p2z
    cdef double rx = p1x - p2x, ry = p1y - p2y, rz = p1z - p2z
    cdef double a = d1x * d1x + d1y * d1y + d1z * d1z
    cdef double e = d2x * d2x + d2y * d2y + d2z * d2z
    cdef double f = d2x * rx + d2y * ry + d2z * rz
    cdef double eps = 1e-14
    cdef double s, t, c, b, denom, cx, cy, cz
    if a <= eps and e <= eps:
        return rx * rx + ry * ry + rz * rz
    if a <= eps:
        s = 0.0
        t = f / e
        if t < 0.0: t = 0.0
        elif t > 1.0: t = 1.0
    else:
        c = d1x * rx + d1y * ry + d1z * rz
        if e <= eps:
            t = 0.0
            s = -c / a
            if s < 0.0: s = 0.0
            elif s > 1.0: s = 1.0
        else:
            b = d1x * d2x + d1y * d2y + d1z * d2z
            denom = a * e - b * b
            if denom != 0.0:
                s = (b * f - c * e) / denom
                if s < 0.0: s = 0.0
                elif s > 1.0: s = 1.0
            else:
                s = 0.0
            t = (b * s + f) / e
            if t < 0.0:
                t = 0.0
                s = -c / a
                if s < 0.0: s = 0.0
                elif s > 1.0: s = 1.0
            elif t > 1.0:
                t = 1.0
                s = (b - c) / a
                if s < 0.0: s = 0.0
                elif s > 1.0: s = 1.0
    cx = p1x + d1x * s - (p2x + d2x * t)
    cy = p1y + d1y * s - (p2y + d2y * t)
    cz = p1z + d1z * s - (p2z + d2z * t)
    return cx * cx + cy * cy + cz * cz


def seg_box_dist2(p0, p1, bmin, bmax):
    """Exact squared distance between a segment and an AABB."""
    return _seg_box_dist2(p0[0], p0[1], p0[2], p1[0], p1[1], p1[2],
                          bmin[0], bmin[1], bmin[2], bmax[0], bmax[1], bmax[2])


def seg_seg_dist2(p1, q1, p2, q2):
    """Squared distance between two segments."""
    return _seg_seg_dist2(p1[0], p1[1], p1[2], q1[0], q1[1], q1[2],
                          p2[0], p2[1], p2[2], q2[0], q2[1], q2[2])


cdef bint _points_collide(const double[:, ::1] pts, const double[::1] radii,
                          const double[:, ::1] boxes,
                          const double[:, ::1] caps) noexcept nogil:
    cdef Py_ssize_t q = radii.shape[0]
    cdef Py_ssize_t i, j
    cdef double r, rr, d2
    for i in range(q):
        r = radii[i]
        for j in range(boxes.shape[0]):
            d2 = _seg_box_dist2(pts[i, 0], pts[i, 1], pts[i, 2],
                                pts[i + 1, 0], pts[i + 1, 1], pts[i + 1, 2],
                                boxes[j, 0], boxes[j, 1], boxes[j, 2],
                                boxes[j, 3], boxes[j, 4], boxes[j, 5])
            if d2 <= r * r:
                return True
        for j in range(caps.shape[0]):
            rr = r + caps[j, 6]
            d2 = _seg_seg_dist2(pts[i, 0], pts[i, 1], pts[i, 2],
                                pts[i + 1, 0], pts[i + 1, 1], pts[i + 1, 2],
                                caps[j, 0], caps[j, 1], caps[j, 2],
                                caps[j, 3], caps[j, 4], caps[j, 5])
            if d2 <= rr * rr:
                return True
    return False


def path_collides(const double[:, ::1] dh, const double[::1] radii, const double[:, ::1] path,
                  const double[:, ::1] boxes, const double[:, ::1] caps):
    """True if any configuration in path puts a link capsule in collision."""
    cdef Py_ssize_t q = dh.shape[0]
    cdef Py_ssize_t n = path.shape[0]
    cdef Py_ssize_t k
    cdef bint hit = False
    pts = np.zeros((q + 1, 3))
    cdef double[:, ::1] pv = pts
    with nogil:
        for k in range(n):
            _fk_fill(dh, path, k, pv)
            if _points_collide(pv, radii, boxes, caps):
                hit = True
                break
    return bool(hit)
