"""Pure-Python collision/kinematics kernels.

Fallback backend mirroring graphmotion._ckernels operation-for-operation so
both produce identical doubles. Array layouts:

  dh      (q, 4)  rows [a, alpha, d, theta_offset], standard DH
  boxes   (nb, 6) rows [minx, miny, minz, maxx, maxy, maxz]
  caps    (nc, 7) rows [p0x, p0y, p0z, p1x, p1y, p1z, radius]
  path    (n, q)  joint configurations
"""

import math

import numpy as np

BACKEND = "python"


def fk_points(dh, angles):
    """Frame origins of the serial chain: base plus one point per joint."""
    q = dh.shape[0]
    pts = np.zeros((q + 1, 3))
    # current rotation (row-major) and translation
    r00, r01, r02 = 1.0, 0.0, 0.0
    r10, r11, r12 = 0.0, 1.0, 0.0
    r20, r21, r22 = 0.0, 0.0, 1.0
    tx = ty = tz = 0.0
    for i in range(q):
        a = dh[i, 0]
        alpha = dh[i, 1]
        d = dh[i, 2]
        th = dh[i, 3] + angles[i]
        ct, st = math.cos(th), math.sin(th)
        ca, sa = math.cos(alpha), math.sin(alpha)
        # local transform columns
        m00, m01, m02, m03 = ct, -st * ca, st * sa, a * ct
        m10, m11, m12, m13 = st, ct * ca, -ct * sa, a * st
        m20, m21, m22, m23 = 0.0, sa, ca, d
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
        r00, r01, r02, r10, r11, r12, r20, r21, r22 = (
            n00, n01, n02, n10, n11, n12, n20, n21, n22)
        pts[i + 1, 0] = tx
        pts[i + 1, 1] = ty
        pts[i + 1, 2] = tz
    return pts


def seg_box_dist2(p0, p1, bmin, bmax):
    """Exact squared distance between segment p0-p1 and an AABB.

    The squared point-to-box distance along the segment is piecewise
    quadratic in the segment parameter; breakpoints occur where a
    coordinate crosses a box face. Each piece is minimized in closed form.
    """
    d0 = p1[0] - p0[0]
    d1 = p1[1] - p0[1]
    d2 = p1[2] - p0[2]
    ts = [0.0, 1.0]
    for ax in range(3):
        dax = (d0, d1, d2)[ax]
        if dax != 0.0:
            for bound in (bmin[ax], bmax[ax]):
                t = (bound - p0[ax]) / dax
                if 0.0 < t < 1.0:
                    ts.append(t)
    ts.sort()
    best = math.inf
    for k in range(len(ts) - 1):
        ta = ts[k]
        tb = ts[k + 1]
        if tb <= ta:
            continue
        tm = 0.5 * (ta + tb)
        qa = qb = qc = 0.0
        for ax in range(3):
            dax = (d0, d1, d2)[ax]
            pm = p0[ax] + dax * tm
            if pm < bmin[ax]:
                lin_a = -dax
                lin_b = bmin[ax] - p0[ax]
            elif pm > bmax[ax]:
                lin_a = dax
                lin_b = p0[ax] - bmax[ax]
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


def seg_seg_dist2(p1, q1, p2, q2):
    """Squared distance between segments p1-q1 and p2-q2 (Ericson 5.1.9)."""
    d1x, d1y, d1z = q1[0] - p1[0], q1[1] - p1[1], q1[2] - p1[2]
    d2x, d2y, d2z = q2[0] - p2[0], q2[1] - p2[1], q2[2] - p2[2]
    rx, ry, rz = p1[0] - p2[0], p1[1] - p2[1], p1[2] - p2[2]
    a = d1x * d1x + d1y * d1y + d1z * d1z
    e = d2x * d2x + d2y * d2y + d2z * d2z
    f = d2x * rx + d2y * ry + d2z * rz
    eps = 1e-14
    if a <= eps and e <= eps:
        return rx * rx + ry * ry + rz * rz
    if a <= eps:
        s = 0.0
        t = min(max(f / e, 0.0), 1.0)
    else:
        c = d1x * rx + d1y * ry + d1z * rz
        if e <= eps:
            t = 0.0
            s = min(max(-c / a, 0.0), 1.0)
        else:
            b = d1x * d2x + d1y * d2y + d1z * d2z
            denom = a * e - b * b
            if denom != 0.0:
                s = min(max((b * f - c * e) / denom, 0.0), 1.0)
            else:
                s = 0.0
            t = (b * s + f) / e
            if t < 0.0:
                t = 0.0
                s = min(max(-c / a, 0.0), 1.0)
            elif t > 1.0:
                t = 1.0
                s = min(max((b - c) / a, 0.0), 1.0)
    cx = p1[0] + d1x * s - (p2[0] + d2x * t)
    cy = p1[1] + d1y * s - (p2[1] + d2y * t)
    cz = p1[2] + d1z * s - (p2[2] + d2z * t)
    return cx * cx + cy * cy + cz * cz


def _points_collide(pts, radii, boxes, caps):
    q = len(radii)
    for i in range(q):
        a = pts[i]
        b = pts[i + 1]
        r = radii[i]
        for j in range(boxes.shape[0]):
            if seg_box_dist2(a, b, boxes[j, 0:3], boxes[j, 3:6]) <= r * r:
                return True
        for j in range(caps.shape[0]):
            rr = r + caps[j, 6]
            if seg_seg_dist2(a, b, caps[j, 0:3], caps[j, 3:6]) <= rr * rr:
                return True
    return False


def path_collides(dh, radii, path, boxes, caps):
    """True if any configuration in path puts a link capsule in collision."""
    for k in range(path.shape[0]):
        pts = fk_points(dh, path[k])
        if _points_collide(pts, radii, boxes, caps):
            return True
    return False
