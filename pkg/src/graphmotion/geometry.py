"""Collision primitives and robot/motion collision queries.

Robot links are capsules between consecutive FK frame origins with the
model's link radii. Static obstacles are axis-aligned boxes; the human
arm is a pair of capsules. All queries are exact narrow-phase tests.
"""

from dataclasses import dataclass

import numpy as np

from .backend import kernels
from .errors import ContractError
from .kinematics import interpolate, wrap_angles

_NO_BOXES = np.zeros((0, 6))
_NO_CAPS = np.zeros((0, 7))


@dataclass(frozen=True)
class Box:
    min_corner: np.ndarray
    max_corner: np.ndarray

    def __post_init__(self):
        lo = np.array(self.min_corner, dtype=float)
        hi = np.array(self.max_corner, dtype=float)
        if lo.shape != (3,) or hi.shape != (3,):
            raise ContractError("box corners must be 3-D points")
        if np.any(lo > hi):
            raise ContractError("min_corner must be <= max_corner componentwise")
        lo.setflags(write=False)
        hi.setflags(write=False)
        object.__setattr__(self, "min_corner", lo)
        object.__setattr__(self, "max_corner", hi)

    def corners(self):
        """The 8 corners in lexicographic (min/max per axis) order."""
        lo, hi = self.min_corner, self.max_corner
        return np.array([[x, y, z] for x in (lo[0], hi[0])
                         for y in (lo[1], hi[1])
                         for z in (lo[2], hi[2])])


@dataclass(frozen=True)
class Capsule:
    p0: np.ndarray
    p1: np.ndarray
    radius: float

    def __post_init__(self):
        p0 = np.array(self.p0, dtype=float)
        p1 = np.array(self.p1, dtype=float)
        if p0.shape != (3,) or p1.shape != (3,):
            raise ContractError("capsule endpoints must be 3-D points")
        if self.radius <= 0:
            raise ContractError("capsule radius must be positive")
        p0.setflags(write=False)
        p1.setflags(write=False)
        object.__setattr__(self, "p0", p0)
        object.__setattr__(self, "p1", p1)


def capsule_box_collides(c, b):
    """True iff the capsule axis comes within its radius of the box."""
    d2 = kernels.seg_box_dist2(c.p0, c.p1, b.min_corner, b.max_corner)
    return bool(d2 <= c.radius * c.radius)


def capsule_capsule_collides(a, b):
    """True iff the axis segments come within radius-sum of each other."""
    d2 = kernels.seg_seg_dist2(a.p0, a.p1, b.p0, b.p1)
    rr = a.radius + b.radius
    return bool(d2 <= rr * rr)


def scene_collision_arrays(scene):
    """Pack scene obstacles into the (boxes, capsules) kernel layout."""
    if scene.obstacles:
        boxes = np.array([np.concatenate([o.box.min_corner, o.box.max_corner])
                          for o in scene.obstacles])
    else:
        boxes = _NO_BOXES
    if scene.arm is not None:
        caps = np.array([list(c.p0) + list(c.p1) + [c.radius]
                         for c in scene.arm.capsules()])
    else:
        caps = _NO_CAPS
    return boxes, caps


def config_collides(model, scene, config):
    """True iff any link capsule intersects any scene obstacle."""
    if config.dof != model.dof:
        raise ContractError("config/model dimension mismatch")
    boxes, caps = scene_collision_arrays(scene)
    path = config.angles.reshape(1, -1)
    return bool(kernels.path_collides(model.dh, model.link_radii, path,
                                      boxes, caps))


def swept_link_radii(model, joint_steps):
    """Link radii inflated so sampled checks cover the continuous sweep.

    joint_steps[j] bounds how far joint j moves between consecutive path
    samples. Any intermediate configuration is within joint_steps/2 of a
    sample, and rotating joint j by delta moves a point on link i by at
    most delta * chain(j, i), with chain(j, i) the |a|+|d| chain length
    from joint j through link i. Clearing the inflated capsules at the
    samples therefore clears the true capsules everywhere along the
    segment.
    """
    seg = np.abs(model.dh[:, 0]) + np.abs(model.dh[:, 2])
    steps = np.asarray(joint_steps, dtype=float)
    q = model.dof
    margins = np.empty(q)
    for i in range(q):
        margins[i] = sum(steps[j] * seg[j:i + 1].sum()
                         for j in range(i + 1))
    return model.link_radii + 0.5 * margins


def motion_collides(model, scene, a, b, max_step, conservative=True):
    """True if the motion from a to b can touch an obstacle.

    The straight joint-space segment is sampled at max_step. With
    conservative=True (the default, used by all planners) the samples
    are checked with radii inflated per swept_link_radii, so a False
    answer guarantees the whole continuous sweep is collision-free —
    in particular it passes a pointwise re-check at any resolution.
    """
    if max_step <= 0:
        raise ContractError("max_step must be positive")
    boxes, caps = scene_collision_arrays(scene)
    path = interpolate(a, b, max_step).as_array()
    radii = model.link_radii
    if conservative and path.shape[0] > 1:
        steps = np.abs(wrap_angles(path[1] - path[0]))
        radii = swept_link_radii(model, steps)
    return bool(kernels.path_collides(model.dh, radii, path, boxes, caps))


def path_is_free(model, scene, motion, max_step):
    """Independent pointwise re-check of a motion at the given resolution."""
    for i in range(len(motion) - 1):
        if motion_collides(model, scene, motion[i], motion[i + 1], max_step,
                           conservative=False):
            return False
    if len(motion) == 1:
        return not config_collides(model, scene, motion[0])
    return True
