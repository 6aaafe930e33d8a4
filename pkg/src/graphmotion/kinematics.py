"""Serial-link manipulator model, forward kinematics, and joint-space paths.

Angles are radians, wrapped to [-pi, pi) at JointConfig construction.
Lengths are meters. The DH convention is standard (not modified); rows are
[a, alpha, d, theta_offset].
"""

from dataclasses import dataclass

import numpy as np

from .backend import kernels
from .errors import ContractError

TWO_PI = 2.0 * np.pi


def wrap_angles(values):
    """Wrap to [-pi, pi)."""
    return (np.asarray(values, dtype=float) + np.pi) % TWO_PI - np.pi


def angle_diff(a, b):
    """Shortest signed difference a - b, elementwise, in [-pi, pi)."""
    return wrap_angles(np.asarray(a, dtype=float) - np.asarray(b, dtype=float))


def _frozen_array(values, shape_hint=None):
    arr = np.array(values, dtype=float)
    arr.setflags(write=False)
    return arr


@dataclass(frozen=True)
class RobotModel:
    """Serial manipulator: DH table, joint limits, link collision radii."""

    dh: np.ndarray          # (q, 4) rows [a, alpha, d, theta_offset]
    joint_limits: np.ndarray  # (q, 2) [lo, hi] radians
    link_radii: np.ndarray    # (q,) capsule radius per link, meters

    def __post_init__(self):
        dh = _frozen_array(self.dh)
        limits = _frozen_array(self.joint_limits)
        radii = _frozen_array(self.link_radii)
        if dh.ndim != 2 or dh.shape[1] != 4 or dh.shape[0] < 1:
            raise ContractError("dh must be a (q, 4) table with q >= 1")
        q = dh.shape[0]
        if limits.shape != (q, 2):
            raise ContractError(f"joint_limits must have shape ({q}, 2)")
        if np.any(limits[:, 0] >= limits[:, 1]):
            raise ContractError("each joint limit must satisfy lo < hi")
        if radii.shape != (q,) or np.any(radii <= 0):
            raise ContractError(f"link_radii must be {q} positive entries")
        object.__setattr__(self, "dh", dh)
        object.__setattr__(self, "joint_limits", limits)
        object.__setattr__(self, "link_radii", radii)

    @property
    def dof(self):
        return self.dh.shape[0]


@dataclass(frozen=True)
class JointConfig:
    """A joint-angle vector, wrapped to [-pi, pi) at construction."""

    angles: np.ndarray

    def __post_init__(self):
        arr = np.atleast_1d(np.asarray(self.angles, dtype=float))
        if arr.ndim != 1 or arr.size < 1:
            raise ContractError("angles must be a non-empty 1-D vector")
        if not np.all(np.isfinite(arr)):
            raise ContractError("angles must be finite")
        arr = wrap_angles(arr)
        arr.setflags(write=False)
        object.__setattr__(self, "angles", arr)

    @property
    def dof(self):
        return self.angles.shape[0]

    def __eq__(self, other):
        if not isinstance(other, JointConfig):
            return NotImplemented
        return self.angles.shape == other.angles.shape and bool(
            np.all(self.angles == other.angles))

    def __hash__(self):
        return hash(self.angles.tobytes())


@dataclass(frozen=True)
class Motion:
    """An ordered sequence of joint configurations with a common dof."""

    configs: tuple

    def __post_init__(self):
        cfgs = tuple(self.configs)
        if len(cfgs) < 1:
            raise ContractError("a motion needs at least one configuration")
        dof = cfgs[0].dof
        if any(c.dof != dof for c in cfgs):
            raise ContractError("all configurations must share one dof")
        object.__setattr__(self, "configs", cfgs)

    def __len__(self):
        return len(self.configs)

    def __getitem__(self, i):
        return self.configs[i]

    @property
    def dof(self):
        return self.configs[0].dof

    def as_array(self):
        return np.array([c.angles for c in self.configs])

    def reversed(self):
        return Motion(tuple(reversed(self.configs)))


def _check_dims(model, config):
    if config.dof != model.dof:
        raise ContractError(
            f"config has {config.dof} joints, model has {model.dof}")


def forward_kinematics(model, config):
    """Frame origins in the base frame: base, each joint frame, end-effector.

    Returns a (q+1, 3) array; the last row is the end-effector position.
    """
    _check_dims(model, config)
    return kernels.fk_points(model.dh, config.angles)


def within_limits(model, config):
    """True iff every angle lies in its closed [lo, hi] interval."""
    _check_dims(model, config)
    lim = model.joint_limits
    return bool(np.all(config.angles >= lim[:, 0]) and
                np.all(config.angles <= lim[:, 1]))


def _lex_less(a, b):
    for x, y in zip(a, b):
        if x < y:
            return True
        if x > y:
            return False
    return False


def interpolate(a, b, max_step):
    """Linear joint-space motion from a to b, shortest direction per joint.

    Consecutive configurations differ by at most max_step in max-norm;
    endpoints are the inputs themselves. Computed in a canonical argument
    order so interpolate(a, b, s) reversed equals interpolate(b, a, s)
    exactly.
    """
    if max_step <= 0:
        raise ContractError("max_step must be positive")
    if a.dof != b.dof:
        raise ContractError("dimension mismatch between endpoints")
    if a == b:
        return Motion((a,))
    if _lex_less(b.angles, a.angles):
        return interpolate(b, a, max_step).reversed()
    delta = angle_diff(b.angles, a.angles)
    n = int(np.ceil(np.max(np.abs(delta)) / max_step))
    n = max(n, 1)
    configs = [a]
    for k in range(1, n):
        configs.append(JointConfig(a.angles + delta * (k / n)))
    configs.append(b)
    return Motion(tuple(configs))


def ee_path_length(model, motion, max_step):
    """End-effector arc length of the motion densified at max_step."""
    if len(motion) < 2:
        return 0.0
    total = 0.0
    prev_pt = forward_kinematics(model, motion[0])[-1]
    for i in range(len(motion) - 1):
        dense = interpolate(motion[i], motion[i + 1], max_step)
        for cfg in dense.configs[1:]:
            pt = forward_kinematics(model, cfg)[-1]
            total += float(np.linalg.norm(pt - prev_pt))
            prev_pt = pt
    return total
