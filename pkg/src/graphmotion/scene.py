"""Workspace model: static obstacles, the robot, human-arm traces, file I/O.

Scene and trace files are versioned JSON (see FORMAT_VERSION). Units are
meters / radians / seconds throughout.
"""

import dataclasses
import json
import math
from dataclasses import dataclass

import numpy as np

from .errors import (ContractError, FileFormatError, FreeSpaceNotFoundError,
                     SchemaError, VersionError)
from .geometry import Box, Capsule, config_collides
from .kinematics import JointConfig, RobotModel, within_limits

FORMAT_VERSION = 1

# Conservative capsule radius for the human arm segments; the arm geometry
# is two swept spheres (shoulder-elbow, elbow-wrist).
ARM_RADIUS = 0.06


@dataclass(frozen=True)
class StaticObstacle:
    box: Box
    name: str = ""


@dataclass(frozen=True)
class HumanArmState:
    shoulder: np.ndarray
    elbow: np.ndarray
    wrist: np.ndarray

    def __post_init__(self):
        for attr in ("shoulder", "elbow", "wrist"):
            p = np.array(getattr(self, attr), dtype=float)
            if p.shape != (3,) or not np.all(np.isfinite(p)):
                raise ContractError(f"{attr} must be a finite 3-D point")
            p.setflags(write=False)
            object.__setattr__(self, attr, p)

    def capsules(self):
        return (Capsule(self.shoulder, self.elbow, ARM_RADIUS),
                Capsule(self.elbow, self.wrist, ARM_RADIUS))


@dataclass(frozen=True)
class ArmTrace:
    dt: float
    frames: tuple

    def __post_init__(self):
        frames = tuple(self.frames)
        if self.dt <= 0:
            raise ContractError("trace dt must be positive")
        if len(frames) < 1:
            raise ContractError("trace needs at least one frame")
        object.__setattr__(self, "frames", frames)

    @property
    def duration(self):
        return self.dt * (len(self.frames) - 1)


@dataclass(frozen=True)
class SceneState:
    robot: RobotModel
    obstacles: tuple = ()
    arm: "HumanArmState | None" = None

    def __post_init__(self):
        object.__setattr__(self, "obstacles", tuple(self.obstacles))

    def with_arm(self, arm):
        return dataclasses.replace(self, arm=arm)


@dataclass(frozen=True)
class ScenarioSpec:
    scene: SceneState
    start: JointConfig
    goal: JointConfig

    def __post_init__(self):
        for label, cfg in (("start", self.start), ("goal", self.goal)):
            if not within_limits(self.scene.robot, cfg):
                raise ContractError(f"{label} configuration is out of limits")
            if config_collides(self.scene.robot, self.scene, cfg):
                raise ContractError(f"{label} configuration is in collision")


def _require(doc, key, path):
    if key not in doc:
        raise SchemaError(f"missing field {path}.{key}")
    return doc[key]


def _number_list(value, path, length=None):
    if not isinstance(value, list) or (
            length is not None and len(value) != length):
        raise SchemaError(f"field {path} must be a list"
                          + (f" of {length} numbers" if length else ""))
    out = []
    for i, v in enumerate(value):
        if not isinstance(v, (int, float)) or isinstance(v, bool) \
                or not math.isfinite(float(v)):
            raise SchemaError(f"field {path}[{i}] is not a finite number")
        out.append(float(v))
    return out


def _load_json(path):
    with open(path) as f:
        try:
            return json.load(f)
        except json.JSONDecodeError as exc:
            raise FileFormatError(f"{path}: not valid JSON: {exc}") from exc


def _check_version(doc, path):
    version = doc.get("format_version")
    if version != FORMAT_VERSION:
        raise VersionError(f"{path}: unsupported format_version {version!r}")


def robot_from_dict(doc, path="robot"):
    dh_rows = _require(doc, "dh", path)
    if not isinstance(dh_rows, list) or not dh_rows:
        raise SchemaError(f"field {path}.dh must be a non-empty list")
    dh = [_number_list(r, f"{path}.dh[{i}]", 4) for i, r in enumerate(dh_rows)]
    limits = [_number_list(r, f"{path}.limits[{i}]", 2)
              for i, r in enumerate(_require(doc, "limits", path))]
    radii = _number_list(_require(doc, "link_radii", path), f"{path}.link_radii")
    dof = _require(doc, "dof", path)
    if dof != len(dh):
        raise SchemaError(f"field {path}.dof disagrees with the dh table")
    try:
        return RobotModel(np.array(dh), np.array(limits), np.array(radii))
    except ContractError as exc:
        raise SchemaError(f"field {path}: {exc}") from exc


def robot_to_dict(robot):
    return {
        "dof": robot.dof,
        "dh": robot.dh.tolist(),
        "limits": robot.joint_limits.tolist(),
        "link_radii": robot.link_radii.tolist(),
    }


def scene_from_dict(doc, path="scene"):
    robot = robot_from_dict(_require(doc, "robot", path), f"{path}.robot")
    obstacles = []
    for i, o in enumerate(doc.get("obstacles", [])):
        opath = f"{path}.obstacles[{i}]"
        lo = _number_list(_require(o, "min", opath), f"{opath}.min", 3)
        hi = _number_list(_require(o, "max", opath), f"{opath}.max", 3)
        try:
            box = Box(lo, hi)
        except ContractError as exc:
            raise SchemaError(f"field {opath}: {exc}") from exc
        obstacles.append(StaticObstacle(box, o.get("name", "")))
    arm = None
    if doc.get("arm") is not None:
        a = doc["arm"]
        arm = HumanArmState(
            _number_list(_require(a, "shoulder", f"{path}.arm"), f"{path}.arm.shoulder", 3),
            _number_list(_require(a, "elbow", f"{path}.arm"), f"{path}.arm.elbow", 3),
            _number_list(_require(a, "wrist", f"{path}.arm"), f"{path}.arm.wrist", 3))
    return SceneState(robot, tuple(obstacles), arm)


def scene_to_dict(scene):
    doc = {
        "format_version": FORMAT_VERSION,
        "robot": robot_to_dict(scene.robot),
        "obstacles": [{"name": o.name,
                       "min": o.box.min_corner.tolist(),
                       "max": o.box.max_corner.tolist()}
                      for o in scene.obstacles],
    }
    if scene.arm is not None:
        doc["arm"] = {"shoulder": scene.arm.shoulder.tolist(),
                      "elbow": scene.arm.elbow.tolist(),
                      "wrist": scene.arm.wrist.tolist()}
    return doc


def load_scene(path):
    """Load a scene file. The optional arm_trace_path field is returned as
    an attribute-free side channel via load_scene_with_trace."""
    doc = _load_json(path)
    _check_version(doc, path)
    return scene_from_dict(doc, "scene")


def scene_trace_path(path):
    """The arm_trace_path field of a scene file, or None."""
    doc = _load_json(path)
    return doc.get("arm_trace_path")


def save_scene(scene, path, arm_trace_path=None):
    doc = scene_to_dict(scene)
    if arm_trace_path is not None:
        doc["arm_trace_path"] = arm_trace_path
    with open(path, "w") as f:
        json.dump(doc, f, indent=2)
        f.write("\n")


def load_trace(path):
    doc = _load_json(path)
    _check_version(doc, path)
    dt = _require(doc, "dt", "trace")
    frames = []
    for i, fr in enumerate(_require(doc, "frames", "trace")):
        fpath = f"trace.frames[{i}]"
        frames.append(HumanArmState(
            _number_list(_require(fr, "shoulder", fpath), f"{fpath}.shoulder", 3),
            _number_list(_require(fr, "elbow", fpath), f"{fpath}.elbow", 3),
            _number_list(_require(fr, "wrist", fpath), f"{fpath}.wrist", 3)))
    try:
        return ArmTrace(float(dt), tuple(frames))
    except ContractError as exc:
        raise SchemaError(f"trace: {exc}") from exc


def save_trace(trace, path):
    doc = {
        "format_version": FORMAT_VERSION,
        "dt": trace.dt,
        "frames": [{"shoulder": fr.shoulder.tolist(),
                    "elbow": fr.elbow.tolist(),
                    "wrist": fr.wrist.tolist()} for fr in trace.frames],
    }
    with open(path, "w") as f:
        json.dump(doc, f, indent=2)
        f.write("\n")


def sample_free_config(scene, rng_seed, max_rejections=10_000):
    """Uniform per-joint sample within limits, rejected until collision-free."""
    rng = np.random.default_rng(rng_seed)
    lim = scene.robot.joint_limits
    for _ in range(max_rejections):
        cfg = JointConfig(rng.uniform(lim[:, 0], lim[:, 1]))
        if not config_collides(scene.robot, scene, cfg):
            return cfg
    raise FreeSpaceNotFoundError(
        f"no collision-free configuration after {max_rejections} samples")


def arm_state_at(trace, t):
    """Linear interpolation between bracketing frames, clamped past the end."""
    if t < 0:
        raise ContractError("time must be non-negative")
    idx = t / trace.dt
    lo = int(math.floor(idx))
    if lo >= len(trace.frames) - 1:
        return trace.frames[-1]
    hi = lo + 1
    u = idx - lo
    f0, f1 = trace.frames[lo], trace.frames[hi]
    return HumanArmState(
        f0.shoulder * (1 - u) + f1.shoulder * u,
        f0.elbow * (1 - u) + f1.elbow * u,
        f0.wrist * (1 - u) + f1.wrist * u)


@dataclass(frozen=True)
class ArmSweepParams:
    """Sinusoidal sweep of a synthetic human arm through a workspace region."""

    region: Box          # the wrist stays inside this box
    amplitude: float     # meters, sweep half-width
    period: float        # seconds
    duration: float = 10.0
    dt: float = 0.05

    def __post_init__(self):
        if self.period <= 0:
            raise ContractError("period must be positive")
        if self.amplitude < 0:
            raise ContractError("amplitude must be non-negative")


def synth_arm_trace(params, seed):
    """Deterministic synthetic arm trace standing in for motion capture.

    The wrist sweeps sinusoidally along a seed-chosen in-region axis; the
    elbow follows at reduced amplitude and the shoulder stays fixed just
    outside the region.
    """
    rng = np.random.default_rng(seed)
    lo, hi = params.region.min_corner, params.region.max_corner
    center = 0.5 * (lo + hi)
    half = 0.5 * (hi - lo)
    # sweep along the widest axis, nudged by the seed within the region
    axis = int(np.argmax(half))
    direction = np.zeros(3)
    direction[axis] = 1.0
    amp = min(params.amplitude, float(half[axis]))
    phase = rng.uniform(0.0, 2.0 * np.pi)
    anchor = center + half * rng.uniform(-0.2, 0.2)
    shoulder = center + 2.0 * half * direction + np.array([0.0, 0.0, 0.25])
    n = int(round(params.duration / params.dt)) + 1
    frames = []
    for k in range(n):
        t = k * params.dt
        s = math.sin(2.0 * np.pi * t / params.period + phase)
        wrist = anchor + direction * (amp * s)
        wrist = np.minimum(np.maximum(wrist, lo), hi)
        elbow = 0.5 * (wrist + shoulder)
        frames.append(HumanArmState(shoulder, elbow, wrist))
    return ArmTrace(params.dt, tuple(frames))
