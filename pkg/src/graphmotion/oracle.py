"""Sampling-based planners (RRT, RRT*) and oracle dataset generation.

Trees are grown in wrapped joint space with shortest-direction steering.
RRT terminates at the first solution; RRT* keeps rewiring until a cost
threshold, the time cap, or the iteration cap is hit. Path cost reported
to callers is end-effector arc length.
"""

import json
import time
from dataclasses import dataclass, field, replace as dc_replace

import numpy as np

from .errors import (ContractError, FileFormatError, GraphMotionError,
                     SchemaError, VersionError)
from .geometry import config_collides, motion_collides
from .gnn import MotionSample
from .kinematics import (JointConfig, Motion, angle_diff, ee_path_length,
                         interpolate, within_limits)
from .scene import (arm_state_at, sample_free_config, scene_from_dict,
                    scene_to_dict)

DATASET_FORMAT_VERSION = 1


@dataclass(frozen=True)
class PlannerParams:
    steer_step: float = 0.2
    goal_bias: float = 0.1
    rewire_radius: float = 0.6
    max_time: float = 8.0
    max_iters: int = 200_000
    seed: int = 0
    check_step: float = 0.05

    def __post_init__(self):
        if self.steer_step <= 0:
            raise ContractError("steer_step must be positive")
        if not 0.0 <= self.goal_bias <= 1.0:
            raise ContractError("goal_bias must be in [0, 1]")
        if self.max_time <= 0:
            raise ContractError("max_time must be positive")


@dataclass
class OracleResult:
    success: bool
    motion: "Motion | None"
    elapsed: float
    iterations: int
    cost: float = float("nan")  # end-effector path length of the motion


def _wrap_dist(a, b):
    return float(np.linalg.norm(angle_diff(a, b)))


def _steer(from_angles, to_angles, steer_step):
    delta = angle_diff(to_angles, from_angles)
    dist = float(np.linalg.norm(delta))
    if dist <= steer_step:
        return to_angles, dist
    return from_angles + delta * (steer_step / dist), steer_step


def _validate_endpoints(scene, start, goal):
    for label, cfg in (("start", start), ("goal", goal)):
        if not within_limits(scene.robot, cfg):
            raise ContractError(f"{label} is out of joint limits")
        if config_collides(scene.robot, scene, cfg):
            raise ContractError(f"{label} is in collision")


def plan_rrt(scene, start, goal, params):
    """First-solution RRT."""
    _validate_endpoints(scene, start, goal)
    t0 = time.perf_counter()
    if start == goal:
        return OracleResult(True, Motion((start,)), time.perf_counter() - t0,
                            0, 0.0)
    rng = np.random.default_rng(params.seed)
    lim = scene.robot.joint_limits
    nodes = [start.angles]
    parents = [-1]
    for it in range(1, params.max_iters + 1):
        if time.perf_counter() - t0 > params.max_time:
            return OracleResult(False, None, time.perf_counter() - t0, it)
        if rng.random() < params.goal_bias:
            target = goal.angles
        else:
            target = rng.uniform(lim[:, 0], lim[:, 1])
        dists = [_wrap_dist(n, target) for n in nodes]
        near = int(np.argmin(dists))
        new_angles, _ = _steer(nodes[near], target, params.steer_step)
        new_cfg = JointConfig(new_angles)
        if not within_limits(scene.robot, new_cfg):
            continue
        if motion_collides(scene.robot, scene, JointConfig(nodes[near]),
                           new_cfg, params.check_step):
            continue
        nodes.append(new_cfg.angles)
        parents.append(near)
        if _wrap_dist(new_cfg.angles, goal.angles) <= params.steer_step and \
                not motion_collides(scene.robot, scene, new_cfg, goal,
                                    params.check_step):
            path = [goal.angles]
            i = len(nodes) - 1
            while i >= 0:
                path.append(nodes[i])
                i = parents[i]
            motion = Motion(tuple(JointConfig(a) for a in reversed(path)))
            cost = ee_path_length(scene.robot, motion, params.check_step)
            return OracleResult(True, motion, time.perf_counter() - t0,
                                it, cost)
    return OracleResult(False, None, time.perf_counter() - t0,
                        params.max_iters)


@dataclass(frozen=True)
class StopRule:
    cost_threshold: "float | None" = None  # end-effector meters
    max_time: "float | None" = None        # overrides params.max_time


def plan_rrt_star(scene, start, goal, params, stop=StopRule()):
    """RRT* with rewiring; anytime, returns the best goal-reaching path."""
    _validate_endpoints(scene, start, goal)
    t0 = time.perf_counter()
    max_time = stop.max_time if stop.max_time is not None else params.max_time
    if start == goal:
        return OracleResult(True, Motion((start,)), time.perf_counter() - t0,
                            0, 0.0)
    rng = np.random.default_rng(params.seed)
    lim = scene.robot.joint_limits
    model = scene.robot
    nodes = [start.angles]
    parents = [-1]
    costs = [0.0]  # joint-space path length from the root
    goal_parents = []  # node indices with a free edge to the goal
    best_cost_ee = np.inf
    best_path = None

    def edge_free(a, b):
        return not motion_collides(model, scene, JointConfig(a),
                                   JointConfig(b), params.check_step)

    def extract(goal_parent):
        path = [goal.angles]
        i = goal_parent
        while i >= 0:
            path.append(nodes[i])
            i = parents[i]
        return Motion(tuple(JointConfig(a) for a in reversed(path)))

    it = 0
    for it in range(1, params.max_iters + 1):
        if time.perf_counter() - t0 > max_time:
            break
        if rng.random() < params.goal_bias:
            target = goal.angles
        else:
            target = rng.uniform(lim[:, 0], lim[:, 1])
        arr = np.array(nodes)
        dvec = np.linalg.norm(angle_diff(arr, target), axis=1)
        near = int(np.argmin(dvec))
        new_angles, _ = _steer(nodes[near], target, params.steer_step)
        new_cfg = JointConfig(new_angles)
        if not within_limits(model, new_cfg):
            continue
        neighbor_d = np.linalg.norm(angle_diff(arr, new_cfg.angles), axis=1)
        neighbor_ids = np.nonzero(neighbor_d <= params.rewire_radius)[0]
        # choose the parent minimizing joint-space cost
        best_parent = -1
        best_c = np.inf
        order = neighbor_ids[np.argsort(neighbor_d[neighbor_ids])]
        for j in order:
            c = costs[j] + neighbor_d[j]
            if c < best_c and edge_free(nodes[j], new_cfg.angles):
                best_parent = int(j)
                best_c = c
        if best_parent < 0:
            if not edge_free(nodes[near], new_cfg.angles):
                continue
            best_parent = near
            best_c = costs[near] + float(neighbor_d[near])
        new_id = len(nodes)
        nodes.append(new_cfg.angles)
        parents.append(best_parent)
        costs.append(best_c)
        # rewire neighbors through the new node
        for j in neighbor_ids:
            c_through = best_c + float(neighbor_d[j])
            if c_through < costs[j] and edge_free(new_cfg.angles, nodes[j]):
                parents[j] = new_id
                costs[j] = c_through
        if _wrap_dist(new_cfg.angles, goal.angles) <= params.steer_step and \
                edge_free(new_cfg.angles, goal.angles):
            goal_parents.append(new_id)
        # track the cheapest goal-reaching path by joint cost, score by ee cost
        if goal_parents:
            joint_costs = [costs[g] + _wrap_dist(nodes[g], goal.angles)
                           for g in goal_parents]
            g_best = goal_parents[int(np.argmin(joint_costs))]
            motion = extract(g_best)
            cost_ee = ee_path_length(model, motion, params.check_step)
            if cost_ee < best_cost_ee:
                best_cost_ee = cost_ee
                best_path = motion
            if stop.cost_threshold is not None and \
                    best_cost_ee <= stop.cost_threshold:
                break
    elapsed = time.perf_counter() - t0
    if best_path is None:
        return OracleResult(False, None, elapsed, it)
    return OracleResult(True, best_path, elapsed, it, best_cost_ee)


def resample_motion(motion, step):
    """Piecewise-linear reparameterization with consecutive max-norm <= step."""
    if step <= 0:
        raise ContractError("step must be positive")
    configs = [motion[0]]
    for i in range(len(motion) - 1):
        seg = interpolate(motion[i], motion[i + 1], step)
        configs.extend(seg.configs[1:])
    return Motion(tuple(configs))


@dataclass
class DatasetItem:
    motion: Motion
    scene_idx: int
    goal: JointConfig
    split: str  # "train" or "test"


@dataclass
class Dataset:
    scenes: list
    items: list = field(default_factory=list)

    def samples(self, split=None):
        return [MotionSample(it.motion, self.scenes[it.scene_idx], it.goal)
                for it in self.items if split is None or it.split == split]


@dataclass
class GenerationStats:
    attempts: int = 0
    failures: int = 0
    per_workspace_failures: list = field(default_factory=list)


def generate_dataset(workspaces, scenarios_per_workspace, params, seed,
                     resample_step=0.1, traces=None, train_fraction=0.9,
                     max_failure_fraction=0.5):
    """Sample scenarios per workspace, solve with RRT*, resample, and split.

    workspaces: list of SceneState. traces: optional {workspace index:
    ArmTrace}; for those workspaces the arm is frozen at a sampled trace
    time per scenario and included in oracle collision checks.
    """
    traces = traces or {}
    dataset = Dataset(scenes=[])
    stats = GenerationStats()
    for w_idx, workspace in enumerate(workspaces):
        w_failures = 0
        for s_idx in range(scenarios_per_workspace):
            ss = np.random.SeedSequence(entropy=seed, spawn_key=(w_idx, s_idx))
            child = ss.generate_state(4)
            scn = workspace
            if w_idx in traces:
                trace = traces[w_idx]
                t_rng = np.random.default_rng(int(child[3]))
                t_sample = t_rng.uniform(0.0, trace.duration)
                scn = workspace.with_arm(arm_state_at(trace, t_sample))
            stats.attempts += 1
            try:
                start = sample_free_config(scn, int(child[0]))
                goal = sample_free_config(scn, int(child[1]))
            except GraphMotionError:
                w_failures += 1
                continue
            result = plan_rrt_star(scn, start, goal,
                                   dc_replace(params, seed=int(child[2])))
            if not result.success:
                w_failures += 1
                continue
            motion = resample_motion(result.motion, resample_step)
            dataset.scenes.append(scn)
            dataset.items.append(DatasetItem(motion, len(dataset.scenes) - 1,
                                             motion[-1], "train"))
        stats.per_workspace_failures.append(w_failures)
        stats.failures += w_failures
        if w_failures > max_failure_fraction * scenarios_per_workspace:
            raise GraphMotionError(
                f"workspace {w_idx}: oracle failed {w_failures}/"
                f"{scenarios_per_workspace} scenarios")
    # deterministic 90/10 split over stored motions
    rng = np.random.default_rng(np.random.SeedSequence(
        entropy=seed, spawn_key=(len(workspaces), 0)))
    n = len(dataset.items)
    n_test = n - int(round(train_fraction * n))
    for i in rng.permutation(n)[:n_test]:
        dataset.items[i].split = "test"
    return dataset, stats


def save_dataset(dataset, path):
    # scenes are stored deduplicated by identity
    scene_docs = [scene_to_dict(s) for s in dataset.scenes]
    doc = {
        "format_version": DATASET_FORMAT_VERSION,
        "scenes": scene_docs,
        "motions": [{
            "scene_idx": it.scene_idx,
            "goal": it.goal.angles.tolist(),
            "configs": it.motion.as_array().tolist(),
            "split": it.split,
        } for it in dataset.items],
    }
    with open(path, "w") as f:
        json.dump(doc, f)
        f.write("\n")


def load_dataset(path):
    with open(path) as f:
        try:
            doc = json.load(f)
        except json.JSONDecodeError as exc:
            raise FileFormatError(f"{path}: not valid JSON: {exc}") from exc
    if doc.get("format_version") != DATASET_FORMAT_VERSION:
        raise VersionError(f"{path}: unsupported format_version "
                           f"{doc.get('format_version')!r}")
    try:
        scenes = [scene_from_dict(s, f"scenes[{i}]")
                  for i, s in enumerate(doc["scenes"])]
        items = []
        for m in doc["motions"]:
            motion = Motion(tuple(JointConfig(c) for c in m["configs"]))
            items.append(DatasetItem(motion, int(m["scene_idx"]),
                                     JointConfig(m["goal"]), m["split"]))
    except (KeyError, TypeError, ValueError) as exc:
        raise SchemaError(f"{path}: malformed dataset document: {exc}") \
            from exc
    return Dataset(scenes, items)
