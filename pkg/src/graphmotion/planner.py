"""Online bi-directional planning with virtual interpolations, plus the
dynamic-environment replanning executor.

The planner grows a forward branch from the start and a backward branch
from the goal. Each iteration both tips are advanced by the learned
motion generator, the advance segments are collision-checked, and a
straight joint-space bridge between the tips is attempted. A single
infeasible prediction aborts the run with a failure status; failures are
data, not exceptions.
"""

import time
from dataclasses import dataclass, field

import numpy as np

from .errors import ContractError
from .geometry import config_collides, motion_collides
from .gnn import forward
from .graphcon import build_graph
from .kinematics import JointConfig, Motion, interpolate, within_limits
from .oracle import resample_motion
from .scene import arm_state_at

STATUS_SUCCESS = "success"
STATUS_INFEASIBLE = "infeasible_prediction"
STATUS_STEP_LIMIT = "step_limit"
STATUS_TIMEOUT = "timeout"


@dataclass(frozen=True)
class PlanOptions:
    delta_steps: int = 80
    check_step: float = 0.05
    time_budget: float = 60.0


@dataclass
class PlanOutcome:
    status: str
    motion: "Motion | None"
    iterations: int
    wall_time: float
    log: list = field(default_factory=list)

    @property
    def success(self):
        return self.status == STATUS_SUCCESS


def stitch(forward_branch, backward_branch, bridge):
    """forward + bridge interior + reversed backward, junctions deduplicated."""
    if bridge[0] != forward_branch[-1] or bridge[-1] != backward_branch[-1]:
        raise ContractError("bridge endpoints must match the branch tips")
    configs = list(forward_branch.configs)
    for cfg in bridge.configs[1:]:
        if cfg != configs[-1]:
            configs.append(cfg)
    for cfg in reversed(backward_branch.configs[:-1]):
        if cfg != configs[-1]:
            configs.append(cfg)
    return Motion(tuple(configs))


def _prediction_ok(model_scene, robot, prev, pred, check_step):
    """Feasibility of one branch advance: limits, point, and segment."""
    if not within_limits(robot, pred):
        return False
    if config_collides(robot, model_scene, pred):
        return False
    return not motion_collides(robot, model_scene, prev, pred, check_step)


def plan_bidirectional(model, scene, start, goal, opts=PlanOptions()):
    """Learned bi-directional planning with virtual interpolation connects."""
    robot = scene.robot
    for label, cfg in (("start", start), ("goal", goal)):
        if not within_limits(robot, cfg):
            raise ContractError(f"{label} is out of joint limits")
        if config_collides(robot, scene, cfg):
            raise ContractError(f"{label} is in collision")
    t0 = time.perf_counter()
    if start == goal:
        return PlanOutcome(STATUS_SUCCESS, Motion((start,)), 0,
                           time.perf_counter() - t0)
    branch_a = [start]
    branch_b = [goal]
    log = []
    bridge = interpolate(start, goal, opts.check_step)
    blocked = motion_collides(robot, scene, start, goal, opts.check_step)
    step = 0
    while blocked:
        if time.perf_counter() - t0 > opts.time_budget:
            return PlanOutcome(STATUS_TIMEOUT, None, step,
                               time.perf_counter() - t0, log)
        tip_a, tip_b = branch_a[-1], branch_b[-1]
        pred_a = forward(model, build_graph(scene, tip_a, goal))
        pred_b = forward(model, build_graph(scene, tip_b, start))
        feasible = (
            _prediction_ok(scene, robot, tip_a, pred_a, opts.check_step) and
            _prediction_ok(scene, robot, tip_b, pred_b, opts.check_step))
        if not feasible:
            log.append({"iteration": step, "forward": pred_a.angles.tolist(),
                        "backward": pred_b.angles.tolist(),
                        "connected": False, "feasible": False})
            return PlanOutcome(STATUS_INFEASIBLE, None, step,
                               time.perf_counter() - t0, log)
        if step >= opts.delta_steps:
            return PlanOutcome(STATUS_STEP_LIMIT, None, step,
                               time.perf_counter() - t0, log)
        branch_a.append(pred_a)
        branch_b.append(pred_b)
        bridge = interpolate(pred_a, pred_b, opts.check_step)
        blocked = motion_collides(robot, scene, pred_a, pred_b,
                                  opts.check_step)
        log.append({"iteration": step, "forward": pred_a.angles.tolist(),
                    "backward": pred_b.angles.tolist(),
                    "connected": not blocked, "feasible": True})
        step += 1
    motion = stitch(Motion(tuple(branch_a)), Motion(tuple(branch_b)), bridge)
    return PlanOutcome(STATUS_SUCCESS, motion, step,
                       time.perf_counter() - t0, log)


def plan_single_direction(model, scene, start, goal, opts=PlanOptions()):
    """One-directional ablation: forward branch only, connect to the goal."""
    robot = scene.robot
    for label, cfg in (("start", start), ("goal", goal)):
        if not within_limits(robot, cfg):
            raise ContractError(f"{label} is out of joint limits")
        if config_collides(robot, scene, cfg):
            raise ContractError(f"{label} is in collision")
    t0 = time.perf_counter()
    if start == goal:
        return PlanOutcome(STATUS_SUCCESS, Motion((start,)), 0,
                           time.perf_counter() - t0)
    branch = [start]
    log = []
    bridge = interpolate(start, goal, opts.check_step)
    blocked = motion_collides(robot, scene, start, goal, opts.check_step)
    step = 0
    while blocked:
        if time.perf_counter() - t0 > opts.time_budget:
            return PlanOutcome(STATUS_TIMEOUT, None, step,
                               time.perf_counter() - t0, log)
        tip = branch[-1]
        pred = forward(model, build_graph(scene, tip, goal))
        if not _prediction_ok(scene, robot, tip, pred, opts.check_step):
            log.append({"iteration": step, "forward": pred.angles.tolist(),
                        "connected": False, "feasible": False})
            return PlanOutcome(STATUS_INFEASIBLE, None, step,
                               time.perf_counter() - t0, log)
        if step >= opts.delta_steps:
            return PlanOutcome(STATUS_STEP_LIMIT, None, step,
                               time.perf_counter() - t0, log)
        branch.append(pred)
        bridge = interpolate(pred, goal, opts.check_step)
        blocked = motion_collides(robot, scene, pred, goal, opts.check_step)
        log.append({"iteration": step, "forward": pred.angles.tolist(),
                    "connected": not blocked, "feasible": True})
        step += 1
    motion = stitch(Motion(tuple(branch)), Motion((goal,)), bridge)
    return PlanOutcome(STATUS_SUCCESS, motion, step,
                       time.perf_counter() - t0, log)


EXEC_DONE = "goal_reached"
EXEC_STUCK = "stuck"
EXEC_TIME_CAP = "time_cap"


@dataclass(frozen=True)
class ExecOptions:
    tick: float = 0.1
    resample_step: float = 0.1
    max_time: float = 60.0
    max_replan_failures: int = 100
    lookahead: float = 0.4     # also recheck against the arm this far ahead
    waypoints_per_tick: int = 2
    evade_horizon: float = 1.0  # clear-of-arm window required when evading
    seed: int = 0               # drives the evasion direction sampling
    plan: PlanOptions = PlanOptions()


@dataclass
class ReplanEvent:
    time: float
    trigger: object        # JointConfig where the replan was requested
    succeeded: bool
    new_tail_len: int


@dataclass
class ExecutionLog:
    status: str
    executed: list                  # JointConfig per tick
    replan_events: list
    collision_flags: list           # per-tick config collision check
    ticks: int


def execute_with_replanning(model, scene, trace, start, goal,
                            opts=ExecOptions()):
    """Waypoint-at-a-time execution with full-remaining-path rechecks.

    Each tick the arm snapshot advances, the entire remaining motion is
    rechecked against it, and a predicted collision triggers a replan
    from the current configuration.
    """
    robot = scene.robot
    scene_now = scene.with_arm(arm_state_at(trace, 0.0))
    if config_collides(robot, scene_now, start):
        raise ContractError("start collides with the arm at t=0")

    def plan_from(cfg, scn, scn_ahead):
        # the moving arm may transiently cover either endpoint; that is a
        # failed replan attempt (hold and retry), not a contract violation
        try:
            outcome = plan_bidirectional(model, scn, cfg, goal, opts.plan)
        except ContractError:
            return None
        if not outcome.success:
            return None
        motion = resample_motion(outcome.motion, opts.resample_step)
        # the first advance must also clear the arm's near-future pose,
        # or the very next tick would start from inside the sweep
        first = min(opts.waypoints_per_tick, len(motion) - 1)
        for i in range(first):
            if motion_collides(robot, scn_ahead, motion[i], motion[i + 1],
                               opts.plan.check_step):
                return None
        return motion

    rng = np.random.default_rng(opts.seed)
    horizon_offsets = np.arange(0.0, opts.evade_horizon + 1e-9, opts.tick)

    def time_to_collision(config, now):
        """Seconds until the arm first sweeps over this configuration."""
        for s in horizon_offsets:
            if config_collides(robot,
                               scene.with_arm(arm_state_at(trace, now + s)),
                               config):
                return s
        return np.inf

    def evade_step(current, now, scene_now, scene_next):
        """The reachable nearby configuration that stays clear longest.

        The escape edge is only one tick long, so it is checked against
        the arm at departure and arrival — not the planning lookahead,
        which would veto every escape once the arm is close.
        """
        reach = opts.waypoints_per_tick * opts.resample_step
        best, best_ttc = None, time_to_collision(current, now)
        for _ in range(40):
            cand = JointConfig(current.angles
                               + rng.uniform(-reach, reach, robot.dof))
            if not within_limits(robot, cand):
                continue
            if any(motion_collides(robot, scn, current, cand,
                                   opts.plan.check_step)
                   for scn in (scene_now, scene_next)):
                continue
            ttc = time_to_collision(cand, now)
            if ttc > best_ttc:
                best, best_ttc = cand, ttc
            if ttc == np.inf:
                break
        return best

    executed = [start]
    flags = [False]
    events = []
    pending = plan_from(start, scene_now,
                        scene.with_arm(arm_state_at(trace, opts.lookahead)))
    consec_failures = 0
    if pending is None:
        consec_failures = 1
        pending = Motion((start,))
    idx = 0  # position within pending
    t = 0.0
    ticks = 0
    status = EXEC_TIME_CAP
    while t <= opts.max_time:
        current = pending[idx]
        if current == goal and consec_failures == 0:
            status = EXEC_DONE
            break
        t += opts.tick
        ticks += 1
        scene_now = scene.with_arm(arm_state_at(trace, t))
        scene_ahead = scene.with_arm(arm_state_at(trace, t + opts.lookahead))
        remaining = pending.configs[idx:]
        needs_replan = consec_failures > 0
        if not needs_replan:
            for scn in (scene_now, scene_ahead):
                if len(remaining) == 1:
                    needs_replan = config_collides(robot, scn, remaining[0])
                for i in range(len(remaining) - 1):
                    if motion_collides(robot, scn, remaining[i],
                                       remaining[i + 1],
                                       opts.plan.check_step):
                        needs_replan = True
                        break
                if needs_replan:
                    break
        if needs_replan:
            new_motion = plan_from(current, scene_now, scene_ahead)
            if new_motion is None:
                consec_failures += 1
                events.append(ReplanEvent(t, current, False, 0))
                if consec_failures >= opts.max_replan_failures:
                    status = EXEC_STUCK
                    break
                # if the arm will sweep over the current configuration
                # soon, sidestep to one that stays clear; otherwise fall
                # back to retreating along the executed history, and as a
                # last resort hold position this tick
                step_to = current
                danger = time_to_collision(current, t) < np.inf
                if danger:
                    scene_next = scene.with_arm(arm_state_at(trace,
                                                             t + opts.tick))
                    cand = evade_step(current, t, scene_now, scene_next)
                    if cand is not None:
                        step_to = cand
                if danger and step_to == current:
                    j = len(executed) - 1
                    for _ in range(opts.waypoints_per_tick):
                        while j >= 0 and executed[j] == step_to:
                            j -= 1
                        if j < 0:
                            break
                        prev = executed[j]
                        if any(motion_collides(robot, scn, step_to, prev,
                                               opts.plan.check_step)
                               for scn in (scene_now, scene_next)):
                            break
                        step_to = prev
                if step_to != current:
                    pending = Motion((step_to,))
                    idx = 0
                executed.append(step_to)
                flags.append(config_collides(robot, scene_now, step_to))
                continue
            events.append(ReplanEvent(t, current, True, len(new_motion)))
            consec_failures = 0
            pending = new_motion
            idx = 0
        idx = min(idx + opts.waypoints_per_tick, len(pending) - 1)
        executed.append(pending[idx])
        flags.append(config_collides(robot, scene_now, pending[idx]))
    return ExecutionLog(status, executed, events, flags, ticks)
