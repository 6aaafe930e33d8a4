"""Benchmark harness: run planners over identical scenario sets and
aggregate path cost / planning time / success rate per planner.

Cost and time statistics are computed over successes only; N per cell is
disclosed. The rrt_star rows support a per-scenario stop rule terminating
once the path cost is within a fraction of the learned planner's cost.
"""

import hashlib
import json
from dataclasses import dataclass, field, replace as dc_replace

import numpy as np

from .errors import ContractError
from .geometry import path_is_free
from .kinematics import ee_path_length
from .oracle import StopRule, plan_rrt, plan_rrt_star
from .planner import plan_bidirectional, plan_single_direction

REPORT_FORMAT_VERSION = 1

PLANNER_NAMES = ("kg_bi", "kg_single", "rrt", "rrt_star")

# keys stripped before hashing an emitted document: wall-clock measurements
# are real results but not reproducible bit-for-bit
VOLATILE_KEYS = frozenset({"wall_time", "time", "timing", "elapsed",
                           "mean_time", "std_time", "payload_sha256"})


@dataclass
class ScenarioResult:
    planner: str
    scenario: int
    success: bool
    status: str
    cost: float        # nan on failure
    time: float
    verified_free: "bool | None" = None


@dataclass
class PlannerRow:
    name: str
    n_attempts: int
    n_successes: int
    mean_cost: float
    std_cost: float
    mean_time: float
    std_time: float

    @property
    def success_rate(self):
        return self.n_successes / self.n_attempts if self.n_attempts else 0.0


@dataclass
class BenchReport:
    rows: list
    records: list
    config: dict = field(default_factory=dict)


def _aggregate(name, records):
    ok = [r for r in records if r.success]
    costs = np.array([r.cost for r in ok]) if ok else np.array([])
    times = np.array([r.time for r in ok]) if ok else np.array([])
    return PlannerRow(
        name, len(records), len(ok),
        float(costs.mean()) if ok else float("nan"),
        float(costs.std()) if ok else float("nan"),
        float(times.mean()) if ok else float("nan"),
        float(times.std()) if ok else float("nan"))


def run_benchmark(model, scenarios, planners, params, plan_opts,
                  stop_fraction=0.10, verify=True, verify_factor=10):
    """Run each requested planner on every scenario.

    scenarios: list of ScenarioSpec. params: oracle PlannerParams (the seed
    is re-derived per scenario for determinism). If rrt_star is requested
    together with kg_bi, its per-scenario cost threshold is
    (1 + stop_fraction) * the kg_bi cost; without a kg_bi cost it runs to
    its caps.
    """
    unknown = set(planners) - set(PLANNER_NAMES)
    if unknown:
        raise ContractError(f"unknown planners: {sorted(unknown)}")
    records = {p: [] for p in planners}
    kg_costs = {}
    ordered = [p for p in PLANNER_NAMES if p in planners]
    for name in ordered:
        for idx, spec in enumerate(scenarios):
            robot = spec.scene.robot
            sparams = dc_replace(params, seed=params.seed + 7919 * idx)
            if name == "kg_bi":
                out = plan_bidirectional(model, spec.scene, spec.start,
                                         spec.goal, plan_opts)
                motion, status, t = out.motion, out.status, out.wall_time
            elif name == "kg_single":
                out = plan_single_direction(model, spec.scene, spec.start,
                                            spec.goal, plan_opts)
                motion, status, t = out.motion, out.status, out.wall_time
            elif name == "rrt":
                res = plan_rrt(spec.scene, spec.start, spec.goal, sparams)
                motion = res.motion
                status = "success" if res.success else "failure"
                t = res.elapsed
            else:  # rrt_star
                threshold = None
                if idx in kg_costs and np.isfinite(kg_costs[idx]):
                    threshold = (1.0 + stop_fraction) * kg_costs[idx]
                res = plan_rrt_star(spec.scene, spec.start, spec.goal,
                                    sparams, StopRule(threshold))
                motion = res.motion
                status = "success" if res.success else "failure"
                t = res.elapsed
            success = motion is not None
            cost = float("nan")
            verified = None
            if success:
                cost = ee_path_length(robot, motion, plan_opts.check_step)
                if verify:
                    verified = path_is_free(
                        robot, spec.scene, motion,
                        plan_opts.check_step / verify_factor)
            if name == "kg_bi" and success:
                kg_costs[idx] = cost
            records[name].append(ScenarioResult(
                name, idx, success, status, cost, t, verified))
    rows = [_aggregate(p, records[p]) for p in ordered]
    flat = [r for p in ordered for r in records[p]]
    return BenchReport(rows, flat)


def report_to_dict(report):
    return {
        "format_version": REPORT_FORMAT_VERSION,
        "config": report.config,
        "rows": [{
            "name": r.name,
            "n_attempts": r.n_attempts,
            "n_successes": r.n_successes,
            "success_rate": r.success_rate,
            "mean_cost": r.mean_cost,
            "std_cost": r.std_cost,
            "mean_time": r.mean_time,
            "std_time": r.std_time,
        } for r in report.rows],
        "records": [{
            "planner": r.planner,
            "scenario": r.scenario,
            "success": r.success,
            "status": r.status,
            "cost": r.cost,
            "time": r.time,
            "verified_free": r.verified_free,
        } for r in report.records],
    }


def report_to_csv_lines(report):
    lines = ["planner,n_attempts,n_successes,success_rate,"
             "mean_cost,std_cost,mean_time,std_time"]
    for r in report.rows:
        lines.append(f"{r.name},{r.n_attempts},{r.n_successes},"
                     f"{r.success_rate:.6f},{r.mean_cost:.6f},"
                     f"{r.std_cost:.6f},{r.mean_time:.6f},{r.std_time:.6f}")
    return lines


def _strip_volatile(obj):
    if isinstance(obj, dict):
        return {k: _strip_volatile(v) for k, v in sorted(obj.items())
                if k not in VOLATILE_KEYS}
    if isinstance(obj, list):
        return [_strip_volatile(v) for v in obj]
    return obj


def payload_hash(doc):
    """SHA-256 of the canonical JSON serialization with wall-clock fields
    removed; re-runs with identical seeds and inputs hash identically."""
    canon = json.dumps(_strip_volatile(doc), sort_keys=True,
                       separators=(",", ":"))
    return hashlib.sha256(canon.encode()).hexdigest()
