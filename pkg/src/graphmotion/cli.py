"""Command-line entry point.

Subcommands: gen-data, train, plan, bench, replay. All outputs are JSON
or CSV with a format_version and a config echo; wall-clock timings live
in fields that are excluded from the reproducibility hash (see
bench.payload_hash).

Exit codes: 0 success, 1 input error, 2 runtime failure, 3 divergence.
"""

import argparse
import hashlib
import json
import os
import sys

import numpy as np

from . import bench, gnn, oracle, planner, scene as scene_mod
from .bench import payload_hash, report_to_csv_lines, report_to_dict
from .errors import (ContractError, DivergenceError, FileFormatError,
                     GraphMotionError, SchemaError, VersionError)
from .kinematics import JointConfig, ee_path_length, forward_kinematics, interpolate
from .scene import ScenarioSpec, load_scene, load_trace, sample_free_config

OUTPUT_FORMAT_VERSION = 1


def _file_sha256(path):
    h = hashlib.sha256()
    with open(path, "rb") as f:
        h.update(f.read())
    return h.hexdigest()


def _parse_config(text, dof=None):
    try:
        values = [float(x) for x in text.split(",")]
    except ValueError as exc:
        raise ContractError(f"bad configuration {text!r}: {exc}") from exc
    cfg = JointConfig(np.array(values))
    if dof is not None and cfg.dof != dof:
        raise ContractError(
            f"configuration {text!r} has {cfg.dof} joints, expected {dof}")
    return cfg


def _load_scene_with_trace(path):
    scn = load_scene(path)
    trace_path = scene_mod.scene_trace_path(path)
    trace = None
    if trace_path:
        if not os.path.isabs(trace_path):
            trace_path = os.path.join(os.path.dirname(path), trace_path)
        trace = load_trace(trace_path)
    return scn, trace


def _planner_params(args):
    return oracle.PlannerParams(
        steer_step=args.steer_step, goal_bias=args.goal_bias,
        rewire_radius=args.rewire_radius, max_time=args.max_time,
        max_iters=args.max_iters, seed=args.seed,
        check_step=args.check_step)


def _add_oracle_flags(p, max_time=8.0, max_iters=200_000):
    p.add_argument("--steer-step", type=float, default=0.2)
    p.add_argument("--goal-bias", type=float, default=0.1)
    p.add_argument("--rewire-radius", type=float, default=0.6)
    p.add_argument("--max-time", type=float, default=max_time)
    p.add_argument("--max-iters", type=int, default=max_iters)
    p.add_argument("--check-step", type=float, default=0.05)


def _write_json(doc, path):
    doc["payload_sha256"] = payload_hash(doc)
    with open(path, "w") as f:
        json.dump(doc, f, indent=2)
        f.write("\n")


def cmd_gen_data(args):
    workspaces = []
    traces = {}
    for i, path in enumerate(args.scene):
        scn, trace = _load_scene_with_trace(path)
        workspaces.append(scn)
        if trace is not None:
            traces[i] = trace
    params = _planner_params(args)
    dataset, stats = oracle.generate_dataset(
        workspaces, args.count, params, args.seed,
        resample_step=args.resample_step, traces=traces)
    oracle.save_dataset(dataset, args.out)
    for i, fails in enumerate(stats.per_workspace_failures):
        print(f"workspace {i} ({args.scene[i]}): "
              f"{args.count - fails}/{args.count} scenarios solved")
    print(f"wrote {len(dataset.items)} motions to {args.out}")
    return 0


def cmd_train(args):
    dataset = oracle.load_dataset(args.dataset)
    samples = dataset.samples("train")
    if not samples:
        raise ContractError(f"{args.dataset}: no training motions")
    q = samples[0].motion.dof
    model = gnn.init_model(q, hidden=args.hidden, layers=args.layers,
                           seed=args.seed)
    hyper = gnn.TrainConfig(lr=args.lr, batch_motions=args.batch,
                            max_epochs=args.epochs, patience=args.patience,
                            seed=args.seed)
    result = gnn.train(model, samples, hyper)
    gnn.save_model(result.model, args.out)
    curve_path = args.curve_out or args.out + ".curve.csv"
    with open(curve_path, "w") as f:
        f.write("epoch,train_loss,val_loss\n")
        for epoch, tr, vl in result.curve:
            f.write(f"{epoch},{float(tr)!r},{float(vl)!r}\n")
    final = result.curve[-1] if result.curve else (None, None, None)
    print(f"wrote model to {args.out} ({len(result.curve)} epochs, "
          f"final val loss {final[2]})")
    return 0


def _outcome_dict(outcome):
    return {
        "status": outcome.status,
        "iterations": outcome.iterations,
        "motion": outcome.motion.as_array().tolist()
        if outcome.motion else None,
        "log": outcome.log,
        "timing": {"wall_time": outcome.wall_time},
    }


def cmd_plan(args):
    model = gnn.load_model(args.model)
    scn, _ = _load_scene_with_trace(args.scene)
    start = _parse_config(args.start, scn.robot.dof)
    goal = _parse_config(args.goal, scn.robot.dof)
    opts = planner.PlanOptions(delta_steps=args.delta,
                               check_step=args.check_step,
                               time_budget=args.time_budget)
    outcome = planner.plan_bidirectional(model, scn, start, goal, opts)
    doc = {
        "format_version": OUTPUT_FORMAT_VERSION,
        "config": {
            "command": "plan",
            "model": _file_sha256(args.model),
            "scene": _file_sha256(args.scene),
            "start": start.angles.tolist(),
            "goal": goal.angles.tolist(),
            "delta": args.delta,
            "check_step": args.check_step,
            "seed": args.seed,
        },
        "outcome": _outcome_dict(outcome),
    }
    if outcome.motion is not None:
        doc["outcome"]["cost"] = ee_path_length(
            scn.robot, outcome.motion, args.check_step)
    _write_json(doc, args.out)
    if args.ee_csv and outcome.motion is not None:
        with open(args.ee_csv, "w") as f:
            f.write("x,y,z\n")
            motion = outcome.motion
            dense = [motion[0]]
            for i in range(len(motion) - 1):
                seg = interpolate(motion[i], motion[i + 1], args.check_step)
                dense.extend(seg.configs[1:])
            for cfg in dense:
                pt = forward_kinematics(scn.robot, cfg)[-1]
                f.write(f"{float(pt[0])!r},{float(pt[1])!r},"
                        f"{float(pt[2])!r}\n")
    print(f"{outcome.status}: wrote {args.out}")
    return 0 if outcome.success else 2


def _sample_scenarios(scenes, count, seed):
    specs = []
    for s_idx, scn in enumerate(scenes):
        for i in range(count):
            ss = np.random.SeedSequence(entropy=seed,
                                        spawn_key=(s_idx, i, 77))
            state = ss.generate_state(2)
            start = sample_free_config(scn, int(state[0]))
            goal = sample_free_config(scn, int(state[1]))
            specs.append(ScenarioSpec(scn, start, goal))
    return specs


def cmd_bench(args):
    model = gnn.load_model(args.model)
    scenes = [load_scene(p) for p in args.scene]
    planners = [p.strip() for p in args.planners.split(",") if p.strip()]
    scenarios = _sample_scenarios(scenes, args.count, args.seed)
    params = _planner_params(args)
    plan_opts = planner.PlanOptions(delta_steps=args.delta,
                                    check_step=args.check_step,
                                    time_budget=args.time_budget)
    report = bench.run_benchmark(model, scenarios, planners, params,
                                 plan_opts, stop_fraction=args.stop_rule)
    report.config = {
        "command": "bench",
        "model": _file_sha256(args.model),
        "scenes": [_file_sha256(p) for p in args.scene],
        "count": args.count,
        "seed": args.seed,
        "planners": planners,
        "stop_rule": args.stop_rule,
        "delta": args.delta,
        "check_step": args.check_step,
    }
    doc = report_to_dict(report)
    _write_json(doc, args.out)
    if args.csv_out:
        with open(args.csv_out, "w") as f:
            f.write("\n".join(report_to_csv_lines(report)) + "\n")
    for row in report.rows:
        print(f"{row.name}: success {row.success_rate:.1%} "
              f"cost {row.mean_cost:.3f}±{row.std_cost:.3f} m "
              f"time {row.mean_time:.3f}±{row.std_time:.3f} s "
              f"(N={row.n_successes}/{row.n_attempts})")
    return 0


def cmd_replay(args):
    model = gnn.load_model(args.model)
    scn, scene_trace = _load_scene_with_trace(args.scene)
    trace = load_trace(args.trace) if args.trace else scene_trace
    if trace is None:
        raise ContractError("no trace: pass --trace or set arm_trace_path")
    start = _parse_config(args.start, scn.robot.dof)
    goal = _parse_config(args.goal, scn.robot.dof)
    opts = planner.ExecOptions(
        tick=args.tick, resample_step=args.resample_step,
        max_time=args.time_budget, seed=args.seed,
        plan=planner.PlanOptions(delta_steps=args.delta,
                                 check_step=args.check_step,
                                 time_budget=args.time_budget))
    log = planner.execute_with_replanning(model, scn, trace, start, goal,
                                          opts)
    doc = {
        "format_version": OUTPUT_FORMAT_VERSION,
        "config": {
            "command": "replay",
            "model": _file_sha256(args.model),
            "scene": _file_sha256(args.scene),
            "trace": _file_sha256(args.trace) if args.trace else None,
            "start": start.angles.tolist(),
            "goal": goal.angles.tolist(),
            "tick": args.tick,
            "seed": args.seed,
        },
        "log": {
            "status": log.status,
            "ticks": log.ticks,
            "executed": [c.angles.tolist() for c in log.executed],
            "collision_flags": log.collision_flags,
            "replan_events": [{
                "time": ev.time,
                "trigger": ev.trigger.angles.tolist(),
                "succeeded": ev.succeeded,
                "new_tail_len": ev.new_tail_len,
            } for ev in log.replan_events],
        },
    }
    _write_json(doc, args.out)
    print(f"{log.status}: {len(log.replan_events)} replan events, "
          f"wrote {args.out}")
    return 0 if log.status == planner.EXEC_DONE else 2


def build_parser():
    p = argparse.ArgumentParser(prog="graphmotion")
    sub = p.add_subparsers(dest="command", required=True)

    g = sub.add_parser("gen-data", help="generate an oracle dataset")
    g.add_argument("--scene", action="append", required=True)
    g.add_argument("--count", type=int, required=True)
    g.add_argument("--seed", type=int, default=0)
    g.add_argument("--out", required=True)
    g.add_argument("--resample-step", type=float, default=0.1)
    _add_oracle_flags(g)
    g.set_defaults(func=cmd_gen_data)

    t = sub.add_parser("train", help="train the motion generator")
    t.add_argument("--dataset", required=True)
    t.add_argument("--out", required=True)
    t.add_argument("--curve-out")
    t.add_argument("--seed", type=int, default=0)
    t.add_argument("--lr", type=float, default=1e-3)
    t.add_argument("--epochs", type=int, default=200)
    t.add_argument("--batch", type=int, default=16)
    t.add_argument("--patience", type=int, default=20)
    t.add_argument("--hidden", type=int, default=64)
    t.add_argument("--layers", type=int, default=3)
    t.set_defaults(func=cmd_train)

    pl = sub.add_parser("plan", help="plan one scenario")
    pl.add_argument("--model", required=True)
    pl.add_argument("--scene", required=True)
    pl.add_argument("--start", required=True)
    pl.add_argument("--goal", required=True)
    pl.add_argument("--delta", type=int, default=80)
    pl.add_argument("--check-step", type=float, default=0.05)
    pl.add_argument("--time-budget", type=float, default=60.0)
    pl.add_argument("--seed", type=int, default=0)
    pl.add_argument("--out", required=True)
    pl.add_argument("--ee-csv")
    pl.set_defaults(func=cmd_plan)

    b = sub.add_parser("bench", help="benchmark planners on one scenario set")
    b.add_argument("--model", required=True)
    b.add_argument("--scene", action="append", required=True)
    b.add_argument("--count", type=int, default=30)
    b.add_argument("--seed", type=int, default=0)
    b.add_argument("--planners", default="kg_bi,kg_single,rrt,rrt_star")
    b.add_argument("--stop-rule", type=float, default=0.10)
    b.add_argument("--delta", type=int, default=80)
    b.add_argument("--time-budget", type=float, default=60.0)
    b.add_argument("--out", required=True)
    b.add_argument("--csv-out")
    _add_oracle_flags(b)
    b.set_defaults(func=cmd_bench)

    r = sub.add_parser("replay", help="dynamic-environment replay")
    r.add_argument("--model", required=True)
    r.add_argument("--scene", required=True)
    r.add_argument("--trace")
    r.add_argument("--start", required=True)
    r.add_argument("--goal", required=True)
    r.add_argument("--tick", type=float, default=0.1)
    r.add_argument("--resample-step", type=float, default=0.1)
    r.add_argument("--delta", type=int, default=80)
    r.add_argument("--check-step", type=float, default=0.05)
    r.add_argument("--time-budget", type=float, default=60.0)
    r.add_argument("--seed", type=int, default=0)
    r.add_argument("--out", required=True)
    r.set_defaults(func=cmd_replay)
    return p


def main(argv=None):
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except DivergenceError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 3
    except (FileNotFoundError, FileFormatError, SchemaError, VersionError,
            ContractError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except GraphMotionError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
