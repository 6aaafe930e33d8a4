"""Regenerate the scene and trace files shipped under graphmotion/data/.

Run from the repository root: python3 scripts/make_scenes.py
"""

import os

import numpy as np

from graphmotion.geometry import Box
from graphmotion.kinematics import RobotModel
from graphmotion.scene import (ArmSweepParams, SceneState, StaticObstacle,
                               save_scene, save_trace, synth_arm_trace)

HERE = os.path.dirname(os.path.abspath(__file__))
SCENES = os.path.join(HERE, "..", "src", "graphmotion", "data", "scenes")
TRACES = os.path.join(HERE, "..", "src", "graphmotion", "data", "traces")


def planar_robot():
    return RobotModel(
        dh=np.array([[0.4, 0.0, 0.0, 0.0], [0.35, 0.0, 0.0, 0.0]]),
        joint_limits=np.array([[-3.0, 3.0], [-3.0, 3.0]]),
        link_radii=np.array([0.04, 0.04]))


def ur5e_like_robot():
    # standard-DH UR5e parameter table
    dh = np.array([
        [0.0, np.pi / 2, 0.1625, 0.0],
        [-0.425, 0.0, 0.0, 0.0],
        [-0.3922, 0.0, 0.0, 0.0],
        [0.0, np.pi / 2, 0.1333, 0.0],
        [0.0, -np.pi / 2, 0.0997, 0.0],
        [0.0, 0.0, 0.0996, 0.0],
    ])
    limits = np.array([[-3.141, 3.141]] * 6)
    radii = np.array([0.06, 0.05, 0.05, 0.04, 0.04, 0.04])
    return RobotModel(dh, limits, radii)


def obstacle(name, lo, hi):
    return StaticObstacle(Box(np.array(lo), np.array(hi)), name)


def main():
    os.makedirs(SCENES, exist_ok=True)
    os.makedirs(TRACES, exist_ok=True)
    planar = planar_robot()
    ur = ur5e_like_robot()

    save_scene(SceneState(planar, (
        obstacle("wall_left", [0.50, -0.85, -0.20], [0.60, -0.30, 0.20]),
        obstacle("wall_right", [0.50, 0.30, -0.20], [0.60, 0.85, 0.20]),
    )), os.path.join(SCENES, "planar_gap.json"))

    save_scene(SceneState(planar, (
        obstacle("box_ne", [0.38, 0.38, -0.15], [0.68, 0.68, 0.15]),
        obstacle("box_sw", [-0.68, -0.68, -0.15], [-0.38, -0.38, 0.15]),
    )), os.path.join(SCENES, "planar_two_boxes.json"))

    # dynamic planar world: one static box plus a synthetic arm sweep
    sweep = synth_arm_trace(ArmSweepParams(
        region=Box(np.array([0.25, -0.5, -0.05]), np.array([0.55, 0.5, 0.05])),
        amplitude=0.5, period=4.0, duration=12.0, dt=0.05), seed=7)
    save_trace(sweep, os.path.join(TRACES, "planar_sweep.json"))
    save_scene(SceneState(planar, (
        obstacle("box_nw", [-0.62, 0.32, -0.15], [-0.32, 0.62, 0.15]),
    )), os.path.join(SCENES, "planar_dynamic.json"),
        arm_trace_path="../traces/planar_sweep.json")

    desk = obstacle("desktop", [-0.9, -0.9, -0.30], [0.9, 0.9, -0.08])
    save_scene(SceneState(ur, (
        desk,
        obstacle("monitor", [0.45, -0.30, -0.08], [0.55, 0.30, 0.32]),
        obstacle("screwdriver_box", [-0.20, 0.45, -0.08], [0.10, 0.65, 0.07]),
        obstacle("container", [-0.60, -0.55, -0.08], [-0.30, -0.25, 0.12]),
    )), os.path.join(SCENES, "desk_a.json"))

    save_scene(SceneState(ur, (
        desk,
        obstacle("monitor", [-0.55, -0.30, -0.08], [-0.45, 0.30, 0.32]),
        obstacle("screwdriver_box", [0.30, 0.40, -0.08], [0.60, 0.60, 0.07]),
        obstacle("container", [0.30, -0.60, -0.08], [0.60, -0.30, 0.12]),
    )), os.path.join(SCENES, "desk_b.json"))

    save_scene(SceneState(ur, (
        desk,
        obstacle("monitor", [-0.30, 0.45, -0.08], [0.30, 0.55, 0.32]),
        obstacle("screwdriver_box", [0.40, -0.60, -0.08], [0.60, -0.30, 0.07]),
        obstacle("container", [-0.60, -0.60, -0.08], [-0.30, -0.30, 0.12]),
        obstacle("parts_tray", [0.45, 0.20, -0.08], [0.65, 0.40, 0.02]),
    )), os.path.join(SCENES, "desk_c.json"))

    save_scene(SceneState(ur, (
        desk,
        obstacle("monitor", [-0.30, -0.55, -0.08], [0.30, -0.45, 0.32]),
        obstacle("container", [0.35, 0.35, -0.08], [0.65, 0.65, 0.12]),
    )), os.path.join(SCENES, "desk_d.json"))
    print("scene and trace files written")


if __name__ == "__main__":
    main()
