"""Shared fixtures: robots, scenes, and independent reference oracles."""

import os

import numpy as np
import pytest

from graphmotion.geometry import Box
from graphmotion.kinematics import JointConfig, RobotModel
from graphmotion.scene import SceneState, StaticObstacle

DATA_SCENES = os.path.join(os.path.dirname(os.path.dirname(
    os.path.abspath(__file__))), "src", "graphmotion", "data", "scenes")


def scene_path(name):
    return os.path.join(DATA_SCENES, name + ".json")


@pytest.fixture
def planar_robot():
    """2-DOF planar arm: link lengths 0.4 and 0.35, limits +/-3 rad."""
    return RobotModel(
        dh=np.array([[0.4, 0.0, 0.0, 0.0], [0.35, 0.0, 0.0, 0.0]]),
        joint_limits=np.array([[-3.0, 3.0], [-3.0, 3.0]]),
        link_radii=np.array([0.04, 0.04]))


@pytest.fixture
def one_link_robot():
    return RobotModel(
        dh=np.array([[1.0, 0.0, 0.0, 0.0]]),
        joint_limits=np.array([[-3.0, 3.0]]),
        link_radii=np.array([0.05]))


@pytest.fixture
def empty_scene(planar_robot):
    return SceneState(planar_robot, ())


@pytest.fixture
def boxed_scene(planar_robot):
    """A single box sitting on the +x axis, in reach of the arm."""
    box = Box(np.array([0.5, -0.1, -0.1]), np.array([0.7, 0.1, 0.1]))
    return SceneState(planar_robot, (StaticObstacle(box, "box"),))


def cfg(*angles):
    return JointConfig(np.array(angles, dtype=float))


def fk_oracle(dh, angles):
    """Reference forward kinematics via explicit 4x4 homogeneous matrices."""
    t_mat = np.eye(4)
    pts = [t_mat[:3, 3].copy()]
    for (a, alpha, d, off), theta in zip(np.asarray(dh), np.asarray(angles)):
        th = theta + off
        ct, st = np.cos(th), np.sin(th)
        ca, sa = np.cos(alpha), np.sin(alpha)
        step = np.array([
            [ct, -st * ca, st * sa, a * ct],
            [st, ct * ca, -ct * sa, a * st],
            [0.0, sa, ca, d],
            [0.0, 0.0, 0.0, 1.0]])
        t_mat = t_mat @ step
        pts.append(t_mat[:3, 3].copy())
    return np.array(pts)


def point_box_dist2(p, lo, hi):
    d = np.maximum(np.maximum(lo - p, 0.0), p - hi)
    return float(d @ d)


def seg_box_dist2_sampled(p0, p1, lo, hi, n=4001):
    """Dense-sampling reference for segment-to-box squared distance."""
    ts = np.linspace(0.0, 1.0, n)
    pts = np.outer(1 - ts, p0) + np.outer(ts, p1)
    d = np.maximum(np.maximum(lo - pts, 0.0), pts - hi)
    return float(np.min(np.einsum("ij,ij->i", d, d)))


def seg_seg_dist2_sampled(p1, q1, p2, q2, n=401):
    """Dense-grid reference for segment-to-segment squared distance."""
    s = np.linspace(0.0, 1.0, n)
    a = np.outer(1 - s, p1) + np.outer(s, q1)
    b = np.outer(1 - s, p2) + np.outer(s, q2)
    diff = a[:, None, :] - b[None, :, :]
    return float(np.min(np.einsum("ijk,ijk->ij", diff, diff)))
