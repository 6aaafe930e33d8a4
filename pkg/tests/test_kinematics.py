"""Angle wrapping, forward kinematics, interpolation, path length."""

import numpy as np
import pytest
from numpy.testing import assert_allclose

from graphmotion.errors import ContractError
from graphmotion.kinematics import (JointConfig, Motion, RobotModel,
                                    angle_diff, ee_path_length,
                                    forward_kinematics, interpolate,
                                    within_limits, wrap_angles)

from conftest import cfg, fk_oracle


class TestWrapping:
    def test_wrap_range(self):
        xs = np.linspace(-20, 20, 2001)
        w = wrap_angles(xs)
        assert np.all(w >= -np.pi) and np.all(w < np.pi)

    def test_wrap_identity_inside(self):
        xs = np.array([-3.0, -1.0, 0.0, 1.0, 3.0])
        assert_allclose(wrap_angles(xs), xs, atol=1e-15)

    def test_wrap_pi_maps_to_minus_pi(self):
        assert wrap_angles(np.pi) == -np.pi
        assert wrap_angles(-np.pi) == -np.pi

    def test_wrap_periodic(self):
        xs = np.linspace(-3, 3, 101)
        assert_allclose(wrap_angles(xs + 2 * np.pi), xs, atol=1e-12)

    def test_angle_diff_simple(self):
        assert_allclose(angle_diff(0.3, 0.1), 0.2, atol=1e-15)

    def test_angle_diff_across_seam(self):
        # pi-0.1 and -pi+0.1 are 0.2 apart the short way
        assert_allclose(angle_diff(np.pi - 0.1, -np.pi + 0.1), -0.2,
                        atol=1e-12)

    def test_angle_diff_antisymmetric(self):
        rng = np.random.default_rng(0)
        a = rng.uniform(-np.pi, np.pi, 100)
        b = rng.uniform(-np.pi, np.pi, 100)
        assert_allclose(angle_diff(a, b), -angle_diff(b, a), atol=1e-12)


class TestRobotModel:
    def test_dof(self, planar_robot):
        assert planar_robot.dof == 2

    def test_arrays_write_locked(self, planar_robot):
        with pytest.raises(ValueError):
            planar_robot.dh[0, 0] = 9.9

    def test_bad_limits_rejected(self):
        with pytest.raises(ContractError):
            RobotModel(np.array([[1.0, 0, 0, 0]]),
                       np.array([[1.0, -1.0]]), np.array([0.05]))

    def test_bad_radii_rejected(self):
        with pytest.raises(ContractError):
            RobotModel(np.array([[1.0, 0, 0, 0]]),
                       np.array([[-1.0, 1.0]]), np.array([0.0]))


class TestJointConfig:
    def test_wraps_at_construction(self):
        assert cfg(3 * np.pi / 2) == cfg(-np.pi / 2)

    def test_hash_consistent_with_eq(self):
        a, b = cfg(0.5, -0.25), cfg(0.5, -0.25)
        assert a == b and hash(a) == hash(b)

    def test_rejects_nonfinite(self):
        with pytest.raises(ContractError):
            cfg(np.nan)

    def test_rejects_empty(self):
        with pytest.raises(ContractError):
            JointConfig(np.array([]))


class TestForwardKinematics:
    def test_planar_straight(self, planar_robot):
        # [DERIVED] both joints at zero: arm along +x, ee at 0.75
        pts = forward_kinematics(planar_robot, cfg(0.0, 0.0))
        assert_allclose(pts, [[0, 0, 0], [0.4, 0, 0], [0.75, 0, 0]],
                        atol=1e-15)

    def test_planar_elbow_bend(self, planar_robot):
        # [DERIVED] first joint up 90deg, elbow back 90deg
        pts = forward_kinematics(planar_robot, cfg(np.pi / 2, -np.pi / 2))
        assert_allclose(pts, [[0, 0, 0], [0, 0.4, 0], [0.35, 0.4, 0]],
                        atol=1e-12)

    def test_matches_homogeneous_matrix_oracle(self):
        rng = np.random.default_rng(7)
        for _ in range(50):
            q = int(rng.integers(1, 7))
            dh = rng.uniform(-1, 1, size=(q, 4))
            robot = RobotModel(dh, np.tile([-np.pi, np.pi], (q, 1)),
                               np.full(q, 0.05))
            angles = rng.uniform(-np.pi, np.pi, q)
            got = forward_kinematics(robot, JointConfig(angles))
            want = fk_oracle(dh, JointConfig(angles).angles)
            assert_allclose(got, want, atol=1e-12)

    def test_dimension_mismatch(self, planar_robot):
        with pytest.raises(ContractError):
            forward_kinematics(planar_robot, cfg(0.0))


class TestLimits:
    def test_interval_closed(self, planar_robot):
        assert within_limits(planar_robot, cfg(3.0, -3.0))
        assert not within_limits(planar_robot, cfg(3.01, 0.0))


class TestInterpolate:
    def test_endpoints_exact(self):
        a, b = cfg(0.1, 0.2), cfg(1.0, -1.0)
        m = interpolate(a, b, 0.25)
        assert m[0] == a and m[-1] == b

    def test_step_bound(self):
        rng = np.random.default_rng(3)
        for _ in range(50):
            a = JointConfig(rng.uniform(-np.pi, np.pi, 3))
            b = JointConfig(rng.uniform(-np.pi, np.pi, 3))
            m = interpolate(a, b, 0.2)
            arr = m.as_array()
            steps = np.abs(angle_diff(arr[1:], arr[:-1]))
            assert np.max(steps) <= 0.2 + 1e-12

    def test_reversal_exact(self):
        rng = np.random.default_rng(4)
        for _ in range(50):
            a = JointConfig(rng.uniform(-np.pi, np.pi, 2))
            b = JointConfig(rng.uniform(-np.pi, np.pi, 2))
            fwd = interpolate(a, b, 0.3)
            back = interpolate(b, a, 0.3)
            assert fwd.configs == back.reversed().configs

    def test_shortest_direction_across_seam(self):
        # [DERIVED] 3 -> -3 the short way sweeps 2*pi - 6 ~ 0.28319 rad
        m = interpolate(cfg(3.0), cfg(-3.0), 0.05)
        arr = m.as_array()[:, 0]
        swept = float(np.sum(np.abs(angle_diff(arr[1:], arr[:-1]))))
        assert_allclose(swept, 2 * np.pi - 6.0, atol=1e-9)
        # and never takes the long way round
        assert swept < 0.3

    def test_same_endpoint(self):
        m = interpolate(cfg(0.5), cfg(0.5), 0.1)
        assert len(m) == 1

    def test_bad_step(self):
        with pytest.raises(ContractError):
            interpolate(cfg(0.0), cfg(1.0), 0.0)


class TestMotion:
    def test_reversed(self):
        m = Motion((cfg(0.0), cfg(0.5), cfg(1.0)))
        assert m.reversed().configs == (cfg(1.0), cfg(0.5), cfg(0.0))

    def test_mixed_dof_rejected(self):
        with pytest.raises(ContractError):
            Motion((cfg(0.0), cfg(0.0, 0.0)))

    def test_as_array_shape(self):
        m = Motion((cfg(0.0, 0.1), cfg(0.2, 0.3)))
        assert m.as_array().shape == (2, 2)


class TestPathLength:
    def test_quarter_turn_arc(self, one_link_robot):
        # [DERIVED] unit link turning pi/2 sweeps an arc of length pi/2
        m = Motion((cfg(0.0), cfg(np.pi / 2)))
        got = ee_path_length(one_link_robot, m, 0.001)
        assert_allclose(got, np.pi / 2, rtol=1e-4)

    def test_single_config_is_zero(self, one_link_robot):
        assert ee_path_length(one_link_robot, Motion((cfg(0.3),)), 0.01) == 0.0

    def test_waypoint_split_invariant(self, planar_robot):
        # inserting an on-path waypoint must not change the length
        a, mid, b = cfg(0.0, 0.0), cfg(0.25, 0.25), cfg(0.5, 0.5)
        whole = ee_path_length(planar_robot, Motion((a, b)), 0.001)
        split = ee_path_length(planar_robot, Motion((a, mid, b)), 0.001)
        assert_allclose(whole, split, rtol=1e-6)
