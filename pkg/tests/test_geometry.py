"""Collision primitives against sampling-based references."""

import numpy as np
import pytest
from numpy.testing import assert_allclose

from graphmotion.backend import kernels
from graphmotion.errors import ContractError
from graphmotion.geometry import (Box, Capsule, capsule_box_collides,
                                  capsule_capsule_collides, config_collides,
                                  motion_collides, path_is_free)

from conftest import (cfg, point_box_dist2, seg_box_dist2_sampled,
                      seg_seg_dist2_sampled)


class TestBox:
    def test_corner_order(self):
        b = Box(np.zeros(3), np.ones(3))
        want = [[0, 0, 0], [0, 0, 1], [0, 1, 0], [0, 1, 1],
                [1, 0, 0], [1, 0, 1], [1, 1, 0], [1, 1, 1]]
        assert_allclose(b.corners(), want)

    def test_inverted_rejected(self):
        with pytest.raises(ContractError):
            Box(np.ones(3), np.zeros(3))

    def test_degenerate_allowed(self):
        b = Box(np.zeros(3), np.array([1.0, 0.0, 1.0]))
        assert b.corners().shape == (8, 3)


class TestSegBoxDistance:
    def test_inside_is_zero(self):
        d2 = kernels.seg_box_dist2(np.array([0.5, 0.5, 0.5]),
                                   np.array([0.6, 0.5, 0.5]),
                                   np.zeros(3), np.ones(3))
        assert d2 == 0.0

    def test_crossing_is_zero(self):
        d2 = kernels.seg_box_dist2(np.array([-1.0, 0.5, 0.5]),
                                   np.array([2.0, 0.5, 0.5]),
                                   np.zeros(3), np.ones(3))
        assert d2 == 0.0

    def test_face_distance(self):
        # [DERIVED] segment parallel to the +x face at clearance 0.25
        d2 = kernels.seg_box_dist2(np.array([1.25, 0.2, 0.2]),
                                   np.array([1.25, 0.8, 0.8]),
                                   np.zeros(3), np.ones(3))
        assert_allclose(d2, 0.0625, atol=1e-14)

    def test_corner_distance(self):
        # [DERIVED] point-like approach to the (1,1,1) corner
        p = np.array([2.0, 2.0, 2.0])
        d2 = kernels.seg_box_dist2(p, p + np.array([1.0, 1.0, 1.0]),
                                   np.zeros(3), np.ones(3))
        assert_allclose(d2, 3.0, atol=1e-12)

    def test_matches_dense_sampling(self):
        rng = np.random.default_rng(11)
        for _ in range(100):
            lo = rng.uniform(-1, 0.5, 3)
            hi = lo + rng.uniform(0.05, 1.5, 3)
            p0 = rng.uniform(-2, 2, 3)
            p1 = rng.uniform(-2, 2, 3)
            exact = kernels.seg_box_dist2(p0, p1, lo, hi)
            sampled = seg_box_dist2_sampled(p0, p1, lo, hi)
            # exact min can only be below any sampled value
            assert exact <= sampled + 1e-12
            assert abs(exact - sampled) < 5e-6

    def test_degenerate_segment_equals_point_distance(self):
        rng = np.random.default_rng(12)
        for _ in range(50):
            lo = rng.uniform(-1, 0, 3)
            hi = lo + rng.uniform(0.1, 1, 3)
            p = rng.uniform(-2, 2, 3)
            exact = kernels.seg_box_dist2(p, p, lo, hi)
            assert_allclose(exact, point_box_dist2(p, lo, hi), atol=1e-12)


class TestSegSegDistance:
    def test_crossing_lines(self):
        d2 = kernels.seg_seg_dist2(np.array([-1.0, 0.0, 0.0]),
                                   np.array([1.0, 0.0, 0.0]),
                                   np.array([0.0, -1.0, 0.0]),
                                   np.array([0.0, 1.0, 0.0]))
        assert d2 == 0.0

    def test_parallel_offset(self):
        d2 = kernels.seg_seg_dist2(np.zeros(3), np.array([1.0, 0.0, 0.0]),
                                   np.array([0.0, 0.5, 0.0]),
                                   np.array([1.0, 0.5, 0.0]))
        assert_allclose(d2, 0.25, atol=1e-14)

    def test_skew_gap(self):
        # [DERIVED] perpendicular skew lines with vertical gap 0.3
        d2 = kernels.seg_seg_dist2(np.array([-1.0, 0.0, 0.0]),
                                   np.array([1.0, 0.0, 0.0]),
                                   np.array([0.0, -1.0, 0.3]),
                                   np.array([0.0, 1.0, 0.3]))
        assert_allclose(d2, 0.09, atol=1e-14)

    def test_both_degenerate(self):
        d2 = kernels.seg_seg_dist2(np.zeros(3), np.zeros(3),
                                   np.array([3.0, 4.0, 0.0]),
                                   np.array([3.0, 4.0, 0.0]))
        assert_allclose(d2, 25.0, atol=1e-12)

    def test_matches_dense_sampling(self):
        rng = np.random.default_rng(13)
        for _ in range(100):
            p1, q1, p2, q2 = rng.uniform(-1, 1, (4, 3))
            exact = kernels.seg_seg_dist2(p1, q1, p2, q2)
            sampled = seg_seg_dist2_sampled(p1, q1, p2, q2)
            assert exact <= sampled + 1e-12
            assert abs(exact - sampled) < 5e-4


class TestCapsuleQueries:
    def test_capsule_box_touch(self):
        cap = Capsule(np.array([1.05, 0.5, 0.5]),
                      np.array([2.0, 0.5, 0.5]), 0.1)
        assert capsule_box_collides(cap, Box(np.zeros(3), np.ones(3)))

    def test_capsule_box_clear(self):
        cap = Capsule(np.array([1.55, 0.5, 0.5]),
                      np.array([2.0, 0.5, 0.5]), 0.1)
        assert not capsule_box_collides(cap, Box(np.zeros(3), np.ones(3)))

    def test_capsule_capsule_radius_sum(self):
        a = Capsule(np.zeros(3), np.array([1.0, 0.0, 0.0]), 0.2)
        b = Capsule(np.array([0.5, 0.35, 0.0]),
                    np.array([1.5, 0.35, 0.0]), 0.2)
        assert capsule_capsule_collides(a, b)   # gap 0.35 < 0.4
        c = Capsule(np.array([0.5, 0.45, 0.0]),
                    np.array([1.5, 0.45, 0.0]), 0.2)
        assert not capsule_capsule_collides(a, c)  # gap 0.45 > 0.4

    def test_bad_radius(self):
        with pytest.raises(ContractError):
            Capsule(np.zeros(3), np.ones(3), 0.0)


class TestSceneQueries:
    def test_config_hits_box(self, boxed_scene, planar_robot):
        # straight arm reaches into the box on the +x axis
        assert config_collides(planar_robot, boxed_scene, cfg(0.0, 0.0))

    def test_config_clear_of_box(self, boxed_scene, planar_robot):
        assert not config_collides(planar_robot, boxed_scene,
                                   cfg(np.pi / 2, 0.0))

    def test_motion_sweep_detects_intermediate_hit(self, boxed_scene,
                                                   planar_robot):
        # endpoints are free but the sweep passes through the box
        a, b = cfg(0.5, 0.0), cfg(-0.5, 0.0)
        assert not config_collides(planar_robot, boxed_scene, a)
        assert not config_collides(planar_robot, boxed_scene, b)
        assert motion_collides(planar_robot, boxed_scene, a, b, 0.02)

    def test_motion_free(self, boxed_scene, planar_robot):
        assert not motion_collides(planar_robot, boxed_scene,
                                   cfg(1.5, 0.0), cfg(2.0, 0.0), 0.02)

    def test_path_is_free_consistency(self, boxed_scene, planar_robot):
        from graphmotion.kinematics import Motion
        free = Motion((cfg(1.5, 0.0), cfg(1.8, 0.0), cfg(2.1, 0.0)))
        hit = Motion((cfg(0.5, 0.0), cfg(-0.5, 0.0)))
        assert path_is_free(planar_robot, boxed_scene, free, 0.02)
        assert not path_is_free(planar_robot, boxed_scene, hit, 0.02)

    def test_empty_scene_never_collides(self, empty_scene, planar_robot):
        rng = np.random.default_rng(1)
        for _ in range(20):
            c = cfg(*rng.uniform(-3, 3, 2))
            assert not config_collides(planar_robot, empty_scene, c)
