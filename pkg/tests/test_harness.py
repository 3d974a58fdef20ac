import math
import random
from fractions import Fraction

import pytest

from rigidview.cameras import CameraRig, ProjectivePoint, forward_map
from rigidview.constraints import unit_distance_form
from rigidview.harness import (
    InfeasibleScenarioError,
    Scene,
    make_scene,
    numeric_dimension,
    random_affine_point,
    random_camera,
    random_rig,
    refine_rigid_pair,
    run_experiment,
    sample_scaled_pair,
    sample_unit_pair,
    stereo_direction,
)
from rigidview.linalg import rank


def to_float_rig(rig):
    return CameraRig([c.matrix.to_float() for c in rig.cameras])


def affine_obs(tup):
    return [(float(p[0]) / float(p[2]), float(p[1]) / float(p[2])) for p in tup]


class TestRandomGeneration:
    def test_camera_determinism(self):
        assert random_camera(42) == random_camera(42)
        assert random_camera(42) != random_camera(43)

    def test_cameras_have_rank_three(self):
        rng = random.Random(0)
        for _ in range(200):
            assert rank(random_camera(rng)).rank == 3

    def test_entry_ranges(self):
        rng = random.Random(5)
        m = random_camera(rng, height=20)
        assert all(0 <= x < 20 for row in m.data for x in row)
        m2 = random_camera(rng, height=5, signed=True)
        assert all(-5 <= x <= 5 for row in m2.data for x in row)

    def test_height_validation(self):
        with pytest.raises(ValueError):
            random_camera(1, height=1)

    def test_rig_general_position(self):
        for n in (2, 3, 4, 5):
            rig = random_rig(7, n)
            assert rig.n == n
            assert rig.general_position.ok

    def test_rig_determinism(self):
        a = random_rig(9, 3)
        b = random_rig(9, 3)
        assert all(x.matrix == y.matrix for x, y in zip(a.cameras, b.cameras))


class TestUnitPairSampling:
    def test_stereo_examples(self):
        assert stereo_direction(0, 0) == (0, 0, -1)
        assert stereo_direction(1, 0) == (1, 0, 0)

    def test_direction_on_unit_sphere(self):
        rng = random.Random(13)
        for _ in range(50):
            p = Fraction(rng.randint(-30, 30), rng.randint(1, 30))
            q = Fraction(rng.randint(-30, 30), rng.randint(1, 30))
            d = stereo_direction(p, q)
            assert sum(c * c for c in d) == 1

    def test_unit_pairs_exactly_unit_distance(self):
        q = unit_distance_form()
        rng = random.Random(17)
        for _ in range(200):
            x, y = sample_unit_pair(rng)
            assert q.evaluate(x.coords, y.coords) == 0

    def test_scaled_pair_distance(self):
        q = unit_distance_form()
        x, y = sample_scaled_pair(23, 3)
        # squared distance 9, so the unit form evaluates to 8
        assert q.evaluate(x.coords, y.coords) == 8

    def test_affine_chart(self):
        x = random_affine_point(29)
        assert x.coords[3] == 1


class TestScene:
    def test_noiseless_scene_consistent(self):
        rig = random_rig(31, 2)
        x, y = sample_unit_pair(31)
        scene = make_scene(rig, [x, y])
        for pt, tup in zip(scene.world_points, scene.image_tuples):
            expected = forward_map(rig, pt)
            assert all(a == b for a, b in zip(tup, expected))

    def test_noisy_scene_close_but_not_exact(self):
        rig = random_rig(37, 3)
        x, y = sample_unit_pair(37)
        scene = make_scene(rig, [x, y], sigma=1e-3, seed=99)
        assert isinstance(scene, Scene)
        exact = affine_obs(forward_map(rig, x))
        noisy = affine_obs(scene.image_tuples[0])
        deltas = [abs(a[0] - b[0]) + abs(a[1] - b[1]) for a, b in zip(exact, noisy)]
        assert all(d < 0.1 for d in deltas)
        assert any(d > 0 for d in deltas)

    def test_noise_determinism(self):
        rig = random_rig(41, 2)
        x, y = sample_unit_pair(41)
        a = make_scene(rig, [x, y], sigma=1e-3, seed=7)
        b = make_scene(rig, [x, y], sigma=1e-3, seed=7)
        for ta, tb in zip(a.image_tuples, b.image_tuples):
            assert all(pa.coords == pb.coords for pa, pb in zip(ta, tb))


class TestNumericDimension:
    def test_rigid_pair_is_five(self):
        rig = to_float_rig(random_rig(43, 2))
        assert numeric_dimension(rig, "rigid_pair", seed=1) == 5

    def test_rigid_pair_three_cameras(self):
        rig = to_float_rig(random_rig(47, 3))
        assert numeric_dimension(rig, "rigid_pair", seed=1) == 5

    def test_coplanar_four_is_eleven(self):
        rig = to_float_rig(random_rig(53, 2))
        assert numeric_dimension(rig, "coplanar_4", seed=1) == 11

    def test_pairwise_generic_is_six(self):
        rig = to_float_rig(random_rig(59, 2))
        assert numeric_dimension(rig, "pairwise_3", {"d12": 1, "d13": 1, "d23": 1}, seed=1) == 6

    def test_pairwise_degenerate_is_five(self):
        rig = to_float_rig(random_rig(61, 2))
        assert numeric_dimension(rig, "pairwise_3", {"d12": 1, "d13": 1, "d23": 2}, seed=1) == 5

    def test_triangle_violation_is_infeasible(self):
        rig = to_float_rig(random_rig(67, 2))
        with pytest.raises(InfeasibleScenarioError):
            numeric_dimension(rig, "pairwise_3", {"d12": 1, "d13": 2, "d23": 5}, seed=1)

    def test_exact_rig_rejected(self):
        rig = random_rig(71, 2)
        with pytest.raises(ValueError):
            numeric_dimension(rig, "rigid_pair", seed=1)


class TestRefinement:
    def test_noiseless_recovery(self):
        rig = random_rig(73, 3)
        frig = to_float_rig(rig)
        x, y = sample_unit_pair(73)
        obs_u = affine_obs(forward_map(rig, x))
        obs_v = affine_obs(forward_map(rig, y))
        res = refine_rigid_pair(frig, obs_u, obs_v)
        assert res.residual < 1e-12
        for got, want in zip(res.x, x.coords[:3]):
            assert got == pytest.approx(float(want), abs=1e-5)

    def test_descent_on_noisy_input(self):
        rig = random_rig(79, 3)
        frig = to_float_rig(rig)
        for idx in range(10):
            x, y = sample_unit_pair(random.Random(f"descent:{idx}"))
            scene = make_scene(rig, [x, y], sigma=1e-3, seed=idx)
            res = refine_rigid_pair(frig, affine_obs(scene.image_tuples[0]),
                                    affine_obs(scene.image_tuples[1]))
            assert res.residual <= res.initial_residual

    def test_constraint_enforced(self):
        rig = random_rig(83, 3)
        frig = to_float_rig(rig)
        x, y = sample_unit_pair(83)
        scene = make_scene(rig, [x, y], sigma=1e-4, seed=3)
        res = refine_rigid_pair(frig, affine_obs(scene.image_tuples[0]),
                                affine_obs(scene.image_tuples[1]))
        q = sum((a - b) ** 2 for a, b in zip(res.x, res.y)) - 1
        assert abs(q) <= 1e-14

    def test_float_rig_required(self):
        rig = random_rig(89, 3)
        with pytest.raises(ValueError):
            refine_rigid_pair(rig, [(0, 0)] * 3, [(0, 0)] * 3)


class TestExperiments:
    def test_unknown_tag(self):
        with pytest.raises(ValueError):
            run_experiment("NO_SUCH_TAG")

    @pytest.mark.parametrize("tag,config", [
        ("VANISH", {"samples": 3, "seed": 2}),
        ("SEPARATE", {"samples": 3, "seed": 2}),
        ("THM32_EQUIV", {"samples": 6, "seed": 2}),
        ("COR34_SIXTEEN", {"samples": 4, "seed": 2}),
        ("COUNTS", {}),
        ("EPIPOLE_COMPONENT", {"rigs": 2, "probes": 3, "seed": 2}),
        ("GROUP_ACTION", {"samples": 2, "seed": 2}),
        ("COPLANAR", {"samples": 2, "seed": 2}),
        ("PAIRWISE_TRIANGLE", {"samples": 3, "seed": 2}),
    ])
    def test_experiments_pass(self, tag, config):
        report = run_experiment(tag, config)
        assert report.passed, report.failures

    def test_span_experiment(self):
        report = run_experiment("SPAN_126_9", {"rigs": 1, "seed": 4})
        assert report.passed, report.failures
        assert report.details["dims"][0]["span"] == 126
        assert report.details["dims"][0]["quotient"] == 9

    def test_report_reproducible(self):
        a = run_experiment("SEPARATE", {"samples": 3, "seed": 11})
        b = run_experiment("SEPARATE", {"samples": 3, "seed": 11})
        assert a.canonical_json() == b.canonical_json()

    def test_report_json_shape(self):
        report = run_experiment("COUNTS", {})
        doc = report.to_json()
        assert doc["experiment"] == "COUNTS"
        assert doc["passed"] is True
        assert "wall_clock_s" in doc
        assert "wall_clock_s" not in report.canonical_json()
