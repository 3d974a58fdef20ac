import random

import pytest

from helpers import naive_det, random_rig, random_world_point, standard_rig
from rigidview.cameras import CameraRig, ProjectivePoint, forward_map, projectively_equal
from rigidview.linalg import Mat, det, rank
from rigidview.triangulation import (
    NotInVarietyError,
    NotTriangulableError,
    assemble_b,
    is_triangulable,
    triangulate,
    wedge5,
    wedge5_point,
)


def epipole_pair(rig):
    return (rig.epipole(0, 1), rig.epipole(1, 0))


class TestAssembleB:
    def test_block_layout(self):
        rig = standard_rig()
        b = assemble_b(rig, 0, 1, ProjectivePoint((0, 0, 1)), ProjectivePoint((1, 0, 1)))
        m = b.mat
        assert m.col(4) == (0, 0, 1, 0, 0, 0)
        assert m.col(5) == (0, 0, 0, 1, 0, 1)
        assert m.submatrix(range(3), range(4)) == rig.camera(0).matrix
        assert m.submatrix(range(3, 6), range(4)) == rig.camera(1).matrix

    def test_consistent_pair_has_zero_determinant(self):
        rig = standard_rig()
        b = assemble_b(rig, 0, 1, ProjectivePoint((0, 0, 1)), ProjectivePoint((1, 0, 1)))
        assert naive_det(b.mat) == 0
        assert det(b.mat) == 0

    def test_generic_pair_has_nonzero_determinant(self):
        rig = standard_rig()
        b = assemble_b(rig, 0, 1, ProjectivePoint((1, 2, 3)), ProjectivePoint((5, -1, 2)))
        assert det(b.mat) == naive_det(b.mat) != 0

    def test_epipole_pair_has_rank_four(self):
        rng = random.Random(61)
        for _ in range(5):
            rig = random_rig(rng, 2)
            b = assemble_b(rig, 0, 1, *epipole_pair(rig))
            assert rank(b.mat).rank == 4


class TestWedge:
    def test_consistent_pair_recovers_intersection(self):
        rig = standard_rig()
        b = assemble_b(rig, 0, 1, ProjectivePoint((0, 0, 1)), ProjectivePoint((1, 0, 1)))
        expected = ProjectivePoint((0, 0, 1, 1))
        found = 0
        for i in range(6):
            p = wedge5_point(b, i)
            if p is not None:
                assert p == expected
                found += 1
        assert found > 0

    def test_epipole_pair_wedges_all_vanish(self):
        rng = random.Random(67)
        rig = random_rig(rng, 2)
        b = assemble_b(rig, 0, 1, *epipole_pair(rig))
        for i in range(6):
            assert wedge5(b, i) == (0,) * 6

    def test_random_consistent_pair_wedges_parallel_to_source(self):
        rng = random.Random(71)
        for _ in range(10):
            rig = random_rig(rng, 2)
            x = ProjectivePoint(random_world_point(rng))
            u = forward_map(rig, x)
            b = assemble_b(rig, 0, 1, u[0], u[1])
            for i in range(6):
                p = wedge5_point(b, i)
                if p is not None:
                    assert p == x

    def test_cramer_row_structure(self):
        # B applied to the row-i cofactor vector is supported on row i only
        rng = random.Random(73)
        rig = random_rig(rng, 2)
        u = (ProjectivePoint((3, 1, 4)), ProjectivePoint((1, 5, 9)))
        b = assemble_b(rig, 0, 1, u[0], u[1])
        for i in range(6):
            image = b.mat.apply(wedge5(b, i))
            for r in range(6):
                if r != i:
                    assert image[r] == 0


class TestIsTriangulable:
    def test_epipole_pair_not_triangulable(self):
        rng = random.Random(79)
        rig = random_rig(rng, 2)
        assert is_triangulable(rig, epipole_pair(rig)) is None

    def test_other_variety_points_triangulable(self):
        rng = random.Random(83)
        rig = random_rig(rng, 2)
        for _ in range(10):
            x = ProjectivePoint(random_world_point(rng))
            w = is_triangulable(rig, forward_map(rig, x))
            assert w is not None

    def test_three_cameras_always_triangulable(self):
        rng = random.Random(89)
        rig = random_rig(rng, 3)
        for _ in range(10):
            x = ProjectivePoint(random_world_point(rng))
            assert is_triangulable(rig, forward_map(rig, x)) is not None

    def test_nonmember_raises(self):
        rng = random.Random(97)
        rig = random_rig(rng, 2)
        u = (ProjectivePoint((1, 2, 3)), ProjectivePoint((4, 5, 6)))
        f = rig.fundamental(0, 1)
        bil = sum(u[0][a] * f[a, b] * u[1][b] for a in range(3) for b in range(3))
        assert bil != 0
        with pytest.raises(NotInVarietyError):
            is_triangulable(rig, u)


class TestTriangulate:
    def test_simple_example(self):
        rig = standard_rig()
        sol = triangulate(rig, (ProjectivePoint((0, 0, 1)), ProjectivePoint((1, 0, 1))))
        assert sol.point == ProjectivePoint((0, 0, 1, 1))
        assert sol.rank_of_b == 5

    def test_round_trip(self):
        rng = random.Random(101)
        for n in (2, 3, 4):
            rig = random_rig(rng, n)
            for _ in range(5):
                x = ProjectivePoint(random_world_point(rng))
                sol = triangulate(rig, forward_map(rig, x))
                assert sol.point == x

    def test_stored_representatives_reproject_exactly(self):
        rng = random.Random(103)
        rig = random_rig(rng, 3)
        x = ProjectivePoint(random_world_point(rng))
        u = forward_map(rig, x)
        sol = triangulate(rig, u)
        j, k = sol.witness.j, sol.witness.k
        lam_j, lam_k = sol.lambdas
        assert rig.camera(j).matrix.apply(sol.point.coords) == tuple(lam_j * c for c in u[j].coords)
        assert rig.camera(k).matrix.apply(sol.point.coords) == tuple(lam_k * c for c in u[k].coords)

    def test_epipole_pair_raises(self):
        rng = random.Random(107)
        rig = random_rig(rng, 2)
        with pytest.raises(NotTriangulableError):
            triangulate(rig, epipole_pair(rig))

    def test_nonmember_raises(self):
        rig = standard_rig()
        with pytest.raises(NotInVarietyError):
            triangulate(rig, (ProjectivePoint((1, 2, 3)), ProjectivePoint((3, 1, 9))))

    def test_float_backend(self):
        rig = standard_rig()
        float_rig = CameraRig([c.matrix.to_float() for c in rig.cameras])
        u = (ProjectivePoint((0.0, 0.0, 1.0)), ProjectivePoint((1.0, 0.0, 1.0)))
        sol = triangulate(float_rig, u, tol=1e-9)
        assert projectively_equal(sol.point, ProjectivePoint((0.0, 0.0, 1.0, 1.0)), tol=1e-9)


class TestRankDichotomy:
    def test_rank_four_only_at_epipole_pair(self):
        # two cameras: sampled points of the variety have rank-5 B except the epipole pair
        rng = random.Random(109)
        for _ in range(5):
            rig = random_rig(rng, 2)
            ep = epipole_pair(rig)
            b = assemble_b(rig, 0, 1, *ep)
            assert rank(b.mat).rank == 4
            for _ in range(10):
                x = ProjectivePoint(random_world_point(rng))
                u = forward_map(rig, x)
                if u[0] == ep[0] and u[1] == ep[1]:
                    continue
                b = assemble_b(rig, 0, 1, u[0], u[1])
                assert rank(b.mat).rank == 5
