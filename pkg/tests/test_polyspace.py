import random
from fractions import Fraction

import pytest

from helpers import random_rig, random_world_point
from rigidview.cameras import ProjectivePoint, forward_map
from rigidview.constraints import octic_value, polarize, unit_distance_form
from rigidview.polyspace import (
    MultiHomogPoly,
    all_octics_symbolic,
    expand_octic_symbolic,
    expand_wedge_symbolic,
    generator_count,
    ideal_component_basis,
    monomial_basis,
    multidegree_of,
    random_rank_prime,
    span_dimension,
    variable_index,
)
from rigidview.triangulation import assemble_b, wedge5


def random_image_point(rng):
    while True:
        c = tuple(Fraction(rng.randint(-9, 9), rng.randint(1, 4)) for _ in range(3))
        if any(x != 0 for x in c):
            return c


class TestPolyBasics:
    def test_variable_indexing(self):
        assert variable_index(2, "u", 0, 0) == 0
        assert variable_index(2, "u", 1, 2) == 5
        assert variable_index(2, "v", 0, 0) == 6
        assert variable_index(3, "v", 2, 1) == 16

    def test_multidegree(self):
        exps = (2, 0, 0, 1, 1, 0, 0, 0, 0, 0, 0, 0)
        assert multidegree_of(exps) == (2, 2, 0, 0)

    def test_mixed_degrees_rejected(self):
        with pytest.raises(ValueError):
            MultiHomogPoly(2, {(1,) + (0,) * 11: 1, (2,) + (0,) * 11: 1})

    def test_addition_and_cancellation(self):
        x = MultiHomogPoly.variable(2, "u", 0, 0)
        y = MultiHomogPoly.variable(2, "u", 0, 1)
        s = x + y
        assert len(s.terms) == 2
        assert (s - x - y).is_zero()

    def test_multiplication_degrees_add(self):
        x = MultiHomogPoly.variable(2, "u", 0, 0)
        y = MultiHomogPoly.variable(2, "v", 1, 2)
        assert (x * y).multidegree == (1, 0, 0, 1)

    def test_monomial_basis_sizes(self):
        assert len(monomial_basis(2, (2, 2, 2, 2))) == 6 ** 4
        assert len(monomial_basis(2, (1, 1, 0, 0))) == 9
        assert len(monomial_basis(2, (1, 1, 2, 2))) == 3 * 3 * 6 * 6

    def test_basis_order_deterministic(self):
        basis = monomial_basis(1, (2, 0))
        assert basis[0][:3] == (2, 0, 0)
        assert basis[1][:3] == (1, 1, 0)
        assert basis[-1][:3] == (0, 0, 2)

    def test_json_round_trip(self):
        p = MultiHomogPoly(2, {(1, 0, 0, 0, 1, 0, 0, 0, 0, 0, 0, 0): Fraction(3, 2),
                               (0, 1, 0, 1, 0, 0, 0, 0, 0, 0, 0, 0): -2})
        doc = p.to_json()
        assert doc["degree"] == [1, 1, 0, 0]
        assert MultiHomogPoly.from_json(doc) == p


class TestWedgeExpansion:
    def test_numeric_agreement(self):
        rng = random.Random(307)
        rig = random_rig(rng, 2)
        for row in range(6):
            polys = expand_wedge_symbolic(rig, 0, 1, row)
            for _ in range(20):
                u0 = random_image_point(rng)
                u1 = random_image_point(rng)
                b = assemble_b(rig, 0, 1, ProjectivePoint(u0), ProjectivePoint(u1))
                numeric = wedge5(b, row)[:4]
                for c in range(4):
                    symbolic = polys[c].evaluate([u0, u1], [(1, 1, 1), (1, 1, 1)])
                    assert symbolic == numeric[c]

    def test_bilinear_degree(self):
        rng = random.Random(311)
        rig = random_rig(rng, 2)
        for row in (0, 3, 5):
            for poly in expand_wedge_symbolic(rig, 0, 1, row):
                if not poly.is_zero():
                    assert poly.multidegree == (1, 1, 0, 0)

    def test_v_side_block(self):
        rng = random.Random(313)
        rig = random_rig(rng, 2)
        poly = expand_wedge_symbolic(rig, 0, 1, 0, side="v")[0]
        assert poly.multidegree == (0, 0, 1, 1)

    def test_coefficient_is_signed_minor(self):
        # coefficient of u_(1,1) u_(2,0) in the first cofactor coordinate for
        # the row-0-deleted matrix: minus a 3x3 minor of the stacked cameras
        rng = random.Random(317)
        for _ in range(5):
            rig = random_rig(rng, 2)
            a1 = rig.camera(0).matrix
            a2 = rig.camera(1).matrix
            poly = expand_wedge_symbolic(rig, 0, 1, 0)[0]
            exps = [0] * 12
            exps[variable_index(2, "u", 0, 1)] = 1
            exps[variable_index(2, "u", 1, 0)] = 1
            got = poly.coefficient(tuple(exps))
            expected = -(a1[2, 1] * a2[1, 2] * a2[2, 3] - a1[2, 1] * a2[1, 3] * a2[2, 2]
                         - a1[2, 2] * a2[1, 1] * a2[2, 3] + a1[2, 2] * a2[1, 3] * a2[2, 1]
                         + a1[2, 3] * a2[1, 1] * a2[2, 2] - a1[2, 3] * a2[1, 2] * a2[2, 1])
            assert got == expected


class TestOcticExpansion:
    def test_multidegree(self):
        rng = random.Random(331)
        rig = random_rig(rng, 2)
        t = polarize(unit_distance_form())
        poly = expand_octic_symbolic(rig, t, (0, 1, 0, 0), (0, 1, 0, 0))
        assert poly.multidegree == (2, 2, 2, 2)
        assert len(poly.terms) <= 1296

    def test_numeric_agreement(self):
        rng = random.Random(337)
        rig = random_rig(rng, 2)
        t = polarize(unit_distance_form())
        for sel in (((0, 1, 0, 0), (0, 1, 0, 0)), ((0, 1, 1, 3), (0, 1, 2, 5))):
            poly = expand_octic_symbolic(rig, t, *sel)
            for _ in range(20):
                u = (ProjectivePoint(random_image_point(rng)), ProjectivePoint(random_image_point(rng)))
                v = (ProjectivePoint(random_image_point(rng)), ProjectivePoint(random_image_point(rng)))
                numeric = octic_value(rig, t, sel[0], sel[1], u, v)
                symbolic = poly.evaluate([u[0].coords, u[1].coords], [v[0].coords, v[1].coords])
                assert symbolic == numeric

    def test_vanishes_at_member_images(self):
        rng = random.Random(347)
        rig = random_rig(rng, 2)
        t = polarize(unit_distance_form())
        poly = expand_octic_symbolic(rig, t, (0, 1, 2, 2), (0, 1, 1, 1))
        x = ProjectivePoint((0, 0, 0, 1))
        y = ProjectivePoint((1, 0, 0, 1))
        u, v = forward_map(rig, x), forward_map(rig, y)
        assert poly.evaluate([p.coords for p in u], [p.coords for p in v]) == 0


class TestSpanDimension:
    def test_single_polynomial(self):
        p = MultiHomogPoly.variable(2, "u", 0, 0)
        assert span_dimension([p]) == 1

    def test_scalar_multiple_collapses(self):
        p = MultiHomogPoly.variable(2, "u", 0, 0)
        assert span_dimension([p, p * 5]) == 1
        assert span_dimension([p, p * Fraction(1, 3)], modulus=2 ** 31 - 1) == 1

    def test_independent_pair(self):
        p = MultiHomogPoly.variable(2, "u", 0, 0)
        q = MultiHomogPoly.variable(2, "u", 0, 1)
        assert span_dimension([p, q]) == 2

    def test_mixed_degrees_rejected(self):
        p = MultiHomogPoly.variable(2, "u", 0, 0)
        q = MultiHomogPoly.variable(2, "v", 0, 0)
        with pytest.raises(ValueError):
            span_dimension([p, q])

    def test_modp_matches_exact_on_small_family(self):
        rng = random.Random(353)
        rig = random_rig(rng, 2)
        t = polarize(unit_distance_form())
        cache = {}
        polys = [expand_octic_symbolic(rig, t, (0, 1, i, i), (0, 1, k, k), cache)
                 for i in range(3) for k in range(3)]
        exact = span_dimension(polys)
        p = random_rank_prime(rng)
        assert span_dimension(polys, p) == exact

    def test_permutation_and_scaling_invariance(self):
        rng = random.Random(359)
        rig = random_rig(rng, 2)
        t = polarize(unit_distance_form())
        cache = {}
        polys = [expand_octic_symbolic(rig, t, (0, 1, i, i), (0, 1, 0, 0), cache)
                 for i in range(4)]
        base = span_dimension(polys)
        shuffled = list(polys)
        rng.shuffle(shuffled)
        scaled = [q * Fraction(rng.randint(1, 9), rng.randint(1, 9)) for q in shuffled]
        assert span_dimension(scaled) == base


class TestSpanFacts:
    def test_441_octics_span_126_and_quotient_9(self):
        rng = random.Random(367)
        rig = random_rig(rng, 2)
        t = polarize(unit_distance_form())
        octics = all_octics_symbolic(rig, t)
        assert len(octics) == 441
        p = random_rank_prime(rng)
        assert span_dimension(octics, p) == 126
        component = ideal_component_basis(rig)
        assert len(component) == 648
        base = span_dimension(component, p)
        union = span_dimension(component + octics, p)
        assert union - base == 9


class TestIdealComponent:
    def test_count_and_degree(self):
        rng = random.Random(373)
        rig = random_rig(rng, 2)
        component = ideal_component_basis(rig)
        assert len(component) == 648
        assert all(p.multidegree == (2, 2, 2, 2) for p in component)

    def test_vanishes_at_arbitrary_image_pairs(self):
        rng = random.Random(379)
        rig = random_rig(rng, 2)
        component = ideal_component_basis(rig)
        for _ in range(3):
            x = ProjectivePoint(random_world_point(rng))
            y = ProjectivePoint(random_world_point(rng))
            u, v = forward_map(rig, x), forward_map(rig, y)
            us = [p.coords for p in u]
            vs = [p.coords for p in v]
            for poly in random.Random(1).sample(component, 40):
                assert poly.evaluate(us, vs) == 0

    def test_three_cameras_unsupported(self):
        rng = random.Random(383)
        rig = random_rig(rng, 3)
        with pytest.raises(ValueError):
            ideal_component_basis(rig)


class TestGeneratorCount:
    def test_known_totals(self):
        assert generator_count(2).total == 11
        assert generator_count(3).total == 177
        assert generator_count(4).total == 1176
        assert generator_count(5).total == 4940

    def test_class_breakdown_two_cameras(self):
        counts = generator_count(2).by_label()
        assert counts["110..000.."] == 2
        assert counts["220..220.."] == 9
        assert sum(counts.values()) == 11

    def test_class_breakdown_three_cameras(self):
        counts = generator_count(3).by_label()
        assert counts["110..000.."] == 6
        assert counts["111..000.."] == 2
        assert counts["220..220.."] == 81
        assert counts["220..211.."] == 54
        assert counts["220..111.."] == 18
        assert counts["211..211.."] == 9
        assert counts["211..111.."] == 6
        assert counts["111..111.."] == 1

    def test_consistency_up_to_twelve(self):
        for n in range(2, 13):
            gc = generator_count(n)
            assert sum(c.count for c in gc.classes) == gc.total

    def test_small_n_rejected(self):
        with pytest.raises(ValueError):
            generator_count(1)
