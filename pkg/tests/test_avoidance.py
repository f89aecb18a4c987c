"""Tests for exact avoidance, component finding, and real topology."""

import pytest
from gmpy2 import mpq

from quartic_bitangents.avoidance import (
    DualPoint,
    components,
    line_avoids,
    real_root_count,
    real_topology,
    restrict_to_line,
    stable_components,
    warped_axis,
)
from quartic_bitangents.errors import ResolutionError
from quartic_bitangents.quartic import LATTICE_POINTS


def fill(values):
    return {p: mpq(values.get(p, 0)) for p in LATTICE_POINTS}


FERMAT = fill({(4, 0): 1, (0, 4): 1, (0, 0): 1})
DEFINITE_MINUS = fill({(4, 0): 1, (0, 4): 1, (0, 0): -1})  # x^4+y^4-z^4
TROTT = fill({
    (4, 0): 144, (0, 4): 144, (2, 0): -225, (0, 2): -225,
    (2, 2): 350, (0, 0): 81,
})


class TestSturm:
    def test_no_real_roots(self):
        # [TRIVIAL: z^4 + 1]
        assert real_root_count([mpq(1), mpq(0), mpq(0), mpq(0), mpq(1)]) == 0

    def test_four_real_roots(self):
        # (z^2-1)(z^2-4) = z^4 - 5z^2 + 4
        assert real_root_count([mpq(4), mpq(0), mpq(-5), mpq(0), mpq(1)]) == 4

    def test_double_root_counted_once(self):
        # (z-1)^2 distinct-root count is 1.
        assert real_root_count([mpq(1), mpq(-2), mpq(1)]) == 1


class TestRestriction:
    def test_restriction_degree_and_values(self):
        # The restriction of f to the line z = 0 through (1,0,0), (0,1,0)
        # recovers the coefficients along the top edge.
        coeffs = restrict_to_line(TROTT, (mpq(0), mpq(0), mpq(1)))
        assert len(coeffs) == 5
        # f(s*p0 + t*p1) is a quartic whose values match direct evaluation.
        from quartic_bitangents.avoidance import evaluate

        # reconstruct the parametrization used for pivot c
        p0, p1 = (mpq(1), mpq(0), mpq(0)), (mpq(0), mpq(1), mpq(0))
        for s, t in ((1, 0), (0, 1), (1, 1), (2, 3), (-1, 5)):
            x = s * p0[0] + t * p1[0]
            y = s * p0[1] + t * p1[1]
            z = s * p0[2] + t * p1[2]
            direct = evaluate(TROTT, x, y, z)
            via = sum(c * mpq(s) ** k * mpq(t) ** (4 - k)
                      for k, c in enumerate(coeffs))
            assert direct == via


class TestLineAvoids:
    def test_fermat_every_line_avoids(self):
        # [DERIVED: x^4+y^4+z^4 > 0 on all of RP^2]
        assert line_avoids(FERMAT, (mpq(1), mpq(2), mpq(3)))
        assert line_avoids(FERMAT, (mpq(1), mpq(0), mpq(0)))

    def test_definite_minus_axis_line_meets(self):
        # The line z = 0 misses the oval of x^4+y^4 = z^4; the line x = 0
        # crosses it.
        assert line_avoids(DEFINITE_MINUS, (mpq(0), mpq(0), mpq(1)))
        assert not line_avoids(DEFINITE_MINUS, (mpq(1), mpq(0), mpq(0)))

    def test_exactness_on_tangent_line(self):
        # z = x + y is tangent-free but z = x touches x^4+y^4=z^4 at
        # (1, 0, 1): tangency counts as meeting.
        assert not line_avoids(DEFINITE_MINUS, (mpq(1), mpq(0), mpq(-1)))


class TestWarpedAxis:
    def test_symmetric_and_sorted(self):
        axis = warped_axis(6, refine=2)
        assert axis == sorted(axis)
        assert [-v for v in reversed(axis)] == axis
        assert mpq(0) in axis and mpq(1) in axis

    def test_refinement_is_superset(self):
        coarse = set(warped_axis(8, refine=1))
        fine = set(warped_axis(8, refine=2))
        assert coarse <= fine


class TestComponents:
    def test_fermat_one_component(self):
        # [DERIVED: empty real locus, so the avoidance locus is all of the
        # dual RP^2 -- connected]
        comp = stable_components(FERMAT, 8)
        assert comp.count == 1

    def test_definite_minus_one_component(self):
        # One oval: avoiding lines are exactly those missing the oval, a
        # connected set.
        comp = stable_components(DEFINITE_MINUS, 10)
        assert comp.count == 1

    def test_trott_seven_components(self):
        # [PAPER: 28 real bitangents <-> 7 avoidance components]
        comp = stable_components(TROTT, 12)
        assert comp.count == 7

    def test_unexpected_count_raises(self):
        with pytest.raises(ResolutionError):
            components(TROTT, 2, expected=(1,))

    def test_canonical_antipodal_gluing(self):
        p = DualPoint((mpq(1), mpq(-1, 2), mpq(1, 4))).canonical()
        q = DualPoint((mpq(-1), mpq(1, 2), mpq(-1, 4))).canonical()
        assert p == q


class TestTopology:
    def test_fermat_empty(self):
        top = real_topology(FERMAT, 8)
        assert top.ovals == 0
        assert not top.nested
        assert top.region_count == 1

    def test_definite_minus_one_oval(self):
        top = real_topology(DEFINITE_MINUS, 10)
        assert top.ovals == 1
        assert not top.nested
        assert top.region_count == 2

    def test_trott_four_ovals(self):
        # [CLASSICAL: the Trott quartic has 4 non-nested ovals]
        top = real_topology(TROTT, 12, refine=2)
        assert top.ovals == 4
        assert not top.nested
        assert top.oval_depths == (1, 1, 1, 1)

    def test_nested_pair(self):
        # (x^2+y^2-z^2)(x^2+y^2-4z^2) + tiny perturbation: two nested ovals.
        nested = fill({
            (4, 0): 1, (0, 4): 1, (2, 2): 2, (2, 0): -5, (0, 2): -5,
            (0, 0): 4, (1, 0): mpq(1, 1000),
        })
        top = real_topology(nested, 10, refine=2)
        assert top.ovals == 2
        assert top.nested
        assert sorted(top.oval_depths) == [1, 2]
