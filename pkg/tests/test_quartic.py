"""Tests for parsing, Newton subdivisions, and tropical smoothness."""

import pytest
from gmpy2 import mpq
from hypothesis import given, settings
from hypothesis import strategies as st

from quartic_bitangents.errors import ParseError, SchemaError
from quartic_bitangents.quartic import (
    LATTICE_POINTS,
    ValuedCoefficient,
    ValuedQuartic,
    is_tropically_smooth,
    newton_subdivision,
    parse_quartic,
    serialize_quartic,
)


def constant_lift_document():
    lines = ["name constant"]
    for (i, j) in LATTICE_POINTS:
        lines.append(f"coefficient {i} {j} 1 0")
    return "\n".join(lines)


def make_quartic(val_fn, coef_fn=lambda i, j: mpq(1), name="q"):
    coeffs = {
        (i, j): ValuedCoefficient(coef_fn(i, j), mpq(val_fn(i, j)))
        for (i, j) in LATTICE_POINTS
    }
    return ValuedQuartic(name, coeffs)


def honeycomb():
    return make_quartic(lambda i, j: i * i + i * j + j * j, name="honeycomb")


class TestParse:
    def test_constant_lift(self):
        # [TRIVIAL: constant lift]
        q = parse_quartic(constant_lift_document())
        assert all(c.coef == 1 and c.val == 0 for c in q.coeffs.values())

    def test_omitted_slot_is_zero(self):
        # [TRIVIAL: zero-coefficient convention]
        doc = "\n".join(
            f"coefficient {i} {j} 1 0"
            for (i, j) in LATTICE_POINTS
            if (i, j) != (2, 2)
        )
        q = parse_quartic("name partial\n" + doc)
        assert q.coeffs[(2, 2)].coef == 0
        assert q.coeffs[(2, 2)].val is None

    def test_duplicate_entry_rejected(self):
        # [TRIVIAL: schema violation]
        doc = "coefficient 1 1 1 0\ncoefficient 1 1 2 0\ncoefficient 0 0 1 0"
        with pytest.raises(SchemaError):
            parse_quartic(doc)

    def test_point_outside_simplex_rejected(self):
        # [TRIVIAL: schema violation]
        with pytest.raises(SchemaError):
            parse_quartic("coefficient 3 2 1 0")

    def test_non_rational_literal_rejected(self):
        with pytest.raises(ParseError):
            parse_quartic("coefficient 1 1 pi 0")

    def test_round_trip_bit_exact(self):
        # Canonical serialize -> parse -> serialize is the identity.
        q = parse_quartic(constant_lift_document())
        text = serialize_quartic(q)
        assert serialize_quartic(parse_quartic(text)) == text


class TestNewtonSubdivision:
    def test_constant_lift_single_cell(self):
        # [TRIVIAL: constant lifting induces trivial subdivision]
        sub = newton_subdivision(make_quartic(lambda i, j: 0))
        assert len(sub.cells) == 1
        assert sub.cells[0].normalized_area == 16

    def test_linear_lift_single_cell(self):
        # [TRIVIAL: linear lifting]
        sub = newton_subdivision(make_quartic(lambda i, j: i))
        assert len(sub.cells) == 1

    def test_honeycomb_triangulation(self):
        # [DERIVED: any unimodular triangulation of the dilated simplex has
        # exactly 16 triangles by normalized area count]
        sub = newton_subdivision(honeycomb())
        assert len(sub.cells) == 16
        assert all(cell.is_unimodular_triangle for cell in sub.cells)

    def test_areas_sum_to_sixteen(self):
        for val_fn in (lambda i, j: 0, lambda i, j: i,
                       lambda i, j: i * i + i * j + j * j,
                       lambda i, j: (i * i + j * j) // 2):
            sub = newton_subdivision(make_quartic(val_fn))
            assert sum(c.normalized_area for c in sub.cells) == 16

    @settings(max_examples=25, deadline=None)
    @given(
        a=st.integers(-8, 8),
        b=st.integers(-8, 8),
        c=st.integers(-60, 60),
    )
    def test_affine_lift_invariance(self, a, b, c):
        # Adding an affine function to the valuations never changes the
        # subdivision (lower hulls agree up to an affine shear).  The
        # constant stays in the admissible value group (denominators <= 12).
        base = newton_subdivision(honeycomb())
        shifted = newton_subdivision(
            make_quartic(
                lambda i, j: mpq(i * i + i * j + j * j) + a * i + b * j
                + mpq(c, 12)
            )
        )
        assert [cell.vertices for cell in base.cells] == [
            cell.vertices for cell in shifted.cells
        ]


class TestSmoothness:
    def test_honeycomb_smooth(self):
        # [PAPER: unimodular triangulation of the 4-fold dilation]
        assert is_tropically_smooth(newton_subdivision(honeycomb()))

    def test_trivial_subdivision_not_smooth(self):
        # [TRIVIAL: area 8 != 1/2]
        assert not is_tropically_smooth(
            newton_subdivision(make_quartic(lambda i, j: 0))
        )

    def test_parallelogram_lift_not_smooth(self):
        # Squared-distance lift produces non-triangle cells.
        sub = newton_subdivision(make_quartic(lambda i, j: i * i + j * j))
        assert not is_tropically_smooth(sub)

    def test_smooth_uses_all_lattice_points(self):
        sub = newton_subdivision(honeycomb())
        used = {p for cell in sub.cells for p in cell.vertices}
        assert used == set(LATTICE_POINTS)
