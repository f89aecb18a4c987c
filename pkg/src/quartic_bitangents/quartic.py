"""Valued plane quartics and their dual Newton subdivisions.

A quartic is given in the affine chart z = 1 by 15 coefficients indexed by
lattice points (i, j) with 0 <= i + j <= 4.  Each coefficient is a pair
(coef, val): an exact rational leading coefficient and an exact rational
valuation exponent.  A zero coefficient carries valuation +infinity,
represented as ``None``.

Input grammar (one record per line, ``#`` starts a comment)::

    name <free text>
    denominator-bound <positive integer>          # optional, default 12
    coefficient <i> <j> <coef> <val>

where <coef> and <val> are rational literals like ``-225/144`` and <val>
may be ``inf``.  The canonical serialization emits the name line, the
denominator-bound line, then the nonzero coefficient records sorted by
(i, j); parsing then serializing a canonical document is bit-exact.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field

from gmpy2 import mpq

from .errors import ParseError, SchemaError, UnsupportedInputError
from .rational import format_rational, parse_rational

DEGREE = 4
LATTICE_POINTS = tuple(
    (i, j) for i in range(DEGREE + 1) for j in range(DEGREE + 1 - i)
)
DEFAULT_DENOMINATOR_BOUND = 12


@dataclass(frozen=True)
class ValuedCoefficient:
    """One coefficient of the quartic: leading rational and valuation."""

    coef: mpq
    val: mpq | None  # None encodes valuation +infinity

    def __post_init__(self):
        if (self.coef == 0) != (self.val is None):
            raise SchemaError(
                f"coefficient {self.coef} with valuation {self.val}: "
                "coef = 0 exactly when val = inf"
            )

    @property
    def is_zero(self) -> bool:
        return self.val is None


ZERO_COEFFICIENT = ValuedCoefficient(mpq(0), None)


@dataclass(frozen=True)
class ValuedQuartic:
    """A degree-4 ternary form over the valued field, chart z = 1."""

    name: str
    coeffs: dict  # (i, j) -> ValuedCoefficient, all 15 slots present
    denominator_bound: int = DEFAULT_DENOMINATOR_BOUND

    def __post_init__(self):
        if set(self.coeffs) != set(LATTICE_POINTS):
            raise SchemaError("coefficient map must cover the 15 lattice points")
        if self.denominator_bound < 1:
            raise SchemaError("denominator bound must be positive")
        for (i, j), c in self.coeffs.items():
            if c.val is not None and c.val.denominator > self.denominator_bound:
                raise SchemaError(
                    f"valuation {format_rational(c.val)} at ({i},{j}) exceeds "
                    f"denominator bound {self.denominator_bound}"
                )
        edges = {
            "j=0": [(i, 0) for i in range(DEGREE + 1)],
            "i=0": [(0, j) for j in range(DEGREE + 1)],
            "i+j=4": [(i, DEGREE - i) for i in range(DEGREE + 1)],
        }
        for label, pts in edges.items():
            if all(self.coeffs[p].is_zero for p in pts):
                raise SchemaError(
                    f"not a proper quartic: all coefficients on edge {label} vanish"
                )

    def support(self):
        """Lattice points with nonzero coefficient, sorted."""
        return [p for p in LATTICE_POINTS if not self.coeffs[p].is_zero]

    def shifted_valuations(self, a: mpq, b: mpq, c: mpq) -> "ValuedQuartic":
        """Add the affine function a*i + b*j + c to every finite valuation."""
        shifted = {}
        for (i, j), vc in self.coeffs.items():
            if vc.is_zero:
                shifted[(i, j)] = vc
            else:
                shifted[(i, j)] = ValuedCoefficient(vc.coef, vc.val + a * i + b * j + c)
        return ValuedQuartic(self.name, shifted, self.denominator_bound)


def parse_quartic(document: str) -> ValuedQuartic:
    """Parse the key-value document format described in the module docstring."""
    name = None
    bound = DEFAULT_DENOMINATOR_BOUND
    entries: dict = {}
    for lineno, raw in enumerate(document.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        fields = line.split()
        key = fields[0]
        if key == "name":
            name = line[len("name") :].strip()
        elif key == "denominator-bound":
            if len(fields) != 2:
                raise ParseError(f"line {lineno}: denominator-bound takes one value")
            try:
                bound = int(fields[1])
            except ValueError as exc:
                raise ParseError(f"line {lineno}: {exc}") from exc
        elif key == "coefficient":
            if len(fields) != 5:
                raise ParseError(
                    f"line {lineno}: expected 'coefficient i j coef val'"
                )
            try:
                i, j = int(fields[1]), int(fields[2])
                coef = parse_rational(fields[3])
                val = None if fields[4] == "inf" else parse_rational(fields[4])
            except ValueError as exc:
                raise ParseError(f"line {lineno}: {exc}") from exc
            if (i, j) not in LATTICE_POINTS:
                raise SchemaError(
                    f"line {lineno}: ({i},{j}) lies outside the dilated simplex"
                )
            if (i, j) in entries:
                raise SchemaError(f"line {lineno}: duplicate entry for ({i},{j})")
            if coef == 0 and val is not None:
                raise SchemaError(
                    f"line {lineno}: zero coefficient must have valuation inf"
                )
            if coef != 0 and val is None:
                raise SchemaError(
                    f"line {lineno}: nonzero coefficient with valuation inf"
                )
            entries[(i, j)] = ValuedCoefficient(coef, val)
        else:
            raise ParseError(f"line {lineno}: unknown record {key!r}")
    if name is None:
        raise ParseError("missing 'name' record")
    coeffs = {p: entries.get(p, ZERO_COEFFICIENT) for p in LATTICE_POINTS}
    return ValuedQuartic(name, coeffs, bound)


def serialize_quartic(q: ValuedQuartic) -> str:
    """Canonical document: name, bound, nonzero coefficients sorted by (i, j)."""
    lines = [f"name {q.name}", f"denominator-bound {q.denominator_bound}"]
    for (i, j) in LATTICE_POINTS:
        c = q.coeffs[(i, j)]
        if c.is_zero:
            continue
        lines.append(
            f"coefficient {i} {j} {format_rational(c.coef)} {format_rational(c.val)}"
        )
    return "\n".join(lines) + "\n"


@dataclass(frozen=True)
class Cell:
    """One cell of a regular subdivision: its lattice points and hull vertices."""

    points: tuple  # all lattice points lying on the supporting lower face
    vertices: tuple  # extreme points, counterclockwise, starting at the minimum

    @property
    def normalized_area(self) -> int:
        """Twice the Euclidean area; a unimodular triangle has area 1."""
        vs = self.vertices
        twice = 0
        for k in range(len(vs)):
            x0, y0 = vs[k]
            x1, y1 = vs[(k + 1) % len(vs)]
            twice += x0 * y1 - x1 * y0
        return abs(twice)

    @property
    def is_unimodular_triangle(self) -> bool:
        return len(self.vertices) == 3 and self.normalized_area == 1


@dataclass(frozen=True)
class DualSubdivision:
    """Regular subdivision of the Newton polygon induced by the valuations."""

    lifts: dict  # (i, j) -> mpq | None, the inducing heights
    cells: tuple  # Cell instances, sorted lexicographically by vertex list

    @property
    def used_points(self):
        return sorted({p for cell in self.cells for p in cell.points})

    def total_normalized_area(self) -> int:
        return sum(c.normalized_area for c in self.cells)


def _convex_hull_ccw(points):
    """Andrew monotone chain on exact integer lattice points."""
    pts = sorted(set(points))
    if len(pts) <= 2:
        return tuple(pts)

    def cross(o, a, b):
        return (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0])

    lower, upper = [], []
    for p in pts:
        while len(lower) >= 2 and cross(lower[-2], lower[-1], p) <= 0:
            lower.pop()
        lower.append(p)
    for p in reversed(pts):
        while len(upper) >= 2 and cross(upper[-2], upper[-1], p) <= 0:
            upper.pop()
        upper.append(p)
    return tuple(lower[:-1] + upper[:-1])


def newton_subdivision(q: ValuedQuartic) -> DualSubdivision:
    """Lower-hull-induced regular subdivision of the lifted support.

    Brute force over point triples is exact and instantaneous at this size:
    a plane through three lifted points supports a lower face when every
    other lifted point lies on or above it.
    """
    support = q.support()
    lifted = [(i, j, q.coeffs[(i, j)].val) for (i, j) in support]
    if len(lifted) < 3:
        raise UnsupportedInputError("support has fewer than 3 points")

    hull2d = _convex_hull_ccw(support)
    if len(hull2d) < 3:
        raise UnsupportedInputError("support is collinear; Newton polygon is flat")

    faces = {}
    for (p1, p2, p3) in itertools.combinations(lifted, 3):
        (x1, y1, v1), (x2, y2, v2), (x3, y3, v3) = p1, p2, p3
        det = (x2 - x1) * (y3 - y1) - (x3 - x1) * (y2 - y1)
        if det == 0:
            continue
        # Plane v = a*x + b*y + c through the three lifted points.
        a = ((v2 - v1) * (y3 - y1) - (v3 - v1) * (y2 - y1)) / det
        b = ((x2 - x1) * (v3 - v1) - (x3 - x1) * (v2 - v1)) / det
        c = v1 - a * x1 - b * y1
        on_face = []
        lower = True
        for (x, y, v) in lifted:
            h = a * x + b * y + c
            if v < h:
                lower = False
                break
            if v == h:
                on_face.append((x, y))
        if not lower:
            continue
        key = frozenset(on_face)
        if key not in faces:
            faces[key] = tuple(sorted(on_face))

    cells = []
    for pts in faces.values():
        vertices = _convex_hull_ccw(pts)
        if len(vertices) < 3:
            continue
        cells.append(Cell(points=pts, vertices=vertices))
    cells.sort(key=lambda c: c.points)
    lifts = {p: q.coeffs[p].val for p in LATTICE_POINTS}
    return DualSubdivision(lifts=lifts, cells=tuple(cells))


def is_tropically_smooth(s: DualSubdivision) -> bool:
    """True when the subdivision is a unimodular triangulation of the full
    dilated simplex: 16 triangles of normalized area 1."""
    return (
        all(c.is_unimodular_triangle for c in s.cells)
        and s.total_normalized_area() == DEGREE * DEGREE
    )
