"""Tropical plane curves dual to Newton subdivisions, and stable intersection
with tropical lines.

Everything here is exact rational arithmetic (gmpy2.mpq): connectivity of
piecewise-linear intersections is a discrete question and floating point
would create false merges and splits.

Min-plus convention: a tropical line is the tropicality locus of
min(a + x, b + y, c); its vertex sits at (c - a, c - b) and its three rays
point in directions (1, 0), (0, 1) and (-1, -1).
"""

from __future__ import annotations

from dataclasses import dataclass

from gmpy2 import mpq

from .errors import InternalConsistencyError, UnsupportedInputError
from .quartic import DualSubdivision, ValuedQuartic, is_tropically_smooth

LINE_RAY_DIRECTIONS = ((1, 0), (0, 1), (-1, -1))

# Fixed generic displacement used to resolve non-transverse positions by
# stable perturbation.  Any direction avoiding the finitely many degenerate
# slopes of a given input works; degenerate choices are detected and the
# perturbation is retried at a different scale.
STABLE_SHIFT = (mpq(12, 17), mpq(5, 19))


def _gcd(a: int, b: int) -> int:
    a, b = abs(a), abs(b)
    while b:
        a, b = b, a % b
    return a


def primitive(dx, dy):
    """Primitive integer vector parallel to (dx, dy) with the same sign."""
    nx, ny = mpq(dx), mpq(dy)
    if nx == 0 and ny == 0:
        raise ValueError("zero vector has no primitive representative")
    # Clear denominators, then divide by the gcd.
    den = nx.denominator * ny.denominator // _gcd(nx.denominator, ny.denominator)
    ix, iy = int(nx * den), int(ny * den)
    g = _gcd(ix, iy)
    return (ix // g, iy // g)


def cross(a, b):
    return a[0] * b[1] - a[1] * b[0]


@dataclass(frozen=True)
class Piece:
    """A segment or ray: origin + s * direction for s in [0, length or inf)."""

    origin: tuple  # (mpq, mpq)
    direction: tuple  # primitive integer pair
    length: mpq | None  # parameter bound; None for a ray
    weight: int = 1

    @property
    def is_ray(self) -> bool:
        return self.length is None

    @property
    def endpoint(self):
        if self.length is None:
            return None
        return (
            self.origin[0] + self.length * self.direction[0],
            self.origin[1] + self.length * self.direction[1],
        )

    def point_at(self, s):
        return (
            self.origin[0] + s * self.direction[0],
            self.origin[1] + s * self.direction[1],
        )

    def translated(self, dx, dy):
        return Piece(
            (self.origin[0] + dx, self.origin[1] + dy),
            self.direction,
            self.length,
            self.weight,
        )


@dataclass(frozen=True)
class TropicalLine:
    """A tropical line recorded by its vertex in the plane."""

    vertex: tuple  # (mpq, mpq)

    def pieces(self):
        v = (mpq(self.vertex[0]), mpq(self.vertex[1]))
        return tuple(Piece(v, d, None) for d in LINE_RAY_DIRECTIONS)

    def translated(self, dx, dy):
        return TropicalLine((self.vertex[0] + dx, self.vertex[1] + dy))


@dataclass(frozen=True)
class TropicalPlaneCurve:
    """Weighted balanced PL curve dual to a unimodular Newton triangulation."""

    vertices: tuple  # (mpq, mpq) per triangle of the dual subdivision
    edges: tuple  # Piece instances with finite length
    rays: tuple  # Piece instances with length None
    dual_map: dict  # frozenset of subdivision points -> feature index

    def pieces(self):
        return self.edges + self.rays

    def translated(self, dx, dy):
        return TropicalPlaneCurve(
            tuple((x + dx, y + dy) for (x, y) in self.vertices),
            tuple(p.translated(dx, dy) for p in self.edges),
            tuple(p.translated(dx, dy) for p in self.rays),
            self.dual_map,
        )

    def bounding_box(self):
        xs = [v[0] for v in self.vertices]
        ys = [v[1] for v in self.vertices]
        return (min(xs), min(ys), max(xs), max(ys))

    def first_betti_number(self) -> int:
        # Bounded subgraph: vertices and bounded edges, one component.
        return len(self.edges) - len(self.vertices) + 1


def tropical_min_terms(lifts: dict, x, y):
    """Value and argmin set of min over support of (lift + i*x + j*y)."""
    best = None
    arg = []
    for (i, j), v in lifts.items():
        if v is None:
            continue
        val = v + i * x + j * y
        if best is None or val < best:
            best = val
            arg = [(i, j)]
        elif val == best:
            arg.append((i, j))
    return best, arg


def dualize(s: DualSubdivision, q: ValuedQuartic) -> TropicalPlaneCurve:
    """Tropical curve dual to a smooth Newton subdivision.

    The vertex dual to a triangle is the unique point where its three lifted
    monomials are simultaneously minimal; bounded edges are dual to interior
    subdivision edges, rays to boundary edges.  Balancing is asserted at
    every vertex on construction.
    """
    if not is_tropically_smooth(s):
        raise UnsupportedInputError(
            "dual subdivision is not a unimodular triangulation; "
            "the curve is not tropically smooth"
        )
    lifts = s.lifts

    vertices = []
    for cell in s.cells:
        (i1, j1), (i2, j2), (i3, j3) = cell.vertices
        v1, v2, v3 = lifts[(i1, j1)], lifts[(i2, j2)], lifts[(i3, j3)]
        a11, a12, b1 = i1 - i2, j1 - j2, v2 - v1
        a21, a22, b2 = i1 - i3, j1 - j3, v3 - v1
        det = a11 * a22 - a12 * a21
        x = mpq(b1 * a22 - b2 * a12, 1) / det
        y = mpq(a11 * b2 - a21 * b1, 1) / det
        vertices.append((x, y))

    # Map each subdivision edge to the cells containing it.
    edge_cells: dict = {}
    for idx, cell in enumerate(s.cells):
        vs = cell.vertices
        for k in range(3):
            key = frozenset((vs[k], vs[(k + 1) % 3]))
            edge_cells.setdefault(key, []).append(idx)

    edges = []
    rays = []
    dual_map = {}
    for key, owners in sorted(edge_cells.items(), key=lambda kv: sorted(kv[0])):
        (p1, p2) = sorted(key)
        e = (p2[0] - p1[0], p2[1] - p1[1])
        weight = _gcd(e[0], e[1])
        if len(owners) == 2:
            va, vb = vertices[owners[0]], vertices[owners[1]]
            if va == vb:
                raise InternalConsistencyError(
                    "adjacent triangles share a dual vertex; lift is not strict"
                )
            d = primitive(vb[0] - va[0], vb[1] - va[1])
            if d[0] * e[0] + d[1] * e[1] != 0:
                raise InternalConsistencyError(
                    "dual edge is not perpendicular-dual to its subdivision edge"
                )
            length = (
                (vb[0] - va[0]) / d[0] if d[0] != 0 else (vb[1] - va[1]) / d[1]
            )
            piece = Piece(va, d, length, weight)
            dual_map[key] = ("edge", len(edges))
            edges.append(piece)
        elif len(owners) == 1:
            # Boundary edge: ray from the triangle's vertex, pointing to the
            # same side of the edge as the triangle's third corner.
            cell = s.cells[owners[0]]
            third = next(p for p in cell.vertices if p not in key)
            n = (-e[1], e[0])
            side = cross(e, (third[0] - p1[0], third[1] - p1[1]))
            if side < 0:
                n = (e[1], -e[0])
            piece = Piece(vertices[owners[0]], primitive(*n), None, weight)
            dual_map[key] = ("ray", len(rays))
            rays.append(piece)
        else:
            raise InternalConsistencyError("subdivision edge shared by >2 cells")

    curve = TropicalPlaneCurve(
        vertices=tuple(vertices),
        edges=tuple(edges),
        rays=tuple(rays),
        dual_map=dual_map,
    )
    _assert_balanced(curve)
    return curve


def _assert_balanced(curve: TropicalPlaneCurve) -> None:
    incident: dict = {v: [] for v in curve.vertices}
    for p in curve.edges:
        end = p.endpoint
        incident[p.origin].append((p.direction, p.weight))
        incident[end].append(((-p.direction[0], -p.direction[1]), p.weight))
    for p in curve.rays:
        incident[p.origin].append((p.direction, p.weight))
    for v, dirs in incident.items():
        sx = sum(w * d[0] for d, w in dirs)
        sy = sum(w * d[1] for d, w in dirs)
        if sx != 0 or sy != 0:
            raise InternalConsistencyError(f"balancing fails at vertex {v}")


# ---------------------------------------------------------------------------
# Exact piece/piece intersection


def intersect_pieces(a: Piece, b: Piece):
    """Exact intersection of two pieces.

    Returns None, ("point", P) or ("seg", P, Q) with rational coordinates.
    """
    d1, d2 = a.direction, b.direction
    det = cross(d1, d2)
    diff = (b.origin[0] - a.origin[0], b.origin[1] - a.origin[1])
    if det != 0:
        s = mpq(cross(diff, d2), det)
        u = mpq(cross(diff, d1), det)
        if s < 0 or (a.length is not None and s > a.length):
            return None
        if u < 0 or (b.length is not None and u > b.length):
            return None
        return ("point", a.point_at(s))
    if cross(diff, d1) != 0:
        return None
    # Collinear: express b's parameter range in a's coordinate.
    if d1[0] != 0:
        t0 = mpq(diff[0], d1[0])
        step = mpq(d2[0], d1[0])
    else:
        t0 = mpq(diff[1], d1[1])
        step = mpq(d2[1], d1[1])
    if step > 0:
        lo, hi = t0, None if b.length is None else t0 + step * b.length
    else:
        lo, hi = (None if b.length is None else t0 + step * b.length), t0
    a_lo, a_hi = mpq(0), a.length
    lo = a_lo if lo is None else max(lo, a_lo)
    if hi is None:
        hi = a_hi
    elif a_hi is not None:
        hi = min(hi, a_hi)
    if hi is not None and lo > hi:
        return None
    if hi is not None and lo == hi:
        return ("point", a.point_at(lo))
    if hi is None:
        return ("ray", a.point_at(lo), a.direction)
    return ("seg", a.point_at(lo), a.point_at(hi))


def _geoms_touch(g1, g2) -> bool:
    if g1[0] == "point" and g2[0] == "point":
        return g1[1] == g2[1]
    if g1[0] == "point":
        g1, g2 = g2, g1
    if g2[0] == "point":
        return _point_on_piece(g2[1], _geom_as_piece(g1))
    return intersect_pieces(_geom_as_piece(g1), _geom_as_piece(g2)) is not None


def _geom_as_piece(g):
    if g[0] == "ray":
        return Piece(g[1], g[2], None)
    p, q = g[1], g[2]
    d = primitive(q[0] - p[0], q[1] - p[1])
    length = (q[0] - p[0]) / d[0] if d[0] != 0 else (q[1] - p[1]) / d[1]
    return Piece(p, d, length)


def _point_on_piece(pt, piece: Piece) -> bool:
    diff = (pt[0] - piece.origin[0], pt[1] - piece.origin[1])
    if cross(diff, piece.direction) != 0:
        return False
    d = piece.direction
    s = diff[0] / d[0] if d[0] != 0 else diff[1] / d[1]
    return s >= 0 and (piece.length is None or s <= piece.length)


def _dist2_point_geom(pt, g):
    """Exact squared Euclidean distance from a point to a geometry."""
    if g[0] == "point":
        dx, dy = pt[0] - g[1][0], pt[1] - g[1][1]
        return dx * dx + dy * dy
    if g[0] == "ray":
        p, (dx, dy) = g[1], g[2]
        clamp_hi = None
    else:
        p, q = g[1], g[2]
        dx, dy = q[0] - p[0], q[1] - p[1]
        clamp_hi = mpq(1)
    wx, wy = pt[0] - p[0], pt[1] - p[1]
    denom = dx * dx + dy * dy
    t = (wx * dx + wy * dy) / denom
    if t < 0:
        t = mpq(0)
    elif clamp_hi is not None and t > clamp_hi:
        t = clamp_hi
    ex, ey = wx - t * dx, wy - t * dy
    return ex * ex + ey * ey


# ---------------------------------------------------------------------------
# Stable intersection


@dataclass(frozen=True)
class IntersectionReport:
    """Connected components of line-curve intersection with multiplicities."""

    components: tuple  # ((geoms tuple, multiplicity int), ...)

    @property
    def total_multiplicity(self) -> int:
        return sum(m for _, m in self.components)

    @property
    def is_bitangent(self) -> bool:
        if len(self.components) == 1:
            return True
        return len(self.components) == 2 and all(
            m == 2 for _, m in self.components
        )


def _set_intersection_geoms(curve: TropicalPlaneCurve, line: TropicalLine):
    geoms = []
    for lp in line.pieces():
        for cp in curve.pieces():
            g = intersect_pieces(lp, cp)
            if g is not None:
                geoms.append(g)
    return geoms


def _connected_groups(geoms):
    n = len(geoms)
    parent = list(range(n))

    def find(i):
        while parent[i] != i:
            parent[i] = parent[parent[i]]
            i = parent[i]
        return i

    for i in range(n):
        for j in range(i + 1, n):
            if find(i) != find(j) and _geoms_touch(geoms[i], geoms[j]):
                parent[find(i)] = find(j)
    groups: dict = {}
    for i in range(n):
        groups.setdefault(find(i), []).append(geoms[i])
    return list(groups.values())


def _transverse_crossings(curve: TropicalPlaneCurve, line: TropicalLine):
    """All crossings if the position is fully transverse, else None.

    Transverse means: every intersection is a single point in the relative
    interior of both pieces, with nonzero direction determinant.
    """
    crossings = []
    for lp in line.pieces():
        for cp in curve.pieces():
            det = cross(lp.direction, cp.direction)
            diff = (cp.origin[0] - lp.origin[0], cp.origin[1] - lp.origin[1])
            if det == 0:
                if cross(diff, lp.direction) == 0:
                    # Collinear overlap is possible; not transverse unless
                    # the pieces are actually disjoint.
                    if intersect_pieces(lp, cp) is not None:
                        return None
                continue
            s = mpq(cross(diff, cp.direction), det)
            u = mpq(cross(diff, lp.direction), det)
            inside_l = s > 0
            inside_c = (u > 0) and (cp.length is None or u < cp.length)
            boundary_l = s == 0
            boundary_c = u == 0 or (cp.length is not None and u == cp.length)
            if (inside_l or boundary_l) and (inside_c or boundary_c):
                if boundary_l or boundary_c:
                    return None
            if inside_l and inside_c:
                mult = abs(det) * lp.weight * cp.weight
                crossings.append((lp.point_at(s), int(mult)))
    return crossings


def stable_intersection(
    curve: TropicalPlaneCurve, line: TropicalLine
) -> IntersectionReport:
    """Set-theoretic intersection components with stable multiplicities.

    The reported point sets are the true (possibly higher-dimensional)
    intersection; multiplicities are computed at the true position when it
    is transverse, and otherwise as the limit under a generic infinitesimal
    translation of the line, realized by exact translations at two scales
    that must agree.
    """
    geoms = _set_intersection_geoms(curve, line)
    if not geoms:
        raise InternalConsistencyError(
            "tropical line and quartic have empty intersection; "
            "this contradicts tropical Bezout"
        )
    groups = _connected_groups(geoms)

    crossings = _transverse_crossings(curve, line)
    if crossings is not None and len(groups) == len(crossings):
        comps = []
        for group in groups:
            mult = None
            for pt, m in crossings:
                if any(_dist2_point_geom(pt, g) == 0 for g in group):
                    mult = m
                    break
            if mult is None:
                crossings = None
                break
            comps.append((tuple(group), mult))
        if crossings is not None:
            return _finish_report(comps)

    # Non-transverse: perturb, recount, assign crossings to components.
    mults = _stable_multiplicities(curve, line, groups)
    return _finish_report(list(zip((tuple(g) for g in groups), mults)))


def _stable_multiplicities(curve, line, groups):
    previous = None
    for k in range(8, 80, 6):
        eps = mpq(1, 2**k)
        shifted = line.translated(eps * STABLE_SHIFT[0], eps * STABLE_SHIFT[1])
        crossings = _transverse_crossings(curve, shifted)
        if crossings is None:
            previous = None
            continue
        counts = [0] * len(groups)
        ok = True
        for pt, m in crossings:
            dists = [
                min(_dist2_point_geom(pt, g) for g in group) for group in groups
            ]
            best = min(range(len(groups)), key=lambda i: dists[i])
            others = [d for i, d in enumerate(dists) if i != best]
            if others and min(others) <= dists[best] * 4:
                ok = False
                break
            counts[best] += m
        if not ok or sum(counts) != 4:
            previous = None
            continue
        if previous == counts:
            return counts
        previous = counts
    raise InternalConsistencyError(
        "stable perturbation did not stabilize; input may violate hypotheses"
    )


def _finish_report(comps):
    comps.sort(key=lambda cm: _geom_sort_key(cm[0]))
    report = IntersectionReport(components=tuple(comps))
    if report.total_multiplicity != 4:
        raise InternalConsistencyError(
            f"intersection multiplicities sum to {report.total_multiplicity}, "
            "expected 4"
        )
    for _, m in report.components:
        if m < 1 or m > 4:
            raise InternalConsistencyError(f"component multiplicity {m} out of range")
    return report


def _geom_sort_key(geoms):
    pts = []
    for g in geoms:
        pts.extend(g[1:])
    return min(pts)
