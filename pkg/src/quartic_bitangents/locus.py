"""Tropical bitangent classes: the locus of bitangent line vertices.

The combinatorial type of line-curve intersection is constant on the cells
of the plane arrangement cut out by (a) the curve itself and (b) the rays
traced backwards from every curve vertex along the three line ray
directions.  We decompose a padded bounding box by this arrangement into
vertices, wall pieces, and vertical trapezoid runs, decide bitangency once
per cell by exact stable intersection at a rational interior sample, and
merge the closures of the passing cells into connected components.

For a smooth quartic the result must consist of exactly 7 classes; any
other count raises rather than returning silently.
"""

from __future__ import annotations

from dataclasses import dataclass

from gmpy2 import mpq

from .curve import (
    LINE_RAY_DIRECTIONS,
    Piece,
    TropicalLine,
    TropicalPlaneCurve,
    cross,
    intersect_pieces,
    primitive,
    stable_intersection,
)
from .errors import AmbiguityError, InternalConsistencyError

WALL_BACK_DIRECTIONS = tuple((-dx, -dy) for (dx, dy) in LINE_RAY_DIRECTIONS)


@dataclass(frozen=True)
class BitangentClass:
    """One equivalence class of tropical bitangents.

    The shape is a closed connected union of cells of mixed dimension:
    ("point", p), ("seg", p, q), ("poly", (v0, v1, ...)) and unbounded
    tails ("ray", origin, direction), all with exact rational data.
    """

    id: int
    cells: tuple
    witness: tuple  # one representative bitangent vertex

    @property
    def unbounded_directions(self):
        return tuple(sorted({c[2] for c in self.cells if c[0] == "ray"}))

    def bounding_box(self):
        """Box spanned by the finite cell data (ray origins included)."""
        xs, ys = [], []
        for c in self.cells:
            for (x, y) in _cell_points(c):
                xs.append(x)
                ys.append(y)
        return (min(xs), min(ys), max(xs), max(ys))


# ---------------------------------------------------------------------------
# Wall construction


def _clip_to_box(piece: Piece, box):
    """Clip a segment or ray to the closed box; returns (p, q) or None."""
    x0, y0, x1, y1 = box
    lo, hi = mpq(0), piece.length
    for coord, c0, c1 in ((0, x0, x1), (1, y0, y1)):
        o, d = piece.origin[coord], piece.direction[coord]
        if d == 0:
            if o < c0 or o > c1:
                return None
            continue
        a, b = mpq(c0 - o, d), mpq(c1 - o, d)
        if a > b:
            a, b = b, a
        lo = max(lo, a)
        hi = b if hi is None else min(hi, b)
    if hi is None or lo > hi:
        return None
    if lo == hi:
        return None
    return (piece.point_at(lo), piece.point_at(hi))


def _line_key(p, q):
    """Canonical (a, b, c) with a*x + b*y = c for the supporting line."""
    d = primitive(q[0] - p[0], q[1] - p[1])
    a, b = -d[1], d[0]
    if a < 0 or (a == 0 and b < 0):
        a, b = -a, -b
    c = a * p[0] + b * p[1]
    return (a, b, c)


def _merge_collinear(segments):
    """Merge overlapping collinear segments into maximal disjoint ones."""
    by_line: dict = {}
    for (p, q) in segments:
        by_line.setdefault(_line_key(p, q), []).append((p, q))
    merged = []
    for key, segs in by_line.items():
        d = primitive(segs[0][1][0] - segs[0][0][0], segs[0][1][1] - segs[0][0][1])
        base = segs[0][0]

        def param(pt):
            return (
                (pt[0] - base[0]) / d[0] if d[0] != 0 else (pt[1] - base[1]) / d[1]
            )

        ivals = sorted(
            (min(param(p), param(q)), max(param(p), param(q))) for (p, q) in segs
        )
        cur_lo, cur_hi = ivals[0]
        out = []
        for lo, hi in ivals[1:]:
            if lo <= cur_hi:
                cur_hi = max(cur_hi, hi)
            else:
                out.append((cur_lo, cur_hi))
                cur_lo, cur_hi = lo, hi
        out.append((cur_lo, cur_hi))
        for lo, hi in out:
            merged.append(
                (
                    (base[0] + lo * d[0], base[1] + lo * d[1]),
                    (base[0] + hi * d[0], base[1] + hi * d[1]),
                )
            )
    return merged


def _build_walls(curve: TropicalPlaneCurve, box):
    raw = []
    for p in curve.pieces():
        raw.append(p)
    for v in curve.vertices:
        for d in WALL_BACK_DIRECTIONS:
            raw.append(Piece(v, d, None))
    x0, y0, x1, y1 = box
    corners = [(x0, y0), (x1, y0), (x1, y1), (x0, y1)]
    segments = []
    for p in raw:
        clipped = _clip_to_box(p, box)
        if clipped is not None:
            segments.append(clipped)
    for k in range(4):
        segments.append((corners[k], corners[(k + 1) % 4]))
    return _merge_collinear(segments)


# ---------------------------------------------------------------------------
# Trapezoidal decomposition of the arrangement


class _Wall:
    __slots__ = ("p", "q", "vertical", "xlo", "xhi", "slope", "icept")

    def __init__(self, p, q):
        if p > q:
            p, q = q, p
        self.p, self.q = p, q
        self.vertical = p[0] == q[0]
        self.xlo, self.xhi = p[0], q[0]
        if not self.vertical:
            self.slope = (q[1] - p[1]) / (q[0] - p[0])
            self.icept = p[1] - self.slope * p[0]

    def y_at(self, x):
        return self.slope * x + self.icept


def _arrangement_cells(walls):
    """Vertices, wall pieces, and trapezoid runs of the wall arrangement.

    Returns (points, edges, runs) where each entry carries a rational
    sample in the relative interior of its cell:
      points: list of (x, y)
      edges:  list of ((p, q), sample)
      runs:   list of (trapezoid list, sample); each trapezoid is a tuple
              of polygon corners.
    """
    ws = [_Wall(p, q) for (p, q) in walls]
    pieces = [
        Piece(
            w.p,
            primitive(w.q[0] - w.p[0], w.q[1] - w.p[1]),
            None,
        )
        for w in ws
    ]
    # Bound the helper pieces at the far endpoint.
    for i, w in enumerate(ws):
        d = pieces[i].direction
        length = (
            (w.q[0] - w.p[0]) / d[0] if d[0] != 0 else (w.q[1] - w.p[1]) / d[1]
        )
        pieces[i] = Piece(w.p, d, length)

    nodes = set()
    on_wall: dict = {i: set() for i in range(len(ws))}
    for i, w in enumerate(ws):
        nodes.add(w.p)
        nodes.add(w.q)
        on_wall[i].update((w.p, w.q))
    for i in range(len(ws)):
        for j in range(i + 1, len(ws)):
            g = intersect_pieces(pieces[i], pieces[j])
            if g is None:
                continue
            if g[0] != "point":
                raise InternalConsistencyError(
                    "collinear walls survived merging"
                )
            nodes.add(g[1])
            on_wall[i].add(g[1])
            on_wall[j].add(g[1])

    points = sorted(nodes)

    # Wall pieces between consecutive incidences.
    edges = []
    for i, w in enumerate(ws):
        if w.vertical:
            marks = sorted(pt[1] for pt in on_wall[i])
            for a, b in zip(marks, marks[1:]):
                if a == b:
                    continue
                mid = (w.p[0], (a + b) / 2)
                edges.append((((w.p[0], a), (w.p[0], b)), mid))
        else:
            marks = sorted(pt[0] for pt in on_wall[i])
            for a, b in zip(marks, marks[1:]):
                if a == b:
                    continue
                xm = (a + b) / 2
                edges.append(
                    (((a, w.y_at(a)), (b, w.y_at(b))), (xm, w.y_at(xm)))
                )

    # Vertical slabs between consecutive event abscissae.
    events = sorted({pt[0] for pt in nodes})
    vertical_by_x: dict = {}
    for w in ws:
        if w.vertical:
            vertical_by_x.setdefault(w.p[0], []).append((w.p[1], w.q[1]))

    runs = []
    active: dict = {}  # (lower wall id, upper wall id) -> run index
    for x_left, x_right in zip(events, events[1:]):
        xm = (x_left + x_right) / 2
        spanning = [
            (w.y_at(xm), i)
            for i, w in enumerate(ws)
            if not w.vertical and w.xlo <= x_left and w.xhi >= x_right
        ]
        spanning.sort()
        next_active: dict = {}
        for (ylo, ilo), (yhi, ihi) in zip(spanning, spanning[1:]):
            if ylo == yhi:
                continue
            wlo, whi = ws[ilo], ws[ihi]
            corners = [
                (x_left, wlo.y_at(x_left)),
                (x_right, wlo.y_at(x_right)),
                (x_right, whi.y_at(x_right)),
                (x_left, whi.y_at(x_left)),
            ]
            trapezoid = tuple(dict.fromkeys(corners))
            key = (ilo, ihi)
            run_idx = active.get(key)
            if run_idx is not None and not _separated(
                vertical_by_x.get(x_left, ()),
                wlo.y_at(x_left),
                whi.y_at(x_left),
            ):
                runs[run_idx][0].append(trapezoid)
            else:
                run_idx = len(runs)
                runs.append(([trapezoid], (xm, (ylo + yhi) / 2)))
            next_active[key] = run_idx
        active = next_active

    return points, edges, runs


def _separated(vertical_intervals, ylo, yhi):
    for (a, b) in vertical_intervals:
        if max(a, ylo) < min(b, yhi):
            return True
    return False


# ---------------------------------------------------------------------------
# Exact geometry predicates on shape cells


def _point_in_poly(pt, poly) -> bool:
    n = len(poly)
    for k in range(n):
        a, b = poly[k], poly[(k + 1) % n]
        if cross((b[0] - a[0], b[1] - a[1]), (pt[0] - a[0], pt[1] - a[1])) < 0:
            return False
    return True


def _cell_points(cell):
    if cell[0] == "point":
        return (cell[1],)
    if cell[0] == "seg":
        return (cell[1], cell[2])
    if cell[0] == "ray":
        return (cell[1],)
    return tuple(cell[1])


def _cell_pieces(cell):
    """Boundary (or carrier) of the cell as Piece objects."""
    if cell[0] == "seg":
        return (_seg_piece(cell[1], cell[2]),)
    if cell[0] == "ray":
        return (Piece(cell[1], cell[2], None),)
    if cell[0] == "poly":
        poly = cell[1]
        return tuple(
            _seg_piece(poly[k], poly[(k + 1) % len(poly)])
            for k in range(len(poly))
        )
    return ()


def _seg_piece(p, q):
    d = primitive(q[0] - p[0], q[1] - p[1])
    length = (q[0] - p[0]) / d[0] if d[0] != 0 else (q[1] - p[1]) / d[1]
    return Piece(p, d, length)


def cells_touch(c1, c2) -> bool:
    """Closed cells share at least one point (exact)."""
    if c1[0] != "ray" and c2[0] != "ray":
        b1, b2 = _cell_bbox(c1), _cell_bbox(c2)
        if b1[0] > b2[2] or b2[0] > b1[2] or b1[1] > b2[3] or b2[1] > b1[3]:
            return False
    for p in _cell_points(c1):
        if _point_in_cell(p, c2):
            return True
    for p in _cell_points(c2):
        if _point_in_cell(p, c1):
            return True
    for p1 in _cell_pieces(c1):
        for p2 in _cell_pieces(c2):
            if intersect_pieces(p1, p2) is not None:
                return True
    return False


def _point_in_cell(pt, cell) -> bool:
    if cell[0] == "point":
        return pt == cell[1]
    if cell[0] in ("seg", "ray"):
        piece = _cell_pieces(cell)[0]
        diff = (pt[0] - piece.origin[0], pt[1] - piece.origin[1])
        if cross(diff, piece.direction) != 0:
            return False
        d = piece.direction
        s = diff[0] / d[0] if d[0] != 0 else diff[1] / d[1]
        return s >= 0 and (piece.length is None or s <= piece.length)
    return _point_in_poly(pt, cell[1])


def _cell_bbox(cell):
    pts = _cell_points(cell)
    xs = [p[0] for p in pts]
    ys = [p[1] for p in pts]
    return (min(xs), min(ys), max(xs), max(ys))


# ---------------------------------------------------------------------------
# Locus computation


def _is_bitangent_vertex(curve, sample) -> bool:
    return stable_intersection(curve, TropicalLine(sample)).is_bitangent


def bitangent_locus(curve: TropicalPlaneCurve, pad_factor: int = 1):
    """All tropical bitangent classes of a smooth tropical quartic.

    Raises InternalConsistencyError unless exactly 7 connected components
    are found, and when a candidate bitangent cell reaches the boundary of
    the padded search box (shapes of smooth quartics are bounded).
    """
    bx0, by0, bx1, by1 = curve.bounding_box()
    spread = max(bx1 - bx0, by1 - by0)
    pad = pad_factor * spread
    box = (bx0 - pad, by0 - pad, bx1 + pad, by1 + pad)

    walls = _build_walls(curve, box)
    points, edges, runs = _arrangement_cells(walls)

    def on_boundary(pt):
        return pt[0] in (box[0], box[2]) or pt[1] in (box[1], box[3])

    passing = []  # shape cells
    boundary_points = []
    for pt in points:
        if _is_bitangent_vertex(curve, pt):
            if on_boundary(pt):
                # Truncation artifact; must lie on an unbounded tail below.
                boundary_points.append(pt)
            else:
                passing.append(("point", pt))
    for (p, q), sample in edges:
        if not _is_bitangent_vertex(curve, sample):
            continue
        p_out, q_out = on_boundary(p), on_boundary(q)
        if p_out and q_out:
            # A wall line coinciding with the search box boundary; treat as
            # a bounded piece, connectivity resolves via its neighbors.
            passing.append(("seg", p, q))
        elif q_out or p_out:
            inner, outer = (p, q) if q_out else (q, p)
            tail = (
                "ray",
                inner,
                primitive(outer[0] - inner[0], outer[1] - inner[1]),
            )
            _check_deep_sample(curve, tail, box)
            passing.append(tail)
        else:
            passing.append(("seg", p, q))
    for trapezoids, sample in runs:
        if _is_bitangent_vertex(curve, sample):
            cells = []
            for tz in trapezoids:
                if len(tz) >= 3:
                    cells.append(("poly", tz))
                elif len(tz) == 2:
                    cells.append(("seg", tz[0], tz[1]))
            _reject_boundary_contact(cells, box)
            passing.extend(cells)

    if not passing:
        raise InternalConsistencyError("no bitangent vertices found")

    for pt in boundary_points:
        if not any(_point_in_cell(pt, cell) for cell in passing):
            raise InternalConsistencyError(
                f"isolated bitangent vertex {pt} on the search box boundary"
            )

    # Merge closures into connected components.
    n = len(passing)
    parent = list(range(n))

    def find(i):
        while parent[i] != i:
            parent[i] = parent[parent[i]]
            i = parent[i]
        return i

    for i in range(n):
        for j in range(i + 1, n):
            if find(i) != find(j) and cells_touch(passing[i], passing[j]):
                parent[find(i)] = find(j)

    groups: dict = {}
    for i in range(n):
        groups.setdefault(find(i), []).append(passing[i])

    shapes = sorted(
        (tuple(sorted(g, key=_cell_sort_key)) for g in groups.values()),
        key=lambda cells: _cell_sort_key(cells[0]),
    )
    if len(shapes) != 7:
        raise InternalConsistencyError(
            f"found {len(shapes)} bitangent classes, expected 7; "
            "either the input violates smoothness hypotheses or the "
            "search box is too small (raise pad_factor)"
        )
    classes = []
    for idx, cells in enumerate(shapes, start=1):
        classes.append(
            BitangentClass(id=idx, cells=cells, witness=_shape_witness(cells))
        )
    return classes


def _cell_sort_key(cell):
    return (min(_cell_points(cell)), cell[0])


def _shape_witness(cells):
    # Prefer a 2-cell centroid, else a segment midpoint, else the point.
    for c in cells:
        if c[0] == "poly":
            pts = c[1]
            return (
                sum(p[0] for p in pts) / len(pts),
                sum(p[1] for p in pts) / len(pts),
            )
    for c in cells:
        if c[0] == "seg":
            return ((c[1][0] + c[2][0]) / 2, (c[1][1] + c[2][1]) / 2)
    return cells[0][1]


def _reject_boundary_contact(cells, box):
    x0, y0, x1, y1 = box
    for cell in cells:
        for (x, y) in _cell_points(cell):
            if x == x0 or x == x1 or y == y0 or y == y1:
                raise InternalConsistencyError(
                    "two-dimensional bitangent cell reaches the search box "
                    "boundary; unbounded 2-cells are not expected for smooth "
                    "quartics"
                )


def _check_deep_sample(curve, tail, box):
    """Confirm an unbounded tail stays bitangent far beyond the box."""
    depth = 2 * (box[2] - box[0])
    origin, d = tail[1], tail[2]
    deep = (origin[0] + depth * d[0], origin[1] + depth * d[1])
    if not _is_bitangent_vertex(curve, deep):
        raise InternalConsistencyError(
            f"tail at {origin} direction {d} fails bitangency at depth sample"
        )


# ---------------------------------------------------------------------------
# Classification


def _linf_point_seg(pt, p, q, unbounded=False):
    """Exact L-infinity distance from pt to segment [p, q] (or the ray
    from p through q when unbounded)."""
    u0, v0 = pt[0] - p[0], pt[1] - p[1]
    du, dv = q[0] - p[0], q[1] - p[1]

    def value(t):
        return max(abs(u0 - t * du), abs(v0 - t * dv))

    candidates = [mpq(0)]
    if not unbounded:
        candidates.append(mpq(1))
    for num, den in (
        (u0 - v0, du - dv),
        (u0 + v0, du + dv),
        (u0, du),
        (v0, dv),
    ):
        if den != 0:
            t = num / den
            if t > 0 and (unbounded or t < 1):
                candidates.append(t)
    return min(value(t) for t in candidates)


def _linf_point_cell(pt, cell):
    if cell[0] == "point":
        return max(abs(pt[0] - cell[1][0]), abs(pt[1] - cell[1][1]))
    if cell[0] == "seg":
        return _linf_point_seg(pt, cell[1], cell[2])
    if cell[0] == "ray":
        o, d = cell[1], cell[2]
        return _linf_point_seg(pt, o, (o[0] + d[0], o[1] + d[1]), unbounded=True)
    if _point_in_poly(pt, cell[1]):
        return mpq(0)
    poly = cell[1]
    return min(
        _linf_point_seg(pt, poly[k], poly[(k + 1) % len(poly)])
        for k in range(len(poly))
    )


def shape_distance(cls: BitangentClass, pt):
    """Exact sup-norm distance from a point to a class shape."""
    return min(_linf_point_cell(pt, cell) for cell in cls.cells)


def classify_line(classes, line: TropicalLine, tol=mpq(0)):
    """Unique class whose shape contains the line's vertex within tol.

    Returns the class id, or None when no class is within tol.  Raises
    AmbiguityError when two classes are both within tol.
    """
    if tol < 0:
        raise ValueError("tolerance must be nonnegative")
    pt = (mpq(line.vertex[0]), mpq(line.vertex[1]))
    hits = [c.id for c in classes if shape_distance(c, pt) <= tol]
    if not hits:
        return None
    if len(hits) > 1:
        raise AmbiguityError(
            f"vertex {pt} within tolerance of classes {hits}", candidates=hits
        )
    return hits[0]
