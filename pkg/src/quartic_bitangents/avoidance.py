"""Avoidance locus of a realized quartic in the dual projective plane.

A real line avoids the real quartic when their intersection in RP^2 is
empty.  Restricting f to a rational line gives a binary quartic with exact
rational coefficients, so avoidance is decided exactly by a Sturm count:
no real roots of the dehomogenization and a nonzero leading coefficient.

Connected components of the avoidance locus are found by sampling the
dual plane on the boundary of the cube [-1,1]^3 modulo the antipodal map,
with a multiplicatively warped grid (values +-mantissa * 2^-k).  Realized
quartics at small t have avoiding lines whose coefficients spread over
many orders of magnitude, so a linear grid would either miss entire
components or be astronomically large; the warped grid is uniform in the
log of each coordinate, which is the natural scale here.
"""

from __future__ import annotations

from dataclasses import dataclass

from gmpy2 import mpq

from .errors import (
    InternalConsistencyError,
    IsolationError,
    ResolutionError,
    UniquenessError,
)

EXPECTED_COMPONENT_COUNTS = (1, 2, 4, 7)


@dataclass(frozen=True)
class DualPoint:
    """A point of the dual projective plane: the line a*x + b*y + c*z = 0."""

    coords: tuple  # (a, b, c) as mpq, not all zero

    def canonical(self):
        """Representative with max |coordinate| = 1, first nonzero positive."""
        a, b, c = (mpq(v) for v in self.coords)
        scale = max(abs(a), abs(b), abs(c))
        if scale == 0:
            raise ValueError("zero triple is not a projective point")
        a, b, c = a / scale, b / scale, c / scale
        for v in (a, b, c):
            if v:
                if v < 0:
                    a, b, c = -a, -b, -c
                break
        return (a, b, c)


# ---------------------------------------------------------------------------
# Exact avoidance predicate.


def _conv(p, q):
    out = [mpq(0)] * (len(p) + len(q) - 1)
    for i, a in enumerate(p):
        if a:
            for j, b in enumerate(q):
                out[i + j] += a * b
    return out


def _linear_power(form, n):
    out = [mpq(1)]
    for _ in range(n):
        out = _conv(out, form)
    return out


def restrict_to_line(values: dict, point) -> list:
    """Binary quartic f restricted to the line, as coefficients of s^k t^(4-k).

    The line is parametrized by two exact rational points chosen from the
    coordinate of largest absolute value, so the parametrization never
    degenerates.
    """
    a, b, c = (mpq(v) for v in point)
    pivot = max(range(3), key=lambda k: abs((a, b, c)[k]))
    if pivot == 2:
        p0, p1 = (c, mpq(0), -a), (mpq(0), c, -b)
    elif pivot == 0:
        p0, p1 = (-b, a, mpq(0)), (-c, mpq(0), a)
    else:
        p0, p1 = (b, -a, mpq(0)), (mpq(0), c, -b)
    forms = [(p0[k], p1[k]) for k in range(3)]  # X, Y, Z as linear forms in (s, t)
    powers = [
        [_linear_power(forms[k], n) for n in range(5)] for k in range(3)
    ]
    out = [mpq(0)] * 5
    for (i, j), value in values.items():
        if not value:
            continue
        term = _conv(_conv(powers[0][i], powers[1][j]), powers[2][4 - i - j])
        for k, coeff in enumerate(term):
            out[k] += value * coeff
    return out


def _poly_div(num, den):
    num = list(num)
    q = [mpq(0)] * max(1, len(num) - len(den) + 1)
    inv = 1 / den[-1]
    for k in range(len(num) - len(den), -1, -1):
        factor = num[k + len(den) - 1] * inv
        q[k] = factor
        if factor:
            for j, d in enumerate(den):
                num[k + j] -= factor * d
    rem = num[: len(den) - 1]
    while rem and rem[-1] == 0:
        rem.pop()
    return q, rem


def _trim(p):
    p = list(p)
    while p and p[-1] == 0:
        p.pop()
    return p


def _poly_gcd(p, q):
    p, q = _trim(p), _trim(q)
    while q:
        _, r = _poly_div(p, q)
        p, q = q, r
    return p


def _derivative(p):
    return [k * c for k, c in enumerate(p)][1:]


def real_root_count(coeffs) -> int:
    """Number of distinct real roots, by a Sturm sequence on the
    square-free part (exact rational arithmetic throughout)."""
    p = _trim(coeffs)
    if len(p) <= 1:
        return 0
    g = _poly_gcd(p, _derivative(p))
    if len(g) > 1:
        p, _ = _poly_div(p, g)
    chain = [p, _derivative(p)]
    while len(chain[-1]) > 1:
        _, r = _poly_div(chain[-2], chain[-1])
        if not r:
            break
        chain.append([-c for c in r])
    if chain[-1] == []:
        chain.pop()

    def variations(at_minus_infinity):
        signs = []
        for poly in chain:
            s = 1 if poly[-1] > 0 else -1
            if at_minus_infinity and (len(poly) - 1) % 2 == 1:
                s = -s
            signs.append(s)
        return sum(1 for x, y in zip(signs, signs[1:]) if x != y)

    return variations(True) - variations(False)


def line_avoids(values: dict, point) -> bool:
    """True when the real line meets the real quartic nowhere in RP^2."""
    b = restrict_to_line(values, DualPoint(tuple(point)).canonical())
    if not any(b):
        raise InternalConsistencyError("line contained in the quartic")
    if b[4] == 0:
        return False  # the parametrization's point at infinity lies on the curve
    return real_root_count(b) == 0


def evaluate(values: dict, x, y, z):
    """Exact value of the realized quartic at a rational projective point."""
    x, y, z = mpq(x), mpq(y), mpq(z)
    total = mpq(0)
    for (i, j), value in values.items():
        if value:
            total += value * x**i * y**j * z ** (4 - i - j)
    return total


# ---------------------------------------------------------------------------
# Warped grid on the cube-surface model of the (dual) projective plane.


def warped_axis(depth: int, refine: int = 1):
    """Symmetric axis values: 0 and +-m * 2^-k, uniform in log scale."""
    positives = []
    for k in range(depth + 1):
        for j in range(refine):
            value = mpq(2 * refine, (2 * refine + j) * 2**k)
            if value <= 1:
                positives.append(value)
    positives = sorted(set(positives))
    return [-v for v in reversed(positives)] + [mpq(0)] + positives


def _face_points(axis):
    """Grid points per face: face f has coordinate f equal to 1."""
    faces = []
    for f in range(3):
        pts = {}
        for iu, u in enumerate(axis):
            for iv, v in enumerate(axis):
                coords = [None, None, None]
                coords[f] = mpq(1)
                others = [k for k in range(3) if k != f]
                coords[others[0]] = u
                coords[others[1]] = v
                pts[(iu, iv)] = DualPoint(tuple(coords)).canonical()
        faces.append(pts)
    return faces


class _UnionFind:
    def __init__(self):
        self.parent = {}

    def add(self, x):
        self.parent.setdefault(x, x)

    def find(self, x):
        root = x
        while self.parent[root] != root:
            root = self.parent[root]
        while self.parent[x] != root:
            self.parent[x], x = root, self.parent[x]
        return root

    def union(self, x, y):
        rx, ry = self.find(x), self.find(y)
        if rx != ry:
            self.parent[rx] = ry


def _grid_components(axis, keep, neighborhood=8):
    """Union-find over grid points selected by the ``keep`` predicate.

    Returns (labels dict canonical-key -> root, faces) where cross-face
    and antipodal gluing is automatic because keys are canonical.
    """
    faces = _face_points(axis)
    uf = _UnionFind()
    kept = {}
    for pts in faces:
        for idx, key in pts.items():
            if key not in kept:
                kept[key] = keep(key)
            if kept[key]:
                uf.add(key)
    if neighborhood == 8:
        steps = [(1, 0), (0, 1), (1, 1), (1, -1)]
    else:
        steps = [(1, 0), (0, 1)]
    n = len(axis)
    for pts in faces:
        for (iu, iv), key in pts.items():
            if not kept[key]:
                continue
            for du, dv in steps:
                ju, jv = iu + du, iv + dv
                if 0 <= ju < n and 0 <= jv < n:
                    other = pts[(ju, jv)]
                    if kept[other]:
                        uf.union(key, other)
    labels = {key: uf.find(key) for key, ok in kept.items() if ok}
    return labels, faces


@dataclass(frozen=True)
class AvoidanceComponents:
    """Connected components of the avoidance locus at one grid resolution."""

    axis: tuple
    labels: dict  # canonical key -> component root key
    representatives: dict  # component root key -> one member

    @property
    def count(self) -> int:
        return len(self.representatives)

    def members(self, root):
        return [k for k, r in self.labels.items() if r == root]


def components(values: dict, depth: int, refine: int = 1,
               expected=EXPECTED_COMPONENT_COUNTS) -> AvoidanceComponents:
    """Avoidance-locus components on the warped grid at the given depth.

    The caller should confirm stability by comparing counts at two
    refinements; a count outside ``expected`` raises ResolutionError.
    """
    axis = warped_axis(depth, refine)
    labels, _ = _grid_components(axis, lambda key: line_avoids(values, key))
    roots = {}
    for key, root in labels.items():
        roots.setdefault(root, key)
    result = AvoidanceComponents(tuple(axis), labels, roots)
    if expected is not None and result.count not in expected:
        raise ResolutionError(
            f"{result.count} avoidance components at depth {depth}; "
            f"expected one of {expected} -- refine the grid"
        )
    return result


def stable_components(values: dict, depth: int,
                      expected=EXPECTED_COMPONENT_COUNTS) -> AvoidanceComponents:
    """Components with a dual-resolution stability check (refine 1 vs 2)."""
    coarse = components(values, depth, refine=1, expected=expected)
    fine = components(values, depth, refine=2, expected=expected)
    if coarse.count != fine.count:
        raise ResolutionError(
            f"component count changed under refinement "
            f"({coarse.count} -> {fine.count}); increase depth"
        )
    return fine


def _locate_label(comp: AvoidanceComponents, point) -> object | None:
    """Component label of the grid point nearest to an off-grid avoiding
    point, restricted to the surrounding 3x3 block of its face."""
    a, b, c = DualPoint(tuple(point)).canonical()
    coords = (a, b, c)
    face = max(range(3), key=lambda k: abs(coords[k]))
    others = [k for k in range(3) if k != face]
    sign = 1 if coords[face] > 0 else -1
    u = coords[others[0]] * sign
    v = coords[others[1]] * sign
    axis = comp.axis
    n = len(axis)

    def bracket(x):
        lo = 0
        for idx, value in enumerate(axis):
            if value <= x:
                lo = idx
        return lo

    iu, iv = bracket(u), bracket(v)
    found = set()
    for ju in range(max(0, iu - 1), min(n, iu + 3)):
        for jv in range(max(0, iv - 1), min(n, iv + 3)):
            coords2 = [None, None, None]
            coords2[face] = mpq(1)
            coords2[others[0]] = axis[ju]
            coords2[others[1]] = axis[jv]
            key = DualPoint(tuple(coords2)).canonical()
            if key in comp.labels:
                found.add(comp.labels[key])
    if len(found) == 1:
        return found.pop()
    return None


def _labelled_walk(comp: AvoidanceComponents, values: dict, base, direction,
                   rho) -> object | None:
    """Label of the component entered from ``base`` along ``direction``.

    Starts at the multiplicative perturbation of radius rho and, while the
    perturbed line still avoids the curve, grows the radius in small
    geometric steps so thin component necks are traversed toward grid
    territory.  Small steps keep the walk inside one component.
    """
    scale = mpq(1)
    label = None
    for _ in range(40):
        cand = tuple(
            v * (1 + d * rho * scale) for v, d in zip(base, direction)
        )
        if not any(cand) or not line_avoids(values, cand):
            return label  # left the locus; report the best label so far
        found = _locate_label(comp, cand)
        if found is not None:
            return found
        if rho * scale > 1:
            return label
        scale = scale * mpq(5, 4)
    return label


def assign_bitangent(comp: AvoidanceComponents, values: dict, point,
                     radii=None) -> object:
    """Avoidance component adjacent to a real bitangent line.

    The bitangent itself touches the curve, so nearby avoiding lines are
    sampled by multiplicative perturbation of its coordinates over a
    shrinking radius schedule.  The label must be unique and persist over
    at least two consecutive radii.
    """
    if radii is None:
        radii = [mpq(1, 2**k) for k in range(2, 16)]
    base = DualPoint(tuple(point)).canonical()
    history = []
    for rho in radii:
        labels = set()
        for da in (-1, 0, 1):
            for db in (-1, 0, 1):
                for dc in (-1, 0, 1):
                    if da == db == dc == 0:
                        continue
                    label = _labelled_walk(comp, values, base, (da, db, dc), rho)
                    if label is not None:
                        labels.add(label)
        history.append(labels)
        if len(history) >= 2 and history[-1] and history[-1] == history[-2]:
            if len(history[-1]) == 1:
                return history[-1].pop()
            raise UniquenessError(
                f"bitangent at {tuple(float(v) for v in base)} borders "
                f"{len(history[-1])} components persistently"
            )
    raise IsolationError(
        "no avoiding neighbors of the bitangent could be located on the grid"
    )


# ---------------------------------------------------------------------------
# Real topology of the primal curve.


@dataclass(frozen=True)
class TopologyReport:
    """Isotopy data of the real quartic in RP^2."""

    ovals: int  # s, the number of ovals
    region_count: int  # complement regions, always ovals + 1
    oval_depths: tuple  # tree depth of each oval from the non-orientable region
    nested: bool

    @property
    def summary(self) -> str:
        if self.ovals == 0:
            return "empty real locus"
        shape = "nested" if self.nested else "non-nested"
        return f"{self.ovals} ovals, {shape}"


def real_topology(values: dict, depth: int, refine: int = 1) -> TopologyReport:
    """Ovals and nesting from exact signs of f on the warped primal grid.

    The complement of s disjoint ovals in RP^2 has s + 1 regions whose
    adjacency graph is a tree rooted at the unique non-orientable region;
    an oval is nested when its tree depth exceeds 1.  The non-orientable
    region is recognized on the sphere double cover: its preimage is
    connected while every disk-like region lifts to two copies.
    """
    axis = warped_axis(depth, refine)

    sign_cache = {}

    def sign_at(key):
        if key not in sign_cache:
            sign_cache[key] = evaluate(values, *key)
        return sign_cache[key]

    labels_pos, faces = _grid_components(
        axis, lambda key: sign_at(key) > 0, neighborhood=4
    )
    labels_neg, _ = _grid_components(
        axis, lambda key: sign_at(key) < 0, neighborhood=4
    )
    labels = dict(labels_pos)
    labels.update(labels_neg)
    roots = sorted({labels[k] for k in labels}, key=str)
    if not roots:
        raise ResolutionError("no nonzero sign samples; degenerate input")

    # Region adjacency: 4-neighbors with opposite signs witness the oval
    # between their regions.
    adjacency = set()
    n = len(axis)
    for pts in faces:
        for (iu, iv), key in pts.items():
            if key not in labels:
                continue
            for du, dv in ((1, 0), (0, 1)):
                ju, jv = iu + du, iv + dv
                if 0 <= ju < n and 0 <= jv < n:
                    other = pts[(ju, jv)]
                    if other in labels and sign_at(key) * sign_at(other) < 0:
                        pair = tuple(sorted((str(labels[key]), str(labels[other]))))
                        adjacency.add(pair)

    region_count = len(roots)
    if len(adjacency) != region_count - 1:
        raise ResolutionError(
            f"{region_count} regions with {len(adjacency)} adjacencies do "
            "not form a tree; refine the grid"
        )

    # Double cover: same construction on all six signed faces of the cube,
    # with non-canonicalized keys.
    cover_counts = _double_cover_counts(axis, sign_at, labels)
    non_orientable = [r for r in roots if cover_counts[str(r)] == 1]
    if len(non_orientable) != 1:
        raise ResolutionError(
            "could not identify the non-orientable complement region"
        )
    root = str(non_orientable[0])

    graph = {}
    for x, y in adjacency:
        graph.setdefault(x, []).append(y)
        graph.setdefault(y, []).append(x)
    depth_of = {root: 0}
    frontier = [root]
    while frontier:
        nxt = []
        for node in frontier:
            for nb in graph.get(node, []):
                if nb not in depth_of:
                    depth_of[nb] = depth_of[node] + 1
                    nxt.append(nb)
        frontier = nxt
    if len(depth_of) != region_count:
        raise ResolutionError("region adjacency graph is disconnected")

    oval_depths = tuple(
        sorted(max(depth_of[x], depth_of[y]) for x, y in adjacency)
    )
    return TopologyReport(
        ovals=region_count - 1,
        region_count=region_count,
        oval_depths=oval_depths,
        nested=any(d > 1 for d in oval_depths),
    )


def _double_cover_counts(axis, sign_at, labels):
    """Number of double-cover components over each region of RP^2."""
    uf = _UnionFind()
    kept = {}
    face_maps = []
    for f in range(3):
        for face_sign in (1, -1):
            pts = {}
            for iu, u in enumerate(axis):
                for iv, v in enumerate(axis):
                    coords = [None, None, None]
                    coords[f] = mpq(face_sign)
                    others = [k for k in range(3) if k != f]
                    coords[others[0]] = u
                    coords[others[1]] = v
                    key = tuple(coords)
                    pts[(iu, iv)] = key
                    if key not in kept:
                        canonical = DualPoint(key).canonical()
                        kept[key] = canonical in labels
                        if kept[key]:
                            uf.add(key)
            face_maps.append(pts)
    n = len(axis)
    for pts in face_maps:
        for (iu, iv), key in pts.items():
            if not kept[key]:
                continue
            for du, dv in ((1, 0), (0, 1)):
                ju, jv = iu + du, iv + dv
                if 0 <= ju < n and 0 <= jv < n:
                    other = pts[(ju, jv)]
                    if kept[other]:
                        down_a = DualPoint(key).canonical()
                        down_b = DualPoint(other).canonical()
                        if labels[down_a] == labels[down_b]:
                            uf.union(key, other)
    counts = {}
    seen_roots = {}
    for key, ok in kept.items():
        if not ok:
            continue
        region = str(labels[DualPoint(key).canonical()])
        cover_root = uf.find(key)
        seen_roots.setdefault(region, set()).add(cover_root)
    for region, rs in seen_roots.items():
        counts[region] = len(rs)
    return counts
