"""Independent combinatorial oracles used to derive frozen test values.

The main oracle here is combinatorial patchworking: given a unimodular
regular triangulation of the Newton polygon and a sign for each lattice
point, the real topology of the realized curve at small t > 0 is read off
a purely combinatorial object (the T-curve), with no numerics at all.
This is an entirely different route than the sign-sampling topology code
in the package, so agreement between the two is meaningful.
"""

from __future__ import annotations


def _quadrant_sign(signs, i, j, e1, e2):
    s = signs[(i, j)]
    if e1 < 0 and i % 2:
        s = -s
    if e2 < 0 and j % 2:
        s = -s
    return s


def _diamond_vertices(signs):
    """Signed lattice points of the diamond |x| + |y| <= 4 (four reflected
    copies of the simplex), keyed by coordinates."""
    vertices = {}
    for e1 in (1, -1):
        for e2 in (1, -1):
            for (i, j), _ in signs.items():
                vertices[(e1 * i, e2 * j)] = _quadrant_sign(signs, i, j, e1, e2)
    return vertices


def _diamond_edges(cells):
    """Edges of the triangulation copied into all four quadrants."""
    edges = set()
    for cell in cells:
        vs = list(cell)
        for a in range(3):
            for b in range(a + 1, 3):
                for e1 in (1, -1):
                    for e2 in (1, -1):
                        p = (e1 * vs[a][0], e2 * vs[a][1])
                        q = (e1 * vs[b][0], e2 * vs[b][1])
                        if p != q:
                            edges.add(tuple(sorted((p, q))))
    return edges


class _UF:
    def __init__(self):
        self.p = {}

    def add(self, x):
        self.p.setdefault(x, x)

    def find(self, x):
        while self.p[x] != x:
            self.p[x] = self.p[self.p[x]]
            x = self.p[x]
        return x

    def union(self, a, b):
        ra, rb = self.find(a), self.find(b)
        if ra != rb:
            self.p[ra] = rb


def _on_boundary(p):
    return abs(p[0]) + abs(p[1]) == 4


def patchwork_topology(cells, signs):
    """Real topology (ovals, nested, oval tree depths) of the T-curve.

    ``cells`` are triangles as triples of lattice points; ``signs`` maps
    each lattice point of the support to +1 or -1 (points with zero
    coefficient must not appear: patchworking needs a full triangulation
    of the simplex with all vertices signed).

    Returns (ovals, nested, depths) where depths lists the tree depth of
    each oval below the non-orientable complement region of RP^2.
    """
    vertices = _diamond_vertices(signs)
    edges = _diamond_edges(cells)

    def canon(p):
        if _on_boundary(p):
            return max(p, (-p[0], -p[1]))
        return p

    # Complement regions on RP^2: same-sign vertices joined by edges.
    uf = _UF()
    for p in vertices:
        uf.add(canon(p))
    for p, q in edges:
        if vertices[p] == vertices[q]:
            uf.union(canon(p), canon(q))
    region = {canon(p): uf.find(canon(p)) for p in vertices}
    roots = sorted(set(region.values()))

    adjacency = set()
    for p, q in edges:
        if vertices[p] != vertices[q]:
            pair = tuple(sorted((region[canon(p)], region[canon(q)])))
            adjacency.add(pair)
    if len(adjacency) != len(roots) - 1:
        raise ValueError(
            f"{len(roots)} regions with {len(adjacency)} adjacencies: "
            "not a tree (unexpected for a patchworked quartic)"
        )

    # Double cover: two diamond copies glued across the boundary with the
    # antipodal twist (boundary point p of one copy is -p of the other);
    # the non-orientable region lifts connectedly.
    def cover_key(copy, p):
        if _on_boundary(p):
            return min((copy, p), (1 - copy, (-p[0], -p[1])))
        return (copy, p)

    uf2 = _UF()
    for copy in (0, 1):
        for p in vertices:
            uf2.add(cover_key(copy, p))
        for p, q in edges:
            if vertices[p] == vertices[q]:
                uf2.union(cover_key(copy, p), cover_key(copy, q))
    lifts = {}
    for copy in (0, 1):
        for p in vertices:
            lifts.setdefault(region[canon(p)], set()).add(
                uf2.find(cover_key(copy, p))
            )
    non_orientable = [r for r in roots if len(lifts[r]) == 1]
    if len(non_orientable) != 1:
        raise ValueError("no unique non-orientable region")
    root = non_orientable[0]

    graph = {}
    for a, b in adjacency:
        graph.setdefault(a, []).append(b)
        graph.setdefault(b, []).append(a)
    depth = {root: 0}
    frontier = [root]
    while frontier:
        nxt = []
        for node in frontier:
            for nb in graph.get(node, []):
                if nb not in depth:
                    depth[nb] = depth[node] + 1
                    nxt.append(nb)
        frontier = nxt
    if len(depth) != len(roots):
        raise ValueError("disconnected region graph")
    depths = sorted(max(depth[a], depth[b]) for a, b in adjacency)
    ovals = len(roots) - 1
    return ovals, any(d > 1 for d in depths), tuple(depths)
