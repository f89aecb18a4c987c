"""Search sign patterns on the honeycomb lift for the six real types.

The honeycomb valuation v(i, j) = i^2 + i*j + j^2 induces a unimodular
triangulation, so combinatorial patchworking predicts the real topology
of any realization with coefficients +-1 at small t.  This script
enumerates sign patterns, buckets them by (ovals, nested), and prints one
representative per bucket.  Chosen representatives are then validated
numerically before being frozen as package fixtures.

Run from the repository root:  python3 scripts/find_fixtures.py
"""

import itertools
import os
import sys

sys.path.insert(0, os.path.join(os.path.dirname(__file__), "..", "src"))
sys.path.insert(0, os.path.join(os.path.dirname(__file__), "..", "tests"))

from gmpy2 import mpq

from oracles import patchwork_topology
from quartic_bitangents.quartic import (
    LATTICE_POINTS,
    ValuedCoefficient,
    ValuedQuartic,
    is_tropically_smooth,
    newton_subdivision,
)

TARGETS = {
    (0, False): "empty",
    (1, False): "one-oval",
    (2, True): "two-nested",
    (2, False): "two-ovals",
    (3, False): "three-ovals",
    (4, False): "four-ovals",
}


def honeycomb_cells():
    coeffs = {
        (i, j): ValuedCoefficient(mpq(1), mpq(i * i + i * j + j * j))
        for (i, j) in LATTICE_POINTS
    }
    q = ValuedQuartic("honeycomb", coeffs)
    sub = newton_subdivision(q)
    assert is_tropically_smooth(sub)
    return [cell.vertices for cell in sub.cells]


def main():
    cells = honeycomb_cells()
    points = list(LATTICE_POINTS)
    found = {}
    counts = {}
    for bits in itertools.product((1, -1), repeat=len(points) - 1):
        signs = dict(zip(points[1:], bits))
        signs[points[0]] = 1  # overall sign is projective gauge
        try:
            ovals, nested, depths = patchwork_topology(cells, signs)
        except ValueError:
            continue
        key = (ovals, nested)
        counts[key] = counts.get(key, 0) + 1
        if key in TARGETS and key not in found:
            found[key] = (signs, depths)
    for key in sorted(counts):
        print(f"type {key}: {counts[key]} patterns")
    print()
    for key, name in TARGETS.items():
        if key not in found:
            print(f"{name}: NOT FOUND with honeycomb signs")
            continue
        signs, depths = found[key]
        pattern = " ".join(
            f"{i}{j}:{'+' if signs[(i, j)] > 0 else '-'}"
            for (i, j) in points
        )
        print(f"{name}: depths={depths} {pattern}")


if __name__ == "__main__":
    main()
