"""Generate the shipped fixture curves.

Five fixtures realize the patchworked real types found by
``find_fixtures.py`` on the honeycomb lift v(i, j) = i^2 + i*j + j^2:
the sign pattern fixes the real topology at small t, and generic
magnitude tweaks keep the bitangent configuration away from symmetric
degeneracies.

The sixth ("empty") fixture needs a different construction: combinatorial
patchworking shows that no tropically smooth quartic has an empty real
locus in the asymptotic regime (every sign pattern on a full unimodular
triangulation produces a curve).  Instead it uses the affinely shifted
lift h = (v - 4(i + j)) / 12, whose height range is only 5/12, together
with damped odd-degree coefficients: the realized curve is then provably
close to a positive definite combination of even monomials and has empty
real locus at every default schedule point, while the lift still induces
the honeycomb triangulation exactly (affine shifts do not change regular
subdivisions).

Run from the repository root:  python3 scripts/make_fixtures.py
"""

import os
import sys

sys.path.insert(0, os.path.join(os.path.dirname(__file__), "..", "src"))

from gmpy2 import mpq

from quartic_bitangents.quartic import (
    LATTICE_POINTS,
    ValuedCoefficient,
    ValuedQuartic,
    is_tropically_smooth,
    newton_subdivision,
    serialize_quartic,
)

FIXTURE_DIR = os.path.join(
    os.path.dirname(__file__), "..", "src", "quartic_bitangents", "fixtures"
)

# Sign patterns from scripts/find_fixtures.py (combinatorial patchworking
# on the honeycomb triangulation); "-" entries per fixture.
NEGATIVES = {
    "one-oval": {(3, 1)},
    "two-nested": set(),
    "two-ovals": {(2, 2)},
    "three-ovals": {(2, 0), (2, 2)},
    "four-ovals": {(1, 1), (1, 3), (3, 1)},
}


def _tweak(n):
    """Generic positive rational near 1, deterministic in the point index."""
    return mpq(7 + (5 * n * n + 3 * n) % 11, 9)


def patchworked(name):
    coeffs = {}
    for n, (i, j) in enumerate(LATTICE_POINTS):
        sign = -1 if (i, j) in NEGATIVES[name] else 1
        coeffs[(i, j)] = ValuedCoefficient(
            sign * _tweak(n), mpq(i * i + i * j + j * j)
        )
    return ValuedQuartic(name, coeffs)


def empty_fixture():
    coeffs = {}
    for n, (i, j) in enumerate(LATTICE_POINTS):
        even = i % 2 == 0 and j % 2 == 0
        base = mpq(1) if even else mpq(1, 20)
        h = mpq(i * i + i * j + j * j - 4 * (i + j), 12)
        coeffs[(i, j)] = ValuedCoefficient(base * _tweak(n), h)
    return ValuedQuartic("empty", coeffs)


def main():
    os.makedirs(FIXTURE_DIR, exist_ok=True)
    quartics = [empty_fixture()] + [patchworked(name) for name in NEGATIVES]
    for q in quartics:
        if not is_tropically_smooth(newton_subdivision(q)):
            raise SystemExit(f"fixture {q.name} is not tropically smooth")
        path = os.path.join(FIXTURE_DIR, f"{q.name}.qrt")
        with open(path, "w") as fh:
            fh.write(serialize_quartic(q))
        print(f"wrote {path}")


if __name__ == "__main__":
    main()
