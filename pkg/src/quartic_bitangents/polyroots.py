"""Multiprecision complex root finding for exact rational polynomials.

Aberth-Ehrlich iteration with initial guesses read off the Newton polygon
of the coefficient magnitudes.  The polygon initialization matters here:
realized quartic data produces elimination polynomials whose roots spread
over hundreds of orders of magnitude, far beyond what double-precision
companion matrices can resolve.
"""

from __future__ import annotations

import math

import gmpy2
from gmpy2 import mpc, mpfr, mpq

from .errors import PrecisionError


def _log2_abs(q: mpq) -> float:
    num, den = q.numerator, q.denominator
    return (
        math.log2(abs(num) >> max(0, num.bit_length() - 64) or 1)
        + max(0, num.bit_length() - 64)
        - math.log2(den >> max(0, den.bit_length() - 64) or 1)
        - max(0, den.bit_length() - 64)
    )


def _newton_polygon_radii(pts):
    """Per-root starting radii from the lower hull of (k, -log2|a_k|)."""
    hull = [pts[0]]
    for p in pts[1:]:
        while len(hull) >= 2:
            (x1, y1), (x2, y2) = hull[-2], hull[-1]
            if (y2 - y1) * (p[0] - x1) >= (p[1] - y1) * (x2 - x1):
                hull.pop()
            else:
                break
        hull.append(p)
    radii = []
    for (k1, y1), (k2, y2) in zip(hull, hull[1:]):
        slope = (y2 - y1) / (k2 - k1)
        r = 2.0 ** (-slope)
        radii.extend([r] * (k2 - k1))
    return radii


def complex_roots(coeffs, precision: int, max_iterations: int = 400):
    """All complex roots of sum(coeffs[k] * z^k) with exact mpq coeffs.

    Roots at zero (trailing zero coefficients) are returned exactly.
    Raises PrecisionError if the Aberth iteration fails to settle.
    """
    return _aberth(
        list(coeffs),
        lambda c: mpfr(c.numerator) / mpfr(c.denominator),
        lambda c: _log2_abs(c),
        precision,
        max_iterations,
    )


def complex_roots_inexact(coeffs, precision: int, max_iterations: int = 400):
    """Roots of a polynomial whose coefficients are already mpfr/mpc."""
    return _aberth(
        list(coeffs),
        lambda c: mpc(c),
        lambda c: float(gmpy2.log2(abs(c))),
        precision,
        max_iterations,
    )


def _aberth(coeffs, lift, log2_abs, precision, max_iterations):
    while coeffs and coeffs[-1] == 0:
        coeffs.pop()
    if len(coeffs) <= 1:
        return []
    zero_roots = 0
    while coeffs[0] == 0:
        zero_roots += 1
        coeffs.pop(0)

    ctx = gmpy2.context(precision=precision + 64)
    with ctx:
        cs = [lift(c) for c in coeffs]
        n = len(cs) - 1
        dcs = [k * cs[k] for k in range(1, n + 1)]

        radii = _newton_polygon_radii(
            [(k, -log2_abs(c)) for k, c in enumerate(coeffs) if c != 0]
        )
        roots = []
        golden = 0.6180339887498949
        for idx, r in enumerate(radii):
            theta = 2 * math.pi * ((idx * golden) % 1.0) + 0.4
            roots.append(
                mpc(r * math.cos(theta), r * math.sin(theta))
            )

        def horner(poly, z):
            acc = poly[-1]
            for c in reversed(poly[:-1]):
                acc = acc * z + c
            return acc

        tol = mpfr(2) ** (-precision)
        # Multiple roots (extraneous repeated factors are common in
        # elimination output) stall the iteration at accuracy eps^(1/mult);
        # accept stagnation below a loose threshold -- true roots are
        # re-polished downstream on the original system.
        loose = mpfr(2) ** (-max(48, precision // 4))
        stalled_for = 0
        best_worst = None
        for _ in range(max_iterations):
            converged = True
            worst = mpfr(0)
            newton = []
            for z in roots:
                pz = horner(cs, z)
                dz = horner(dcs, z)
                if dz == 0:
                    newton.append(mpc(tol))
                    converged = False
                    continue
                ni = pz / dz
                newton.append(ni)
                rel = abs(ni) / (1 + abs(z))
                worst = max(worst, rel)
                if rel > tol:
                    converged = False
            if converged:
                break
            if best_worst is not None and worst > best_worst / 2:
                stalled_for += 1
            else:
                stalled_for = 0
            best_worst = worst if best_worst is None else min(best_worst, worst)
            if stalled_for >= 12 and worst <= loose:
                break
            new_roots = []
            for i, z in enumerate(roots):
                s = mpc(0)
                for j, w in enumerate(roots):
                    if i != j:
                        diff = z - w
                        if diff == 0:
                            diff = mpc(tol)
                        s += 1 / diff
                denom = 1 - newton[i] * s
                if denom == 0:
                    denom = mpc(tol)
                new_roots.append(z - newton[i] / denom)
            roots = new_roots
        else:
            raise PrecisionError(
                "root iteration did not converge; raise precision or "
                "perturb the evaluation point"
            )
        return [mpc(0)] * zero_roots + roots
