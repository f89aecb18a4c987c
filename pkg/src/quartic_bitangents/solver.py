"""Numerical bitangents of realized quartics and their tropicalizations.

Realizing a valued quartic at a small rational t in (0, 1) produces a
plane quartic with exact rational coefficients ``coef * t^val``.  Its 28
bitangent lines are found by exact elimination followed by multiprecision
root isolation:

* restrict f to the pencil y = m*x + c (and the second chart x = m*y + c);
  the restriction is ``A4 x^4 + ... + A0`` with each ``A_k`` an exact
  bivariate polynomial in (m, c);
* the restriction is a perfect square k*(x^2 + p*x + q)^2 exactly when
  ``E1 = A3*G - 8*A4^2*A1`` and ``E2 = G^2 - 64*A4^3*A0`` vanish, where
  ``G = 4*A4*A2 - A3^2``;
* eliminate c by the Sylvester resultant of E1 and E2, computed exactly by
  evaluation at integer points and Lagrange interpolation (degree <= 72);
* isolate the roots m with the Aberth iteration, back-substitute into the
  cubic E1(m, .), filter by E2, and polish (m, c) with a bivariate Newton
  step; the line z = 0 is handled by an exact perfect-square test.

Valuations of the line coefficients are estimated as slopes of
log|coefficient| against log t over a schedule of t values, with lines
matched between schedule points by optimal assignment in slope space.
"""

from __future__ import annotations

import math
import os
from dataclasses import dataclass

import gmpy2
import sympy
from gmpy2 import mpc, mpfr, mpq
from scipy.optimize import linear_sum_assignment

from .curve import TropicalLine
from .errors import (
    DegeneracyError,
    EstimationError,
    InternalConsistencyError,
    TrackingError,
    UnsupportedInputError,
)
from .polyroots import complex_roots, complex_roots_inexact
from .quartic import ValuedQuartic

EXPECTED_BITANGENTS = 28
PRECISION_ENV_VAR = "QUARTIC_BITANGENTS_PRECISION"
DEFAULT_SCHEDULE = (mpq(1, 100), mpq(1, 1000), mpq(1, 10000))

#: Relative nearness under which two normalized lines are the same line.
DEDUP_RELATIVE_TOL = 1e-9

#: A slope may be rounded to an admissible valuation at most this far away.
SLOPE_ROUNDING_TOL = 0.2


def default_precision() -> int:
    """Working precision in bits, overridable via the environment."""
    return int(os.environ.get(PRECISION_ENV_VAR, "256"))


@dataclass(frozen=True)
class RealizedQuartic:
    """The quartic over Q obtained by substituting a concrete t."""

    source: ValuedQuartic
    t: mpq
    precision: int
    values: dict  # (i, j) -> exact mpq coefficient of x^i y^j z^(4-i-j)
    exact: bool  # False when a fractional valuation forced dyadic rounding


def realize(q: ValuedQuartic, t, precision: int | None = None) -> RealizedQuartic:
    """Substitute t for the uniformizer: coefficient (i,j) = coef * t^val."""
    t = mpq(t)
    if not 0 < t < 1:
        raise UnsupportedInputError(f"t must lie in (0, 1), got {t}")
    if precision is None:
        precision = default_precision()
    values = {}
    exact = True
    for point, vc in q.coeffs.items():
        if vc.is_zero:
            values[point] = mpq(0)
            continue
        val = vc.val
        if val.denominator == 1:
            values[point] = vc.coef * t ** int(val)
        else:
            # t^val is irrational; round to the working precision.  The
            # resulting dyadic rational is then treated exactly downstream.
            with gmpy2.context(precision=precision):
                power = gmpy2.exp(
                    mpfr(val.numerator)
                    / mpfr(val.denominator)
                    * gmpy2.log(mpfr(t.numerator) / mpfr(t.denominator))
                )
            values[point] = vc.coef * mpq(power)
            exact = False
    return RealizedQuartic(q, t, precision, values, exact)


@dataclass(frozen=True)
class BitangentLine:
    """One of the 28 bitangents, as a projective line u*x + v*y + w*z = 0.

    Coordinates are normalized so the coordinate of largest modulus is
    exactly 1.  ``tangency_points`` are the two projective points where the
    line meets the quartic doubly.  ``residual`` is the relative size of
    the perfect-square defect of the restriction.
    """

    coords: tuple  # (u, v, w) as mpc
    tangency_points: tuple  # two projective triples of mpc
    residual: float
    is_real: bool
    conjugate_index: int | None = None

    def with_conjugate(self, index):
        return BitangentLine(
            self.coords, self.tangency_points, self.residual, self.is_real, index
        )


# ---------------------------------------------------------------------------
# Exact bivariate polynomials over Q, as {(deg_m, deg_c): mpq} dictionaries.


def _poly_add(p, q):
    out = dict(p)
    for k, v in q.items():
        s = out.get(k, mpq(0)) + v
        if s:
            out[k] = s
        elif k in out:
            del out[k]
    return out


def _poly_mul(p, q):
    out = {}
    for (a1, b1), v1 in p.items():
        for (a2, b2), v2 in q.items():
            k = (a1 + a2, b1 + b2)
            s = out.get(k, mpq(0)) + v1 * v2
            if s:
                out[k] = s
            elif k in out:
                del out[k]
    return out


def _poly_scale(p, s):
    return {k: v * s for k, v in p.items()} if s else {}


def _poly_diff(p, var):
    out = {}
    for (a, b), v in p.items():
        if var == 0 and a > 0:
            out[(a - 1, b)] = v * a
        elif var == 1 and b > 0:
            out[(a, b - 1)] = v * b
    return out


def _poly_eval(p, m, c):
    """Evaluate at mpc arguments; also return the sum of term magnitudes."""
    total = mpc(0)
    scale = mpfr(0)
    for (a, b), v in p.items():
        term = (mpfr(v.numerator) / mpfr(v.denominator)) * m**a * c**b
        total += term
        scale += abs(term)
    return total, scale


def _restriction_coefficients(values: dict, chart: str):
    """A_k(m, c) for k = 0..4 from f restricted to the chart's pencil.

    Chart "y": substitute y = m*x + c, collect powers of x.
    Chart "x": substitute x = m*y + c, collect powers of y.
    """
    coeffs = [dict() for _ in range(5)]
    for (i, j), value in values.items():
        if not value:
            continue
        if chart == "y":
            fixed, expanded = i, j
        else:
            fixed, expanded = j, i
        for l in range(expanded + 1):
            k = fixed + l
            binom = mpq(math.comb(expanded, l))
            coeffs[k] = _poly_add(
                coeffs[k], {(l, expanded - l): value * binom}
            )
    return coeffs


def _elimination_pair(coeffs):
    """E1 and E2 whose common zeros are the perfect-square pencil members."""
    a4, a3, a2, a1, a0 = coeffs[4], coeffs[3], coeffs[2], coeffs[1], coeffs[0]
    g = _poly_add(_poly_scale(_poly_mul(a4, a2), mpq(4)), _poly_scale(_poly_mul(a3, a3), mpq(-1)))
    e1 = _poly_add(
        _poly_mul(a3, g),
        _poly_scale(_poly_mul(_poly_mul(a4, a4), a1), mpq(-8)),
    )
    e2 = _poly_add(
        _poly_mul(g, g),
        _poly_scale(_poly_mul(_poly_mul(_poly_mul(a4, a4), a4), a0), mpq(-64)),
    )
    return e1, e2


def _by_c_degree(p):
    """Split a bivariate dict into a list (by deg_c) of univariate-in-m dicts."""
    deg = max((b for (_, b) in p), default=0)
    out = [dict() for _ in range(deg + 1)]
    for (a, b), v in p.items():
        out[b][a] = v
    return out


def _eval_m(univ_m: dict, m0: mpq) -> mpq:
    return sum((v * m0**a for a, v in univ_m.items()), mpq(0))


def _det_exact(rows):
    """Determinant of a square mpq matrix by Gaussian elimination."""
    n = len(rows)
    rows = [list(r) for r in rows]
    det = mpq(1)
    for col in range(n):
        pivot = None
        for r in range(col, n):
            if rows[r][col]:
                pivot = r
                break
        if pivot is None:
            return mpq(0)
        if pivot != col:
            rows[col], rows[pivot] = rows[pivot], rows[col]
            det = -det
        det *= rows[col][col]
        inv = 1 / rows[col][col]
        for r in range(col + 1, n):
            if rows[r][col]:
                factor = rows[r][col] * inv
                for cc in range(col, n):
                    rows[r][cc] -= factor * rows[col][cc]
    return det


def _sylvester_resultant(p_coeffs, q_coeffs, dp, dq):
    """Res of two univariate polynomials given coefficient lists (low->high)
    padded to formal degrees dp and dq."""
    p = list(p_coeffs) + [mpq(0)] * (dp + 1 - len(p_coeffs))
    q = list(q_coeffs) + [mpq(0)] * (dq + 1 - len(q_coeffs))
    n = dp + dq
    rows = []
    for shift in range(dq):
        row = [mpq(0)] * n
        for k in range(dp + 1):
            row[shift + dp - k] = p[k]
        rows.append(row)
    for shift in range(dp):
        row = [mpq(0)] * n
        for k in range(dq + 1):
            row[shift + dq - k] = q[k]
        rows.append(row)
    return _det_exact(rows)


def _interpolate(nodes, values):
    """Exact Lagrange interpolation; returns coefficients low -> high."""
    n = len(nodes)
    master = [mpq(1)]
    for x in nodes:
        master = [mpq(0)] + master
        for k in range(len(master) - 1):
            master[k] -= x * master[k + 1]
    coeffs = [mpq(0)] * n
    for x, y in zip(nodes, values):
        if not y:
            continue
        # Synthetic division of the master polynomial by (t - x).
        quotient = [mpq(0)] * n
        carry = master[n]
        for k in range(n - 1, -1, -1):
            quotient[k] = carry
            carry = master[k] + x * carry
        denom = sum((q * x**k for k, q in enumerate(quotient)), mpq(0))
        scale = y / denom
        for k in range(n):
            coeffs[k] += scale * quotient[k]
    return coeffs


def _resultant_in_c(e1, e2):
    """Res_c(E1, E2) as an exact univariate polynomial in m."""
    e1_by_c, e2_by_c = _by_c_degree(e1), _by_c_degree(e2)
    d1, d2 = len(e1_by_c) - 1, len(e2_by_c) - 1
    if d1 < 1 or d2 < 1:
        raise DegeneracyError("elimination pair degenerates in c; perturb t")
    degm1 = max((a for layer in e1_by_c for a in layer), default=0)
    degm2 = max((a for layer in e2_by_c for a in layer), default=0)
    bound = d1 * degm2 + d2 * degm1
    nodes = [mpq(k - bound // 2) for k in range(bound + 1)]
    values = []
    for m0 in nodes:
        p = [_eval_m(layer, m0) for layer in e1_by_c]
        q = [_eval_m(layer, m0) for layer in e2_by_c]
        values.append(_sylvester_resultant(p, q, d1, d2))
    coeffs = _interpolate(nodes, values)
    while coeffs and coeffs[-1] == 0:
        coeffs.pop()
    if not any(coeffs):
        raise DegeneracyError("vanishing resultant: perfect-square pencil; perturb t")
    return _square_free(coeffs)


def _square_free(coeffs):
    """Exact square-free part; repeated factors are the norm in elimination
    output (one slope can carry several bitangents) and would stall root
    isolation."""
    var = sympy.Symbol("m")
    poly = sympy.Poly(
        [sympy.Rational(int(c.numerator), int(c.denominator)) for c in reversed(coeffs)],
        var,
    )
    part = poly.sqf_part().all_coeffs()
    return [mpq(c.p, c.q) for c in reversed(part)]


# ---------------------------------------------------------------------------
# Root back-substitution and polishing.


def _prepare_poly(p):
    """Terms with mpfr coefficients plus the degree box, for fast reuse."""
    terms = tuple(
        (a, b, mpfr(v.numerator) / mpfr(v.denominator)) for (a, b), v in p.items()
    )
    max_a = max((a for a, _, _ in terms), default=0)
    max_b = max((b for _, b, _ in terms), default=0)
    return terms, max_a, max_b


def _eval_prepared(prep, mpow, cpow):
    terms, _, _ = prep
    total = mpc(0)
    scale = mpfr(0)
    for a, b, v in terms:
        term = v * mpow[a] * cpow[b]
        total += term
        scale += abs(term)
    return total, scale


def _newton_polish(e1, e2, m, c, precision, iterations=24):
    """Bivariate Newton iteration on (E1, E2) from a good starting pair."""
    polys = [
        _prepare_poly(p)
        for p in (e1, e2, _poly_diff(e1, 0), _poly_diff(e1, 1),
                  _poly_diff(e2, 0), _poly_diff(e2, 1))
    ]
    deg_m = max(p[1] for p in polys)
    deg_c = max(p[2] for p in polys)

    def powers(m, c):
        mpow = [mpc(1)]
        for _ in range(deg_m):
            mpow.append(mpow[-1] * m)
        cpow = [mpc(1)]
        for _ in range(deg_c):
            cpow.append(cpow[-1] * c)
        return mpow, cpow

    tol = mpfr(2) ** (-precision)
    for _ in range(iterations):
        mpow, cpow = powers(m, c)
        f1, s1 = _eval_prepared(polys[0], mpow, cpow)
        f2, s2 = _eval_prepared(polys[1], mpow, cpow)
        j11, _ = _eval_prepared(polys[2], mpow, cpow)
        j12, _ = _eval_prepared(polys[3], mpow, cpow)
        j21, _ = _eval_prepared(polys[4], mpow, cpow)
        j22, _ = _eval_prepared(polys[5], mpow, cpow)
        det = j11 * j22 - j12 * j21
        if det == 0:
            break
        dm = (f1 * j22 - f2 * j12) / det
        dc = (f2 * j11 - f1 * j21) / det
        m, c = m - dm, c - dc
        if abs(dm) <= tol * (1 + abs(m)) and abs(dc) <= tol * (1 + abs(c)):
            break
    mpow, cpow = powers(m, c)
    f1, s1 = _eval_prepared(polys[0], mpow, cpow)
    f2, s2 = _eval_prepared(polys[1], mpow, cpow)
    residual = max(
        float(abs(f1) / s1) if s1 else 0.0,
        float(abs(f2) / s2) if s2 else 0.0,
    )
    return m, c, residual


def _normalize_projective(coords):
    """Scale so the coordinate of largest modulus is exactly 1."""
    best = max(range(len(coords)), key=lambda k: abs(coords[k]))
    pivot = coords[best]
    return tuple(z / pivot for z in coords)


def _coords_close(a, b, tol=DEDUP_RELATIVE_TOL, floor=0.0):
    for x, y in zip(a, b):
        if abs(x - y) > tol * (abs(x) + abs(y)) + floor:
            return False
    return True


def _tangency_points(a4, a3, a2, m, c, chart):
    """Tangency abscissae are the double roots x^2 + p*x + q of the square."""
    p = a3 / (2 * a4)
    q = (4 * a4 * a2 - a3 * a3) / (8 * a4 * a4)
    disc = gmpy2.sqrt(mpc(p * p / 4 - q))
    points = []
    for s in (-p / 2 + disc, -p / 2 - disc):
        if chart == "y":
            points.append(_normalize_projective((s, m * s + c, mpc(1))))
        else:
            points.append(_normalize_projective((m * s + c, s, mpc(1))))
    return tuple(points)


def _chart_lines(values, chart, precision):
    """Candidate bitangents from one affine chart of the dual plane."""
    coeffs = _restriction_coefficients(values, chart)
    e1, e2 = _elimination_pair(coeffs)
    resultant = _resultant_in_c(e1, e2)
    lines = []
    with gmpy2.context(precision=precision + 128):
        for m in complex_roots(resultant, precision + 96):
            c_candidates = []
            for eqn in (e1, e2):
                # Restrict to the fiber over m.  The E1 restriction can
                # vanish identically (symmetric pencils with A3 = A1 = 0);
                # coefficients below roundoff of their term scale are zero.
                restricted = []
                for layer in _by_c_degree(eqn):
                    value, scale = _poly_eval(layer_as_bivariate(layer), m, mpc(0))
                    if scale and abs(value) <= mpfr(2) ** (-64) * scale:
                        value = mpc(0)
                    restricted.append(value)
                c_candidates.extend(complex_roots_inexact(restricted, precision + 96))
            for c in c_candidates:
                f1, s1 = _poly_eval(e1, m, c)
                f2, s2 = _poly_eval(e2, m, c)
                if (s1 and abs(f1) > mpfr("1e-6") * s1) or (
                    s2 and abs(f2) > mpfr("1e-6") * s2
                ):
                    continue
                m1, c1, residual = _newton_polish(e1, e2, m, c, precision)
                if residual > 2.0 ** (-precision / 2):
                    continue
                a4, s4 = _poly_eval(coeffs[4], m1, c1)
                a3, _ = _poly_eval(coeffs[3], m1, c1)
                a2, _ = _poly_eval(coeffs[2], m1, c1)
                if not s4 or abs(a4) <= mpfr(2) ** (-64) * s4:
                    # The elimination variety contains the spurious component
                    # A4 = A3 = 0 (tangency at infinity without bitangency);
                    # genuine infinity bitangents come from the dedicated pass.
                    continue
                if chart == "y":
                    coords = (m1, mpc(-1), c1)
                else:
                    coords = (mpc(-1), m1, c1)
                lines.append(
                    BitangentLine(
                        coords=_normalize_projective(coords),
                        tangency_points=_tangency_points(a4, a3, a2, m1, c1, chart),
                        residual=residual,
                        is_real=False,  # set after conjugate pairing
                    )
                )
    return lines


def layer_as_bivariate(layer):
    return {(a, 0): v for a, v in layer.items()}


def _infinity_tangent_lines(values, chart, precision):
    """Bitangents whose restriction drops degree: tangency at infinity.

    The binary quartic A4 x^4 + A3 x^3 z + ... + A0 z^4 on the line has a
    root at z = 0 when A4(m) = 0, i.e. the line's direction point lies on
    the quartic.  Tangency there requires A3(m, c) = 0 (linear in c), and
    the line is bitangent exactly when the leftover quadratic is a square:
    A1^2 - 4 A2 A0 = 0.  This is a genuine extra condition, so generic
    inputs contribute no lines here; hyperflex configurations do.
    """
    coeffs = _restriction_coefficients(values, chart)
    a4 = [mpq(0)] * 5
    for (a, b), v in coeffs[4].items():
        a4[a] = v  # A4 depends on m only
    lines = []
    with gmpy2.context(precision=precision + 128):
        tiny = mpfr(2) ** (-64)
        d_a4 = [k * c for k, c in enumerate(a4)][1:]
        for m in complex_roots(a4, precision + 96):
            for _ in range(8):  # Newton polish on the exact quartic A4
                num = sum(
                    (mpfr(c.numerator) / mpfr(c.denominator)) * m**k
                    for k, c in enumerate(a4)
                )
                den = sum(
                    (mpfr(c.numerator) / mpfr(c.denominator)) * m**k
                    for k, c in enumerate(d_a4)
                )
                if den == 0:
                    break
                m -= num / den
            layers = _by_c_degree(coeffs[3])
            p3, sp = _poly_eval(layer_as_bivariate(layers[0]), m, mpc(0))
            if len(layers) > 1:
                q3, sq = _poly_eval(layer_as_bivariate(layers[1]), m, mpc(0))
            else:
                q3, sq = mpc(0), mpfr(0)
            if not sq or abs(q3) <= tiny * sq:
                if not sp or abs(p3) <= tiny * sp:
                    raise DegeneracyError(
                        "one-parameter family of tangents at infinity; perturb t"
                    )
                continue  # the unique infinite intersection is transverse
            c = -p3 / q3
            a2, s2 = _poly_eval(coeffs[2], m, c)
            a1, s1 = _poly_eval(coeffs[1], m, c)
            a0, s0 = _poly_eval(coeffs[0], m, c)
            defect = a1 * a1 - 4 * a2 * a0
            scale = s1 * s1 + 4 * s2 * s0
            residual = float(abs(defect) / scale) if scale else 0.0
            if residual > 2.0 ** (-precision / 2):
                continue
            if chart == "y":
                coords = (m, mpc(-1), c)
                at_inf = _normalize_projective((mpc(1), m, mpc(0)))
            else:
                coords = (mpc(-1), m, c)
                at_inf = _normalize_projective((m, mpc(1), mpc(0)))
            if s2 and abs(a2) > tiny * s2:
                x0 = -a1 / (2 * a2)
                if chart == "y":
                    second = _normalize_projective((x0, m * x0 + c, mpc(1)))
                else:
                    second = _normalize_projective((m * x0 + c, x0, mpc(1)))
            else:
                second = at_inf  # all four intersections sit at infinity
            lines.append(
                BitangentLine(
                    coords=_normalize_projective(coords),
                    tangency_points=(at_inf, second),
                    residual=residual,
                    is_real=False,
                )
            )
    return lines


def _line_at_infinity(values, precision):
    """The line z = 0 is bitangent iff the degree-4 part is a perfect square."""
    a = [values.get((4 - k, k), mpq(0)) for k in range(5)]
    # Treat as binary quartic in (x : y); coefficient a[k] multiplies x^(4-k) y^k.
    a4, a3, a2, a1, a0 = a[0], a[1], a[2], a[3], a[4]
    if a4 == 0:
        # A square with vanishing x^4 term is y^2 * (alpha*x + beta*y)^2.
        square = a3 == 0 and a2 * 4 * a0 == a1 * a1 and (a2 != 0 or a1 == 0)
        if not square:
            return None
        raise DegeneracyError("bitangent at infinity is degenerate here; perturb t")
    g = 4 * a4 * a2 - a3 * a3
    if a3 * g - 8 * a4 * a4 * a1 != 0 or g * g - 64 * a4 * a4 * a4 * a0 != 0:
        return None
    with gmpy2.context(precision=precision + 128):
        p = mpfr(a3.numerator) / mpfr(a3.denominator)
        k4 = mpfr(a4.numerator) / mpfr(a4.denominator)
        gq = mpq(g, 8 * a4 * a4)
        pp = p / (2 * k4)
        qq = mpfr(gq.numerator) / mpfr(gq.denominator)
        disc = gmpy2.sqrt(mpc(pp * pp / 4 - qq))
        points = tuple(
            _normalize_projective((mpc(1), s, mpc(0)))
            for s in (-pp / 2 + disc, -pp / 2 - disc)
        )
    return BitangentLine(
        coords=(mpc(0), mpc(0), mpc(1)),
        tangency_points=points,
        residual=0.0,
        is_real=True,
    )


def _dedup(lines):
    unique = []
    for line in lines:
        if not any(_coords_close(line.coords, u.coords) for u in unique):
            unique.append(line)
    return unique


def _pair_conjugates(lines):
    """Mark real lines and link complex-conjugate partners."""
    paired = []
    for idx, line in enumerate(lines):
        conj = tuple(z.conjugate() for z in line.coords)
        matches = [
            k for k, other in enumerate(lines)
            if _coords_close(conj, other.coords)
        ]
        if len(matches) != 1:
            raise InternalConsistencyError(
                "conjugation does not permute the bitangent set"
            )
        partner = matches[0]
        paired.append(
            BitangentLine(
                line.coords,
                line.tangency_points,
                line.residual,
                is_real=(partner == idx),
                conjugate_index=None if partner == idx else partner,
            )
        )
    return paired


def solve_bitangents(realized: RealizedQuartic):
    """All 28 bitangent lines of the realized quartic.

    Raises DegeneracyError when fewer or more than 28 distinct lines
    survive the perfect-square residual filter; the caller should perturb t.
    """
    precision = realized.precision
    candidates = []
    for chart in ("y", "x"):
        candidates.extend(_chart_lines(realized.values, chart, precision))
        candidates.extend(_infinity_tangent_lines(realized.values, chart, precision))
    at_infinity = _line_at_infinity(realized.values, precision)
    if at_infinity is not None:
        candidates.append(at_infinity)
    lines = _dedup(candidates)
    if len(lines) != EXPECTED_BITANGENTS:
        raise DegeneracyError(
            f"found {len(lines)} distinct bitangents instead of "
            f"{EXPECTED_BITANGENTS}; perturb t or raise precision"
        )
    lines.sort(key=lambda b: tuple((round(float(z.real), 12), round(float(z.imag), 12))
                                   for z in b.coords))
    return tuple(_pair_conjugates(lines))


# ---------------------------------------------------------------------------
# Tracking across a t schedule and valuation estimation.


def _log_profile(line: BitangentLine, t: mpq):
    """Approximate valuations of (u, v, w), up to a common additive shift."""
    logt = math.log(float(t))
    out = []
    for z in line.coords:
        az = abs(z)
        if az == 0:
            out.append(math.inf)
        else:
            out.append(float(gmpy2.log(az)) / logt)
    return out


def _match(lines_a, profile_a, lines_b, profile_b):
    """Optimal assignment of lines_b to lines_a in valuation space.

    Reliable only for small schedule steps (at most about a third of a
    decade): the per-step profile drift must stay below the mantissa
    separation of lines with equal valuations, which is why
    ``track_bitangents`` densifies its schedule.
    """
    n = len(lines_a)
    cost = [[0.0] * n for _ in range(n)]
    for i in range(n):
        for j in range(n):
            d = 0.0
            for pa, pb in zip(profile_a[i], profile_b[j]):
                if math.isinf(pa) or math.isinf(pb):
                    d += 0.0 if pa == pb else 100.0
                else:
                    d += abs(pa - pb)
            if lines_a[i].is_real != lines_b[j].is_real:
                d += 10.0
            cost[i][j] = d
    rows, cols = linear_sum_assignment(cost)
    mapping = [None] * n
    worst = 0.0
    for r, c in zip(rows, cols):
        mapping[r] = c
        worst = max(worst, cost[r][c])
    if worst > 3.0:
        raise TrackingError(
            f"assignment cost {worst:.2f} too high between schedule points; "
            "refine the t schedule"
        )
    return mapping


def densify_schedule(schedule):
    """Insert geometric midpoints so no log-step exceeds half a decade.

    Keeps the caller's points (where lines are reported) and subdivides
    each larger gap with rational approximations of the geometric
    midpoint chain.
    """
    schedule = sorted({mpq(t) for t in schedule}, reverse=True)
    out = [schedule[0]]
    max_gap = math.log(10.0) / 2
    for t in schedule[1:]:
        prev = out[-1]
        gap = math.log(float(prev / t))
        pieces = max(1, math.ceil(gap / max_gap))
        ratio = float(t / prev) ** (1.0 / pieces)
        for j in range(1, pieces):
            approx = mpq(
                round(1 / (float(prev) * ratio ** j))
            )
            out.append(mpq(1, approx) if approx > 0 else prev)
        out.append(t)
    return tuple(out)


def track_bitangents(q: ValuedQuartic, schedule=DEFAULT_SCHEDULE,
                     precision: int | None = None):
    """Solve at every schedule point and return 28 matched line families.

    Each family is a tuple with one BitangentLine per schedule point,
    ordered like ``schedule``.  Internally the schedule is densified with
    geometric midpoints: optimal assignment in valuation space is only
    reliable over small steps, where per-step drift stays below the
    mantissa gaps separating lines of equal valuation.
    """
    if precision is None:
        precision = default_precision()
    schedule = tuple(mpq(t) for t in schedule)
    if len(schedule) < 2:
        raise UnsupportedInputError("schedule needs at least two t values")
    if sorted(schedule, reverse=True) != list(schedule):
        raise UnsupportedInputError("schedule must be strictly decreasing")
    dense = densify_schedule(schedule)
    keep = [k for k, t in enumerate(dense) if t in schedule]

    per_t = [solve_bitangents(realize(q, t, precision)) for t in dense]
    profiles = [
        [_log_profile(line, t) for line in lines]
        for lines, t in zip(per_t, dense)
    ]
    families = [[line] for line in per_t[0]]
    prev_index = list(range(len(per_t[0])))
    for step in range(1, len(dense)):
        mapping = _match(
            per_t[step - 1], profiles[step - 1], per_t[step], profiles[step]
        )
        prev_index = [mapping[k] for k in prev_index]
        for fam, k in zip(families, prev_index):
            fam.append(per_t[step][k])
    return [tuple(fam[k] for k in keep) for fam in families]


def _fit_slope(xs, ys):
    n = len(xs)
    mx, my = sum(xs) / n, sum(ys) / n
    num = sum((x - mx) * (y - my) for x, y in zip(xs, ys))
    den = sum((x - mx) ** 2 for x in xs)
    return num / den


def _extrapolated_slope(logts, ys, ts):
    """Limit slope of log|coordinate| against log t as t -> 0.

    Puiseux coordinates behave like C*t^v*(1 + a*sqrt(t) + ...), so the
    two-point slope over the pair (t1, t2) deviates from v by roughly
    a*sqrt(t1)/log(t1/t2).  Richardson extrapolation of the last two
    pair-slopes cancels the sqrt(t) term; with only two samples the plain
    pair-slope is returned.
    """
    if len(ts) < 3:
        return (ys[-1] - ys[-2]) / (logts[-1] - logts[-2])
    t1, t2, t3 = ts[-3], ts[-2], ts[-1]
    s12 = (ys[-2] - ys[-3]) / (logts[-2] - logts[-3])
    s23 = (ys[-1] - ys[-2]) / (logts[-1] - logts[-2])
    gap12 = logts[-3] - logts[-2]
    gap23 = logts[-2] - logts[-1]
    r = math.sqrt(float(t2) / float(t1)) * gap12 / gap23
    return (s23 - r * s12) / (1 - r)


def tropicalize_bitangent(family, schedule=DEFAULT_SCHEDULE,
                          value_denominator=1):
    """Tropical line of one tracked family: vertex (val w - val u, val w - val v).

    Valuations are extrapolated limit slopes of log|coefficient| against
    log t, rounded to the half-value-group lattice (1/(2L))Z where L is
    ``value_denominator`` (tropical bitangent vertices of a smooth quartic
    are half-integral combinations of the lift values).  A slope farther
    than SLOPE_ROUNDING_TOL from the lattice raises EstimationError.
    """
    schedule = tuple(mpq(t) for t in schedule)
    logts = [math.log(float(t)) for t in schedule]
    slopes = []
    for coord in range(3):
        ys = []
        for line, t in zip(family, schedule):
            az = abs(line.coords[coord])
            if az == 0:
                raise EstimationError(
                    "line coefficient is exactly zero; vertex escapes to infinity"
                )
            ys.append(float(gmpy2.log(az)))
        slopes.append(_extrapolated_slope(logts, ys, schedule))
    raw = (slopes[2] - slopes[0], slopes[2] - slopes[1])
    lattice = 2 * value_denominator
    vertex = []
    for value in raw:
        rounded = mpq(round(value * lattice), lattice)
        if abs(float(rounded) - value) > SLOPE_ROUNDING_TOL:
            raise EstimationError(
                f"slope {value:.4f} is not within {SLOPE_ROUNDING_TOL} of the "
                f"lattice (1/{lattice})Z"
            )
        vertex.append(rounded)
    return TropicalLine(vertex=(vertex[0], vertex[1]))
