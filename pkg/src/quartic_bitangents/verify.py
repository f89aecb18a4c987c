"""End-to-end verification of the bitangent partition and its samplers.

``verify_partition`` joins the three sub-pipelines (tropical classes,
algebraic bitangents tracked over the t schedule, avoidance components)
and asserts the partition statement: each avoidance component's four real
bitangents tropicalize into one common class, distinct components hit
distinct classes, and realness comes in groups of four.

``verify_lemma_bitangent`` and ``verify_tropical_convexity`` are
property samplers.  Avoiding lines near a component are constructed as
rational convex combinations of the component's real bitangent families:
the four bitangents converge to a common leading mantissa, so the
avoidance windows collapse onto them as t shrinks and pure monomial
lines never stay avoiding -- combinations of the bitangent families are
the natural avoiding K-lines.  Each sample must stay avoiding at every
schedule point, tropicalize (by slope fitting) to a tropical bitangent,
and land in the class of its component; segments between vertices within
one component must classify constantly.

These are theorems for exact data, so failures are reported as
resolution problems (which knob to turn), never "repaired".
"""

from __future__ import annotations

import math
import random
from dataclasses import dataclass, field

import gmpy2
from gmpy2 import mpq

from .avoidance import (
    assign_bitangent,
    line_avoids,
    stable_components,
)
from .curve import TropicalLine, dualize, stable_intersection
from .errors import (
    AmbiguityError,
    EstimationError,
    ResolutionError,
    UnsupportedInputError,
)
from .locus import bitangent_locus, classify_line
from .quartic import ValuedQuartic, is_tropically_smooth, newton_subdivision
from .solver import (
    DEFAULT_SCHEDULE,
    default_precision,
    realize,
    track_bitangents,
    tropicalize_bitangent,
)

#: Classification tolerance for measured (slope-estimated) vertices.
DEFAULT_CLASS_TOLERANCE = mpq(1, 1000)

#: Warped-grid depth for avoidance components.
DEFAULT_GRID_DEPTH = 24

#: Parameter for avoidance-component computations.  Components of the
#: avoidance locus are valuation-scaled windows whose relative width
#: shrinks like a power of t; at a moderate t they are wide enough for
#: the dyadic grid while the component count is already stable.
DEFAULT_COMPONENT_T = mpq(1, 10)

#: Accepted distance between a raw slope estimate and the value-group
#: lattice.
LATTICE_ROUNDING_TOL = 0.45


@dataclass(frozen=True)
class VerifyConfig:
    schedule: tuple = DEFAULT_SCHEDULE
    precision: int | None = None
    grid_depth: int = DEFAULT_GRID_DEPTH
    class_tolerance: mpq = DEFAULT_CLASS_TOLERANCE
    component_t: mpq = DEFAULT_COMPONENT_T
    seed: int = 20260823
    lemma_samples: int = 100
    convexity_samples: int = 50
    segment_points: int = 9
    max_estimation_failure_rate: float = 0.05

    def resolved_precision(self) -> int:
        return self.precision if self.precision is not None else default_precision()


def _value_group_denominator(q: ValuedQuartic) -> int:
    """Denominator L of the value group (1/L)Z spanned by the valuations."""
    L = 1
    for c in q.coeffs.values():
        if c.val is not None:
            L = math.lcm(L, int(c.val.denominator))
    return L


@dataclass(frozen=True)
class BitangentRow:
    """One line of the 28-bitangent verification table."""

    index: int
    vertex: tuple  # estimated tropical vertex (mpq, mpq)
    is_real: bool
    class_id: int | None
    component: object | None  # component root label for real lines


@dataclass(frozen=True)
class VerificationReport:
    curve_name: str
    smooth: bool
    class_count: int
    class_witnesses: tuple
    rows: tuple  # BitangentRow per bitangent
    component_count: int
    component_classes: dict  # component root -> class id
    class_real_counts: dict  # class id -> number of real bitangents
    partition_agreement: bool
    all_or_none: bool
    seed: int
    notes: tuple = field(default_factory=tuple)

    @property
    def passed(self) -> bool:
        return self.partition_agreement and self.all_or_none


def _require_smooth(q: ValuedQuartic):
    sub = newton_subdivision(q)
    if not is_tropically_smooth(sub):
        raise UnsupportedInputError(
            f"{q.name}: not tropically smooth; verification requires a "
            "unimodular Newton subdivision"
        )
    return sub


def _real_triple(line):
    """Exact rational dual point under a real bitangent's coordinates."""
    return tuple(mpq(gmpy2.mpfr(z.real)) for z in line.coords)


@dataclass(frozen=True)
class PartitionContext:
    """Shared data of one verification run, reused by the samplers."""

    q: ValuedQuartic
    cfg: VerifyConfig
    curve: object
    classes: tuple
    comp: object  # AvoidanceComponents at cfg.component_t
    component_values: dict  # realized coefficients at cfg.component_t
    families: tuple  # 28 tracked line families over the extended schedule
    schedule: tuple  # the slope-estimation schedule (tail of extended)
    report: VerificationReport


def build_context(q: ValuedQuartic, cfg: VerifyConfig | None = None):
    """Run the full partition pipeline once and keep its intermediates."""
    cfg = cfg or VerifyConfig()
    sub = _require_smooth(q)
    curve = dualize(sub, q)
    classes = bitangent_locus(curve)

    precision = cfg.resolved_precision()
    # Components live at a moderate t; tracking bridges that parameter to
    # the slope-estimation schedule so the same 28 lines carry both the
    # component assignment and the vertex.
    component_t = mpq(cfg.component_t)
    schedule = tuple(mpq(t) for t in cfg.schedule)
    # Geometric bridge: halve t until below the first schedule point, so
    # consecutive log-profiles stay close enough for stable matching.
    bridge = [component_t]
    while bridge[-1] / 2 > schedule[0]:
        bridge.append(bridge[-1] / 2)
    extended = tuple(bridge) + schedule
    extended = tuple(
        t for k, t in enumerate(extended) if t not in extended[:k]
    )
    families = track_bitangents(q, extended, precision)
    tail = len(schedule)

    realized = realize(q, component_t, precision)
    comp = stable_components(realized.values, cfg.grid_depth)

    notes = []
    rows = []
    for index, family in enumerate(families):
        line = tropicalize_bitangent(
            family[-tail:], schedule, _value_group_denominator(q)
        )
        try:
            class_id = classify_line(classes, line, cfg.class_tolerance)
        except AmbiguityError as exc:
            class_id = None
            notes.append(f"bitangent {index}: {exc}")
        if len({line_at.is_real for line_at in family}) != 1:
            notes.append(
                f"bitangent {index}: realness changes along the t schedule"
            )
        component = None
        if family[0].is_real:
            component = assign_bitangent(
                comp, realized.values, _real_triple(family[0])
            )
        rows.append(
            BitangentRow(index, line.vertex, family[0].is_real, class_id,
                         component)
        )

    class_real_counts = {c.id: 0 for c in classes}
    for row in rows:
        if row.is_real and row.class_id is not None:
            class_real_counts[row.class_id] += 1
    unclassified = [r.index for r in rows if r.class_id is None]
    if unclassified:
        notes.append(
            f"{len(unclassified)} bitangents did not classify within "
            f"tolerance {cfg.class_tolerance}: indices {unclassified}"
        )

    component_classes: dict = {}
    well_defined = not unclassified or all(
        not rows[k].is_real for k in unclassified
    )
    for row in rows:
        if not row.is_real:
            continue
        if row.class_id is None:
            well_defined = False
            continue
        seen = component_classes.setdefault(row.component, row.class_id)
        if seen != row.class_id:
            well_defined = False
            notes.append(
                f"component {row.component} holds bitangents of classes "
                f"{seen} and {row.class_id}"
            )
    injective = len(set(component_classes.values())) == len(component_classes)
    complete = len(component_classes) == comp.count
    if not injective:
        notes.append("distinct components map to the same class")
    if not complete:
        notes.append("some component received no real bitangent")

    all_or_none = all(v in (0, 4) for v in class_real_counts.values()) and (
        not any(rows[k].is_real for k in unclassified)
    )

    report = VerificationReport(
        curve_name=q.name,
        smooth=True,
        class_count=len(classes),
        class_witnesses=tuple(c.witness for c in classes),
        rows=tuple(rows),
        component_count=comp.count,
        component_classes=component_classes,
        class_real_counts=class_real_counts,
        partition_agreement=well_defined and injective and complete,
        all_or_none=all_or_none,
        seed=cfg.seed,
        notes=tuple(notes),
    )
    return PartitionContext(
        q=q,
        cfg=cfg,
        curve=curve,
        classes=tuple(classes),
        comp=comp,
        component_values=realized.values,
        families=tuple(families),
        schedule=schedule,
        report=report,
    )


def verify_partition(q: ValuedQuartic, cfg: VerifyConfig | None = None,
                     context: PartitionContext | None = None):
    """Verification report for the component/class partition statement."""
    if context is not None:
        return context.report
    return build_context(q, cfg).report


# ---------------------------------------------------------------------------
# Lemma sampling: avoiding lines tropicalize to tropical bitangents.


@dataclass(frozen=True)
class SampleOutcome:
    """Pass/fail counters of one sampling verification run."""

    curve_name: str
    requested: int
    passes: int
    predicate_failures: int
    estimation_failures: int
    seed: int
    witnesses: tuple = field(default_factory=tuple)
    estimation_budget: int = 0

    @property
    def passed(self) -> bool:
        return (
            self.requested > 0
            and self.predicate_failures == 0
            and self.passes == self.requested
            and self.estimation_failures <= self.estimation_budget
        )


def _round_to_lattice(value: float, L: int) -> mpq:
    """Nearest element of the value group (1/L)Z."""
    rounded = mpq(round(value * L), L)
    if abs(float(rounded) - value) > LATTICE_ROUNDING_TOL:
        raise EstimationError(
            f"slope {value:.4f} is not near the value group (1/{L})Z"
        )
    return rounded


def _fit_slope(xs, ys):
    n = len(xs)
    mx, my = sum(xs) / n, sum(ys) / n
    num = sum((x - mx) * (y - my) for x, y in zip(xs, ys))
    den = sum((x - mx) ** 2 for x in xs)
    return num / den


class _AvoidingSampler:
    """Draws avoiding K-lines near one avoidance component.

    A draw is a rational convex combination of the component's real
    bitangent families, evaluated (as exact rationals) at every schedule
    point.  The draw is kept only when it avoids the curve at every
    schedule point; its tropicalization is the lattice rounding of the
    per-coordinate log-log slope.
    """

    def __init__(self, ctx: PartitionContext, rng):
        cfg = ctx.cfg
        self.ctx = ctx
        self.rng = rng
        self.L = _value_group_denominator(ctx.q)
        self.schedule = ctx.schedule
        self.logts = [math.log(float(t)) for t in self.schedule]
        precision = cfg.resolved_precision()
        self.values_at = {
            t: realize(ctx.q, t, precision).values for t in self.schedule
        }
        tail = len(self.schedule)
        self.groups = {}  # component root -> list of real family indices
        for row in ctx.report.rows:
            if row.is_real and row.component is not None:
                self.groups.setdefault(row.component, []).append(row.index)
        self.roots = sorted(self.groups, key=str)
        self._triples = {}  # family index -> rational coords per schedule t
        for root, members in self.groups.items():
            for idx in members:
                self._triples[idx] = [
                    _real_triple(ctx.families[idx][-tail + j])
                    for j in range(tail)
                ]

    def draw(self, root):
        """One avoiding line as coordinates per schedule point, or None."""
        members = self.groups[root]
        k = self.rng.randint(2, min(4, len(members)))
        chosen = self.rng.sample(members, k)
        weights = [mpq(self.rng.randint(1, 16)) for _ in chosen]
        total = sum(weights)
        weights = [w / total for w in weights]
        per_t = []
        for j, t in enumerate(self.schedule):
            coords = tuple(
                sum(w * self._triples[idx][j][i]
                    for w, idx in zip(weights, chosen))
                for i in range(3)
            )
            if not all(coords):
                return None
            if not line_avoids(self.values_at[t], coords):
                return None
            per_t.append(coords)
        return per_t

    def tropicalize(self, per_t):
        """Vertex of the sampled family; raises EstimationError."""
        vals = []
        for i in range(3):
            ys = [
                float(gmpy2.log(abs(gmpy2.mpfr(coords[i]))))
                for coords in per_t
            ]
            vals.append(_round_to_lattice(_fit_slope(self.logts, ys), self.L))
        return TropicalLine(vertex=(vals[2] - vals[0], vals[2] - vals[1]))


def verify_lemma_bitangent(q: ValuedQuartic, cfg: VerifyConfig | None = None,
                           context: PartitionContext | None = None):
    """Sampled check: avoiding lines tropicalize to tropical bitangents.

    Each sample is an avoiding K-line near one avoidance component,
    checked to avoid at every schedule point, then asserted to (a) pass
    the tropical bitangency predicate and (b) classify into the class of
    its component, with distinct components never sharing a class.
    """
    cfg = cfg or VerifyConfig()
    ctx = context if context is not None else build_context(q, cfg)
    classes = ctx.classes
    curve = ctx.curve
    rng = random.Random(cfg.seed)
    sampler = _AvoidingSampler(ctx, rng)
    if not sampler.roots:
        raise ResolutionError(
            "no avoidance component carries real bitangents; "
            "cannot draw lemma samples"
        )

    passes = 0
    predicate_failures = 0
    estimation_failures = 0
    witnesses = []
    component_class: dict = {}
    drawn = 0
    turn = 0
    attempts = 0
    max_attempts = 40 * cfg.lemma_samples
    while drawn < cfg.lemma_samples:
        attempts += 1
        if attempts > max_attempts:
            raise ResolutionError(
                f"drew only {drawn} of {cfg.lemma_samples} avoiding samples; "
                "refine the component grid"
            )
        root = sampler.roots[turn % len(sampler.roots)]
        turn += 1
        per_t = sampler.draw(root)
        if per_t is None:
            continue
        drawn += 1
        try:
            line = sampler.tropicalize(per_t)
        except EstimationError:
            estimation_failures += 1
            drawn -= 1  # retried: draw a replacement sample
            continue
        class_id = classify_line(classes, line, cfg.class_tolerance)
        bitangent = stable_intersection(curve, line).is_bitangent
        expected = ctx.report.component_classes.get(
            root, component_class.get(root, class_id)
        )
        component_class.setdefault(root, class_id)
        ok = (
            bitangent
            and class_id is not None
            and class_id == expected
        )
        if ok:
            passes += 1
        else:
            predicate_failures += 1
            witnesses.append(
                (tuple(float(v) for v in per_t[0]), line.vertex, class_id)
            )
    if len(set(component_class.values())) != len(component_class):
        predicate_failures += 1
        witnesses.append(("components sharing a class", component_class))

    return SampleOutcome(
        curve_name=q.name,
        requested=drawn,
        passes=passes,
        predicate_failures=predicate_failures,
        estimation_failures=estimation_failures,
        seed=cfg.seed,
        witnesses=tuple(witnesses),
        estimation_budget=int(cfg.max_estimation_failure_rate * drawn),
    )


# ---------------------------------------------------------------------------
# Tropical convexity sampling.


def _tropical_segment(v1, v2, steps):
    """Sample points of the min-plus segment between two vertices.

    A tropical line with vertex (x, y) corresponds to the point
    (-x, -y, 0) of the tropical projective torus; the segment is swept by
    c(lambda) = min(lambda + a, b) coordinatewise, normalized back to a
    vertex.
    """
    a = (-v1[0], -v1[1], mpq(0))
    b = (-v2[0], -v2[1], mpq(0))
    deltas = [b[i] - a[i] for i in range(3)]
    lo, hi = min(deltas), max(deltas)
    points = []
    for k in range(steps + 1):
        lam = lo + (hi - lo) * mpq(k, steps) if steps else lo
        c = tuple(min(lam + a[i], b[i]) for i in range(3))
        points.append((-(c[0] - c[2]), -(c[1] - c[2])))
    return points


def verify_tropical_convexity(q: ValuedQuartic,
                              cfg: VerifyConfig | None = None,
                              context: PartitionContext | None = None):
    """Sampled check: per-component tropicalizations are tropically convex.

    Pairs of avoiding lines from one component are tropicalized; every
    point of the min-plus segment between their vertices must classify
    into the same class.  Pairs from distinct components are negative
    controls: their endpoints must classify differently.
    """
    cfg = cfg or VerifyConfig()
    ctx = context if context is not None else build_context(q, cfg)
    classes = ctx.classes
    rng = random.Random(cfg.seed + 1)
    sampler = _AvoidingSampler(ctx, rng)
    if not sampler.roots:
        raise ResolutionError(
            "no avoidance component carries real bitangents; "
            "cannot draw convexity samples"
        )

    def sample_vertex(root):
        for _ in range(30):
            per_t = sampler.draw(root)
            if per_t is None:
                continue
            try:
                return sampler.tropicalize(per_t)
            except EstimationError:
                continue
        return None

    passes = 0
    failures = 0
    estimation_failures = 0
    witnesses = []
    roots = sampler.roots
    for _ in range(cfg.convexity_samples):
        root = roots[rng.randrange(len(roots))]
        lines = [sample_vertex(root), sample_vertex(root)]
        if None in lines:
            estimation_failures += 1
            continue
        ids = set()
        ok = True
        for pt in _tropical_segment(lines[0].vertex, lines[1].vertex,
                                    cfg.segment_points):
            cid = classify_line(classes, TropicalLine(pt), cfg.class_tolerance)
            ids.add(cid)
            if cid is None:
                ok = False
        if ok and len(ids) == 1:
            passes += 1
        else:
            failures += 1
            witnesses.append((lines[0].vertex, lines[1].vertex, sorted(
                str(i) for i in ids)))

    # Negative controls: endpoints from distinct components must differ.
    if len(roots) > 1:
        for _ in range(min(10, cfg.convexity_samples)):
            r1, r2 = rng.sample(roots, 2)
            l1, l2 = sample_vertex(r1), sample_vertex(r2)
            if l1 is None or l2 is None:
                estimation_failures += 1
                continue
            c1 = classify_line(classes, l1, cfg.class_tolerance)
            c2 = classify_line(classes, l2, cfg.class_tolerance)
            if c1 is not None and c1 != c2:
                passes += 1
            else:
                failures += 1
                witnesses.append((l1.vertex, l2.vertex, "negative control"))

    return SampleOutcome(
        curve_name=q.name,
        requested=passes + failures,
        passes=passes,
        predicate_failures=failures,
        estimation_failures=estimation_failures,
        seed=cfg.seed,
        witnesses=tuple(witnesses),
        estimation_budget=int(
            cfg.max_estimation_failure_rate * (passes + failures)
        ),
    )
