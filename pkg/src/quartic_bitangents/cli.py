"""Command line interface.

Exit codes: 0 success, 1 assertion failure, 2 input error, 3
resolution/precision error.  The default working precision comes from the
QUARTIC_BITANGENTS_PRECISION environment variable (bits, default 256).
"""

from __future__ import annotations

import functools
import os
import sys

import click
from gmpy2 import mpq

from . import report as rpt
from . import svgplot
from .avoidance import assign_bitangent, real_topology, stable_components
from .curve import dualize
from .errors import (
    AmbiguityError,
    ConditioningError,
    DegeneracyError,
    EstimationError,
    InputError,
    InternalConsistencyError,
    IsolationError,
    PrecisionError,
    QuarticError,
    ResolutionError,
    TrackingError,
    UniquenessError,
    VerificationFailure,
)
from .fixtures import FIXTURE_NAMES, load_fixture
from .locus import bitangent_locus
from .quartic import is_tropically_smooth, newton_subdivision, parse_quartic
from .rational import parse_rational
from .solver import DEFAULT_SCHEDULE, default_precision, realize, solve_bitangents
from .verify import (
    VerifyConfig,
    build_context,
    verify_lemma_bitangent,
    verify_tropical_convexity,
)

_RESOLUTION_ERRORS = (
    ResolutionError,
    PrecisionError,
    DegeneracyError,
    ConditioningError,
    EstimationError,
    TrackingError,
)
_ASSERTION_ERRORS = (
    AmbiguityError,
    IsolationError,
    UniquenessError,
    InternalConsistencyError,
    VerificationFailure,
)


def _exit_code(exc: QuarticError) -> int:
    if isinstance(exc, InputError):
        return 2
    if isinstance(exc, _RESOLUTION_ERRORS):
        return 3
    if isinstance(exc, _ASSERTION_ERRORS):
        return 1
    return 1


def _handle_errors(fn):
    @functools.wraps(fn)
    def wrapper(*args, **kwargs):
        try:
            return fn(*args, **kwargs)
        except QuarticError as exc:
            click.echo(f"error: {exc}", err=True)
            sys.exit(_exit_code(exc))

    return wrapper


def _load(path: str):
    """Read a quartic document from a path or a shipped fixture name."""
    if not os.path.exists(path) and path in FIXTURE_NAMES:
        return load_fixture(path)
    try:
        with open(path) as fh:
            document = fh.read()
    except OSError as exc:
        raise InputError(f"cannot read {path}: {exc}") from exc
    return parse_quartic(document)


def _write(text: str, destination: str | None):
    if destination:
        with open(destination, "w") as fh:
            fh.write(text)
    else:
        click.echo(text, nl=False)


def _parse_t(text: str) -> mpq:
    try:
        return parse_rational(text)
    except ValueError as exc:
        raise InputError(f"invalid t: {exc}") from exc


@click.group()
def main():
    """Tropical and algebraic bitangents of tropically smooth quartics."""


@main.command()
@click.argument("source")
@click.option("--svg", "svg_out", default=None, help="write the curve scene")
@_handle_errors
def tropicalize(source, svg_out):
    """Newton subdivision, smoothness, and the dual tropical curve."""
    q = _load(source)
    sub = newton_subdivision(q)
    click.echo(rpt.subdivision_report(q, sub), nl=False)
    if is_tropically_smooth(sub):
        curve = dualize(sub, q)
        click.echo(rpt.curve_report(q, curve), nl=False)
        if svg_out:
            _write(svgplot.curve_scene(curve), svg_out)


@main.command()
@click.argument("source")
@click.option("--svg", "svg_out", default=None, help="write the class scene")
@_handle_errors
def classes(source, svg_out):
    """The 7 tropical bitangent classes."""
    q = _load(source)
    curve = dualize(newton_subdivision(q), q)
    found = bitangent_locus(curve)
    click.echo(rpt.classes_report(q, found), nl=False)
    if svg_out:
        _write(svgplot.curve_scene(curve, found), svg_out)


@main.command()
@click.argument("source")
@click.option("--t", "t_text", required=True, help="rational parameter in (0,1)")
@click.option("--schedule", default=None,
              help="comma-separated t schedule (reserved for tracking)")
@click.option("--precision", type=int, default=None, help="bits")
@_handle_errors
def bitangents(source, t_text, schedule, precision):
    """All 28 bitangent lines of the realization at t."""
    q = _load(source)
    t = _parse_t(t_text)
    if precision is None:
        precision = default_precision()
    del schedule  # single-t report; tracking happens in `verify`
    lines = solve_bitangents(realize(q, t, precision))
    click.echo(rpt.bitangents_report(q, t, lines), nl=False)


@main.command()
@click.argument("source")
@click.option("--t", "t_text", required=True)
@click.option("--grid", type=int, default=24, help="warped grid depth")
@click.option("--svg", "svg_out", default=None, help="write the component map")
@click.option("--assign/--no-assign", default=False,
              help="also assign the real bitangents to components")
@_handle_errors
def avoidance(source, t_text, grid, svg_out, assign):
    """Connected components of the avoidance locus."""
    q = _load(source)
    t = _parse_t(t_text)
    realized = realize(q, t, default_precision())
    comp = stable_components(realized.values, grid)
    assignments = None
    if assign:
        from .verify import _real_triple

        assignments = {}
        for k, line in enumerate(solve_bitangents(realized)):
            if not line.is_real:
                continue
            root = assign_bitangent(comp, realized.values, _real_triple(line))
            assignments.setdefault(root, []).append(k)
    click.echo(rpt.avoidance_report(q, t, comp, assignments), nl=False)
    if svg_out:
        _write(svgplot.component_scene(comp), svg_out)


@main.command()
@click.argument("source")
@click.option("--t", "t_text", required=True)
@click.option("--grid", type=int, default=24, help="warped grid depth")
@_handle_errors
def topology(source, t_text, grid):
    """Real topology (ovals, nesting) of the realization at t."""
    q = _load(source)
    t = _parse_t(t_text)
    realized = realize(q, t, default_precision())
    top = real_topology(realized.values, grid, refine=2)
    click.echo(rpt.topology_report(q, t, top), nl=False)


@main.command()
@click.argument("source")
@click.option("--report", "report_out", default=None, help="output path")
@click.option("--precision", type=int, default=None)
@click.option("--grid", type=int, default=24)
@click.option("--seed", type=int, default=20260823)
@click.option("--lemma-samples", type=int, default=100)
@click.option("--convexity-samples", type=int, default=50)
@click.option("--skip-samplers", is_flag=True, default=False,
              help="run only the partition verification")
@_handle_errors
def verify(source, report_out, precision, grid, seed, lemma_samples,
           convexity_samples, skip_samplers):
    """Verify the component/class partition and run the samplers."""
    q = _load(source)
    cfg = VerifyConfig(
        precision=precision,
        grid_depth=grid,
        seed=seed,
        lemma_samples=lemma_samples,
        convexity_samples=convexity_samples,
    )
    ctx = build_context(q, cfg)
    partition = ctx.report
    lemma = convexity = None
    if not skip_samplers:
        lemma = verify_lemma_bitangent(q, cfg, context=ctx)
        convexity = verify_tropical_convexity(q, cfg, context=ctx)
    text = rpt.verification_report(partition, lemma, convexity)
    _write(text, report_out)
    if report_out:
        click.echo(f"report written to {report_out}")
    ok = partition.passed
    if lemma is not None:
        ok = ok and lemma.passed
    if convexity is not None:
        ok = ok and convexity.passed
    if not ok:
        sys.exit(1)


if __name__ == "__main__":
    main()
