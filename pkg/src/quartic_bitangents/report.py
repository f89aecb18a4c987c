"""Structured text reports with fixed field ordering.

Reports use the same grammar family as the input documents: one record
per line, a keyword followed by whitespace-separated fields, ``#`` for
comments.  Rational data is printed exactly; floating point data is
printed with explicit precision so reports are deterministic.
"""

from __future__ import annotations

from .quartic import is_tropically_smooth
from .rational import format_rational


def _fmt_point(p):
    return f"{format_rational(p[0])} {format_rational(p[1])}"


def _fmt_complex(z, digits=12):
    return f"{float(z.real):+.{digits}e}{float(z.imag):+.{digits}e}j"


def subdivision_report(q, sub) -> str:
    lines = [f"name {q.name}", f"smooth {str(is_tropically_smooth(sub)).lower()}"]
    lines.append(f"cells {len(sub.cells)}")
    for cell in sub.cells:
        pts = " ".join(f"{i},{j}" for (i, j) in cell.vertices)
        lines.append(f"cell {pts}")
    return "\n".join(lines) + "\n"


def curve_report(q, curve) -> str:
    lines = [f"name {q.name}"]
    lines.append(f"vertices {len(curve.vertices)}")
    for v in curve.vertices:
        lines.append(f"vertex {_fmt_point(v)}")
    lines.append(f"bounded-edges {len(curve.edges)}")
    lines.append(f"rays {len(curve.rays)}")
    lines.append(f"genus {curve.first_betti_number()}")
    return "\n".join(lines) + "\n"


def classes_report(q, classes) -> str:
    lines = [f"name {q.name}", f"classes {len(classes)}"]
    for cls in classes:
        lines.append(f"class {cls.id} witness {_fmt_point(cls.witness)}")
        for cell in cls.cells:
            if cell[0] == "point":
                lines.append(f"  point {_fmt_point(cell[1])}")
            elif cell[0] == "seg":
                lines.append(f"  segment {_fmt_point(cell[1])} {_fmt_point(cell[2])}")
            elif cell[0] == "ray":
                lines.append(
                    f"  ray {_fmt_point(cell[1])} direction {cell[2][0]},{cell[2][1]}"
                )
            else:
                pts = " ".join(_fmt_point(p) for p in cell[1])
                lines.append(f"  polygon {pts}")
    return "\n".join(lines) + "\n"


def bitangents_report(q, t, lines28) -> str:
    lines = [
        f"name {q.name}",
        f"t {format_rational(t)}",
        f"bitangents {len(lines28)}",
        f"real {sum(1 for b in lines28 if b.is_real)}",
    ]
    for k, b in enumerate(lines28):
        coords = " ".join(_fmt_complex(z) for z in b.coords)
        lines.append(
            f"line {k} real {str(b.is_real).lower()} "
            f"residual {float(b.residual):.3e} coords {coords}"
        )
    return "\n".join(lines) + "\n"


def avoidance_report(q, t, comp, assignments=None) -> str:
    """Component table; assignments maps component root -> bitangent ids."""
    roots = sorted(comp.representatives, key=str)
    lines = [
        f"name {q.name}",
        f"t {format_rational(t)}",
        f"grid-axis-size {len(comp.axis)}",
        f"components {comp.count}",
    ]
    for k, root in enumerate(roots):
        rep = comp.representatives[root]
        size = sum(1 for r in comp.labels.values() if r == root)
        rep_txt = " ".join(f"{float(v):.12f}" for v in rep)
        row = f"component {k} samples {size} representative {rep_txt}"
        if assignments is not None:
            ids = sorted(assignments.get(root, ()))
            row += " bitangents " + (",".join(map(str, ids)) if ids else "-")
        lines.append(row)
    return "\n".join(lines) + "\n"


def topology_report(q, t, top) -> str:
    lines = [
        f"name {q.name}",
        f"t {format_rational(t)}",
        f"ovals {top.ovals}",
        f"regions {top.region_count}",
        f"nested {str(top.nested).lower()}",
        f"depths {' '.join(map(str, top.oval_depths)) if top.oval_depths else '-'}",
        f"summary {top.summary}",
    ]
    return "\n".join(lines) + "\n"


def verification_report(rep, lemma=None, convexity=None) -> str:
    """Full verification document in the spec's field order."""
    lines = [
        f"name {rep.curve_name}",
        f"smooth {str(rep.smooth).lower()}",
        f"classes {rep.class_count}",
    ]
    for k, w in enumerate(rep.class_witnesses, start=1):
        lines.append(f"class {k} witness {_fmt_point(w)}")
    lines.append("bitangents 28")
    component_ids = {
        root: k for k, root in enumerate(sorted(
            {r.component for r in rep.rows if r.component is not None},
            key=str,
        ))
    }
    for row in rep.rows:
        cls = row.class_id if row.class_id is not None else "-"
        cmp_id = (
            component_ids[row.component] if row.component is not None else "-"
        )
        lines.append(
            f"bitangent {row.index} vertex {_fmt_point(row.vertex)} "
            f"real {str(row.is_real).lower()} class {cls} component {cmp_id}"
        )
    lines.append(f"components {rep.component_count}")
    lines.append(f"partition-agreement {str(rep.partition_agreement).lower()}")
    lines.append(f"all-or-none {str(rep.all_or_none).lower()}")
    if lemma is not None:
        lines.append(
            f"lemma3-samples pass {lemma.passes} fail "
            f"{lemma.predicate_failures} estimation-retries "
            f"{lemma.estimation_failures}"
        )
    if convexity is not None:
        lines.append(
            f"convexity-samples pass {convexity.passes} fail "
            f"{convexity.predicate_failures} estimation-retries "
            f"{convexity.estimation_failures}"
        )
    lines.append(f"seed {rep.seed}")
    for note in rep.notes:
        lines.append(f"# note: {note}")
    return "\n".join(lines) + "\n"
