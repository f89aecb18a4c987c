"""SVG scenes: tropical curve with bitangent class shapes, component maps.

Plain string assembly against a fixed viewport; all geometry arrives as
exact rationals and is converted to floats only for rendering.
"""

from __future__ import annotations

PALETTE = (
    "#1b6ca8", "#d1495b", "#3c8d52", "#8a5fb0",
    "#d98e04", "#1c939c", "#a34f2c",
)

RAY_LENGTH = 3.0


class _Scene:
    def __init__(self, xlo, ylo, xhi, yhi, size=640):
        span = max(float(xhi - xlo), float(yhi - ylo)) or 1.0
        pad = 0.06 * span
        self.xlo, self.ylo = float(xlo) - pad, float(ylo) - pad
        self.span = span + 2 * pad
        self.size = size
        self.parts = []

    def map(self, p):
        x = (float(p[0]) - self.xlo) / self.span * self.size
        y = self.size - (float(p[1]) - self.ylo) / self.span * self.size
        return x, y

    def line(self, p, q, color, width=1.5, dash=None):
        (x1, y1), (x2, y2) = self.map(p), self.map(q)
        dash_attr = f' stroke-dasharray="{dash}"' if dash else ""
        self.parts.append(
            f'<line x1="{x1:.2f}" y1="{y1:.2f}" x2="{x2:.2f}" y2="{y2:.2f}" '
            f'stroke="{color}" stroke-width="{width}"{dash_attr}/>'
        )

    def dot(self, p, color, r=3.5):
        x, y = self.map(p)
        self.parts.append(
            f'<circle cx="{x:.2f}" cy="{y:.2f}" r="{r}" fill="{color}"/>'
        )

    def polygon(self, pts, color, opacity=0.35):
        coords = " ".join(f"{x:.2f},{y:.2f}" for x, y in map(self.map, pts))
        self.parts.append(
            f'<polygon points="{coords}" fill="{color}" '
            f'fill-opacity="{opacity}" stroke="{color}"/>'
        )

    def text(self, p, s, color="#222"):
        x, y = self.map(p)
        self.parts.append(
            f'<text x="{x + 6:.2f}" y="{y - 6:.2f}" font-size="13" '
            f'fill="{color}">{s}</text>'
        )

    def render(self):
        body = "\n".join(self.parts)
        return (
            f'<svg xmlns="http://www.w3.org/2000/svg" width="{self.size}" '
            f'height="{self.size}" viewBox="0 0 {self.size} {self.size}">\n'
            f'<rect width="100%" height="100%" fill="white"/>\n{body}\n</svg>\n'
        )


def _ray_end(origin, direction, scale):
    return (
        float(origin[0]) + direction[0] * scale,
        float(origin[1]) + direction[1] * scale,
    )


def curve_scene(curve, classes=None) -> str:
    """Tropical quartic (black) with optional class shapes (colored)."""
    xlo, ylo, xhi, yhi = curve.bounding_box()
    if classes:
        for cls in classes:
            bx = cls.bounding_box()
            xlo, ylo = min(xlo, bx[0]), min(ylo, bx[1])
            xhi, yhi = max(xhi, bx[2]), max(yhi, bx[3])
    scene = _Scene(xlo, ylo, xhi, yhi)
    ray_scale = RAY_LENGTH * scene.span / 8

    if classes:
        for cls in classes:
            color = PALETTE[(cls.id - 1) % len(PALETTE)]
            for cell in cls.cells:
                if cell[0] == "point":
                    scene.dot(cell[1], color)
                elif cell[0] == "seg":
                    scene.line(cell[1], cell[2], color, width=3)
                elif cell[0] == "ray":
                    scene.line(cell[1], _ray_end(cell[1], cell[2], ray_scale),
                               color, width=3, dash="6,4")
                else:
                    scene.polygon(cell[1], color)
            scene.text(cls.witness, str(cls.id), color)

    for piece in curve.edges:
        scene.line(piece.origin, piece.endpoint, "#222", width=2)
    for piece in curve.rays:
        scene.line(piece.origin,
                   _ray_end(piece.origin, piece.direction, ray_scale),
                   "#222", width=2)
    for v in curve.vertices:
        scene.dot(v, "#222", r=2.5)
    return scene.render()


def component_scene(comp) -> str:
    """Dual-plane avoidance components: three cube faces side by side.

    Each face shows the grid points with coordinate k fixed to 1; colors
    are component labels, grey points are non-avoiding lines.
    """
    axis = comp.axis
    n = len(axis)
    size = 260
    roots = sorted(comp.representatives, key=str)
    color_of = {
        root: PALETTE[k % len(PALETTE)] for k, root in enumerate(roots)
    }
    order = {float(v): idx for idx, v in enumerate(sorted(axis, key=float))}
    parts = []
    cell = size / n
    present = {}
    for key, root in comp.labels.items():
        present[key] = root
    for face in range(3):
        x0 = face * (size + 30)
        parts.append(
            f'<rect x="{x0}" y="0" width="{size}" height="{size}" '
            f'fill="#f4f4f4" stroke="#999"/>'
        )
        axis_label = "abc"[face]
        parts.append(
            f'<text x="{x0 + 6}" y="{size + 18}" font-size="13" '
            f'fill="#222">{axis_label} = 1</text>'
        )
        for key, root in present.items():
            if key[face] != 1:
                continue
            others = [key[k] for k in range(3) if k != face]
            try:
                i, j = order[float(others[0])], order[float(others[1])]
            except KeyError:
                continue
            x = x0 + (i + 0.5) * cell
            y = size - (j + 0.5) * cell
            parts.append(
                f'<circle cx="{x:.2f}" cy="{y:.2f}" r="{max(cell / 2, 1):.2f}" '
                f'fill="{color_of[root]}"/>'
            )
    width = 3 * size + 60
    body = "\n".join(parts)
    return (
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{width}" '
        f'height="{size + 30}" viewBox="0 0 {width} {size + 30}">\n'
        f'<rect width="100%" height="100%" fill="white"/>\n{body}\n</svg>\n'
    )
