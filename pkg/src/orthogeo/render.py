"""SVG drawings in the Poincare disk.

The unit disk is drawn centred in a 512x512 viewport with radius 240 px.
Geodesics are circular arcs orthogonal to the boundary (straight segments
for diameters).
"""

from __future__ import annotations

import math

from .cutlocus import CutLocusTree, build_cut_locus
from .kernel import DiskPoint, Geodesic, normalize_angle
from .polygon import IdealPolygon, OrthoDecomposition

SIZE = 512
CENTER = SIZE / 2.0
SCALE = 240.0
LAYERS = ("polygon", "decomposition", "cutlocus", "inscribed-disk")

_STYLE = """
  .boundary { fill: none; stroke: #999; stroke-width: 1 }
  .side { fill: none; stroke: #000; stroke-width: 2 }
  .ortho { fill: none; stroke: #c0392b; stroke-width: 2 }
  .cut { fill: none; stroke: #2471a3; stroke-width: 1; stroke-dasharray: 4 3 }
  .inscribed { fill: none; stroke: #27ae60; stroke-width: 1.5 }
"""


def to_view(z: complex) -> tuple[float, float]:
    return (CENTER + SCALE * z.real, CENTER - SCALE * z.imag)


def from_view(x: float, y: float) -> complex:
    return complex((x - CENTER) / SCALE, (CENTER - y) / SCALE)


def geodesic_circle(alpha: float, beta: float) -> tuple[complex, float] | None:
    """Euclidean centre and radius of the geodesic with ideal endpoints alpha, beta.

    None for a diameter.
    """
    half = normalize_angle(beta - alpha) / 2.0
    if abs(math.cos(half)) < 1e-9:
        return None
    a, b = complex(math.cos(alpha), math.sin(alpha)), complex(math.cos(beta), math.sin(beta))
    c = (a + b) / (1.0 + math.cos(alpha - beta))
    return c, abs(math.tan(half))


def _fmt(v: float) -> str:
    s = f"{v:.6f}".rstrip("0").rstrip(".")
    return "0" if s in ("-0", "") else s


def arc_path(g: Geodesic, p: complex, q: complex) -> str:
    """SVG path from p to q along the geodesic g (p, q given as disk coordinates)."""
    x1, y1 = to_view(p)
    x2, y2 = to_view(q)
    circ = geodesic_circle(g.a.angle, g.b.angle)
    if circ is None:
        return f"M {_fmt(x1)} {_fmt(y1)} L {_fmt(x2)} {_fmt(y2)}"
    c, R = circ
    cx, cy = to_view(c)
    cross = (x1 - cx) * (y2 - cy) - (y1 - cy) * (x2 - cx)
    sweep = 1 if cross > 0 else 0
    r = R * SCALE
    return f"M {_fmt(x1)} {_fmt(y1)} A {_fmt(r)} {_fmt(r)} 0 0 {sweep} {_fmt(x2)} {_fmt(y2)}"


def hyperbolic_circle(p: DiskPoint, r: float) -> tuple[complex, float]:
    """Euclidean centre and radius of the hyperbolic circle of radius r about p."""
    rho = math.tanh(r / 2.0)
    z = p.z
    a2 = abs(z) ** 2
    den = 1.0 - a2 * rho * rho
    return z * (1.0 - rho * rho) / den, rho * (1.0 - a2) / den


def render_svg(
    P: IdealPolygon,
    layers=LAYERS,
    decomposition: OrthoDecomposition | None = None,
    tree: CutLocusTree | None = None,
) -> str:
    layers = tuple(layers)
    for layer in layers:
        if layer not in LAYERS:
            raise ValueError(f"unknown layer {layer!r}; choose from {', '.join(LAYERS)}")
    if tree is None and ("cutlocus" in layers or "inscribed-disk" in layers or "decomposition" in layers):
        tree = build_cut_locus(P)
    if decomposition is None and "decomposition" in layers and P.n >= 4:
        from .decompose import short_decomposition

        decomposition = short_decomposition(P, tree)

    out = [
        '<?xml version="1.0" encoding="UTF-8"?>',
        f'<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{SIZE}" height="{SIZE}" '
        f'viewBox="0 0 {SIZE} {SIZE}">',
        f"<style>{_STYLE}</style>",
        f'<circle class="boundary" cx="{_fmt(CENTER)}" cy="{_fmt(CENTER)}" r="{_fmt(SCALE)}"/>',
    ]
    if "polygon" in layers:
        for k, g in enumerate(P.sides):
            d = arc_path(g, g.a.z, g.b.z)
            out.append(f'<path class="side" data-side="{k}" d="{d}"/>')
    if "decomposition" in layers and decomposition is not None:
        for m in decomposition.members:
            seg = m.segment
            d = arc_path(seg.carrier, seg.foot1.z, seg.foot2.z)
            out.append(f'<path class="ortho" data-sides="{m.i} {m.j}" d="{d}"/>')
    if "cutlocus" in layers and tree is not None:
        for e in tree.edges:
            p = tree.vertices[e.u].location.z
            q = P.vertex(e.leaf).z if e.is_leaf else tree.vertices[e.v].location.z
            d = arc_path(e.carrier, p, q)
            out.append(f'<path class="cut" data-sides="{e.sides[0]} {e.sides[1]}" d="{d}"/>')
    if "inscribed-disk" in layers and tree is not None:
        v = max(tree.vertices, key=lambda v: (v.distance, -v.sides[0]))
        c, rad = hyperbolic_circle(v.location, v.distance)
        cx, cy = to_view(c)
        out.append(
            f'<circle class="inscribed" cx="{_fmt(cx)}" cy="{_fmt(cy)}" r="{_fmt(rad * SCALE)}"/>'
        )
    out.append("</svg>")
    return "\n".join(out) + "\n"
