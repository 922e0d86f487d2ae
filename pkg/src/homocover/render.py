"""SVG (planar) and Wavefront OBJ (spatial) drawings of a body and its cover."""
from __future__ import annotations

import numpy as np

from .covering import HomothetCover
from .geometry import ConvexBody

SIZE = 800
MARGIN = 0.05
OPACITY = 0.35
PALETTE = (
    "#1f77b4", "#ff7f0e", "#2ca02c", "#d62728", "#9467bd",
    "#8c564b", "#e377c2", "#7f7f7f", "#bcbd22", "#17becf",
)


def _ring(K):
    """Vertices in boundary order (local polygons are already counter-clockwise)."""
    return K.vertices


def svg(K: ConvexBody, cover: HomothetCover) -> str:
    if K.ambient_dim != 2:
        raise ValueError("svg output needs a planar body")
    ring = _ring(K)
    shapes = [cover.centers[i] + cover.gamma * ring for i in range(cover.m)]
    pts = np.vstack([ring] + shapes)
    lo, hi = pts.min(axis=0), pts.max(axis=0)
    span = max(float((hi - lo).max()), 1e-12)
    inner = SIZE * (1 - 2 * MARGIN)
    scale = inner / span

    def xy(P):
        X = MARGIN * SIZE + (P[:, 0] - lo[0]) * scale
        Y = SIZE - (MARGIN * SIZE + (P[:, 1] - lo[1]) * scale)
        return " ".join(f"{x:.3f},{y:.3f}" for x, y in zip(X, Y))

    tag = "polygon" if len(ring) > 2 else "polyline"
    out = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{SIZE}" height="{SIZE}" viewBox="0 0 {SIZE} {SIZE}">',
        f'<g id="body"><{tag} points="{xy(ring)}" fill="none" stroke="black" stroke-width="2"/></g>',
    ]
    for i, P in enumerate(shapes):
        color = PALETTE[i % len(PALETTE)]
        out.append(
            f'<g id="homothet-{i}"><{tag} points="{xy(P)}" fill="{color}" fill-opacity="{OPACITY}" '
            f'stroke="{color}" stroke-width="1"/></g>'
        )
    out.append("</svg>")
    return "\n".join(out) + "\n"


def _faces(K):
    if K.affine_dim == 3:
        return [list(f) for f in K.faces]
    if K.affine_dim == 2:
        return [list(range(len(K.vertices)))]
    return []


def obj(K: ConvexBody, cover: HomothetCover) -> str:
    if K.ambient_dim != 3:
        raise ValueError("obj output needs a body in three-space")
    faces = _faces(K)
    nv = len(K.vertices)
    groups = [("body", K.vertices)] + [
        (f"homothet_{i}", cover.centers[i] + cover.gamma * K.vertices) for i in range(cover.m)
    ]
    lines = ["# body and homothetic cover"]
    for g, (name, V) in enumerate(groups):
        base = g * nv + 1
        lines.append(f"g {name}")
        lines.extend(f"v {x:.17g} {y:.17g} {z:.17g}" for x, y, z in V)
        if faces:
            lines.extend("f " + " ".join(str(base + i) for i in f) for f in faces)
        elif nv == 2:
            lines.append(f"l {base} {base + 1}")
    return "\n".join(lines) + "\n"
