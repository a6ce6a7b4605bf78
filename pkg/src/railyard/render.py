"""Plain-text output: provenance headers, CSV, PGM and SVG pictures.

Every writer is deterministic; the provenance header records the tool
version, the spec digest, the degree cap and the seed, and nothing that
depends on the clock or the environment.
"""

from __future__ import annotations

import io
import json
import math
from fractions import Fraction
from typing import Iterable, Sequence

import numpy as np

from . import __version__
from .aztec import block_cells, ryg_to_domino, ryg_to_lozenge, contracted, shuffle_direction
from .graph import Covering, RygSpec, Vertex, even_neighbors, make_edge, window_rows

# sliding direction -> (name, fill colour) for domino pictures
DOMINO_CLASSES = {
    (0, 1): ("N", "#d62728"),
    (0, -1): ("S", "#1f77b4"),
    (1, 0): ("E", "#2ca02c"),
    (-1, 0): ("W", "#ffbf00"),
}


def provenance(spec: RygSpec | None = None, D=None, seed=None, **extra) -> dict:
    out = {"tool": "railyard", "version": __version__}
    if spec is not None:
        out["spec"] = spec.digest()
    if D is not None:
        out["D"] = D
    if seed is not None:
        out["seed"] = seed
    for k in sorted(extra):
        v = extra[k]
        out[k] = str(v) if isinstance(v, Fraction) else v
    return out


def header_lines(prov: dict, prefix: str = "# ") -> str:
    return "".join(f"{prefix}{k}={v}\n" for k, v in prov.items())


def write_csv(rows: Iterable[Sequence], columns: Sequence[str], prov: dict) -> str:
    buf = io.StringIO()
    buf.write(header_lines(prov))
    buf.write(",".join(columns) + "\n")
    for row in rows:
        buf.write(",".join(_cell(v) for v in row) + "\n")
    return buf.getvalue()


def _cell(v) -> str:
    if isinstance(v, float):
        return repr(v)
    return str(v)


def _plain(o):
    # numpy scalars and fractions reach the reports from the numeric checks
    if isinstance(o, np.generic):
        return o.item()
    if isinstance(o, Fraction):
        return str(o)
    raise TypeError(f"cannot serialize {type(o).__name__}")


def write_json(payload, prov: dict) -> str:
    return json.dumps({"provenance": prov, "data": payload}, sort_keys=True, indent=1,
                      default=_plain) + "\n"


def write_pgm(raster: np.ndarray, prov: dict, levels: int = 255) -> str:
    """ASCII PGM (P2); ``raster`` holds values in ``[0, 1]``, row 0 at the top."""
    raster = np.asarray(raster, dtype=float)
    h, w = raster.shape
    vals = np.clip(np.rint(raster * levels), 0, levels).astype(int)
    buf = io.StringIO()
    buf.write("P2\n")
    buf.write(header_lines(prov))
    buf.write(f"{w} {h}\n{levels}\n")
    for row in vals:
        buf.write(" ".join(str(v) for v in row) + "\n")
    return buf.getvalue()


# ---------------------------------------------------------------------------
# SVG


class _Svg:
    def __init__(self, xs: Sequence[float], ys: Sequence[float], scale: float = 24.0, pad: float = 1.0):
        self.x0, self.x1 = min(xs) - pad, max(xs) + pad
        self.y0, self.y1 = min(ys) - pad, max(ys) + pad
        self.s = scale
        self.parts: list = []

    def p(self, x, y) -> tuple:
        # flip y so that up is up
        return (round((float(x) - self.x0) * self.s, 3), round((self.y1 - float(y)) * self.s, 3))

    def line(self, a, b, stroke="#999", width=1.0):
        (x1, y1), (x2, y2) = self.p(*a), self.p(*b)
        self.parts.append(f'<line x1="{x1}" y1="{y1}" x2="{x2}" y2="{y2}" '
                          f'stroke="{stroke}" stroke-width="{width}"/>')

    def circle(self, c, r, fill):
        x, y = self.p(*c)
        self.parts.append(f'<circle cx="{x}" cy="{y}" r="{r}" fill="{fill}"/>')

    def polygon(self, pts, fill, stroke="#000"):
        s = " ".join(f"{x},{y}" for x, y in (self.p(*q) for q in pts))
        self.parts.append(f'<polygon points="{s}" fill="{fill}" stroke="{stroke}" stroke-width="0.5"/>')

    def text(self, c, s, size=10):
        x, y = self.p(*c)
        self.parts.append(f'<text x="{x}" y="{y}" font-size="{size}" font-family="monospace">{s}</text>')

    def render(self, prov: dict, legend: Sequence[tuple] = ()) -> str:
        w = round((self.x1 - self.x0) * self.s, 3)
        h = round((self.y1 - self.y0) * self.s, 3)
        out = [f'<svg xmlns="http://www.w3.org/2000/svg" width="{w}" height="{h + 16 * len(legend)}">']
        out.append("<!--\n" + header_lines(prov, prefix="") + "-->")
        out.extend(self.parts)
        for j, (label, colour) in enumerate(legend):
            y = h + 16 * j + 4
            out.append(f'<rect x="4" y="{y}" width="12" height="12" fill="{colour}"/>')
            out.append(f'<text x="20" y="{y + 10}" font-size="10" font-family="monospace">{label}</text>')
        out.append("</svg>")
        return "\n".join(out) + "\n"


def _window_vertices(spec: RygSpec, H: int) -> list:
    rows = window_rows(H)
    return [Vertex(x, y) for y in rows for x in range(spec.xmin, spec.xmax + 1)]


def svg_ryg(spec: RygSpec, H: int, covering: Covering | None = None, prov: dict | None = None) -> str:
    """Rail yard graph on the rows ``|y| < H`` with the covered edges drawn thick."""
    verts = _window_vertices(spec, H)
    pic = _Svg([v.x for v in verts], [float(v.y) for v in verts], scale=28.0)
    covered = set(covering.edges) if covering is not None else set()
    for v in verts:
        if v.x % 2:
            continue
        for b in even_neighbors(spec, v):
            if abs(b.y) >= H:
                continue
            e = make_edge(v, b)
            if e in covered:
                pic.line(v, b, stroke="#000", width=3.0)
            else:
                pic.line(v, b)
    for v in verts:
        pic.circle(v, 3, "#000" if v.x % 2 == 0 else "#fff")
    for i in spec.columns:
        pic.text((2 * i - 0.3, float(H) + 0.2), spec.kind(i))
    return pic.render(prov or provenance(spec))


def svg_dominos(tiling: Sequence, n: int, prov: dict | None = None) -> str:
    """Domino tiling of the size ``n`` diamond, coloured by sliding direction."""
    pic = _Svg([-n, n], [-n, n], scale=12.0, pad=0.5)
    for d in sorted(tiling):
        (a, b), (c, e) = block_cells(d)
        x0, y0 = min(a, c), min(b, e)
        x1, y1 = max(a, c) + 1, max(b, e) + 1
        name, colour = DOMINO_CLASSES[shuffle_direction(d, n)]
        pic.polygon([(x0, y0), (x1, y0), (x1, y1), (x0, y1)], colour)
    legend = [(f"{name}-going", colour) for name, colour in DOMINO_CLASSES.values()]
    return pic.render(prov or provenance(n=n), legend)


def svg_domino_picture(covering: Covering, prov: dict | None = None) -> str:
    """Covering of a steep graph drawn through the square-lattice map."""
    spec = covering.spec
    pts = []
    segs = []
    for e in sorted(covering.edges):
        if contracted(spec, e.odd):
            continue
        a = ryg_to_domino(spec, e.even)
        b = ryg_to_domino(spec, e.odd)
        pts += [a, b]
        segs.append((a, b))
    if not pts:
        raise ValueError("covering has no edges in the domino picture")
    pic = _Svg([p[0] for p in pts], [p[1] for p in pts], scale=20.0)
    for a, b in segs:
        pic.line(a, b, stroke="#000", width=3.0)
    return pic.render(prov or provenance(spec))


def svg_lozenge(covering: Covering, prov: dict | None = None) -> str:
    """Covering of an ``L^k`` graph drawn in the hexagonal-lattice picture."""
    spec = covering.spec
    segs = [(ryg_to_lozenge(spec, e.even), ryg_to_lozenge(spec, e.odd)) for e in sorted(covering.edges)]
    xs = [p[0] for s in segs for p in s]
    ys = [p[1] for s in segs for p in s]
    pic = _Svg(xs, ys, scale=40.0)
    for a, b in segs:
        pic.line(a, b, stroke="#000", width=3.0)
    return pic.render(prov or provenance(spec))


def classify_raster(N: int) -> np.ndarray:
    """``N x N`` raster of the arctic classifier on ``0 <= tau <= 1``, ``-1 <= chi <= 1``.

    Values: ``1`` frozen, ``0.5`` liquid, ``0`` boundary within one pixel.
    Row 0 is ``chi = 1``.
    """
    from .aztec import arctic_discriminant

    tau = np.linspace(0.0, 1.0, N)
    chi = np.linspace(1.0, -1.0, N)
    T, X = np.meshgrid(tau, chi)
    d = arctic_discriminant(T, X)
    out = np.where(d > 0, 1.0, 0.5)
    # pixels where the sign changes against a neighbour are boundary pixels
    sgn = np.sign(d)
    edge = np.zeros_like(d, dtype=bool)
    edge[:, 1:] |= sgn[:, 1:] != sgn[:, :-1]
    edge[1:, :] |= sgn[1:, :] != sgn[:-1, :]
    out[edge] = 0.0
    return out


def raster_boundary_residual(raster: np.ndarray) -> float:
    """Largest circle residual (in ``u, v``) over the boundary pixels of a raster."""
    from .aztec import circle_residual, to_uv

    N = raster.shape[0]
    tau = np.linspace(0.0, 1.0, N)
    chi = np.linspace(1.0, -1.0, N)
    rows, cols = np.nonzero(raster == 0.0)
    if rows.size == 0:
        return math.inf
    u, v = to_uv(tau[cols], chi[rows])
    return float(np.max(np.abs(circle_residual(u, v))))
