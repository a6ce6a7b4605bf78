"""Aztec diamonds and the planar tiling pictures of rail yard graphs.

The Aztec diamond of size ``n`` is the graph with ``l = 0``, ``r = 2n - 1``,
letters ``(LR)^n`` and signs ``(+-)^n``. Natural diamond coordinates put
the origin at the centre; a west-going domino centred at ``(x - 1/2, y)``
is the diagonal dimer of the ``L+`` column ``2(m - 1)`` with
``m = (n + x - y + 1) / 2``.

Biased weights put ``x_i = 1`` on even columns and ``x_i = lam`` on odd
ones, so each vertical domino pair costs ``lam``; the bias ``p`` used in
the older literature is ``1 / (1 + lam)``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from math import comb
from typing import Iterable, Sequence

import numpy as np

from .graph import (
    Covering,
    Edge,
    Face,
    RygSpec,
    Vertex,
    build,
    enumerate_coverings,
    face_vertices,
    flippable_faces,
    is_edge,
    window_faces,
)
from .kernel import KernelContext, edge_probability

WEIGHTINGS = ("uniform", "biased", "qvol", "biased_qvol", "stanley")

HALF = Fraction(1, 2)


@dataclass(frozen=True)
class AztecParams:
    n: int
    lam: object = 1
    q: object = 1
    weighting: str = "uniform"
    custom: tuple | None = None

    def __post_init__(self):
        if self.n < 1:
            raise ValueError("n must be positive")
        if self.weighting not in WEIGHTINGS:
            raise ValueError(f"unknown weighting {self.weighting!r}")
        if self.lam <= 0 or self.q <= 0:
            raise ValueError("lam and q must be positive")
        if self.weighting == "stanley" and (self.custom is None or len(self.custom) != 2 * self.n):
            raise ValueError("stanley weighting needs 2n custom weights")

    @property
    def p(self):
        """Bias in the older convention."""
        return 1 / (1 + self.lam)


def aztec_weights(params: AztecParams) -> list:
    n, lam, q = params.n, params.lam, params.q
    w = params.weighting
    if w == "uniform":
        return [1] * (2 * n)
    if w == "biased":
        return [lam if i % 2 else 1 for i in range(2 * n)]
    if w == "stanley":
        return list(params.custom)
    scale = lam if w == "biased_qvol" else 1
    return [scale * q ** i if i % 2 else q ** (-i) for i in range(2 * n)]


def aztec_spec(params: AztecParams | int, lam=1) -> RygSpec:
    """Spec of the Aztec diamond; an integer ``n`` means biased weights with ``lam``."""
    if not isinstance(params, AztecParams):
        params = AztecParams(int(params), lam, 1, "uniform" if lam == 1 else "biased")
    n = params.n
    return build(0, 2 * n - 1, "LR" * n, "+-" * n, aztec_weights(params))


def _rational(v):
    return v if isinstance(v, Fraction) else Fraction(v).limit_denominator(10 ** 12) \
        if isinstance(v, float) else Fraction(v)


# ---------------------------------------------------------------------------
# planar pictures


def _steep_check(spec: RygSpec):
    if len(spec.lr) % 2 or spec.lr != "LR" * (len(spec.lr) // 2):
        raise ValueError("domino pictures need letters (LR)^k")


def contracted(spec: RygSpec, v: Vertex) -> bool:
    """Odd vertices between an ``L`` column and the following ``R`` column have degree 2."""
    _steep_check(spec)
    if v.x % 2 == 0 or not spec.xmin < v.x < spec.xmax:
        return False
    return spec.letter((v.x - 1) // 2) == "L"


def _column_steps(spec: RygSpec) -> dict:
    """Unit step of the square-lattice picture contributed by each column.

    An ``L`` column steps across its left half (odd to even vertex), an
    ``R`` column across its right half; the other half collapses onto the
    contracted vertex. The step is ``(1, 0)`` for ``L+`` and ``R-`` and
    ``(0, -1)`` for ``L-`` and ``R+``. Moving up one row adds ``(1, 1)``.
    """
    return {i: ((1, 0) if (spec.letter(i) == "L") == (spec.sign(i) > 0) else (0, -1))
            for i in spec.columns}


def ryg_to_domino(spec: RygSpec, v: Vertex) -> tuple:
    """Square-lattice coordinates ``(X, Y)`` of a vertex surviving contraction.

    The left boundary column sits at ``X = 2l - 1 + y``; for the Aztec
    diamond this is the map ``(x, y) -> (phi(x) + y, y)``.
    """
    _steep_check(spec)
    if not spec.xmin <= v.x <= spec.xmax:
        raise ValueError(f"{v} lies outside the graph")
    if contracted(spec, v):
        raise ValueError(f"{v} is contracted away")
    X, Y = Fraction(spec.xmin), Fraction(0)
    for i, (dx, dy) in _column_steps(spec).items():
        crossed = 2 * i <= v.x if spec.letter(i) == "L" else 2 * i + 1 <= v.x
        if crossed:
            X, Y = X + dx, Y + dy
    return X + v.y, Y + v.y


def aztec_coords(n: int, XY: tuple) -> tuple:
    """Square-lattice picture to natural diamond coordinates."""
    return XY[0] - (n - 1), XY[1]


def domino_of_edge(spec: RygSpec, e: Edge):
    """``(centre, orientation)`` of the domino carried by ``e``, or ``None``.

    Edges at a contracted vertex carry no domino. Orientation labels follow
    the direction from the even square to the odd one: ``W`` up, ``E`` down,
    ``N`` right, ``S`` left.
    """
    if contracted(spec, e.odd):
        return None
    a = ryg_to_domino(spec, e.even)
    b = ryg_to_domino(spec, e.odd)
    d = (b[0] - a[0], b[1] - a[1])
    label = {(0, 1): "W", (0, -1): "E", (1, 0): "N", (-1, 0): "S"}.get(d)
    if label is None:
        raise AssertionError(f"edge {e} is not a unit step in the domino picture")
    return ((a[0] + b[0]) / 2, (a[1] + b[1]) / 2), label


def tiling_dominos(c: Covering, n: int | None = None) -> list:
    """Dominos of a covering, in diamond coordinates when ``n`` is given."""
    out = []
    for e in sorted(c.edges):
        d = domino_of_edge(c.spec, e)
        if d is None:
            continue
        centre, lab = d
        if n is not None:
            centre = aztec_coords(n, centre)
        out.append((centre, lab))
    return out


def face_centre(spec: RygSpec, f: Face) -> tuple:
    """Centre of the lattice face under the domino picture."""
    pts = {ryg_to_domino(spec, v) for v in face_vertices(spec, f) if not contracted(spec, v)}
    if len(pts) != 4:
        raise AssertionError(f"{f} does not become a unit square")
    return sum(p[0] for p in pts) / 4, sum(p[1] for p in pts) / 4


def ryg_to_lozenge(spec: RygSpec, v: Vertex) -> tuple:
    """Hexagonal-lattice picture for letters ``L^k``; every edge has length ``sqrt(5)/4``.

    Abscissas advance by ``1/2`` across a horizontal edge into an even
    vertex and by ``sqrt(5)/4`` out of it; ordinates are halved and shift by
    ``b_i / 4`` per column.
    """
    if set(spec.lr) != {"L"}:
        raise ValueError("lozenge picture needs a constant letter sequence L^k")
    rel = v.x - spec.xmin
    if not 0 <= rel <= spec.xmax - spec.xmin:
        raise ValueError(f"{v} lies outside the graph")
    up = (rel + 1) // 2
    down = rel // 2
    X = spec.xmin + 0.5 * up + math.sqrt(5) / 4 * down
    shift = sum(spec.sign(spec.l + j) for j in range(up))
    Y = float(v.y) / 2 + shift / 4
    return X, Y


# ---------------------------------------------------------------------------
# west-going domino probabilities


def west_edge(x: int, y: int, n: int) -> Edge | None:
    """Diagonal dimer carrying the west-going domino centred at ``(x - 1/2, y)``."""
    if (x + y + n) % 2 == 0:
        return None
    m = (n + x - y + 1) // 2
    if not 1 <= m <= n:
        return None
    ex = 4 * (m - 1)
    return Edge(Vertex(ex, Fraction(2 * y - 1, 2)), Vertex(ex - 1, Fraction(2 * y + 1, 2)))


def west_prob(x: int, y: int, n: int, lam=1.0, method: str = "kernel") -> float:
    """Probability of a west-going domino centred at ``(x - 1/2, y)``.

    ``method="kernel"`` goes through the general correlation kernel;
    ``method="contour"`` evaluates the specialised double integral directly.
    """
    if n < 1:
        return 0.0
    e = west_edge(x, y, n)
    if e is None:
        return 0.0
    if method == "contour":
        return west_prob_contour(x, y, n, float(lam))
    if method != "kernel":
        raise ValueError(f"unknown method {method!r}")
    return edge_probability(_aztec_ctx(n, float(lam)), [e])


@lru_cache(maxsize=64)
def _aztec_ctx(n: int, lam: float) -> KernelContext:
    return KernelContext(aztec_spec(n, lam))


def west_prob_contour(x: int, y: int, n: int, lam: float, M: int = 256, tol: float = 1e-12) -> float:
    """Direct trapezoid evaluation of the specialised west-domino integral.

    The integrand is ``((1-w)/(1-z))^m ((1+lam/w)/(1+lam/z))^(n+1-m)
    (w/z)^y / ((z-w)(1-w))``; ``z`` runs on a circle around ``0`` and
    ``-lam`` avoiding ``1``, ``w`` on a larger concentric circle.
    """
    if west_edge(x, y, n) is None:
        return 0.0
    m = (n + x - y + 1) // 2
    c = -lam / 2
    rz = lam / 2 + 0.5 * min(1.0, 1 + lam / 2 - lam / 2 - 1e-9)
    rw = rz + 1.0
    prev = None
    while True:
        th = 2 * np.pi * (np.arange(M) + 0.5) / M
        z = c + rz * np.exp(1j * th)
        w = c + rw * np.exp(1j * th)
        dz = 1j * (z - c) * 2 * np.pi / M
        dw = 1j * (w - c) * 2 * np.pi / M
        fz = (1 - z) ** (-m) * (1 + lam / z) ** (-(n + 1 - m)) * z ** (-y) * dz
        fw = (1 - w) ** (m - 1) * (1 + lam / w) ** (n + 1 - m) * w ** y * dw
        val = fz @ (1.0 / (z[:, None] - w[None, :])) @ fw / (2j * np.pi) ** 2
        if prev is not None and abs(val - prev) < tol:
            return float(val.real)
        if M > 2 ** 15:
            return float(val.real)
        prev = val
        M *= 2


@lru_cache(maxsize=16)
def _exact_west_table(n: int, lam: Fraction) -> dict:
    spec = aztec_spec(n, lam)
    Z = Fraction(0)
    acc: dict = {}
    xs = {i: Fraction(spec.weight(i)) for i in spec.columns}
    for c in enumerate_coverings(spec, n + 1):
        w = Fraction(1)
        for i, d in c.degrees().items():
            w *= xs[i] ** d
        Z += w
        for e in c.edges:
            if e.kind == "diagonal" and spec.kind(e.column) == "L+":
                m = e.column // 2 + 1
                y = int(e.even.y + HALF)
                x = 2 * m - n - 1 + y
                acc[(x, y)] = acc.get((x, y), 0) + w
    return {k: v / Z for k, v in acc.items()}


def west_prob_exact(x: int, y: int, n: int, lam=1) -> Fraction:
    """Exact probability by enumerating every tiling (small ``n`` only)."""
    return _exact_west_table(n, _rational(lam)).get((x, y), Fraction(0))


def admissible_grid(n: int) -> list:
    """``(x, y)`` with ``x + y + n`` odd, ``|y| <= n`` and ``m`` in ``1..n``."""
    out = []
    for y in range(-n, n + 1):
        for m in range(1, n + 1):
            x = 2 * m - n - 1 + y
            out.append((x, y))
    return sorted(out)


# ---------------------------------------------------------------------------
# creation rate


def krawtchouk_c(lam, A: int, B: int, n: int):
    """Coefficient of ``z^A`` in ``(1 - z)^B (1 + z/lam)^(n - B)``."""
    if A < 0 or B < 0 or B > n:
        return Fraction(0) if isinstance(lam, (int, Fraction)) else 0.0
    if isinstance(lam, int):
        lam = Fraction(lam)
    total = 0
    for k in range(0, min(A, B) + 1):
        if A - k > n - B:
            continue
        total += (-1) ** k * comb(B, k) * comb(n - B, A - k) * lam ** (k - A)
    return total


def creation_rate(x: int, y: int, n: int, lam=1):
    """Closed form ``(lam/(1+lam))^(n-1) c(A, B, n-1) c(B, A, n-1)``."""
    if (x + y + n) % 2 == 0:
        return 0
    A = (n - 1 - x - y) // 2
    B = (n - 1 + x - y) // 2
    if isinstance(lam, int):
        lam = Fraction(lam)
    return (lam / (1 + lam)) ** (n - 1) * krawtchouk_c(lam, A, B, n - 1) * krawtchouk_c(lam, B, A, n - 1)


def creation_rate_definitional(x: int, y: int, n: int, lam=1.0, method: str = "kernel") -> float:
    """``(lam+1)/lam * (P(x, y, n) - P(x+1, y, n-1))`` from west-domino probabilities."""
    lam = float(lam)
    p1 = west_prob(x, y, n, lam, method)
    p0 = west_prob(x + 1, y, n - 1, lam, method) if n > 1 else 0.0
    return (lam + 1) / lam * (p1 - p0)


_CELL_STEP = {"W": (0, 1), "E": (0, -1), "N": (1, 0), "S": (-1, 0)}


def domino_cells(domino) -> tuple:
    """The two unit cells (by their centres) covered by ``(centre, label)``."""
    (cx, cy), lab = domino
    dx, dy = _CELL_STEP[lab]
    a = (cx - Fraction(dx, 2), cy - Fraction(dy, 2))
    b = (cx + Fraction(dx, 2), cy + Fraction(dy, 2))
    return tuple(sorted((a, b)))


def _in_diamond(cell, n: int) -> bool:
    return abs(cell[0]) + abs(cell[1]) <= n


def to_block_domino(domino) -> tuple:
    """``(a, b, horizontal)`` with ``(a, b)`` the lower-left cell index.

    Cell ``(a, b)`` is the unit square centred at ``(a + 1/2, b + 1/2)``.
    """
    (c1, c2) = domino_cells(domino)
    return (math.floor(c1[0]), math.floor(c1[1]), c1[1] == c2[1])


def block_cells(d) -> tuple:
    a, b, horizontal = d
    return ((a, b), (a + 1, b)) if horizontal else ((a, b), (a, b + 1))


def diamond_cells(n: int) -> list:
    return [(a, b) for a in range(-n, n) for b in range(-n, n)
            if abs(2 * a + 1) + abs(2 * b + 1) <= 2 * n]


def _weighted_tilings(n: int, lam: Fraction) -> list:
    """``(probability, dominos inside the diamond)`` for every tiling of size ``n``."""
    spec = aztec_spec(n, lam)
    xs = {i: Fraction(spec.weight(i)) for i in spec.columns}
    out = []
    Z = Fraction(0)
    for c in enumerate_coverings(spec, n + 1):
        w = Fraction(1)
        for i, d in c.degrees().items():
            w *= xs[i] ** d
        Z += w
        doms = [to_block_domino(d) for d in tiling_dominos(c, n)
                if all(_in_diamond(cell, n) for cell in domino_cells(d))]
        out.append((w, doms))
    return [(w / Z, doms) for w, doms in out]


def shuffle_direction(d, n: int) -> tuple:
    """Sliding direction of a domino of the size-``n`` diamond.

    Horizontal dominos move up or down and vertical ones right or left,
    according to the checkerboard colour of their lower-left cell.
    """
    a, b, horizontal = d
    even = (a + b + n) % 2 == 0
    if horizontal:
        return (0, 1) if even else (0, -1)
    return (1, 0) if even else (-1, 0)


def _destroy_and_slide(dominos, n: int) -> tuple:
    """Shuffle a size ``n - 1`` tiling up to the fill step.

    Returns the slid dominos and the lower-left cells of the empty 2x2
    blocks, cut greedily from the bottom row up.
    """
    occ = {cell: d for d in dominos for cell in block_cells(d)}
    dead = set()
    for d in dominos:
        dx, dy = shuffle_direction(d, n - 1)
        hit = {occ.get((c[0] + dx, c[1] + dy)) for c in block_cells(d)}
        if len(hit) == 1 and None not in hit:
            e = hit.pop()
            if shuffle_direction(e, n - 1) == (-dx, -dy):
                dead.add(d)
                dead.add(e)
    moved = []
    filled = set()
    for d in dominos:
        if d in dead:
            continue
        dx, dy = shuffle_direction(d, n - 1)
        d2 = (d[0] + dx, d[1] + dy, d[2])
        moved.append(d2)
        filled.update(block_cells(d2))
    empty = set(diamond_cells(n)) - filled
    if len(filled) + len(empty) != 2 * n * (n + 1):
        raise AssertionError("shuffling moved a domino outside the diamond or onto another")
    blocks = []
    for c in sorted(empty, key=lambda v: (v[1], v[0])):
        if c not in empty:
            continue
        block = {(c[0] + i, c[1] + j) for i in (0, 1) for j in (0, 1)}
        if not block <= empty:
            raise AssertionError("empty region is not a union of 2x2 blocks")
        empty -= block
        blocks.append(c)
    return moved, blocks


def shuffle_created_blocks(dominos: Sequence, n: int) -> list:
    """Centres of the blocks created when shuffling a size ``n - 1`` tiling to size ``n``."""
    _, blocks = _destroy_and_slide(dominos, n)
    return [(Fraction(a + 1), Fraction(b + 1)) for a, b in blocks]


def _fill(block, vertical: bool) -> list:
    a, b = block
    if vertical:
        return [(a, b, False), (a + 1, b, False)]
    return [(a, b, True), (a, b + 1, True)]


def shuffle_sample(n: int, lam=1.0, seed: int = 0) -> list:
    """Random tiling of the size ``n`` diamond by domino shuffling.

    A created block is filled by a vertical pair with probability
    ``lam / (1 + lam)`` and by a horizontal pair otherwise.
    """
    rng = np.random.default_rng(seed)
    pv = float(lam) / (1 + float(lam))
    tiling: list = []
    for k in range(1, n + 1):
        moved, blocks = _destroy_and_slide(tiling, k)
        coins = rng.random(len(blocks)) < pv
        for blk, v in zip(blocks, coins):
            moved.extend(_fill(blk, bool(v)))
        tiling = moved
    return tiling


def shuffle_distribution(n: int, lam=1) -> dict:
    """Exact law of the shuffling output, ``{frozenset(dominos): probability}``."""
    lam = _rational(lam)
    pv = lam / (1 + lam)
    law = {frozenset(): Fraction(1)}
    for k in range(1, n + 1):
        nxt: dict = {}
        for t, p in law.items():
            moved, blocks = _destroy_and_slide(list(t), k)
            for choice in range(2 ** len(blocks)):
                doms = list(moved)
                q = p
                for j, blk in enumerate(blocks):
                    v = bool(choice >> j & 1)
                    q *= pv if v else 1 - pv
                    doms.extend(_fill(blk, v))
                key = frozenset(doms)
                nxt[key] = nxt.get(key, 0) + q
        law = nxt
    return law


def creation_rate_square_check(n: int, lam=1) -> dict:
    """Three exact numbers per admissible centre ``(x, y)`` (``x + y + n`` odd).

    ``square`` is the probability that the 2x2 square centred there is
    covered by two dominos in a size ``n`` tiling, ``shuffled`` the
    probability that shuffling a random size ``n - 1`` tiling creates a
    block there, and ``closed`` the closed-form creation rate. The first
    two agree for every ``n``; ``closed`` is the net rate (its grid sum is
    ``n``) and matches them only for ``n <= 2``.
    """
    lam = _rational(lam)
    square: dict = {}
    for p, doms in _weighted_tilings(n, lam):
        ds = set(doms)
        for a, b, horizontal in doms:
            partner = (a, b + 1, True) if horizontal else (a + 1, b, False)
            if partner in ds:
                k = (Fraction(a + 1), Fraction(b + 1))
                square[k] = square.get(k, 0) + p
    shuffled: dict = {}
    if n == 1:
        shuffled[(Fraction(0), Fraction(0))] = Fraction(1)
    else:
        for p, doms in _weighted_tilings(n - 1, lam):
            for k in shuffle_created_blocks(doms, n):
                shuffled[k] = shuffled.get(k, 0) + p
    out = {}
    keys = {k for k in square if (k[0] + k[1] + n) % 2} | set(shuffled) | set(admissible_grid(n))
    for k in sorted(keys):
        kk = (int(k[0]), int(k[1]))
        out[kk] = {
            "square": square.get(k, Fraction(0)),
            "shuffled": shuffled.get(k, Fraction(0)),
            "closed": creation_rate(kk[0], kk[1], n, lam),
        }
    return out


# ---------------------------------------------------------------------------
# generating functions


def _epgf_denominator(u, v, t, lam):
    return (1 + lam) * (1 + t * t) - t * (u + 1 / u) - lam * t * (v + 1 / v)


def epgf(u, v, t, lam, tol: float = 1e-12):
    """Closed form of ``sum P(x, y, n) u^x v^y t^n``."""
    d1 = 1 - t / u
    d2 = _epgf_denominator(u, v, t, lam)
    if abs(d1) < tol or abs(d2) < tol:
        raise ZeroDivisionError("evaluation at a pole")
    return lam * t / (d1 * d2)


def creation_gf(u, v, t, lam, tol: float = 1e-12):
    d = _epgf_denominator(u, v, t, lam)
    if abs(d) < tol:
        raise ZeroDivisionError("evaluation at a pole")
    return (1 + lam) * t / d


def _pmul(a: dict, b: dict) -> dict:
    out: dict = {}
    for (i1, j1), c1 in a.items():
        for (i2, j2), c2 in b.items():
            k = (i1 + i2, j1 + j2)
            out[k] = out.get(k, 0) + c1 * c2
    return {k: c for k, c in out.items() if c != 0}


def _padd(a: dict, b: dict, s=1) -> dict:
    out = dict(a)
    for k, c in b.items():
        out[k] = out.get(k, 0) + s * c
    return {k: c for k, c in out.items() if c != 0}


def _tseries_inverse_of_one_minus(g: list, D: int) -> list:
    """``1 / (1 - g)`` for a ``t``-series ``g`` with ``g[0] = 0``."""
    out = [{(0, 0): Fraction(1)}] + [dict() for _ in range(D)]
    for k in range(1, D + 1):
        acc: dict = {}
        for j in range(1, k + 1):
            if g[j]:
                acc = _padd(acc, _pmul(g[j], out[k - j]))
        out[k] = acc
    return out


def epgf_coeffs(lam, D: int, creation: bool = False) -> list:
    """Coefficients of ``t^0 .. t^D`` as ``{(i, j): c}`` Laurent polynomials in ``u, v``.

    With ``creation=True`` the creation-rate generating function is expanded
    instead. Exact for rational ``lam``.
    """
    lam = _rational(lam)
    a = 1 + lam
    # 1 / denominator = (1/a) / (1 - (t B / a - t^2))
    Bt = {(1, 0): 1 / a, (-1, 0): 1 / a, (0, 1): lam / a, (0, -1): lam / a}
    g = [dict() for _ in range(D + 1)]
    if D >= 1:
        g[1] = Bt
    if D >= 2:
        g[2] = {(0, 0): Fraction(-1)}
    inv = _tseries_inverse_of_one_minus(g, D)
    inv = [{k: c / a for k, c in p.items()} for p in inv]
    if creation:
        num = [dict() for _ in range(D + 1)]
        if D >= 1:
            num[1] = {(0, 0): 1 + lam}
    else:
        # lam t / (1 - t/u) = lam * sum t^(k+1) u^-k
        num = [dict() for _ in range(D + 1)]
        for k in range(0, D):
            num[k + 1] = {(-k, 0): lam}
    out = []
    for n in range(D + 1):
        acc: dict = {}
        for j in range(n + 1):
            if num[j] and inv[n - j]:
                acc = _padd(acc, _pmul(num[j], inv[n - j]))
        out.append(acc)
    return out


def epgf_brute_coeffs(lam, D: int) -> list:
    """Same coefficients from exhaustive enumeration of tilings, ``n <= D``."""
    lam = _rational(lam)
    out = [dict()]
    for n in range(1, D + 1):
        out.append({k: v for k, v in _exact_west_table(n, lam).items() if v != 0})
    return out


def creation_brute_coeffs(lam, D: int) -> list:
    lam = _rational(lam)
    out = [dict()]
    for n in range(1, D + 1):
        row = {}
        for x, y in admissible_grid(n) + [(x, y) for x in range(-n - 1, n + 2) for y in range(-n, n + 1)]:
            c = creation_rate(x, y, n, lam)
            if c:
                row[(x, y)] = c
        out.append(row)
    return out


# ---------------------------------------------------------------------------
# arctic circle

FROZEN, LIQUID, BOUNDARY = "Frozen", "Liquid", "Boundary"


def arctic_discriminant(tau, chi):
    return (2 * tau - 1) ** 2 - 4 * (tau + chi) * (1 - chi - tau)


def arctic_classify(tau, chi, tol: float = 1e-12) -> str:
    d = arctic_discriminant(tau, chi)
    if abs(d) <= tol:
        return BOUNDARY
    return FROZEN if d > 0 else LIQUID


def to_uv(tau, chi) -> tuple:
    return 2 * tau + chi, chi


def circle_residual(u, v):
    return 2 * (u - 1) ** 2 + 2 * v ** 2 - 1


def boundary_sample(N: int) -> np.ndarray:
    """Zeros of the discriminant: for ``N`` values of ``tau`` solve for ``chi``.

    The discriminant is quadratic in ``chi``; its coefficients are read off
    from three evaluations and the real roots kept. Returns rows ``(tau, chi)``.
    """
    pts = []
    taus = np.linspace(0.0, 1.0, max(N // 2, 2))
    for tau in taus:
        d0 = arctic_discriminant(tau, 0.0)
        d1 = arctic_discriminant(tau, 1.0)
        dm = arctic_discriminant(tau, -1.0)
        a = (d1 + dm) / 2 - d0
        b = (d1 - dm) / 2
        for r in np.roots([a, b, d0]):
            if abs(r.imag) < 1e-14:
                pts.append((tau, r.real))
    return np.array(pts[:N]) if len(pts) >= N else np.array(pts)


def direction_field(tiling: Sequence, n: int) -> dict:
    """Cell ``->`` sliding direction of the domino covering it."""
    out = {}
    for d in tiling:
        v = shuffle_direction(d, n)
        for c in block_cells(d):
            out[c] = v
    return out


def frozen_cells(tiling: Sequence, n: int) -> set:
    """Cells joined to a corner of the diamond through cells of the corner's direction."""
    field = direction_field(tiling, n)
    corners = [(-n, -1), (-n, 0), (n - 1, -1), (n - 1, 0), (-1, -n), (0, -n), (-1, n - 1), (0, n - 1)]
    seen: set = set()
    for start in corners:
        if start in seen:
            continue
        v = field[start]
        stack = [start]
        seen.add(start)
        while stack:
            a, b = stack.pop()
            for c in ((a + 1, b), (a - 1, b), (a, b + 1), (a, b - 1)):
                if c not in seen and field.get(c) == v:
                    seen.add(c)
                    stack.append(c)
    return seen


def flippable_cells(tiling: Sequence) -> set:
    """Cells of the 2x2 squares covered by two parallel dominos."""
    ds = set(tiling)
    out = set()
    for a, b, horizontal in tiling:
        partner = (a, b + 1, True) if horizontal else (a + 1, b, False)
        if partner in ds:
            out.update((a + i, b + j) for i in (0, 1) for j in (0, 1))
    return out


def empirical_arctic(n: int, count: int, seed: int, lam=1.0, statistic: str = "flips",
                     threshold: float = 0.05, method: str = "shuffle") -> dict:
    """Classify cells of random tilings as frozen or liquid and compare with the circle.

    ``statistic="flips"`` calls a cell liquid when it lies in a flippable
    2x2 square in at least ``threshold`` of the samples.
    ``statistic="cluster"`` calls it frozen when, in at least half of the
    samples, it is joined to a corner through dominos sliding the same way
    as the corner one. The inscribed circle of radius ``n / sqrt(2)`` is
    the predicted boundary for ``lam = 1``; the report gives the largest
    distance from that circle of a cell classified on the wrong side.
    ``method="transfer"`` draws the samples with the transfer-matrix
    sampler instead of domino shuffling (small ``n`` only).
    """
    if method == "shuffle":
        tilings = [shuffle_sample(n, lam, seed=s)
                   for s in np.random.SeedSequence(seed).generate_state(count)]
    elif method == "transfer":
        from .sampler import build_backward, fitted_window, sample_batch

        spec = aztec_spec(n, _rational(lam))
        table = build_backward(spec, H=fitted_window(spec))
        tilings = [[to_block_domino(d) for d in tiling_dominos(c, n)
                    if all(_in_diamond(cell, n) for cell in domino_cells(d))]
                   for c in sample_batch(table, count, seed)]
    else:
        raise ValueError(f"unknown method {method!r}")
    cells = diamond_cells(n)
    hits = dict.fromkeys(cells, 0)
    for t in tilings:
        if statistic == "flips":
            marked = flippable_cells(t)
        elif statistic == "cluster":
            marked = frozen_cells(t, n)
        else:
            raise ValueError(f"unknown statistic {statistic!r}")
        for c in marked:
            hits[c] += 1
    R = n / math.sqrt(2)
    worst = 0.0
    wrong = 0
    liquid_count = 0
    for c in cells:
        if statistic == "flips":
            liquid = hits[c] >= threshold * count
        else:
            liquid = 2 * hits[c] < count
        liquid_count += liquid
        r = math.hypot(c[0] + 0.5, c[1] + 0.5)
        if liquid != (r < R):
            wrong += 1
            worst = max(worst, abs(r - R))
    return {"n": n, "samples": count, "method": method, "statistic": statistic,
            "cells": len(cells), "liquid_cells": liquid_count, "misplaced_cells": wrong,
            "max_distance": worst, "max_distance_over_n": worst / n,
            "passes": worst <= 0.05 * n}
