"""Rail yard graphs, pure dimer coverings on finite windows, and flips.

Geometry
--------
Column ``i`` (``l <= i <= r``) holds the even vertices ``(2i, y)``. Each of
them is joined horizontally to ``(2i-1, y)`` and ``(2i+1, y)`` and by one
diagonal edge whose direction depends on the column type::

    L+ -> (2i-1, y+1)    L- -> (2i-1, y-1)
    R+ -> (2i+1, y+1)    R- -> (2i+1, y-1)

In a pure covering every inner vertex is matched, the left boundary
vertices ``(2l-1, y)`` are matched exactly when ``y > 0`` and the right
boundary vertices ``(2r+1, y)`` exactly when ``y < 0``.

A :class:`Covering` stores its edges inside the window ``|y| < H`` and agrees
with the fundamental covering (no diagonal dimers) everywhere else.

Enumeration goes row by row: the state between rows ``y`` and ``y+1``
records which odd vertices of row ``y+1`` already received an upward
diagonal and which odd vertices of row ``y`` still wait for a downward one.
This is independent of the partition/transfer-matrix picture and serves as
the brute-force oracle.
"""

from __future__ import annotations

import json
from collections import deque
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Iterable, NamedTuple, Sequence

from .combinatorics import (
    HALF,
    MayaDiagram,
    charged_from_maya,
    maya_from_charged,
)
from .series import TruncatedSeries


def _parse_weight(w):
    if w is None:
        return None
    if isinstance(w, (int, Fraction)):
        return Fraction(w)
    if isinstance(w, float):
        return w
    return Fraction(str(w))


_SIGN_CHARS = {"+": 1, "-": -1, "−": -1}


@dataclass(frozen=True)
class RygSpec:
    """Model definition: columns ``l..r`` with letters, signs and weights."""

    l: int
    r: int
    lr: str
    signs: str
    weights: tuple | None = None

    def __post_init__(self):
        if self.l > self.r:
            raise ValueError(f"l={self.l} > r={self.r}")
        n = self.r - self.l + 1
        if len(self.lr) != n or len(self.signs) != n:
            raise ValueError(f"lr/signs must have length {n}")
        if any(a not in "LR" for a in self.lr):
            raise ValueError(f"bad LR sequence {self.lr!r}")
        if any(b not in _SIGN_CHARS for b in self.signs):
            raise ValueError(f"bad sign sequence {self.signs!r}")
        if self.weights is not None:
            if len(self.weights) != n:
                raise ValueError(f"weights must have length {n}")
            if any(w is not None and w <= 0 for w in self.weights):
                raise ValueError("numeric weights must be positive")

    # column accessors ---------------------------------------------------
    @property
    def columns(self) -> range:
        return range(self.l, self.r + 1)

    def letter(self, i: int) -> str:
        return self.lr[i - self.l]

    def sign(self, i: int) -> int:
        return _SIGN_CHARS[self.signs[i - self.l]]

    def kind(self, i: int) -> str:
        return self.letter(i) + ("+" if self.sign(i) > 0 else "-")

    def weight(self, i: int):
        if self.weights is None:
            raise ValueError("spec has symbolic weights")
        return self.weights[i - self.l]

    @property
    def numeric(self) -> bool:
        return self.weights is not None and all(w is not None for w in self.weights)

    def with_weights(self, weights: Sequence) -> "RygSpec":
        return RygSpec(self.l, self.r, self.lr, self.signs,
                       tuple(_parse_weight(w) for w in weights))

    def symbolic(self) -> "RygSpec":
        return RygSpec(self.l, self.r, self.lr, self.signs, None)

    # geometry -----------------------------------------------------------
    @property
    def xmin(self) -> int:
        return 2 * self.l - 1

    @property
    def xmax(self) -> int:
        return 2 * self.r + 1

    def diag_target_x(self, i: int) -> int:
        return 2 * i - 1 if self.letter(i) == "L" else 2 * i + 1

    def odd_present(self, ox: int, y) -> bool:
        """Whether odd vertex ``(ox, y)`` is matched in a pure covering."""
        if ox == self.xmin:
            return y > 0
        if ox == self.xmax:
            return y < 0
        return self.xmin < ox < self.xmax

    # serialization ------------------------------------------------------
    def to_json(self) -> dict:
        d = {"l": self.l, "r": self.r, "lr": self.lr, "signs": self.signs}
        if self.weights is not None:
            d["weights"] = [str(w) for w in self.weights]
        return d

    @classmethod
    def from_json(cls, obj) -> "RygSpec":
        if isinstance(obj, str):
            obj = json.loads(obj)
        weights = obj.get("weights")
        return build(obj["l"], obj["r"], obj["lr"], obj["signs"], weights)

    def digest(self) -> str:
        import hashlib
        text = json.dumps(self.to_json(), sort_keys=True)
        return hashlib.sha256(text.encode()).hexdigest()[:16]


def build(l: int, r: int, lr: str, signs: str, weights: Sequence | None = None) -> RygSpec:
    """Validated :class:`RygSpec`; ``weights`` may be numbers or rational strings."""
    signs = signs.replace("−", "-")
    w = None if weights is None else tuple(_parse_weight(x) for x in weights)
    return RygSpec(int(l), int(r), str(lr), signs, w)


class Vertex(NamedTuple):
    x: int
    y: Fraction

    @property
    def is_even(self) -> bool:
        return self.x % 2 == 0

    def to_json(self) -> list:
        return [self.x, str(self.y)]


def vertex(x: int, y) -> Vertex:
    y = Fraction(y)
    if y.denominator != 2:
        raise ValueError(f"ordinate {y} not in Z+1/2")
    return Vertex(int(x), y)


class Edge(NamedTuple):
    even: Vertex
    odd: Vertex

    @property
    def kind(self) -> str:
        return "horizontal" if self.even.y == self.odd.y else "diagonal"

    @property
    def column(self) -> int:
        return self.even.x // 2

    def to_json(self) -> list:
        return [self.even.x, str(self.even.y), self.odd.x, str(self.odd.y)]

    @classmethod
    def from_json(cls, q) -> "Edge":
        return cls(vertex(q[0], Fraction(str(q[1]))), vertex(q[2], Fraction(str(q[3]))))


def make_edge(u: Vertex, v: Vertex) -> Edge:
    return Edge(u, v) if u.x % 2 == 0 else Edge(v, u)


def diagonal_neighbor(spec: RygSpec, v: Vertex) -> Vertex:
    if v.x % 2:
        raise ValueError(f"{v} is not an even vertex")
    i = v.x // 2
    if not spec.l <= i <= spec.r:
        raise ValueError(f"{v} outside columns {spec.l}..{spec.r}")
    return Vertex(spec.diag_target_x(i), v.y + spec.sign(i))


def even_neighbors(spec: RygSpec, v: Vertex) -> list:
    """Odd neighbours of an even vertex: left, right, diagonal."""
    return [Vertex(v.x - 1, v.y), Vertex(v.x + 1, v.y), diagonal_neighbor(spec, v)]


def odd_neighbors(spec: RygSpec, v: Vertex) -> list:
    out = []
    if v.x - 1 >= 2 * spec.l:
        out.append(Vertex(v.x - 1, v.y))
    if v.x + 1 <= 2 * spec.r:
        out.append(Vertex(v.x + 1, v.y))
    for i in ((v.x + 1) // 2, (v.x - 1) // 2):
        if spec.l <= i <= spec.r and spec.diag_target_x(i) == v.x:
            out.append(Vertex(2 * i, v.y - spec.sign(i)))
    return out


def is_edge(spec: RygSpec, e: Edge) -> bool:
    i = e.even.x // 2
    if e.even.x % 2 or not spec.l <= i <= spec.r:
        return False
    return e.odd in even_neighbors(spec, e.even)


def matched_odd(spec: RygSpec, v: Vertex) -> bool:
    """Membership in the set of odd vertices matched by every pure covering."""
    return v.x % 2 == 1 and spec.odd_present(v.x, v.y)


# ---------------------------------------------------------------------------
# coverings


@dataclass(frozen=True)
class Covering:
    spec: RygSpec
    H: int
    edges: frozenset

    def __post_init__(self):
        if self.H < 1:
            raise ValueError("window half-height must be positive")

    @property
    def diagonals(self) -> list:
        return sorted(e for e in self.edges if e.kind == "diagonal")

    def degrees(self) -> dict:
        """Number of diagonal dimers per column."""
        d: dict = {}
        for e in self.edges:
            if e.kind == "diagonal":
                d[e.column] = d.get(e.column, 0) + 1
        return d

    @property
    def degree(self) -> int:
        return sum(self.degrees().values())

    def monomial(self) -> tuple:
        return tuple(sorted(self.degrees().items()))

    def to_json(self) -> list:
        return [e.to_json() for e in sorted(self.edges)]

    def contains(self, edges: Iterable[Edge]) -> bool:
        return all(self.has_edge(e) for e in edges)

    def has_edge(self, e: Edge) -> bool:
        if abs(e.even.y) < self.H:
            return e in self.edges
        return e == _fundamental_edge(e.even)

    def mate(self) -> dict:
        m = {}
        for e in self.edges:
            m[e.even] = e.odd
            m[e.odd] = e.even
        return m


def _fundamental_edge(v: Vertex) -> Edge:
    return Edge(v, Vertex(v.x - 1 if v.y > 0 else v.x + 1, v.y))


def window_rows(H: int) -> list:
    return [Fraction(2 * j + 1, 2) for j in range(-H, H)]


def fundamental_covering(spec: RygSpec, H: int) -> Covering:
    edges = frozenset(_fundamental_edge(Vertex(2 * i, y)) for y in window_rows(H) for i in spec.columns)
    return Covering(spec, H, edges)


def weight_monomial(c: Covering) -> TruncatedSeries:
    return TruncatedSeries({c.monomial(): Fraction(1)})


def check_covering(c: Covering) -> None:
    """Raise unless every vertex of the window is matched exactly as required."""
    spec = c.spec
    seen: dict = {}
    for e in c.edges:
        if not is_edge(spec, e):
            raise ValueError(f"{e} is not an edge")
        for v in e:
            if abs(v.y) >= c.H:
                raise ValueError(f"{e} leaves the window")
            if v in seen:
                raise ValueError(f"{v} covered twice")
            seen[v] = e
    for y in window_rows(c.H):
        for i in spec.columns:
            if Vertex(2 * i, y) not in seen:
                raise ValueError(f"even vertex {(2 * i, y)} uncovered")
        for ox in range(spec.xmin, spec.xmax + 1, 2):
            present = spec.odd_present(ox, y)
            if present != (Vertex(ox, y) in seen):
                raise ValueError(f"odd vertex {(ox, y)} has wrong coverage")


def boundary_states(c: Covering) -> tuple:
    """Left and right boundary Maya diagrams (vacuum for pure coverings)."""
    spec = c.spec
    covered = {v for e in c.edges for v in e}
    left, right = {}, {}
    for y in window_rows(c.H):
        left[y] = Vertex(spec.xmin, y) not in covered    # white iff covered
        right[y] = Vertex(spec.xmax, y) in covered        # black iff covered
    return MayaDiagram.from_colors(left), MayaDiagram.from_colors(right)


def covering_to_sequence(c: Covering) -> list:
    """Maya diagrams on the odd columns ``2i-1``, ``i = l..r+1``.

    Site ``k`` is white when ``(2i-1, k)`` is matched into column ``i``
    (rightwards) and black when matched from column ``i-1``; unmatched
    boundary vertices take the colour of the missing side.
    """
    spec = c.spec
    mate = c.mate()
    seq = []
    for i in range(spec.l, spec.r + 2):
        ox = 2 * i - 1
        colors = {}
        for y in window_rows(c.H):
            v = Vertex(ox, y)
            if v in mate:
                colors[y] = mate[v].x != 2 * i
            else:
                colors[y] = ox == spec.xmin
        seq.append(MayaDiagram.from_colors(colors))
    return seq


def covering_partitions(c: Covering) -> list:
    return [charged_from_maya(m) for m in covering_to_sequence(c)]


def sequence_to_covering(spec: RygSpec, seq: Sequence, H: int) -> Covering:
    """Inverse of :func:`covering_to_sequence`.

    ``seq`` may hold Maya diagrams or charged partitions. Raises ``ValueError``
    when consecutive states are not compatible with the column type.
    """
    mayas = [m if isinstance(m, MayaDiagram) else maya_from_charged(m) for m in seq]
    if len(mayas) != spec.r - spec.l + 2:
        raise ValueError("sequence length must be r-l+2")
    for m in mayas:
        if m.support_bound() >= H:
            raise ValueError("state deviates from vacuum outside the window")
    rows = window_rows(H)
    edges = set()
    for i in spec.columns:
        left, right = mayas[i - spec.l], mayas[i - spec.l + 1]
        s = spec.sign(i)
        if spec.letter(i) == "L":
            evens = [y for y in rows if not right.color(y)]
            for y in rows:
                if right.color(y):
                    edges.add(Edge(Vertex(2 * i, y), Vertex(2 * i + 1, y)))
            targets = [y for y in rows if not left.color(y)]
            ox = 2 * i - 1
        else:
            evens = [y for y in rows if left.color(y)]
            for y in rows:
                if not left.color(y):
                    edges.add(Edge(Vertex(2 * i, y), Vertex(2 * i - 1, y)))
            targets = [y for y in rows if right.color(y)]
            ox = 2 * i + 1
        if len(evens) != len(targets):
            raise ValueError(f"column {i}: states do not interlace")
        for ye, yt in zip(evens, targets):
            if yt not in (ye, ye + s):
                raise ValueError(f"column {i}: states do not interlace")
            edges.add(Edge(Vertex(2 * i, ye), Vertex(ox, yt)))
    return Covering(spec, H, frozenset(edges))


# ---------------------------------------------------------------------------
# row transfer: the brute-force engine

_LEFT, _RIGHT, _DIAG = "L", "R", "D"


class RowTransfer:
    """Row-by-row enumeration of pure coverings inside ``|y| < H``.

    Rows are processed bottom to top. A state ``(up, pend)`` lists odd
    abscissas in the next row already hit by upward diagonals, and odd
    abscissas of the current row left for downward diagonals of the next.
    """

    def __init__(self, spec: RygSpec, H: int):
        self.spec = spec
        self.H = H
        self.rows = window_rows(H)
        self._cache: dict = {}
        cols = list(spec.columns)
        self._cols = cols
        self._down_reach = {spec.diag_target_x(i) for i in cols if spec.sign(i) < 0}
        self._reach = None

    def _present(self, ox: int, ty: int) -> bool:
        s = self.spec
        if ox == s.xmin:
            return ty > 0
        if ox == s.xmax:
            return ty < 0
        return True

    def transitions(self, y: Fraction, state: tuple, forced: dict | None = None) -> list:
        """Legal fillings of row ``y`` from ``state``.

        Returns a list of ``(new_state, choices)`` where ``choices`` is a
        tuple with one of ``"L"``, ``"R"``, ``"D"`` per column. ``forced``
        maps a column to the choice it must take in this row.
        """
        ty = int(2 * y)
        key = ((ty - 2 > 0, ty > 0, ty + 2 > 0), state,
               tuple(sorted(forced.items())) if forced else ())
        hit = self._cache.get(key)
        if hit is not None:
            return hit
        spec = self.spec
        up, pend = state
        cols = self._cols
        out = []
        used: set = set()
        ups: list = []
        downs: set = set()
        choices: list = []

        def rec(idx):
            if idx == len(cols):
                if downs != pend:
                    return
                new_pend = []
                for ox in range(spec.xmin, spec.xmax + 1, 2):
                    if not self._present(ox, ty) or ox in up or ox in used:
                        continue
                    if ox not in self._down_reach:
                        return
                    new_pend.append(ox)
                out.append(((frozenset(ups), frozenset(new_pend)), tuple(choices)))
                return
            i = cols[idx]
            opts = (forced[i],) if forced and i in forced else (_LEFT, _RIGHT, _DIAG)
            for ch in opts:
                if ch == _DIAG:
                    ox = spec.diag_target_x(i)
                    if spec.sign(i) > 0:
                        if not self._present(ox, ty + 2) or ox in ups:
                            continue
                        ups.append(ox)
                        choices.append(ch)
                        rec(idx + 1)
                        choices.pop()
                        ups.pop()
                    else:
                        if ox not in pend or ox in downs:
                            continue
                        downs.add(ox)
                        choices.append(ch)
                        rec(idx + 1)
                        choices.pop()
                        downs.discard(ox)
                else:
                    ox = 2 * i - 1 if ch == _LEFT else 2 * i + 1
                    if not self._present(ox, ty) or ox in up or ox in used:
                        continue
                    used.add(ox)
                    choices.append(ch)
                    rec(idx + 1)
                    choices.pop()
                    used.discard(ox)

        rec(0)
        self._cache[key] = out
        return out

    EMPTY_STATE = (frozenset(), frozenset())

    def reachable_to_end(self) -> list:
        """``sets[j]``: states before row ``j`` from which the top can be reached."""
        if self._reach is None:
            sets = [set() for _ in range(len(self.rows) + 1)]
            sets[-1] = {self.EMPTY_STATE}
            forward = self.forward_states()
            for j in range(len(self.rows) - 1, -1, -1):
                for st in forward[j]:
                    if any(ns in sets[j + 1] for ns, _ in self.transitions(self.rows[j], st)):
                        sets[j].add(st)
            self._reach = sets
        return self._reach

    def forward_states(self) -> list:
        sets = [set() for _ in range(len(self.rows) + 1)]
        sets[0] = {self.EMPTY_STATE}
        for j, y in enumerate(self.rows):
            for st in sets[j]:
                for ns, _ in self.transitions(y, st):
                    sets[j + 1].add(ns)
        return sets

    def total(self, column_weight: Callable, one, forced_rows: dict | None = None):
        """Sum of covering weights; ``column_weight(i)`` gives the factor of a diagonal in column ``i``."""
        zero = one * 0
        dp = {self.EMPTY_STATE: one}
        wcache: dict = {}
        for j, y in enumerate(self.rows):
            forced = forced_rows.get(y) if forced_rows else None
            nxt: dict = {}
            for st, val in dp.items():
                for ns, ch in self.transitions(y, st, forced):
                    w = wcache.get(ch)
                    if w is None:
                        w = one
                        for i, c in zip(self._cols, ch):
                            if c == _DIAG:
                                w = w * column_weight(i)
                        wcache[ch] = w
                    nxt[ns] = nxt.get(ns, zero) + val * w
            dp = nxt
        return dp.get(self.EMPTY_STATE, zero)

    def enumerate(self, max_degree: int | None = None, forced_rows: dict | None = None) -> list:
        """All coverings (as choice tuples per row) with at most ``max_degree`` diagonals."""
        reach = self.reachable_to_end()
        results = []
        path = []

        def rec(j, st, deg):
            if j == len(self.rows):
                if st == self.EMPTY_STATE:
                    results.append(tuple(path))
                return
            y = self.rows[j]
            forced = forced_rows.get(y) if forced_rows else None
            for ns, ch in self.transitions(y, st, forced):
                if ns not in reach[j + 1]:
                    continue
                d = deg + ch.count(_DIAG)
                if max_degree is not None and d > max_degree:
                    continue
                path.append(ch)
                rec(j + 1, ns, d)
                path.pop()

        rec(0, self.EMPTY_STATE, 0)
        return results

    def covering_from_choices(self, rows_choices: Sequence) -> Covering:
        spec = self.spec
        edges = set()
        for y, ch in zip(self.rows, rows_choices):
            for i, c in zip(self._cols, ch):
                v = Vertex(2 * i, y)
                if c == _LEFT:
                    edges.add(Edge(v, Vertex(2 * i - 1, y)))
                elif c == _RIGHT:
                    edges.add(Edge(v, Vertex(2 * i + 1, y)))
                else:
                    edges.add(Edge(v, diagonal_neighbor(spec, v)))
        return Covering(spec, self.H, frozenset(edges))


def edge_choice(spec: RygSpec, e: Edge) -> tuple:
    """``(row, column, choice)`` describing edge ``e`` from its even end."""
    if not is_edge(spec, e):
        raise ValueError(f"{e} is not an edge of the graph")
    i = e.even.x // 2
    if e.kind == "diagonal":
        ch = _DIAG
    else:
        ch = _LEFT if e.odd.x < e.even.x else _RIGHT
    return e.even.y, i, ch


def forced_rows_for(spec: RygSpec, edges: Iterable[Edge]) -> dict | None:
    """Row constraints forcing ``edges``; ``None`` if two edges share an even vertex."""
    rows: dict = {}
    for e in edges:
        y, i, ch = edge_choice(spec, e)
        row = rows.setdefault(y, {})
        if row.get(i, ch) != ch:
            return None
        row[i] = ch
    return rows


def enumerate_coverings(spec: RygSpec, H: int, max_degree: int | None = None,
                        containing: Iterable[Edge] = ()) -> list:
    """Explicit list of pure coverings that are fundamental outside ``|y| < H``."""
    rt = RowTransfer(spec, H)
    forced = forced_rows_for(spec, containing)
    if forced is None:
        return []
    for y in forced:
        if abs(y) >= H:
            raise ValueError("constrained edge outside the window")
    return [rt.covering_from_choices(p) for p in rt.enumerate(max_degree, forced)]


# ---------------------------------------------------------------------------
# faces and flips


class Face(NamedTuple):
    """Inner face between the diagonals of columns ``i`` and ``i+1`` in band ``[y, y+1]``."""

    i: int
    y: Fraction


def _diag_ends(spec: RygSpec, i: int, y) -> tuple:
    """Bottom and top endpoints of column ``i``'s diagonal in band ``[y, y+1]``."""
    kind = spec.kind(i)
    if kind == "L+":
        return Vertex(2 * i, y), Vertex(2 * i - 1, y + 1)
    if kind == "L-":
        return Vertex(2 * i - 1, y), Vertex(2 * i, y + 1)
    if kind == "R+":
        return Vertex(2 * i, y), Vertex(2 * i + 1, y + 1)
    return Vertex(2 * i + 1, y), Vertex(2 * i, y + 1)


def face_vertices(spec: RygSpec, f: Face) -> list:
    """Boundary vertices in counterclockwise order, starting bottom-left."""
    b0, t0 = _diag_ends(spec, f.i, f.y)
    b1, t1 = _diag_ends(spec, f.i + 1, f.y)
    bottom = [Vertex(x, f.y) for x in range(b0.x, b1.x + 1)]
    top = [Vertex(x, f.y + 1) for x in range(t1.x, t0.x - 1, -1)]
    return bottom + top


def face_edges(spec: RygSpec, f: Face) -> list:
    """Boundary edges, each as an ordered pair following the counterclockwise walk."""
    vs = face_vertices(spec, f)
    return [(vs[k], vs[(k + 1) % len(vs)]) for k in range(len(vs))]


def face_degree(spec: RygSpec, f: Face) -> int:
    return len(face_vertices(spec, f))


def window_faces(spec: RygSpec, H: int) -> list:
    rows = window_rows(H)
    return [Face(i, y) for y in rows[:-1] for i in range(spec.l, spec.r)]


def _face_status(c: Covering, f: Face):
    walk = face_edges(c.spec, f)
    covered = [make_edge(u, v) in c.edges for u, v in walk]
    return walk, covered


def flippable_faces(c: Covering) -> list:
    """``(face, sign)`` for every window face with exactly half its edges covered.

    The sign is ``+1`` when, after the flip, the covered edges point from odd
    to even vertices along the counterclockwise walk.
    """
    out = []
    for f in window_faces(c.spec, c.H):
        walk, covered = _face_status(c, f)
        if 2 * sum(covered) != len(walk):
            continue
        after = [uv for uv, cv in zip(walk, covered) if not cv]
        sign = 1 if all(u.x % 2 == 1 for u, _ in after) else -1
        out.append((f, sign))
    return out


def apply_flip(c: Covering, f: Face) -> Covering:
    walk, covered = _face_status(c, f)
    if 2 * sum(covered) != len(walk):
        raise ValueError(f"{f} is not flippable")
    edges = set(c.edges)
    for (u, v), cv in zip(walk, covered):
        e = make_edge(u, v)
        if cv:
            edges.discard(e)
        else:
            edges.add(e)
    return Covering(c.spec, c.H, frozenset(edges))


def flip_bfs(spec: RygSpec, H: int, max_nodes: int | None = None) -> dict:
    """Breadth-first search over positive flips from the fundamental covering.

    Returns ``{covering: distance}``.
    """
    start = fundamental_covering(spec, H)
    dist = {start: 0}
    queue = deque([start])
    while queue:
        c = queue.popleft()
        for f, sign in flippable_faces(c):
            if sign < 0:
                continue
            n = apply_flip(c, f)
            if n not in dist:
                dist[n] = dist[c] + 1
                queue.append(n)
                if max_nodes is not None and len(dist) > max_nodes:
                    raise RuntimeError("flip BFS exceeded node budget")
    return dist


def q_exponents(spec: RygSpec) -> dict:
    """Exponents of ``q`` in the flip specialization ``x_i = q^{-b_i i}``."""
    return {i: (i if spec.sign(i) < 0 else -i) for i in spec.columns}


def q_weight(c: Covering) -> int:
    """Exponent of ``q`` in the specialized weight of ``c``."""
    qe = q_exponents(c.spec)
    return sum(qe[i] * d for i, d in c.degrees().items())


def covering_from_json(spec: RygSpec, H: int, data) -> Covering:
    return Covering(spec, H, frozenset(Edge.from_json(q) for q in data))
