"""Kasteleyn signs, windowed Kasteleyn matrices and the inverse identities.

Rows of ``K`` are odd vertices, columns even vertices, and the entry of an
edge is ``eta(e) * weight(e)`` with weight ``x_i`` for diagonals of column
``i`` and ``1`` for horizontal edges. ``eta`` is ``-1`` exactly on
horizontal edges whose right end is even.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Iterable, Sequence

import numpy as np

from .graph import (
    Edge,
    Face,
    RygSpec,
    Vertex,
    even_neighbors,
    face_edges,
    is_edge,
    make_edge,
    matched_odd,
    odd_neighbors,
    window_faces,
    window_rows,
)
from .kernel import KernelContext, kernel_matrix


def eta(spec: RygSpec, e: Edge) -> int:
    if not is_edge(spec, e):
        raise ValueError(f"{e} is not an edge")
    if e.kind == "horizontal" and e.even.x > e.odd.x:
        return -1
    return 1


def edge_weight(spec: RygSpec, e: Edge):
    return spec.weight(e.column) if e.kind == "diagonal" else 1


def kasteleyn_entry(spec: RygSpec, odd: Vertex, even: Vertex):
    e = Edge(even, odd)
    if not is_edge(spec, e):
        return 0
    return eta(spec, e) * edge_weight(spec, e)


def face_sign(spec: RygSpec, f: Face) -> int:
    prod = 1
    for u, v in face_edges(spec, f):
        prod *= eta(spec, make_edge(u, v))
    return prod


def verify_orientation(spec: RygSpec, f: Face) -> bool:
    """Face product is ``+1`` for degree 2 mod 4 and ``-1`` for degree 0 mod 4."""
    deg = len(face_edges(spec, f))
    return face_sign(spec, f) == (1 if deg % 4 == 2 else -1)


def verify_all_orientations(spec: RygSpec, H: int) -> dict:
    faces = window_faces(spec, H)
    bad = [f for f in faces if not verify_orientation(spec, f)]
    degrees = sorted({len(face_edges(spec, f)) for f in faces})
    return {"faces": len(faces), "failures": len(bad), "degrees": degrees}


class KasteleynWindow:
    """Finite Kasteleyn matrix on the rows ``|y| < H``.

    Odd rows are restricted to matched vertices; edges leaving the window
    are dropped, so perfect matchings of this finite graph are exactly the
    pure coverings confined to the window.
    """

    def __init__(self, spec: RygSpec, H: int, exact: bool = False):
        self.spec = spec
        self.H = H
        rows = window_rows(H)
        self.evens = [Vertex(2 * i, y) for y in rows for i in spec.columns]
        self.odds = [Vertex(x, y) for y in rows for x in range(spec.xmin, spec.xmax + 1, 2)
                     if matched_odd(spec, Vertex(x, y))]
        self.even_index = {v: j for j, v in enumerate(self.evens)}
        self.odd_index = {v: j for j, v in enumerate(self.odds)}
        self.exact = exact
        n, m = len(self.odds), len(self.evens)
        if exact:
            self.K = [[Fraction(0)] * m for _ in range(n)]
        else:
            self.K = np.zeros((n, m))
        for a in self.evens:
            for b in even_neighbors(spec, a):
                if b in self.odd_index:
                    val = kasteleyn_entry(spec, b, a)
                    if exact:
                        self.K[self.odd_index[b]][self.even_index[a]] = Fraction(val)
                    else:
                        self.K[self.odd_index[b], self.even_index[a]] = float(val)

    def inverse(self):
        if self.exact:
            return _fraction_inverse(self.K)
        return np.linalg.inv(self.K)

    def condition(self) -> float:
        K = np.array(self.K, dtype=float)
        return float(np.linalg.cond(K))


def _fraction_inverse(M: list) -> list:
    """Gauss-Jordan inverse over the rationals."""
    n = len(M)
    if any(len(r) != n for r in M):
        raise ValueError("matrix is not square")
    A = [list(r) + [Fraction(int(i == j)) for j in range(n)] for i, r in enumerate(M)]
    for c in range(n):
        p = next((r for r in range(c, n) if A[r][c] != 0), None)
        if p is None:
            raise ZeroDivisionError("singular matrix")
        A[c], A[p] = A[p], A[c]
        inv = 1 / A[c][c]
        A[c] = [v * inv for v in A[c]]
        for r in range(n):
            if r != c and A[r][c] != 0:
                f = A[r][c]
                A[r] = [v - f * w for v, w in zip(A[r], A[c])]
    return [row[n:] for row in A]


def _det(M):
    if isinstance(M, np.ndarray):
        return float(np.linalg.det(M))
    # exact elimination
    A = [list(r) for r in M]
    n = len(A)
    det = Fraction(1)
    for c in range(n):
        p = next((r for r in range(c, n) if A[r][c] != 0), None)
        if p is None:
            return Fraction(0)
        if p != c:
            A[c], A[p] = A[p], A[c]
            det = -det
        det *= A[c][c]
        for r in range(c + 1, n):
            f = A[r][c] / A[c][c]
            if f:
                A[r] = [v - f * w for v, w in zip(A[r], A[c])]
    return det


def kenyon_check(spec: RygSpec, H: int, edges: Sequence[Edge], exact: bool = False):
    """Edge-set probability on the finite window graph from ``K^{-1}``."""
    kw = KasteleynWindow(spec, H, exact)
    if len(kw.odds) != len(kw.evens):
        raise ValueError("window graph is unbalanced; no perfect matching")
    Kinv = kw.inverse()
    prod = Fraction(1) if exact else 1.0
    for e in edges:
        if e.odd not in kw.odd_index or e.even not in kw.even_index:
            raise ValueError(f"{e} is outside the window graph")
        prod *= kw.K[kw.odd_index[e.odd]][kw.even_index[e.even]]
    sub = [[Kinv[kw.even_index[ei.even]][kw.odd_index[ej.odd]] for ej in edges] for ei in edges]
    if not exact:
        sub = np.array(sub, dtype=float).reshape(len(edges), len(edges))
    return prod * _det(sub) if edges else prod


def verify_inverse(ctx: KernelContext, Y: int, columns: Iterable[int] | None = None,
                   method: str = "numeric") -> dict:
    """Check ``C K = 1`` on even vertices and ``K C = 1`` on matched odd vertices.

    Rows ``|y| <= Y - 1/2`` of the given columns are tested against each
    other. Every vertex needed by a tested row is evaluated with the
    infinite-graph kernel, so no window truncation enters ``C``.
    """
    spec = ctx.spec
    cols = list(spec.columns) if columns is None else list(columns)
    rows = window_rows(Y)
    evens = [Vertex(2 * i, y) for y in rows for i in cols]
    odd_x = sorted({x for i in cols for x in (2 * i - 1, 2 * i + 1)})
    odds_m = [Vertex(x, y) for y in rows for x in odd_x if matched_odd(spec, Vertex(x, y))]

    # kernel entries needed: C(alpha', beta) for beta ~ alpha, and C(alpha, beta') for alpha ~ beta
    nb_odd = {a: even_neighbors(spec, a) for a in evens}
    nb_even = {b: odd_neighbors(spec, b) for b in odds_m}
    all_odds = sorted(set(odds_m) | {b for bs in nb_odd.values() for b in bs})
    all_evens = sorted(set(evens) | {a for as_ in nb_even.values() for a in as_})
    C, qerr = kernel_matrix(ctx, all_evens, all_odds, method)
    ei = {v: j for j, v in enumerate(all_evens)}
    oi = {v: j for j, v in enumerate(all_odds)}

    ck_err = 0.0
    ck_err_m = 0.0
    for a2 in evens:
        for a in evens:
            s_all = 0.0
            s_m = 0.0
            for b in nb_odd[a]:
                term = C[ei[a2], oi[b]] * float(kasteleyn_entry(spec, b, a))
                s_all += term
                if matched_odd(spec, b):
                    s_m += term
            target = 1.0 if a == a2 else 0.0
            ck_err = max(ck_err, abs(s_all - target))
            ck_err_m = max(ck_err_m, abs(s_m - target))
    kc_err = 0.0
    for b in odds_m:
        for b2 in odds_m:
            s = sum(float(kasteleyn_entry(spec, b, a)) * C[ei[a], oi[b2]] for a in nb_even[b])
            kc_err = max(kc_err, abs(s - (1.0 if b == b2 else 0.0)))
    unmatched = [b for b in all_odds if not matched_odd(spec, b)]
    off = max((abs(C[ei[a], oi[b]]) for a in all_evens for b in unmatched), default=0.0)
    sub = C[np.ix_([ei[a] for a in evens], [oi[b] for b in odds_m])]
    return {
        "ck_max_error": ck_err,
        "ck_matched_only_max_error": ck_err_m,
        "kc_max_error": kc_err,
        "unmatched_column_max": off,
        "quadrature_error": qerr,
        "rows_even": len(evens),
        "rows_odd": len(odds_m),
        "condition_estimate": float(np.linalg.cond(sub)) if sub.size and sub.shape[0] == sub.shape[1] else None,
    }


def max_error(report: dict) -> float:
    return max(report["ck_max_error"], report["kc_max_error"])
