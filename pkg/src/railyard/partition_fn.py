"""Partition functions by hook product, transfer matrices and brute force.

All three exact routes return :class:`TruncatedSeries` in the column
weights, truncated at total degree ``D``. :class:`NumericOracle` evaluates
constrained sums for positive numeric weights on a tall window, which is
what the correlation-kernel checks compare against.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Iterable, NamedTuple

from . import fock
from .graph import RowTransfer, RygSpec, build, forced_rows_for, window_rows
from .series import QPower, TruncatedSeries, expand_factor, specialize


class HookBox(NamedTuple):
    """Pair ``i < j`` with ``b_i = +`` and ``b_j = -``; ``hook = j - i``."""

    i: int
    j: int
    same_letter: bool

    @property
    def hook(self) -> int:
        return self.j - self.i


def hook_boxes(spec: RygSpec) -> list:
    cols = list(spec.columns)
    return [HookBox(i, j, spec.letter(i) == spec.letter(j))
            for i in cols for j in cols
            if i < j and spec.sign(i) > 0 and spec.sign(j) < 0]


def z_product(spec: RygSpec, D: int) -> TruncatedSeries:
    """Product over hook boxes of ``(1 - x_i x_j)^-1`` (same letter) or ``1 + x_i x_j``."""
    z = TruncatedSeries.one(D)
    for box in hook_boxes(spec):
        if box.same_letter:
            z = z * expand_factor(-1, box.i, box.j, True, D)
        else:
            z = z * expand_factor(1, box.i, box.j, False, D)
    return z


def z_hook_q(spec: RygSpec, D: int) -> TruncatedSeries:
    """Hook-length product in ``q``, truncated at ``q``-degree ``D``."""
    q = TruncatedSeries.var("q", D)
    z = TruncatedSeries.one(D)
    for box in hook_boxes(spec):
        qh = q ** box.hook
        z = z * ((1 - qh).inverse() if box.same_letter else 1 + qh)
    return z


def q_assignment(spec: RygSpec) -> dict:
    """``x_i -> q^i`` for ``b_i = -`` and ``q^-i`` for ``b_i = +``."""
    return {i: QPower(i if spec.sign(i) < 0 else -i) for i in spec.columns}


def q_specialize(series: TruncatedSeries, spec: RygSpec, D: int) -> TruncatedSeries:
    """Flip specialization of an ``x``-series, truncated at ``q``-degree ``D``.

    Each hook box contributes at least ``q^1`` per two units of ``x``-degree,
    so the input should be truncated at ``x``-degree ``2D`` or more.
    """
    out = specialize(series, q_assignment(spec), q_cap=D)
    if not isinstance(out, TruncatedSeries):
        out = TruncatedSeries.const(out, D)
    return out


def z_transfer(spec: RygSpec, D: int) -> TruncatedSeries:
    """Vacuum-to-vacuum product of vertex operators."""
    return fock.transfer_product(spec.symbolic(), None, None, D)


def z_brute(spec: RygSpec, D: int, H: int | None = None) -> TruncatedSeries:
    """Sum of weight monomials over pure coverings inside ``|y| < H`` (default ``D + 1``)."""
    H = D + 1 if H is None else H
    rt = RowTransfer(spec, H)
    xs = {i: TruncatedSeries.var(i, D) for i in spec.columns}
    return rt.total(xs.__getitem__, TruncatedSeries.one(D))


def w_constrained(spec: RygSpec, edges: Iterable, D: int) -> TruncatedSeries:
    """Generating series of pure coverings containing ``edges`` (fermionic route)."""
    return fock.constrained_product(spec, list(edges), D)


def w_brute(spec: RygSpec, edges: Iterable, D: int, H: int | None = None) -> TruncatedSeries:
    """Same series as :func:`w_constrained` by restricted row-transfer enumeration."""
    edges = list(edges)
    forced = forced_rows_for(spec, edges)
    if forced is None:
        return TruncatedSeries(cap=D)
    need = max([int(abs(y) + Fraction(1, 2)) for y in forced] + [0])
    H = max(D + 1, need + 1) if H is None else H
    rt = RowTransfer(spec, H)
    xs = {i: TruncatedSeries.var(i, D) for i in spec.columns}
    return rt.total(xs.__getitem__, TruncatedSeries.one(D), forced)


def normalize(spec: RygSpec) -> RygSpec:
    """Drop the leading run of ``-`` columns and the trailing run of ``+`` columns.

    Those columns never carry diagonal dimers in a pure covering, so the
    partition function is unchanged. Column indices of the kept part are
    preserved.
    """
    cols = list(spec.columns)
    lo, hi = 0, len(cols)
    while lo < hi and spec.sign(cols[lo]) < 0:
        lo += 1
    while hi > lo and spec.sign(cols[hi - 1]) > 0:
        hi -= 1
    if lo == hi:
        lo, hi = 0, 1
    keep = cols[lo:hi]
    w = None if spec.weights is None else [spec.weight(i) for i in keep]
    return build(keep[0], keep[-1], "".join(spec.letter(i) for i in keep),
                 "".join(spec.signs[i - spec.l] for i in keep), w)


def finite_support(spec: RygSpec) -> bool:
    """True when there are finitely many pure coverings (no same-letter hook box)."""
    return not any(b.same_letter for b in hook_boxes(spec))


def z_value(spec: RygSpec) -> float:
    """Numeric partition function from the hook product (requires convergence)."""
    z = 1.0
    for b in hook_boxes(spec):
        p = float(spec.weight(b.i)) * float(spec.weight(b.j))
        if b.same_letter:
            if p >= 1:
                raise ValueError(f"divergent factor for columns {b.i},{b.j}")
            z /= 1 - p
        else:
            z *= 1 + p
    return z


class NumericOracle:
    """Floating-point row transfer on ``|y| < H`` for positive numeric weights.

    Forward and backward vectors are stored per row so that a constrained
    sum only recomputes the rows carrying constraints.
    """

    def __init__(self, spec: RygSpec, H: int):
        if not spec.numeric:
            raise ValueError("numeric weights required")
        self.spec = spec
        self.H = H
        self.rt = RowTransfer(spec, H)
        self.rows = self.rt.rows
        self._row_index = {y: j for j, y in enumerate(self.rows)}
        self._x = {i: float(spec.weight(i)) for i in spec.columns}
        self._wcache: dict = {}
        self._forward = self._sweep_forward()
        self._backward = self._sweep_backward()

    def _w(self, ch: tuple) -> float:
        w = self._wcache.get(ch)
        if w is None:
            w = 1.0
            for i, c in zip(self.spec.columns, ch):
                if c == "D":
                    w *= self._x[i]
            self._wcache[ch] = w
        return w

    def _step(self, y, vec: dict, forced=None) -> dict:
        out: dict = {}
        for st, val in vec.items():
            for ns, ch in self.rt.transitions(y, st, forced):
                out[ns] = out.get(ns, 0.0) + val * self._w(ch)
        return out

    def _sweep_forward(self) -> list:
        vecs = [{RowTransfer.EMPTY_STATE: 1.0}]
        for y in self.rows:
            vecs.append(self._step(y, vecs[-1]))
        return vecs

    def _sweep_backward(self) -> list:
        n = len(self.rows)
        vecs = [None] * (n + 1)
        vecs[n] = {RowTransfer.EMPTY_STATE: 1.0}
        for j in range(n - 1, -1, -1):
            y = self.rows[j]
            b = {}
            for st in self._forward[j]:
                tot = 0.0
                for ns, ch in self.rt.transitions(y, st):
                    nb = vecs[j + 1].get(ns)
                    if nb:
                        tot += self._w(ch) * nb
                if tot:
                    b[st] = tot
            vecs[j] = b
        return vecs

    @property
    def Z(self) -> float:
        return self._forward[-1].get(RowTransfer.EMPTY_STATE, 0.0)

    def W(self, edges: Iterable) -> float:
        forced = forced_rows_for(self.spec, edges)
        if forced is None:
            return 0.0
        if not forced:
            return self.Z
        idx = []
        for y in forced:
            if y not in self._row_index:
                raise ValueError(f"row {y} outside the window")
            idx.append(self._row_index[y])
        j0, j1 = min(idx), max(idx)
        vec = self._forward[j0]
        for j in range(j0, j1 + 1):
            y = self.rows[j]
            vec = self._step(y, vec, forced.get(y))
        back = self._backward[j1 + 1]
        return sum(v * back.get(st, 0.0) for st, v in vec.items())

    def probability(self, edges: Iterable) -> float:
        return self.W(edges) / self.Z
