"""Exact sequential sampling of pure coverings.

States between columns are charge-0 Maya diagrams restricted to the sites
``|k| < H``, stored as bit masks (bit ``k + H - 1/2`` set when site ``k``
is black; sites below the window are black, sites above are white). Each
vertex operator is applied as a sweep over the sites carrying one bit: the
particle currently in flight. This is the column of the graph read from
one end to the other, and it keeps every step linear in the number of
states.

The backward vectors ``v_i = Gamma_i ... Gamma_r |0>`` are stored at the
column boundaries only. Sampling walks the columns left to right; inside a
column the sweep intermediates are recomputed from ``v_{i+1}`` and the
sweep is run backwards, one site at a time, for the whole batch at once.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

import numpy as np

from .combinatorics import MayaDiagram
from .graph import (Covering, Edge, RygSpec, Vertex, covering_to_sequence, sequence_to_covering,
                    window_rows)
from .partition_fn import finite_support, hook_boxes

CARRY_BIT = 62
CARRY = np.int64(1) << np.int64(CARRY_BIT)
MAX_WINDOW = 31

# push rules: (old bit, carry in) -> [(new bit, carry out, power of x)]
_HSTRIP = {
    (0, 0): ((0, 0, 0),),
    (1, 0): ((1, 0, 0), (0, 1, 1)),
    (0, 1): ((1, 0, 0), (0, 1, 1)),
    (1, 1): (),
}
_VSTRIP = {
    (0, 0): ((0, 0, 0),),
    (0, 1): ((1, 0, 0),),
    (1, 0): ((1, 0, 0), (0, 1, 1)),
    (1, 1): ((1, 1, 1),),
}

# kind -> (rules, sweep runs top to bottom)
_SWEEPS = {
    "L+": (_HSTRIP, True),
    "L-": (_HSTRIP, False),
    "R+": (_VSTRIP, True),
    "R-": (_VSTRIP, False),
}


def _pull_rules(rules: dict) -> dict:
    """Invert a push table: (new bit, carry out) -> [(old bit, carry in, power)]."""
    out: dict = {}
    for (b, c), moves in rules.items():
        for nb, nc, p in moves:
            out.setdefault((nb, nc), []).append((b, c, p))
    return out


def vacuum_mask(H: int) -> int:
    return (1 << H) - 1


def site_of_bit(b: int, H: int) -> Fraction:
    return Fraction(2 * b - 2 * H + 1, 2)


def mask_to_maya(mask: int, H: int) -> MayaDiagram:
    return MayaDiagram.from_colors({site_of_bit(b, H): bool((mask >> b) & 1) for b in range(2 * H)})


def maya_to_mask(m: MayaDiagram, H: int) -> int:
    if m.support_bound() >= H:
        raise ValueError("Maya diagram deviates outside the window")
    return sum(1 << b for b in range(2 * H) if m.color(site_of_bit(b, H)))


def mask_size(mask, H: int):
    """Size of the charge-0 partition encoded by ``mask`` (array or int).

    A black site ``k > 0`` contributes ``k`` and a white site ``k < 0``
    contributes ``-k``.
    """
    scalar = not isinstance(mask, np.ndarray)
    m = np.asarray(mask, dtype=np.int64)
    twice = np.zeros(m.shape, dtype=np.int64)
    for b in range(2 * H):
        bit = (m >> b) & 1
        k2 = 2 * b - 2 * H + 1
        twice += bit * k2 if k2 > 0 else (1 - bit) * (-k2)
    size = twice // 2
    return int(size) if scalar else size


def _sweep_order(H: int, downward: bool) -> list:
    bits = list(range(2 * H))
    return bits[::-1] if downward else bits


# ---------------------------------------------------------------------------
# sweeps: exact (dict) and float (numpy)


def _push_site_dict(vec: dict, bit: int, rules: dict, x) -> dict:
    out: dict = {}
    one = 1 << bit
    for key, val in vec.items():
        c = key >> CARRY_BIT
        mask = key & ~(1 << CARRY_BIT)
        b = (mask >> bit) & 1
        for nb, nc, p in rules[(b, c)]:
            nk = (mask & ~one) | (nb << bit) | (nc << CARRY_BIT)
            term = val * x if p else val
            out[nk] = out.get(nk, 0) + term
    return out


def _push_site_np(keys: np.ndarray, vals: np.ndarray, bit: int, rules: dict, x: float):
    c = keys >> CARRY_BIT
    mask = keys & ~CARRY
    b = (mask >> bit) & 1
    one = np.int64(1) << np.int64(bit)
    out_k, out_v = [], []
    for (ob, oc), moves in rules.items():
        sel = (b == ob) & (c == oc)
        if not sel.any():
            continue
        mk, mv = mask[sel], vals[sel]
        for nb, nc, p in moves:
            nk = (mk & ~one) | (np.int64(nb) << np.int64(bit))
            if nc:
                nk = nk | CARRY
            out_k.append(nk)
            out_v.append(mv * x if p else mv)
    if not out_k:
        return np.zeros(0, np.int64), np.zeros(0)
    return _aggregate(np.concatenate(out_k), np.concatenate(out_v))


def _aggregate(keys: np.ndarray, vals: np.ndarray):
    uk, inv = np.unique(keys, return_inverse=True)
    return uk, np.bincount(inv.ravel(), weights=vals, minlength=uk.size)


def _finish_np(keys, vals, H, D):
    keep = (keys >> CARRY_BIT) == 0
    keys, vals = keys[keep], vals[keep]
    if D is not None:
        keep = mask_size(keys, H) <= D
        keys, vals = keys[keep], vals[keep]
    keep = vals != 0
    return keys[keep], vals[keep]


def _finish_dict(vec, H, D):
    return {k: v for k, v in vec.items()
            if k >> CARRY_BIT == 0 and v != 0 and (D is None or mask_size(k, H) <= D)}


def apply_column(kind: str, x, vec, H: int, D: int | None, keep_steps: bool = False):
    """``Gamma_kind(x)`` on a mask vector; returns the image (and the sweep steps)."""
    rules, downward = _SWEEPS[kind]
    order = _sweep_order(H, downward)
    steps = [vec] if keep_steps else None
    if isinstance(vec, dict):
        cur = vec
        for bit in order:
            cur = _push_site_dict(cur, bit, rules, x)
            if keep_steps:
                steps.append(cur)
        out = _finish_dict(cur, H, D)
    else:
        keys, vals = vec
        for bit in order:
            keys, vals = _push_site_np(keys, vals, bit, rules, float(x))
            if keep_steps:
                steps.append((keys, vals))
        out = _finish_np(keys, vals, H, D)
    return (out, steps) if keep_steps else out


# ---------------------------------------------------------------------------
# backward table


@dataclass
class BackwardTable:
    """Backward vectors ``v_i`` for ``i = l .. r+1`` on a window of ``2H`` sites."""

    spec: RygSpec
    D: int | None
    H: int
    exact: bool
    vectors: list

    def vector(self, i: int):
        return self.vectors[i - self.spec.l]

    def value(self, i: int, mask: int):
        v = self.vector(i)
        if self.exact:
            return v.get(mask, Fraction(0))
        keys, vals = v
        j = np.searchsorted(keys, mask)
        return float(vals[j]) if j < keys.size and keys[j] == mask else 0.0

    @property
    def mass(self):
        """``v_l`` at the vacuum: total weight of coverings the table can produce."""
        return self.value(self.spec.l, vacuum_mask(self.H))

    def support_sizes(self) -> list:
        return [len(v) if self.exact else int(v[0].size) for v in self.vectors]

    def truncation_mass(self, z_exact=None) -> float:
        """``1 - v_l(0) / Z``; ``Z`` defaults to the hook product when it converges."""
        if z_exact is None:
            z_exact = exact_z(self.spec)
        return float(1 - Fraction(self.mass) / Fraction(z_exact)) if self.exact else \
            1.0 - float(self.mass) / float(z_exact)


def exact_z(spec: RygSpec):
    """Hook-product partition function, exact for rational weights."""
    z = Fraction(1)
    for b in hook_boxes(spec):
        p = Fraction(spec.weight(b.i)) * Fraction(spec.weight(b.j))
        if b.same_letter:
            if p >= 1:
                raise ValueError(f"divergent factor for columns {b.i},{b.j}")
            z /= 1 - p
        else:
            z *= 1 + p
    return z


def default_window(spec: RygSpec, D: int | None) -> tuple:
    """Size cap and window: finite-support specs need no size cap beyond the hook count."""
    if D is None:
        if not finite_support(spec):
            raise ValueError("a size cap D is required for specs with infinitely many coverings")
        D = len(hook_boxes(spec))
    return D, min(D + 1, MAX_WINDOW)


def fitted_window(spec: RygSpec, D: int | None = None, rtol: float = 1e-13) -> int:
    """Smallest window whose float table reaches the exact ``Z`` (finite support only).

    Falls back to :func:`default_window` when the spec has infinitely many
    coverings.
    """
    D, H_max = default_window(spec, D)
    if not finite_support(spec):
        return H_max
    z = float(exact_z(spec))
    for H in range(1, H_max + 1):
        if abs(build_backward(spec, D, H).mass - z) <= rtol * z:
            return H
    return H_max


def build_backward(spec: RygSpec, D: int | None = None, H: int | None = None,
                   exact: bool = False) -> BackwardTable:
    """Backward vectors truncated to partitions of size at most ``D``.

    Entries are nonnegative for positive weights. The window ``H`` defaults
    to ``D + 1`` so that every partition of size ``<= D`` fits.
    """
    if not spec.numeric:
        raise ValueError("numeric weights required")
    D, H0 = default_window(spec, D)
    H = H0 if H is None else H
    if not 1 <= H <= MAX_WINDOW:
        raise ValueError(f"window half-height must be in 1..{MAX_WINDOW}")
    vac = vacuum_mask(H)
    if exact:
        vec = {vac: Fraction(1)}
    else:
        vec = (np.array([vac], np.int64), np.array([1.0]))
    vectors = [vec]
    for i in reversed(spec.columns):
        x = Fraction(spec.weight(i)) if exact else float(spec.weight(i))
        vec = apply_column(spec.kind(i), x, vec, H, D)
        vectors.append(vec)
    vectors.reverse()
    return BackwardTable(spec, D, H, exact, vectors)


# ---------------------------------------------------------------------------
# sampling


def column_stream(seed: int, index: int) -> np.random.Generator:
    """Counter-based stream for one column; independent across ``index``."""
    ss = np.random.SeedSequence(entropy=int(seed) & (2**64 - 1), spawn_key=(int(index),))
    return np.random.Generator(np.random.Philox(ss))


def _lookup(keys: np.ndarray, vals: np.ndarray, q: np.ndarray) -> np.ndarray:
    j = np.searchsorted(keys, q)
    j = np.minimum(j, max(keys.size - 1, 0))
    if keys.size == 0:
        return np.zeros(q.shape)
    return np.where(keys[j] == q, vals[j], 0.0)


def _pull_column(table: BackwardTable, i: int, cur: np.ndarray, u: np.ndarray) -> np.ndarray:
    spec, H = table.spec, table.H
    kind = spec.kind(i)
    rules, downward = _SWEEPS[kind]
    pull = _pull_rules(rules)
    order = _sweep_order(H, downward)
    x = float(spec.weight(i))
    _, steps = apply_column(kind, x, table.vector(i + 1), H, table.D, keep_steps=True)
    n = cur.size
    for t in range(len(order), 0, -1):
        bit = order[t - 1]
        one = np.int64(1) << np.int64(bit)
        nb = (cur >> bit) & 1
        nc = cur >> CARRY_BIT
        keys, vals = steps[t - 1]
        cand = np.zeros((n, 3), np.int64)
        w = np.zeros((n, 3))
        base = cur & ~CARRY & ~one
        for (onb, onc), preds in pull.items():
            sel = (nb == onb) & (nc == onc)
            if not sel.any():
                continue
            for s, (b, c, p) in enumerate(preds):
                k = base[sel] | (np.int64(b) << np.int64(bit))
                if c:
                    k = k | CARRY
                cand[sel, s] = k
                w[sel, s] = _lookup(keys, vals, k) * (x if p else 1.0)
        cum = np.cumsum(w, axis=1)
        tot = cum[:, -1]
        if np.any(tot <= 0):
            raise RuntimeError("sampler reached a state of zero weight")
        pick = (cum < (u[:, t - 1] * tot)[:, None]).sum(axis=1)
        pick = np.minimum(pick, 2)
        cur = cand[np.arange(n), pick]
    return cur


def sample_masks(table: BackwardTable, count: int, seed: int) -> np.ndarray:
    """Draw ``count`` mask sequences; shape ``(count, r - l + 2)``.

    Sample ``j`` only uses row ``j`` of each column's uniform stream, so
    it does not depend on ``count``.
    """
    if table.exact:
        raise ValueError("sampling uses a float table; build it with exact=False")
    spec, H = table.spec, table.H
    if table.mass <= 0:
        raise ValueError("table has zero mass")
    W = 2 * H
    cur = np.full(count, vacuum_mask(H), np.int64)
    out = np.empty((count, spec.r - spec.l + 2), np.int64)
    out[:, 0] = cur
    for i in spec.columns:
        u = column_stream(seed, i - spec.l).random((count, W))
        cur = _pull_column(table, i, cur, u)
        out[:, i - spec.l + 1] = cur
    if np.any(out[:, -1] != vacuum_mask(H)):
        raise RuntimeError("sampled sequence does not end at the vacuum")
    return out


def masks_to_covering(spec: RygSpec, masks: Sequence[int], H: int) -> Covering:
    """Decode a mask sequence through Maya diagrams (slow, used as a cross-check)."""
    return sequence_to_covering(spec, [mask_to_maya(int(m), H) for m in masks], H)


class MaskDecoder:
    """Integer-only decoding of mask sequences into coverings.

    Mirrors :func:`graph.sequence_to_covering`: in an ``L`` column the right
    state's black sites are horizontal edges to the right, and the remaining
    even vertices pair in order with the left state's white sites; ``R``
    columns are the mirror image.
    """

    def __init__(self, spec: RygSpec, H: int):
        self.spec = spec
        self.H = H
        self.rows = window_rows(H)
        self._v: dict = {}

    def _vx(self, x: int, b: int) -> Vertex:
        v = self._v.get((x, b))
        if v is None:
            v = self._v[(x, b)] = Vertex(x, self.rows[b])
        return v

    def edges(self, masks: Sequence[int]) -> frozenset:
        spec, W = self.spec, 2 * self.H
        out = []
        for i in spec.columns:
            left = int(masks[i - spec.l])
            right = int(masks[i - spec.l + 1])
            ex = 2 * i
            if spec.letter(i) == "L":
                ox, hx = ex - 1, ex + 1
                evens = [b for b in range(W) if not (right >> b) & 1]
                targets = [b for b in range(W) if not (left >> b) & 1]
                horiz = [b for b in range(W) if (right >> b) & 1]
            else:
                ox, hx = ex + 1, ex - 1
                evens = [b for b in range(W) if (left >> b) & 1]
                targets = [b for b in range(W) if (right >> b) & 1]
                horiz = [b for b in range(W) if not (left >> b) & 1]
            if len(evens) != len(targets):
                raise ValueError(f"column {i}: states do not interlace")
            for b in horiz:
                out.append(Edge(self._vx(ex, b), self._vx(hx, b)))
            for be, bt in zip(evens, targets):
                out.append(Edge(self._vx(ex, be), self._vx(ox, bt)))
        return frozenset(out)

    def covering(self, masks: Sequence[int]) -> Covering:
        return Covering(self.spec, self.H, self.edges(masks))


def sample_batch(table: BackwardTable, count: int, seed: int,
                 max_truncation: float | None = None) -> list:
    if max_truncation is not None:
        tm = table.truncation_mass()
        if tm > max_truncation:
            raise ValueError(f"truncation mass {tm:.3g} exceeds {max_truncation:.3g}")
    masks = sample_masks(table, count, seed)
    dec = MaskDecoder(table.spec, table.H)
    return [dec.covering(row) for row in masks]


def sample(table: BackwardTable, seed: int, max_truncation: float | None = None) -> Covering:
    return sample_batch(table, 1, seed, max_truncation)[0]


# ---------------------------------------------------------------------------
# exact path probabilities


def covering_probability(table: BackwardTable, c: Covering) -> Fraction:
    """Exact probability that the sampler outputs ``c`` (table must be exact)."""
    if not table.exact:
        raise ValueError("exact table required")
    seq = [maya_to_mask(m, table.H) for m in covering_to_sequence(c)]
    spec = table.spec
    prob = Fraction(1)
    for i in spec.columns:
        prob *= column_transition_probability(table, i, seq[i - spec.l], seq[i - spec.l + 1])
        if prob == 0:
            break
    return prob


def column_transition_probability(table: BackwardTable, i: int, lam: int, mu: int) -> Fraction:
    """Sum over carry paths of the pull probabilities from ``lam`` to ``mu``."""
    spec, H = table.spec, table.H
    kind = spec.kind(i)
    rules, downward = _SWEEPS[kind]
    pull = _pull_rules(rules)
    order = _sweep_order(H, downward)
    x = Fraction(spec.weight(i))
    _, steps = apply_column(kind, x, table.vector(i + 1), H, table.D, keep_steps=True)
    paths = {lam: Fraction(1)}
    for t in range(len(order), 0, -1):
        bit = order[t - 1]
        want = (mu >> bit) & 1
        nxt: dict = {}
        for cur, pr in paths.items():
            nb, nc = (cur >> bit) & 1, cur >> CARRY_BIT
            base = cur & ~(1 << CARRY_BIT) & ~(1 << bit)
            options = []
            for b, c, p in pull.get((nb, nc), ()):
                k = base | (b << bit) | (c << CARRY_BIT)
                options.append((k, b, steps[t - 1].get(k, 0) * (x if p else 1)))
            tot = sum(wt for _, _, wt in options)
            if tot == 0:
                continue
            for k, b, wt in options:
                if b == want and wt:
                    nxt[k] = nxt.get(k, 0) + pr * wt / tot
        paths = nxt
    return paths.get(mu, Fraction(0))


# ---------------------------------------------------------------------------
# statistics


def empirical_stats(samples: Sequence[Covering], edges: Iterable[Edge]) -> dict:
    """Per-edge coverage frequency with its binomial standard error."""
    samples = list(samples)
    if not samples:
        raise ValueError("at least one sample required")
    n = len(samples)
    out = {}
    for e in edges:
        k = sum(1 for s in samples if s.has_edge(e))
        p = k / n
        out[e] = {"count": k, "frequency": p, "stderr": (p * (1 - p) / n) ** 0.5}
    return out
