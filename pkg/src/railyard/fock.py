"""Truncated Fock space: vertex operators, fermions, constrained transfer matrices.

Basis vectors are labelled by :class:`ChargedPartition`. Operators act on
column vectors and compose right to left, so ``apply_ops([A, B], v)`` is
``A B v``.

Truncation
----------
A vector may carry a partition-size cap; states above it are dropped.
When coefficients are :class:`TruncatedSeries` with a degree cap no size
cap is needed: a growing operator ``Gamma_-(x)`` adds ``x^d`` for a size
increase ``d``, so growth beyond the remaining degree budget contributes
nothing.
"""

from __future__ import annotations

import itertools
import json
from fractions import Fraction
from functools import lru_cache
from typing import Iterable, NamedTuple, Sequence

from .combinatorics import (
    HALF,
    ChargedPartition,
    MayaDiagram,
    Partition,
    as_half_integer,
    charged_from_maya,
    enumerate_interlacing,
    maya_from_charged,
    omega,
    partitions_up_to,
)
from .series import TruncatedSeries

GAMMA_KINDS = ("L+", "L-", "R+", "R-")

# (interlacing kind, direction) realising each vertex operator
_GAMMA_SHAPE = {
    "L+": ("horizontal", "shrink"),
    "R+": ("vertical", "shrink"),
    "L-": ("horizontal", "grow"),
    "R-": ("vertical", "grow"),
}


def _is_zero(c) -> bool:
    if isinstance(c, TruncatedSeries):
        return c.is_zero()
    return c == 0


class FockVector:
    """Finitely supported vector ``sum_cp coeff[cp] |cp>``."""

    __slots__ = ("entries", "size_cap")

    def __init__(self, entries: dict | None = None, size_cap: int | None = None):
        self.size_cap = size_cap
        self.entries = {}
        for cp, c in (entries or {}).items():
            cp = ChargedPartition(Partition(cp[0]), int(cp[1]))
            if size_cap is not None and cp.size > size_cap:
                continue
            if not _is_zero(c):
                self.entries[cp] = c

    @classmethod
    def basis(cls, cp, coeff=Fraction(1), size_cap: int | None = None) -> "FockVector":
        return cls({cp: coeff}, size_cap)

    @classmethod
    def vacuum(cls, coeff=Fraction(1), charge: int = 0, size_cap: int | None = None) -> "FockVector":
        return cls.basis(ChargedPartition(Partition(), charge), coeff, size_cap)

    def _new(self, entries: dict) -> "FockVector":
        v = FockVector(size_cap=self.size_cap)
        v.entries = {k: c for k, c in entries.items() if not _is_zero(c)}
        return v

    def __getitem__(self, cp):
        return self.entries.get(ChargedPartition(Partition(cp[0]), int(cp[1])), 0)

    def coeff_maya(self, m: MayaDiagram):
        return self.entries.get(charged_from_maya(m), 0)

    def items(self):
        return self.entries.items()

    def __len__(self):
        return len(self.entries)

    def __add__(self, other: "FockVector") -> "FockVector":
        out = dict(self.entries)
        for k, c in other.entries.items():
            out[k] = out[k] + c if k in out else c
        return self._new(out)

    def __sub__(self, other: "FockVector") -> "FockVector":
        return self + other.scale(-1)

    def scale(self, c) -> "FockVector":
        return self._new({k: v * c for k, v in self.entries.items()})

    def is_zero(self) -> bool:
        return not self.entries

    def __eq__(self, other) -> bool:
        return isinstance(other, FockVector) and (self - other).is_zero()

    def charges(self) -> set:
        return {cp.charge for cp in self.entries}

    def __repr__(self) -> str:
        body = ", ".join(f"{list(k.partition)}|{k.charge}: {v}" for k, v in self.entries.items())
        return f"FockVector({{{body}}})"


class OperatorToken(NamedTuple):
    """One factor of an operator word.

    ``kind`` is a vertex-operator type (``"L+"`` ...) with ``param`` the
    weight, or ``"psi"`` / ``"psi*"`` with ``param`` the site ``k``.
    """

    kind: str
    param: object


def gamma(kind: str, x) -> OperatorToken:
    if kind not in GAMMA_KINDS:
        raise ValueError(f"unknown vertex operator {kind!r}")
    return OperatorToken(kind, x)


def psi(k) -> OperatorToken:
    return OperatorToken("psi", as_half_integer(k))


def psi_star(k) -> OperatorToken:
    return OperatorToken("psi*", as_half_integer(k))


# ---------------------------------------------------------------------------
# vertex operators


@lru_cache(maxsize=None)
def _gamma_basis(kind: str, lam: Partition, budget: int | None) -> tuple:
    ikind, direction = _GAMMA_SHAPE[kind]
    if direction == "grow":
        found = enumerate_interlacing(lam, ikind, "grow", budget)
    else:
        found = enumerate_interlacing(lam, ikind, "shrink", lam.size)
    return tuple((mu, abs(mu.size - lam.size)) for mu in found)


def _weight_degree(x) -> int:
    if isinstance(x, TruncatedSeries):
        return max(1, x.mindeg())
    return 1


def apply_gamma(kind: str, x, v: FockVector) -> FockVector:
    """``Gamma_kind(x) v``; charge is preserved."""
    if kind not in GAMMA_KINDS:
        raise ValueError(f"unknown vertex operator {kind!r}")
    grow = _GAMMA_SHAPE[kind][1] == "grow"
    xdeg = _weight_degree(x)
    powers: dict = {0: 1}
    out: dict = {}
    for cp, c in v.entries.items():
        lam = cp.partition
        budget = None
        if grow:
            budgets = []
            if v.size_cap is not None:
                budgets.append(v.size_cap - lam.size)
            if isinstance(c, TruncatedSeries) and c.cap is not None:
                budgets.append((c.cap - c.mindeg()) // xdeg)
            if not budgets:
                raise ValueError("growing operator needs a size cap or capped series coefficients")
            budget = min(budgets)
            if budget < 0:
                continue
        for mu, d in _gamma_basis(kind, lam, budget):
            p = powers.get(d)
            if p is None:
                p = powers[d] = x ** d
            key = ChargedPartition(mu, cp.charge)
            term = c * p
            out[key] = out[key] + term if key in out else term
    return v._new(out)


# ---------------------------------------------------------------------------
# fermions


@lru_cache(maxsize=None)
def _flip(cp: ChargedPartition, k: Fraction, want_black: bool):
    m = maya_from_charged(cp)
    if m.color(k) != want_black:
        return None
    sign = -1 if m.blacks_above(k) % 2 else 1
    return charged_from_maya(m.flip(k)), sign


def _apply_fermion(k, v: FockVector, want_black: bool) -> FockVector:
    k = as_half_integer(k)
    out: dict = {}
    for cp, c in v.entries.items():
        hit = _flip(cp, k, want_black)
        if hit is None:
            continue
        key, sign = hit
        term = c if sign > 0 else -c
        out[key] = out[key] + term if key in out else term
    return v._new(out)


def apply_psi(k, v: FockVector) -> FockVector:
    """``psi_k v``: turns a white marble at ``k`` black, raising the charge by one."""
    return _apply_fermion(k, v, want_black=False)


def apply_psi_star(k, v: FockVector) -> FockVector:
    """``psi*_k v``: turns a black marble at ``k`` white, lowering the charge by one."""
    return _apply_fermion(k, v, want_black=True)


def apply_omega(v: FockVector) -> FockVector:
    return v._new({omega(cp): c for cp, c in v.entries.items()})


def apply_charge_sign(v: FockVector, shift: int = 0) -> FockVector:
    """Multiply each ``|lam, c>`` by ``(-1)^(c + shift)``."""
    return v._new({cp: (c if (cp.charge + shift) % 2 == 0 else -c) for cp, c in v.entries.items()})


def apply_ops(ops: Sequence[OperatorToken], v: FockVector) -> FockVector:
    for op in reversed(ops):
        if op.kind == "psi":
            v = apply_psi(op.param, v)
        elif op.kind == "psi*":
            v = apply_psi_star(op.param, v)
        else:
            v = apply_gamma(op.kind, op.param, v)
    return v


def expectation(ops: Sequence[OperatorToken], left, right, one=Fraction(1)):
    """``<left| ops |right>`` for charged partitions ``left`` and ``right``."""
    v = apply_ops(ops, FockVector.basis(right, one))
    return v[left]


# ---------------------------------------------------------------------------
# transfer matrices


def column_weights(spec, D: int | None) -> dict:
    """Weight per column: series variables for symbolic specs, numbers otherwise."""
    if spec.weights is None:
        return {i: TruncatedSeries.var(i, D) for i in spec.columns}
    return {i: spec.weight(i) for i in spec.columns}


def transfer_vector(spec, D: int, right=None) -> FockVector:
    """``Gamma_l(x_l) ... Gamma_r(x_r) |right>`` with symbolic weights capped at ``D``."""
    xs = column_weights(spec.symbolic(), D)
    right = right if right is not None else ChargedPartition(Partition(), 0)
    if isinstance(right, MayaDiagram):
        right = charged_from_maya(right)
    v = FockVector.basis(right, TruncatedSeries.one(D))
    for i in reversed(spec.columns):
        v = apply_gamma(spec.kind(i), xs[i], v)
    return v


def transfer_product(spec, boundary_l=None, boundary_r=None, D: int = 6) -> TruncatedSeries:
    """``<l| Gamma_l ... Gamma_r |r>`` as a series truncated at total degree ``D``."""
    to_cp = lambda b: (ChargedPartition(Partition(), 0) if b is None
                       else charged_from_maya(b) if isinstance(b, MayaDiagram) else b)
    left, right = to_cp(boundary_l), to_cp(boundary_r)
    if left.charge != right.charge:
        return TruncatedSeries(cap=D)
    v = transfer_vector(spec, D, right)
    c = v[left]
    return c if isinstance(c, TruncatedSeries) else TruncatedSeries(cap=D)


def split_column_edges(spec, i: int, edges: Iterable) -> tuple:
    """Split the edges of column ``i`` into left pairs ``(alpha, beta)`` and right pairs.

    Left pairs join abscissas ``2i-1`` and ``2i``, right pairs ``2i`` and
    ``2i+1``; both lists are sorted by the ordinate of the even end.
    Returns ``(left, right, n_diagonal)``.
    """
    from .graph import is_edge

    left, right, ndiag = [], [], 0
    seen = set()
    for e in edges:
        if not is_edge(spec, e) or e.even.x != 2 * i:
            raise ValueError(f"{e} is not an edge of column {i}")
        if e in seen:
            raise ValueError(f"duplicate edge {e}")
        seen.add(e)
        if e.kind == "diagonal":
            ndiag += 1
        (left if e.odd.x == 2 * i - 1 else right).append(e)
    left.sort(key=lambda e: e.even.y)
    right.sort(key=lambda e: e.even.y)
    return left, right, ndiag


def constrained_ops(spec, i: int, edges: Iterable, x) -> tuple:
    """Operator word and scalar prefactor of the constrained transfer matrix of column ``i``."""
    left, right, n = split_column_edges(spec, i, edges)
    m, mp = len(left), len(right)
    k = m * (m - 1) // 2 + mp * (mp - 1) // 2
    if spec.letter(i) == "L":
        k += n
    betas = [psi_star(e.odd.y) for e in left]
    alphas = [psi(e.even.y) for e in left]
    gammas = [psi(e.even.y) for e in right]
    deltas = [psi_star(e.odd.y) for e in right]
    g = [gamma(spec.kind(i), x)]
    if spec.letter(i) == "R":
        ops = betas + alphas + gammas + g + deltas
    else:
        ops = betas + g + alphas + gammas + deltas
    prefactor = (-1) ** k * (x ** n)
    return ops, prefactor


def constrained_transfer(spec, i: int, edges: Iterable, v: FockVector, x=None) -> FockVector:
    """Apply the constrained transfer matrix of column ``i`` (forcing ``edges``) to ``v``."""
    if x is None:
        x = spec.weight(i)
    ops, pref = constrained_ops(spec, i, edges, x)
    return apply_ops(ops, v).scale(pref)


def constrained_product(spec, edges: Iterable, D: int) -> TruncatedSeries:
    """``<0| T_l ... T_r |0>`` with symbolic weights, truncated at degree ``D``."""
    edges = list(edges)
    by_col: dict = {i: [] for i in spec.columns}
    for e in edges:
        i = e.even.x // 2
        if i not in by_col:
            raise ValueError(f"{e} lies outside the columns of the spec")
        by_col[i].append(e)
    xs = column_weights(spec.symbolic(), D)
    v = FockVector.vacuum(TruncatedSeries.one(D))
    for i in reversed(spec.columns):
        v = constrained_transfer(spec, i, by_col[i], v, xs[i])
    c = v[(Partition(), 0)]
    return c if isinstance(c, TruncatedSeries) else TruncatedSeries(cap=D)


# ---------------------------------------------------------------------------
# Pfaffians and Wick's formula


def pfaffian(A) -> object:
    """Pfaffian by skew-symmetric elimination with pivoting.

    Works for exact (``Fraction``) and floating entries. Raises for odd or
    non-antisymmetric input.
    """
    A = [list(row) for row in A]
    n = len(A)
    if any(len(row) != n for row in A):
        raise ValueError("matrix must be square")
    if n % 2:
        raise ValueError("Pfaffian of an odd-size matrix")
    for a in range(n):
        for b in range(n):
            if A[a][b] != -A[b][a]:
                raise ValueError("matrix is not antisymmetric")
    pf = 1
    for k in range(0, n - 1, 2):
        piv = max(range(k + 1, n), key=lambda j: abs(A[k][j]))
        if A[k][piv] == 0:
            return 0 * pf
        if piv != k + 1:
            A[k + 1], A[piv] = A[piv], A[k + 1]
            for row in A:
                row[k + 1], row[piv] = row[piv], row[k + 1]
            pf = -pf
        p = A[k][k + 1]
        pf = pf * p
        for i in range(k + 2, n):
            t = A[k][i] / p
            if t == 0:
                continue
            for j in range(n):
                A[i][j] -= t * A[k + 1][j]
            for j in range(n):
                A[j][i] -= t * A[j][k + 1]
    return pf


def pfaffian_by_pairings(A) -> object:
    """Pfaffian as the signed sum over perfect pairings (definition)."""
    n = len(A)
    if n % 2:
        raise ValueError("Pfaffian of an odd-size matrix")

    def rec(idx: tuple):
        if not idx:
            return 1
        a, rest = idx[0], idx[1:]
        total = 0
        for pos, b in enumerate(rest):
            # moving b next to a crosses ``pos`` indices
            sign = -1 if pos % 2 else 1
            total = total + sign * A[a][b] * rec(rest[:pos] + rest[pos + 1:])
        return total

    return rec(tuple(range(n)))


def linear_fermion(terms: dict) -> list:
    """Normalize ``{("psi"|"psi*", k): coeff}`` into a list of ``(token, coeff)``."""
    out = []
    for (kind, k), c in sorted(terms.items(), key=lambda t: (t[0][0], t[0][1])):
        if kind not in ("psi", "psi*"):
            raise ValueError(f"not a fermionic mode: {kind!r}")
        out.append((OperatorToken(kind, as_half_integer(k)), c))
    return out


def _apply_linear(X: list, v: FockVector) -> FockVector:
    acc = FockVector(size_cap=v.size_cap)
    for tok, c in X:
        acc = acc + apply_ops([tok], v).scale(c)
    return acc


def vacuum_expectation(Xs: Sequence[list], one=Fraction(1)):
    """``<0| X_1 ... X_n |0>`` for linear combinations of fermionic modes."""
    v = FockVector.vacuum(one)
    for X in reversed(Xs):
        v = _apply_linear(X, v)
    return v[(Partition(), 0)]


def wick_sides(Xs: Sequence[list]) -> tuple:
    """Direct vacuum expectation and the Pfaffian of pairwise expectations."""
    n = len(Xs)
    if n % 2:
        return vacuum_expectation(Xs), 0
    A = [[0] * n for _ in range(n)]
    for a in range(n):
        for b in range(a + 1, n):
            A[a][b] = vacuum_expectation([Xs[a], Xs[b]])
            A[b][a] = -A[a][b]
    return vacuum_expectation(Xs), pfaffian(A) if n else 1


def wick_check(Xs: Sequence[list]) -> bool:
    lhs, rhs = wick_sides(Xs)
    return lhs == rhs


# ---------------------------------------------------------------------------
# commutation relations


def basis_states(D: int, max_charge: int) -> list:
    return [ChargedPartition(lam, c) for c in range(-max_charge, max_charge + 1)
            for lam in partitions_up_to(D)]


def _sites(bound) -> list:
    b = int(bound - HALF)
    return [Fraction(2 * j + 1, 2) for j in range(-b - 1, b + 1)]


class _Check:
    def __init__(self):
        self.results: dict = {}

    def record(self, name: str, ok: bool):
        r = self.results.setdefault(name, {"pass": True, "checked": 0, "failures": 0})
        r["checked"] += 1
        if not ok:
            r["pass"] = False
            r["failures"] += 1


def _lin(pairs: Iterable, v: FockVector, op) -> FockVector:
    """``sum coeff * op(k, v)`` over ``(k, coeff)`` pairs."""
    acc = FockVector(size_cap=v.size_cap)
    for k, c in pairs:
        acc = acc + op(k, v).scale(c)
    return acc


def commutation_suite(D: int = 6, max_charge: int = 2, series_cap: int = 3) -> dict:
    """Check the bosonic and fermionic operator identities on a truncated basis.

    Every basis state with ``|lam| <= D`` and ``|c| <= max_charge`` is
    tested; fermionic modes range over ``|k| <= D + 3/2``. Weights are
    formal variables with coefficients truncated at ``series_cap``.
    Returns ``{relation: {"pass", "checked", "failures"}}``.
    """
    cap = series_cap
    one = TruncatedSeries.one(cap)
    x1 = TruncatedSeries.var(1, cap)
    x2 = TruncatedSeries.var(2, cap)
    neg_x1 = x1.scale(-1)
    states = basis_states(D, max_charge)
    sites = _sites(Fraction(2 * D + 3, 2))
    chk = _Check()
    G = apply_gamma
    plus, minus = ("L+", "R+"), ("L-", "R-")

    for cp in states:
        v = FockVector.basis(cp, one)
        # Gamma_{a1+}(x1) Gamma_{a2-}(x2) = z Gamma_{a2-}(x2) Gamma_{a1+}(x1)
        for a1, a2 in itertools.product("LR", repeat=2):
            lhs = G(a1 + "+", x1, G(a2 + "-", x2, v))
            rhs = G(a2 + "-", x2, G(a1 + "+", x1, v))
            if a1 == a2:
                z = (one - x1 * x2).inverse()
                name = "gamma_commute_same_letter"
            else:
                z = one + x1 * x2
                name = "gamma_commute_different_letter"
            chk.record(name, lhs == rhs.scale(z))
        # same-sign operators commute
        for s in "+-":
            for a1, a2 in itertools.product("LR", repeat=2):
                lhs = G(a1 + s, x1, G(a2 + s, x2, v))
                rhs = G(a2 + s, x2, G(a1 + s, x1, v))
                chk.record("gamma_same_sign_commute", lhs == rhs)
            # Gamma_{L s}(x) Gamma_{R s}(-x) = Gamma_{R s}(-x) Gamma_{L s}(x) = 1
            a = G("L" + s, x1, G("R" + s, neg_x1, v))
            b = G("R" + s, neg_x1, G("L" + s, x1, v))
            chk.record("gamma_inverse_pair", a == v and b == v)

        # canonical anticommutation relations, mode-wise
        for k in sites:
            for kp in sites:
                if abs(k - kp) > 2:
                    continue
                pp = apply_psi(k, apply_psi(kp, v)) + apply_psi(kp, apply_psi(k, v))
                ss = apply_psi_star(k, apply_psi_star(kp, v)) + apply_psi_star(kp, apply_psi_star(k, v))
                ps = apply_psi(k, apply_psi_star(kp, v)) + apply_psi_star(kp, apply_psi(k, v))
                chk.record("anticommute_psi_psi", pp.is_zero())
                chk.record("anticommute_psistar_psistar", ss.is_zero())
                chk.record("anticommute_psi_psistar", ps == (v if k == kp else FockVector()))

        js = range(cap + 1)
        for k in sites:
            # Gamma_{L+} psi_k = sum_j x^j psi_{k-j} Gamma_{L+}
            chk.record("boson_fermion_Lplus_psi",
                       G("L+", x1, apply_psi(k, v))
                       == _lin([(k - j, x1 ** j) for j in js], G("L+", x1, v), apply_psi))
            # Gamma_{R+} psi_k = (psi_k + x psi_{k-1}) Gamma_{R+}
            chk.record("boson_fermion_Rplus_psi",
                       G("R+", x1, apply_psi(k, v))
                       == _lin([(k, one), (k - 1, x1)], G("R+", x1, v), apply_psi))
            # Gamma_{L+} psi*_k = (psi*_k - x psi*_{k+1}) Gamma_{L+}
            chk.record("boson_fermion_Lplus_psistar",
                       G("L+", x1, apply_psi_star(k, v))
                       == _lin([(k, one), (k + 1, neg_x1)], G("L+", x1, v), apply_psi_star))
            # Gamma_{R+} psi*_k = sum_j (-x)^j psi*_{k+j} Gamma_{R+}
            chk.record("boson_fermion_Rplus_psistar",
                       G("R+", x1, apply_psi_star(k, v))
                       == _lin([(k + j, neg_x1 ** j) for j in js], G("R+", x1, v), apply_psi_star))
            # psi_k Gamma_{L-} = Gamma_{L-} (psi_k - x psi_{k+1})
            chk.record("boson_fermion_Lminus_psi",
                       apply_psi(k, G("L-", x1, v))
                       == G("L-", x1, _lin([(k, one), (k + 1, neg_x1)], v, apply_psi)))
            # psi_k Gamma_{R-} = Gamma_{R-} sum_j (-x)^j psi_{k+j}
            chk.record("boson_fermion_Rminus_psi",
                       apply_psi(k, G("R-", x1, v))
                       == G("R-", x1, _lin([(k + j, neg_x1 ** j) for j in js], v, apply_psi)))
            # psi*_k Gamma_{L-} = Gamma_{L-} sum_j x^j psi*_{k-j}
            chk.record("boson_fermion_Lminus_psistar",
                       apply_psi_star(k, G("L-", x1, v))
                       == G("L-", x1, _lin([(k - j, x1 ** j) for j in js], v, apply_psi_star)))
            # psi*_k Gamma_{R-} = Gamma_{R-} (psi*_k + x psi*_{k-1})
            chk.record("boson_fermion_Rminus_psistar",
                       apply_psi_star(k, G("R-", x1, v))
                       == G("R-", x1, _lin([(k, one), (k - 1, x1)], v, apply_psi_star)))
            # omega psi*_k omega = (-1)^(C + k + 1/2) psi_{-k}, C read on the input state
            lhs = apply_omega(apply_psi_star(k, apply_omega(v)))
            rhs = apply_psi(-k, apply_charge_sign(v, int(k + HALF)))
            chk.record("omega_conjugation", lhs == rhs)

    # duality between Gamma_{a+} and Gamma_{a-}
    xf = Fraction(1, 3)
    small = [cp for cp in states if cp.charge == 0]
    for a in "LR":
        for lam in small:
            up = apply_gamma(a + "+", xf, FockVector.basis(lam))
            for mu in small:
                down = apply_gamma(a + "-", xf, FockVector.basis(mu, size_cap=D))
                chk.record("gamma_duality", up[mu] == down[lam])
    return chk.results


def suite_passed(report: dict) -> bool:
    return all(r["pass"] for r in report.values())


def report_json(report: dict) -> str:
    return json.dumps(report, indent=2, sort_keys=True)
