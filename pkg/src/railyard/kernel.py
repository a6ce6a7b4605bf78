"""Correlation kernel of the dimer model and determinantal edge probabilities.

The kernel entry for an even vertex ``alpha`` and an odd vertex ``beta`` is a
double contour integral of ``F_{alpha_x}(z) / F_{beta_x}(w)``. The half-integer
ordinates combine with ``sqrt(zw)`` into integer powers, so the integrand is

    F_a(z) / F_b(w) * z**(-alpha_y - 1/2) * w**(beta_y - 1/2) / (z - w)

integrated over ``dz dw / (2 pi i)**2`` and nothing depends on a branch.

Two evaluation routes are provided: trapezoidal quadrature on circles
(:func:`kernel_matrix` with ``method="numeric"``) and extraction of Laurent
coefficients (``method="series"``).
"""

from __future__ import annotations

import math
from fractions import Fraction
from typing import Iterable, NamedTuple, Sequence

import numpy as np

from . import _accel
from .graph import Edge, RygSpec, Vertex, is_edge

DEFAULT_TOL = 1e-11
M_START = 32
M_MAX = 2 ** 14


class KernelContext:
    """Numeric spec together with its pole/zero data.

    Raises ``ValueError`` when some pair ``i < j`` with equal letters,
    ``b_i = +`` and ``b_j = -`` has ``x_i x_j >= 1`` (the model is then not
    normalizable).
    """

    def __init__(self, spec: RygSpec):
        if not spec.numeric:
            raise ValueError("kernel needs numeric weights")
        self.spec = spec
        self.x = {i: float(spec.weight(i)) for i in spec.columns}
        for i in spec.columns:
            if self.x[i] <= 0:
                raise ValueError("weights must be positive")
        for i in spec.columns:
            for j in spec.columns:
                if (i < j and spec.letter(i) == spec.letter(j) and spec.sign(i) > 0
                        and spec.sign(j) < 0 and self.x[i] * self.x[j] >= 1):
                    raise ValueError(f"x_{i} x_{j} >= 1: partition function diverges")
        self._by_kind = {k: [(i, self.x[i]) for i in spec.columns if spec.kind(i) == k]
                         for k in ("L+", "L-", "R+", "R-")}

    def factor_weights(self, k: int) -> dict:
        """Weights entering ``F_k`` grouped by role."""
        bk = self._by_kind
        return {
            "R+": [x for i, x in bk["R+"] if 2 * i < k],   # numerator (1 + x z)
            "L-": [x for j, x in bk["L-"] if 2 * j > k],   # numerator (1 - x / z)
            "L+": [x for i, x in bk["L+"] if 2 * i <= k],  # denominator (1 - x z)
            "R-": [x for j, x in bk["R-"] if 2 * j >= k],  # denominator (1 + x / z)
        }

    def F(self, k: int, z):
        z = np.asarray(z, dtype=np.complex128)
        fw = self.factor_weights(k)
        out = np.ones_like(z)
        for x in fw["R+"]:
            out = out * (1 + x * z)
        for x in fw["L-"]:
            out = out * (1 - x / z)
        for x in fw["L+"]:
            out = out / (1 - x * z)
        for x in fw["R-"]:
            out = out / (1 + x / z)
        return out

    # radius bounds -------------------------------------------------------
    def rho_Rminus(self, k: int) -> float:
        return max(self.factor_weights(k)["R-"], default=0.0)

    def rho_Lplus(self, k: int) -> float:
        return min((1 / x for x in self.factor_weights(k)["L+"]), default=math.inf)

    def rho_Lminus(self, k: int) -> float:
        return max(self.factor_weights(k)["L-"], default=0.0)

    def rho_Rplus(self, k: int) -> float:
        return min((1 / x for x in self.factor_weights(k)["R+"]), default=math.inf)


class ContourPair(NamedTuple):
    cz: float
    rz: float
    cw: float
    rw: float

    @property
    def z_outside(self) -> bool:
        return self.rz > self.rw


def _split(lo: float, hi: float) -> tuple:
    """Two interior points of ``]lo, hi[`` at one and two thirds."""
    if hi <= lo:
        raise ValueError("empty contour window")
    if math.isinf(hi):
        hi = max(2 * lo, lo + 1.5)
    d = (hi - lo) / 3
    return lo + d, lo + 2 * d


def _circle(a: float, b: float) -> tuple:
    return (a + b) / 2, (b - a) / 2


def contour_radii(ctx: KernelContext, ax: int, bx: int) -> ContourPair:
    """Circles for the ``z`` (even abscissa ``ax``) and ``w`` (odd ``bx``) integrals.

    Each circle is given by its two real crossings ``a < 0 < b``. The
    ``z`` circle passes left of the negative poles ``-x`` of ``F_ax`` and
    right of nothing beyond the first positive pole; the ``w`` circle
    passes right of the positive zeros of ``F_bx`` and left of none of its
    negative zeros. Nesting follows the order of the abscissas.
    """
    if ax == bx:
        raise ValueError("abscissas of even and odd vertices never coincide")
    if ax < bx:
        bw, bz = _split(ctx.rho_Lminus(bx), ctx.rho_Lplus(ax))
        rp = ctx.rho_Rplus(bx)
        aw = -rp / 2 if math.isfinite(rp) else -1.0
        m = min(aw, -ctx.rho_Rminus(ax))
        az = m - max(bz - bw, 0.5 * abs(m))
    else:
        lz, lw = _split(ctx.rho_Rminus(ax), ctx.rho_Rplus(bx))
        az, aw = -lz, -lw
        lp = ctx.rho_Lplus(ax)
        bz = lp / 2 if math.isfinite(lp) else 1.0
        m = max(bz, ctx.rho_Lminus(bx))
        bw = m + max(lw - lz, 0.5 * m)
    cz, rz = _circle(az, bz)
    cw, rw = _circle(aw, bw)
    return ContourPair(cz, rz, cw, rw)


def _nodes(c: float, r: float, M: int):
    theta = 2 * np.pi * (np.arange(M) + 0.5) / M
    z = c + r * np.exp(1j * theta)
    return z, z - c


def _block_numeric(ctx: KernelContext, ax: int, bx: int, ay: Sequence, by: Sequence, M: int) -> np.ndarray:
    cp = contour_radii(ctx, ax, bx)
    z, dz = _nodes(cp.cz, cp.rz, M)
    w, dw = _nodes(cp.cw, cp.rw, M)
    ez = np.array([-int(y + Fraction(1, 2)) for y in ay])      # -alpha_y - 1/2
    ew = np.array([int(y - Fraction(1, 2)) for y in by])       # beta_y - 1/2
    Fz = ctx.F(ax, z)
    Fw = ctx.F(bx, w)
    A = (z[None, :] ** ez[:, None]) * (Fz * dz / M)[None, :]
    B = (w[:, None] ** ew[None, :]) * (dw / Fw / M)[:, None]
    return A @ _accel.cauchy_contract(z, w, B)


def _block_converged(ctx, ax, bx, ay, by, tol=DEFAULT_TOL, M0=M_START, Mmax=M_MAX) -> tuple:
    M = M0
    prev = _block_numeric(ctx, ax, bx, ay, by, M)
    while True:
        M *= 2
        cur = _block_numeric(ctx, ax, bx, ay, by, M)
        err = float(np.max(np.abs(cur - prev))) if cur.size else 0.0
        if err < tol or M >= Mmax:
            return cur, err, M
        prev = cur


# ---------------------------------------------------------------------------
# Laurent-coefficient route


def _power_coeffs(mul: Sequence, div: Sequence, K: int) -> np.ndarray:
    """Coefficients of ``prod(1 + a t) / prod(1 + b t)`` up to ``t^K``."""
    c = np.zeros(K + 1)
    c[0] = 1.0
    for a in mul:
        c[1:] = c[1:] + a * c[:-1].copy()
    for b in div:
        for n in range(1, K + 1):
            c[n] -= b * c[n - 1]
    return c


def _laurent(pos_mul, pos_div, neg_mul, neg_div, K: int) -> tuple:
    """Two-sided coefficients ``f[n]`` for ``n`` in ``[-K, K]`` (array offset ``K``)."""
    P = _power_coeffs(pos_mul, pos_div, K)
    N = _power_coeffs(neg_mul, neg_div, K)
    # f_n = sum_m P_{n+m} N_m
    return np.convolve(P, N[::-1])


def _f_coeffs(ctx: KernelContext, k: int, K: int) -> np.ndarray:
    fw = ctx.factor_weights(k)
    return _laurent(fw["R+"], [-x for x in fw["L+"]], [-x for x in fw["L-"]], fw["R-"], K)


def _g_coeffs(ctx: KernelContext, k: int, K: int) -> np.ndarray:
    fw = ctx.factor_weights(k)
    return _laurent([-x for x in fw["L+"]], fw["R+"], fw["R-"], [-x for x in fw["L-"]], K)


def _series_sum(f: np.ndarray, g: np.ndarray, K: int, ay, by, ax: int, bx: int) -> float:
    """Sum over half-integer ``t > 0`` of the extracted coefficient products."""
    a = int(ay + Fraction(1, 2))   # alpha_y + 1/2
    b = int(by + Fraction(1, 2))   # beta_y + 1/2
    total = 0.0
    for t in range(0, 2 * K + 1):
        # k = t + 1/2 runs over N + 1/2
        if ax < bx:
            n, m, sgn = a + t, -b - t, 1.0              # alpha_y + k, -beta_y - k
        else:
            n, m, sgn = a - 1 - t, -b + 1 + t, -1.0     # alpha_y - k, -beta_y + k
        if abs(n) > K or abs(m) > K:
            break
        total += sgn * f[n + K] * g[m + K]
    return total


def kernel_entry_series(ctx: KernelContext, alpha: Vertex, beta: Vertex,
                        cutoff: int | None = None, tol: float = 1e-14, max_cutoff: int = 8192) -> float:
    """Kernel entry by coefficient extraction with geometric-tail cutoff ``K``.

    ``K`` doubles from ``cutoff`` (default 64) until two successive sums
    agree within ``tol``; raises ``ArithmeticError`` if that never happens.
    """
    if not ctx.rho_Rminus(alpha.x) < ctx.rho_Lplus(alpha.x):
        raise ArithmeticError(f"Laurent expansion of F_{alpha.x} has no annulus of convergence")
    if not ctx.rho_Lminus(beta.x) < ctx.rho_Rplus(beta.x):
        raise ArithmeticError(f"Laurent expansion of 1/F_{beta.x} has no annulus of convergence")
    K = cutoff or 64
    prev = None
    while K <= max_cutoff:
        f = _f_coeffs(ctx, alpha.x, K)
        g = _g_coeffs(ctx, beta.x, K)
        if not (np.all(np.isfinite(f)) and np.all(np.isfinite(g))):
            break
        val = _series_sum(f, g, K, alpha.y, beta.y, alpha.x, beta.x)
        if prev is not None and abs(val - prev) < tol * max(1.0, abs(val)):
            return val
        prev = val
        K *= 2
    raise ArithmeticError(f"coefficient sums for {alpha},{beta} do not converge")


def kernel_entry_numeric(ctx: KernelContext, alpha: Vertex, beta: Vertex,
                         tol: float = DEFAULT_TOL) -> complex:
    block, _, _ = _block_converged(ctx, alpha.x, beta.x, [alpha.y], [beta.y], tol)
    return complex(block[0, 0])


def kernel_matrix(ctx: KernelContext, alphas: Sequence[Vertex], betas: Sequence[Vertex],
                  method: str = "numeric", tol: float = DEFAULT_TOL) -> tuple:
    """Matrix ``C[alpha_i, beta_j]`` and a max error estimate.

    Entries sharing a pair of abscissas are computed together.
    """
    n, m = len(alphas), len(betas)
    C = np.zeros((n, m))
    err = 0.0
    if method == "series":
        for a, al in enumerate(alphas):
            for b, be in enumerate(betas):
                C[a, b] = kernel_entry_series(ctx, al, be)
        return C, 0.0
    if method != "numeric":
        raise ValueError(f"unknown kernel method {method!r}")
    rows: dict = {}
    cols: dict = {}
    for a, al in enumerate(alphas):
        rows.setdefault(al.x, []).append(a)
    for b, be in enumerate(betas):
        cols.setdefault(be.x, []).append(b)
    for ax, ra in rows.items():
        for bx, cb in cols.items():
            block, e, _ = _block_converged(ctx, ax, bx, [alphas[a].y for a in ra],
                                           [betas[b].y for b in cb], tol)
            imag = float(np.max(np.abs(block.imag))) if block.size else 0.0
            err = max(err, e, imag)
            C[np.ix_(ra, cb)] = block.real
    return C, err


def horizontal_sign_count(edges: Iterable[Edge]) -> int:
    """Number of horizontal edges whose right endpoint is even."""
    return sum(1 for e in edges if e.kind == "horizontal" and e.even.x > e.odd.x)


def edge_probability(ctx: KernelContext, edges: Sequence[Edge], method: str = "numeric",
                     with_error: bool = False):
    """Probability that every edge of ``edges`` carries a dimer."""
    edges = list(edges)
    for e in edges:
        if not is_edge(ctx.spec, e):
            raise ValueError(f"{e} is not an edge of the graph")
    if not edges:
        return (1.0, 0.0) if with_error else 1.0
    evens = [e.even for e in edges]
    odds = [e.odd for e in edges]
    if len(set(evens)) < len(evens) or len(set(odds)) < len(odds):
        return (0.0, 0.0) if with_error else 0.0
    C, err = kernel_matrix(ctx, evens, odds, method)
    pref = -1.0 if horizontal_sign_count(edges) % 2 else 1.0
    for e in edges:
        if e.kind == "diagonal":
            pref *= ctx.x[e.column]
    p = pref * float(np.linalg.det(C))
    return (p, err) if with_error else p
