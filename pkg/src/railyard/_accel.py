"""Hot loop of the contour quadrature, with a numba and a numpy implementation.

Set ``RAILYARD_NO_NUMBA=1`` to force the numpy path (also used when numba
is not importable).
"""

from __future__ import annotations

import os

import numpy as np

try:
    import numba
except ImportError:  # pragma: no cover - numba is a declared dependency
    numba = None

_DISABLED = os.environ.get("RAILYARD_NO_NUMBA", "").lower() in ("1", "true", "yes")
USE_NUMBA = numba is not None and not _DISABLED


def cauchy_contract_numpy(z: np.ndarray, w: np.ndarray, B: np.ndarray, chunk: int = 512) -> np.ndarray:
    """``out[j, b] = sum_k B[k, b] / (z[j] - w[k])`` in row chunks."""
    out = np.empty((z.shape[0], B.shape[1]), dtype=np.complex128)
    for s in range(0, z.shape[0], chunk):
        K = 1.0 / (z[s:s + chunk, None] - w[None, :])
        out[s:s + chunk] = K @ B
    return out


if numba is not None:
    @numba.njit(cache=True, fastmath=False)
    def cauchy_contract_numba(z, w, B):
        nz = z.shape[0]
        nw = w.shape[0]
        nb = B.shape[1]
        out = np.empty((nz, nb), dtype=np.complex128)
        wr = w.real.copy()
        wi = w.imag.copy()
        # columns of B as contiguous real/imaginary rows
        Br = np.ascontiguousarray(B.real.T)
        Bi = np.ascontiguousarray(B.imag.T)
        tr = np.empty(nw)
        ti = np.empty(nw)
        for j in range(nz):
            zr = z[j].real
            zi = z[j].imag
            for k in range(nw):
                # 1/(z - w) in real arithmetic
                dr = zr - wr[k]
                di = zi - wi[k]
                inv = 1.0 / (dr * dr + di * di)
                tr[k] = dr * inv
                ti[k] = -di * inv
            for b in range(nb):
                sr = 0.0
                si = 0.0
                for k in range(nw):
                    sr += tr[k] * Br[b, k] - ti[k] * Bi[b, k]
                    si += tr[k] * Bi[b, k] + ti[k] * Br[b, k]
                out[j, b] = complex(sr, si)
        return out
else:  # pragma: no cover
    cauchy_contract_numba = None


def cauchy_contract(z, w, B) -> np.ndarray:
    z = np.ascontiguousarray(z, dtype=np.complex128)
    w = np.ascontiguousarray(w, dtype=np.complex128)
    B = np.ascontiguousarray(B, dtype=np.complex128)
    if USE_NUMBA:
        return cauchy_contract_numba(z, w, B)
    return cauchy_contract_numpy(z, w, B)


def backend() -> str:
    return "numba" if USE_NUMBA else "numpy"
