import os
import subprocess
import sys

import numpy as np
import pytest
from hypothesis import given, strategies as st

from railyard import _accel


@given(st.integers(1, 40), st.integers(1, 40), st.integers(1, 4), st.integers(0, 2 ** 32 - 1))
def test_numba_and_numpy_agree(nz, nw, nb, seed):
    rng = np.random.default_rng(seed)
    z = 2.0 * np.exp(2j * np.pi * rng.random(nz))
    w = 0.5 * np.exp(2j * np.pi * rng.random(nw))
    B = rng.normal(size=(nw, nb)) + 1j * rng.normal(size=(nw, nb))
    ref = np.array([[np.sum(B[:, b] / (z[j] - w)) for b in range(nb)] for j in range(nz)])
    np.testing.assert_allclose(_accel.cauchy_contract_numpy(z, w, B, chunk=7), ref, rtol=1e-12, atol=1e-12)
    if _accel.cauchy_contract_numba is not None:
        np.testing.assert_allclose(_accel.cauchy_contract_numba(z, w, B), ref, rtol=1e-12, atol=1e-12)


def test_env_flag_selects_numpy():
    code = "from railyard import _accel; print(_accel.backend())"
    env = dict(os.environ, RAILYARD_NO_NUMBA="1")
    out = subprocess.run([sys.executable, "-c", code], env=env, capture_output=True, text=True, check=True)
    assert out.stdout.strip() == "numpy"


def test_kernel_identical_under_both_backends():
    code = ("from railyard.aztec import west_prob; "
            "print(repr(west_prob(1, 0, 3, 0.5)))")
    outs = []
    for flag in ("1", ""):
        env = dict(os.environ, RAILYARD_NO_NUMBA=flag)
        r = subprocess.run([sys.executable, "-c", code], env=env, capture_output=True, text=True, check=True)
        outs.append(float(r.stdout))
    assert outs[0] == pytest.approx(outs[1], abs=1e-13)
