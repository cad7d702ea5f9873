import os
import subprocess
import sys

import numpy as np
import pytest

from arbor import _kernels

rng = np.random.default_rng(123)
U = rng.random((200, 12))
V = rng.random((200, 12))

CASES = {
    "yule_histories": (U,),
    "depth_histories": (U,),
    "beta_histories": (U, V),
    "yule_neg_log_q": (U,),
    "remy_neg_log_q": (U, V),
}


@pytest.mark.skipif(not _kernels.USE_NUMBA, reason="numba path disabled")
@pytest.mark.parametrize("name", sorted(CASES))
def test_compiled_matches_python(name):
    kernel = getattr(_kernels, name)
    args = CASES[name]
    np.testing.assert_allclose(kernel(*args), kernel.py_func(*args), rtol=0, atol=1e-12)


def test_pure_mode_via_env_flag():
    code = (
        "import numpy as np; from arbor import _kernels as k; "
        "print(k.USE_NUMBA); u = np.random.default_rng(1).random((5, 7)); "
        "print(k.yule_histories(u).tolist())"
    )
    env = dict(os.environ, ARBOR_DISABLE_NUMBA="1")
    out = subprocess.run([sys.executable, "-c", code], env=env, capture_output=True, text=True, check=True).stdout
    flag, hist = out.splitlines()
    assert flag == "False"
    u = np.random.default_rng(1).random((5, 7))
    assert hist == str(_kernels.yule_histories(u).tolist())


def test_histories_are_valid():
    for name in ("yule_histories", "depth_histories"):
        h = getattr(_kernels, name)(U)
        assert all(0 <= h[d, k] <= k for d in range(len(h)) for k in range(h.shape[1]))
    h = _kernels.beta_histories(U, V)
    assert h.min() >= 0 and all((h[:, k] <= k).all() for k in range(h.shape[1]))


def test_depth_kernel_first_step_and_weights():
    # depths after splitting the root: (1, 1); the next choice is a fair coin
    u = np.array([[0.3, 0.49], [0.9, 0.51]])
    assert _kernels.depth_histories(u).tolist() == [[0, 0], [0, 1]]
