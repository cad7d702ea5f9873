"""Time the sampling kernels with and without numba.

Each mode runs in its own interpreter, because the choice between compiled
and pure kernels is made once at import time from ARBOR_DISABLE_NUMBA.

    python benchmarks/bench_kernels.py --draws 2000 --n 64
"""
import argparse
import json
import os
import subprocess
import sys

WORKER = r"""
import json, sys, time
import numpy as np
from arbor import _kernels as k

n, draws, fill_n, fill_draws, repeat = map(int, sys.argv[1:6])
rng = np.random.default_rng(0)
m = n - 1
u, v = rng.random((draws, m)), rng.random((draws, m))
fu, fv = rng.random((fill_draws, fill_n - 1)), rng.random((fill_draws, fill_n - 1))
cases = {
    "yule_histories": (k.yule_histories, (u,)),
    "depth_histories": (k.depth_histories, (u,)),
    "beta_histories": (k.beta_histories, (u, v)),
    "yule_neg_log_q": (k.yule_neg_log_q, (fu,)),
    "remy_neg_log_q": (k.remy_neg_log_q, (fu, fv)),
}
out = {"numba": k.USE_NUMBA}
for name, (f, args) in cases.items():
    f(*(a[:2] for a in args))  # compile outside the timing
    best = float("inf")
    for _ in range(repeat):
        t0 = time.perf_counter()
        f(*args)
        best = min(best, time.perf_counter() - t0)
    out[name] = best
print(json.dumps(out))
"""


def run(disable: bool, args) -> dict:
    env = dict(os.environ, ARBOR_DISABLE_NUMBA="1" if disable else "0")
    argv = [sys.executable, "-c", WORKER, str(args.n), str(args.draws), str(args.fill_n), str(args.fill_draws), str(args.repeat)]
    res = subprocess.run(argv, env=env, capture_output=True, text=True, check=True)
    return json.loads(res.stdout)


def main(argv=None):
    p = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    p.add_argument("--n", type=int, default=32, help="leaves per sampled history")
    p.add_argument("--draws", type=int, default=2000)
    p.add_argument("--fill-n", type=int, default=1024, help="leaves per tree for the -ln Q kernels")
    p.add_argument("--fill-draws", type=int, default=20)
    p.add_argument("--repeat", type=int, default=3)
    args = p.parse_args(argv)

    fast, slow = run(False, args), run(True, args)
    if not fast["numba"]:
        print("numba unavailable; both runs used the pure kernels")
    print(f"{'kernel':<18}{'numba [s]':>12}{'python [s]':>12}{'speedup':>10}")
    for name in fast:
        if name == "numba":
            continue
        print(f"{name:<18}{fast[name]:>12.4f}{slow[name]:>12.4f}{slow[name] / fast[name]:>10.1f}")


if __name__ == "__main__":
    main()
