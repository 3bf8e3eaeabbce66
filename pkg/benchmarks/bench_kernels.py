"""Benchmark the numba kernels against the pure-numpy fallback.

Run:  python benchmarks/bench_kernels.py [--repeat 3]

Uses kernels.IMPLS directly, so one process times both backends; the numba
column includes a warmup call so JIT compilation is not measured.
"""

import argparse
import math
import time

import numpy as np

from hurwitzlab import kernels
from hurwitzlab.quadfield import AlphaParam
from hurwitzlab.random_model import model_table


def _timeit(fn, repeat):
    best = math.inf
    for _ in range(repeat):
        t0 = time.perf_counter()
        out = fn()
        best = min(best, time.perf_counter() - t0)
    return best, out


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--repeat", type=int, default=3)
    args = ap.parse_args()

    alpha = AlphaParam.make(4, 2, 1, 2)
    af = float(alpha)
    tab = model_table(alpha, 64)
    weights = tab.weights(0.8, alpha)

    ts = (np.arange(40_000) + 0.5) * 0.05
    m_em = math.ceil(ts[-1] / math.pi) + 10
    n_em = np.arange(m_em) + af
    logs_em, rads_em = np.log(n_em), n_em ** -0.8
    bof = np.array([1 / 6 / 2, -1 / 30 / 24, 1 / 42 / 720])
    n_tr = np.arange(65) + af
    logs_tr, rads_tr = np.log(n_tr), n_tr ** -0.8
    xs = np.linspace(-50, 50, 20_001)
    xs = xs[np.abs(xs - np.round(xs)) > 1e-9]

    cases = {
        "zeta_em_nodes (40k nodes)": lambda impl: impl["zeta_em_nodes"](
            ts, 0.8, af, logs_em, rads_em, bof),
        "zeta_trunc_nodes (40k x 65)": lambda impl: impl["zeta_trunc_nodes"](
            ts, logs_tr, rads_tr),
        "model_samples (1e5, N=64)": lambda impl: impl["model_samples"](
            42, tab.lam_ids, tab.indptr, tab.cols, tab.vals, weights, 100_000),
        "vaaler_h (2e4 pts, M0=1e4)": lambda impl: impl["vaaler_h"](xs, 10_000),
    }

    print(f"backends available: {sorted(kernels.IMPLS)}")
    header = f"{'kernel':34s}" + "".join(f"{b:>12s}" for b in sorted(kernels.IMPLS))
    print(header)
    print("-" * len(header))
    for name, runner in cases.items():
        row = f"{name:34s}"
        ref = None
        for backend in sorted(kernels.IMPLS):
            impl = kernels.IMPLS[backend]
            runner(impl)  # warmup (JIT compile / cache touch)
            dt, out = _timeit(lambda: runner(impl), args.repeat)
            row += f"{dt * 1e3:10.1f}ms"
            if ref is None:
                ref = out
            else:
                err = float(np.max(np.abs(np.asarray(out) - np.asarray(ref))))
                assert err < 1e-9, f"{name}: backends disagree by {err}"
        print(row)
    print("backend agreement verified to 1e-9")


if __name__ == "__main__":
    main()
