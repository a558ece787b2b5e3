"""Time the compiled kernels against the pure-Python fallback.

    python3 benchmarks/bench_kernels.py [--repeat 5] [--batch 20000]

Prints one row per kernel with the best-of-repeat time for each backend and
the speedup.  Without the compiled extension only the fallback is timed.
"""
import argparse
import importlib
import timeit

import numpy as np

from hollowkit import _kernels_py as pure

try:
    compiled = importlib.import_module("hollowkit._kernels")
except ImportError:
    compiled = None


def nondefinite_batch(count, rng):
    lam = rng.standard_normal((count, 3))
    lam[:, 2] = -np.sign(lam[:, 0]) * np.abs(lam[:, 2])
    Q, R = np.linalg.qr(rng.standard_normal((count, 3, 3)))
    Q = Q * np.sign(np.diagonal(R, axis1=1, axis2=2))[:, None, :]
    return np.einsum("kij,kj,klj->kil", Q, lam, Q)


def cases(batch, rng):
    S = nondefinite_batch(batch, rng)
    few = S[: max(1, batch // 20)]
    L2, M2 = rng.standard_normal((2, 2)), rng.standard_normal((2, 2))
    L3, M3 = rng.standard_normal((3, 3)), rng.standard_normal((3, 3))

    def per_entry(fn):
        def run():
            for A in few:
                fn(A[0, 0], A[0, 1], A[0, 2], A[1, 1], A[1, 2], A[2, 2], 1e-8, 1e-12)
        return run

    # each case maps a kernel module to a zero-argument callable
    return {
        f"find_x1 x{len(few)}": lambda m: per_entry(m.find_x1),
        f"zero11_angles x{len(few)}": lambda m: per_entry(m.zero11_angles),
        f"zero11_batch x{batch}": lambda m: (lambda: m.zero11_batch(S)),
        "grid_o2 6284 steps": lambda m: (lambda: m.grid_o2(L2, M2, [0, 1], [0], 6284)),
        "grid_o3 64x33x64": lambda m: (lambda: m.grid_o3(L3, M3, [0, 1, 2], [0], 64, 33, 64)),
    }


def best(fn, repeat):
    return min(timeit.repeat(fn, number=1, repeat=repeat))


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=5)
    ap.add_argument("--batch", type=int, default=20_000)
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args()
    rng = np.random.default_rng(args.seed)
    print(f"{'kernel':<26}{'python [s]':>12}{'compiled [s]':>14}{'speedup':>10}")
    for name, make in cases(args.batch, rng).items():
        t_py = best(make(pure), args.repeat)
        t_c = best(make(compiled), args.repeat) if compiled else None
        if t_c is None:
            print(f"{name:<26}{t_py:>12.4f}{'n/a':>14}{'':>10}")
        else:
            print(f"{name:<26}{t_py:>12.4f}{t_c:>14.4f}{t_py / t_c:>9.1f}x")


if __name__ == "__main__":
    main()
