"""Compare the compiled and pure-Python kernel backends.

Usage: python3 benchmarks/bench_kernels.py [--repeat N]
"""
import argparse
import timeit

import numpy as np

from shaplab import _kernels
from shaplab.problem import ShapInstance
from shaplab.quantum import accept_coefficients, prepare_joint


def cases(rng):
    inst300 = ShapInstance.random(300, rng)
    d = inst300.shift_difference().to_array()
    e = inst300.aligned_difference().to_array()
    yield "shift_weights n=300", "shift_weights", (d, e)

    f = rng.standard_normal(1 << 14)
    yield "fwht m=14", "fwht", (f,)

    for t in (1, 2):
        inst = ShapInstance.random(8, rng)
        psi = np.asarray(prepare_joint(inst, t).amp)
        coef = accept_coefficients(t, max(1, t // 2 + 1))
        yield f"project_accept n=8 t={t}", "project_accept", (psi, 8, t, 3, coef)

    n, k = 300, 150
    s1 = np.sort(rng.choice(n, k, replace=False))
    s2 = np.sort(rng.choice(n, k, replace=False)).astype(np.int64)
    in_s1 = np.zeros(n, dtype=np.uint8)
    in_s1[s1] = 1
    d = rng.integers(0, 2, n).astype(np.uint8)
    e = rng.integers(0, 2, n).astype(np.uint8)
    yield "sampled_estimates n=300 k=150", "sampled_estimates", (d, in_s1, e, s2)


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=200)
    args = ap.parse_args(argv)
    if _kernels.compiled is None:
        print("compiled backend unavailable; timing the python backend only")
    rng = np.random.default_rng(7)
    print(f"{'kernel':34s} {'python us':>12s} {'cython us':>12s} {'speedup':>8s}")
    for label, name, args_ in cases(rng):
        py = timeit.timeit(lambda: getattr(_kernels.python, name)(*args_), number=args.repeat) / args.repeat
        if _kernels.compiled is not None:
            cy = timeit.timeit(lambda: getattr(_kernels.compiled, name)(*args_), number=args.repeat) / args.repeat
            print(f"{label:34s} {py * 1e6:12.1f} {cy * 1e6:12.1f} {py / cy:8.1f}x")
        else:
            print(f"{label:34s} {py * 1e6:12.1f} {'-':>12s} {'-':>8s}")


if __name__ == "__main__":
    main()
