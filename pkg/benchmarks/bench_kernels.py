"""Time the compiled and pure-Python kernels on the same inputs.

    python3 benchmarks/bench_kernels.py [--sizes 200 500 1000] [--repeat 3]
"""
import argparse
import time

import numpy as np

from wardclust import _pykernels, kernels
from wardclust.core import DataMatrix, LinkageMethod


def best_of(fn, repeat):
    times = []
    for _ in range(repeat):
        start = time.perf_counter()
        fn()
        times.append(time.perf_counter() - start)
    return min(times)


def main(argv=None):
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--sizes", type=int, nargs="+", default=[100, 300, 1000])
    parser.add_argument("--repeat", type=int, default=3)
    parser.add_argument("--seed", type=int, default=0)
    args = parser.parse_args(argv)

    backends = {"python": _pykernels}
    if "compiled" in kernels.BACKENDS:
        backends["compiled"] = kernels.BACKENDS["compiled"]
    else:
        print("compiled kernels not built; timing the python backend only")

    code = LinkageMethod.WARD_D2.code
    print(f"{'kernel':8} {'n':>6} " + " ".join(f"{b:>10}" for b in backends) + "   speedup")
    for n in args.sizes:
        d = DataMatrix(np.random.default_rng(args.seed).uniform(size=(n, 4))).dissimilarities().entries
        w = np.ones(n)
        for kernel in ("naive", "nnchain"):
            t = {name: best_of(lambda: getattr(mod, kernel)(d, n, code, w), args.repeat)
                 for name, mod in backends.items()}
            ratio = f"{t['python'] / t['compiled']:8.1f}x" if "compiled" in t else "       -"
            print(f"{kernel:8} {n:6d} " + " ".join(f"{v:9.4f}s" for v in t.values()) + "  " + ratio)


if __name__ == "__main__":
    main()
