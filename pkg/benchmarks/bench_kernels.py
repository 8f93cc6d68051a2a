"""Compare the compiled and pure-Python kernels on the exhaustive workloads.

    python3 benchmarks/bench_kernels.py [--repeat 3]
"""

import argparse
import random
import timeit

from caterpillars import _kernels
from caterpillars.permutations import enumerate_av132, phi
from caterpillars.trees import LEAF, Tree


def _random_tree(rng, n):
    # random sequence of merges over a row of leaves
    row = [LEAF] * n
    while len(row) > 1:
        i = rng.randrange(len(row) - 1)
        row[i:i + 2] = [Tree(row[i], row[i + 1])]
    return row[0]


def workloads(av11, perms):
    return {
        "gamma_histogram(12)": lambda b: b.gamma_histogram(12),
        "rtilde_summary over Av_11(132)": lambda b: [b.rtilde_summary(p) for p in av11],
        "contains_132 on 200 avoiders of size 2000": lambda b: [b.contains_132(p) for p in perms],
    }


def main():
    parser = argparse.ArgumentParser()
    parser.add_argument("--repeat", type=int, default=3)
    args = parser.parse_args()

    backends = {"python": _kernels.python_backend}
    if _kernels.compiled_backend is not None:
        backends["cython"] = _kernels.compiled_backend
    else:
        print("compiled extension not built; timing the Python kernels only")

    av11 = [tuple(p) for p in enumerate_av132(11)]
    # 132-avoiders force a full scan; random permutations exit almost at once
    rng = random.Random(0)
    perms = [phi(_random_tree(rng, 2001)) for _ in range(200)]

    print(f"{'workload':45s}" + "".join(f"{name:>12s}" for name in backends) + f"{'speedup':>10s}")
    for label, job in workloads(av11, perms).items():
        times = {}
        for name, backend in backends.items():
            times[name] = min(timeit.repeat(lambda: job(backend), number=1, repeat=args.repeat))
        row = f"{label:45s}" + "".join(f"{t:11.3f}s" for t in times.values())
        if "cython" in times:
            row += f"{times['python'] / times['cython']:9.1f}x"
        print(row)


if __name__ == "__main__":
    main()
