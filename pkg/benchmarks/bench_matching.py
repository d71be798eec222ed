"""Time the compiled and pure-Python matching kernels on the same random graphs.

    python3 benchmarks/bench_matching.py [--sizes 50 200 800] [--density 0.05] [--repeat 5]

Also times a full HZ solve in a subprocess with MATCHMARKET_PURE_PYTHON=1 so the
end-to-end effect of the kernel is visible.
"""
import argparse
import os
import random
import subprocess
import sys
import timeit

from matchmarket import _pymatch

try:
    from matchmarket import _cmatch
except ImportError:
    _cmatch = None


def random_csr(rng: random.Random, n: int, density: float):
    indptr, indices = [0], []
    for _ in range(n):
        row = sorted(j for j in range(n) if rng.random() < density) or [rng.randrange(n)]
        indices.extend(row)
        indptr.append(len(indices))
    return indptr, indices


SOLVE_SNIPPET = """
import random, time
from fractions import Fraction
from matchmarket import HZInstance, solve_hz
from matchmarket.graph import BACKEND
rng = random.Random(7)
n = {n}
likes = [[int(rng.random() < 0.3) or int(i == j) for j in range(n)] for i in range(n)]
inst = HZInstance(likes, [Fraction(rng.randint(1, 8), rng.randint(1, 4)) for _ in range(n)])
start = time.perf_counter()
solve_hz(inst)
print(BACKEND, time.perf_counter() - start)
"""


def time_solve(n: int, pure: bool) -> str:
    env = dict(os.environ)
    if pure:
        env["MATCHMARKET_PURE_PYTHON"] = "1"
    else:
        env.pop("MATCHMARKET_PURE_PYTHON", None)
    out = subprocess.run(
        [sys.executable, "-c", SOLVE_SNIPPET.format(n=n)], env=env, capture_output=True, text=True, check=True
    ).stdout.split()
    return f"{out[0]:>7} {float(out[1]) * 1e3:9.1f} ms"


def main(argv=None) -> None:
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--sizes", type=int, nargs="+", default=[50, 200, 800])
    parser.add_argument("--density", type=float, default=0.05)
    parser.add_argument("--repeat", type=int, default=5)
    parser.add_argument("--solve-size", type=int, default=30)
    args = parser.parse_args(argv)

    if _cmatch is None:
        print("compiled kernel not built; only the Python kernel is timed")
    rng = random.Random(1)
    print(f"{'n':>6} {'python ms':>10} {'cython ms':>10} {'speedup':>8}")
    for n in args.sizes:
        indptr, indices = random_csr(rng, n, args.density)
        py = min(timeit.repeat(lambda: _pymatch.max_matching_csr(n, n, indptr, indices), number=1, repeat=args.repeat))
        if _cmatch is None:
            print(f"{n:>6} {py * 1e3:10.2f} {'-':>10} {'-':>8}")
            continue
        assert _cmatch.max_matching_csr(n, n, indptr, indices) == _pymatch.max_matching_csr(n, n, indptr, indices)
        cy = min(timeit.repeat(lambda: _cmatch.max_matching_csr(n, n, indptr, indices), number=1, repeat=args.repeat))
        print(f"{n:>6} {py * 1e3:10.2f} {cy * 1e3:10.2f} {py / cy:7.1f}x")

    print(f"\nfull HZ solve, n={args.solve_size}")
    print(" ", time_solve(args.solve_size, pure=True))
    print(" ", time_solve(args.solve_size, pure=False))


if __name__ == "__main__":
    main()
