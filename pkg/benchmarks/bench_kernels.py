"""Compare the pure-Python and Cython matrix kernels.

Run from the repository root after ``pip install -e . --no-build-isolation``:

    python3 benchmarks/bench_kernels.py [--repeat 5]

Part 1 times each kernel directly on random flat matrices. Part 2 times an
end-to-end exhaustive verification in a subprocess per backend, with
SEMIDERIV_PURE_PYTHON selecting the fallback.
"""

import argparse
import os
import random
import subprocess
import sys
import timeit

from semideriv import kernels
from semideriv.semiring import NEG_INF


def _data(kind, n, rng):
    if kind == "maxmin":
        return tuple(rng.randint(0, 3) for _ in range(n * n))
    if kind == "maxplus":
        return tuple(NEG_INF if rng.random() < 0.2 else rng.randint(-50, 50) for _ in range(n * n))
    return tuple(rng.randint(0, 9) for _ in range(n * n))


def _call(mod, kind, a, b, n):
    if kind == "maxmin":
        return lambda: mod.matmul_maxmin(a, b, n)
    if kind == "maxplus":
        return lambda: mod.matmul_maxplus(a, b, n, NEG_INF)
    return lambda: mod.matmul_sumprod(a, b, n)


def bench_kernels(repeat: int) -> None:
    mods = kernels.backends()
    if "cython" not in mods:
        print("compiled kernels not built; only the Python fallback is available")
    rng = random.Random(0)
    print(f"{'kernel':<10}{'n':>4}" + "".join(f"{name + ' us':>14}" for name in mods) + f"{'speedup':>10}")
    for kind in ("maxmin", "maxplus", "sumprod"):
        for n in (3, 4, 6, 8):
            a, b = _data(kind, n, rng), _data(kind, n, rng)
            number = 2000
            times = {}
            for name, mod in mods.items():
                t = min(timeit.repeat(_call(mod, kind, a, b, n), number=number, repeat=repeat))
                times[name] = t / number * 1e6
            speed = times["python"] / times["cython"] if "cython" in times else float("nan")
            print(f"{kind:<10}{n:>4}" + "".join(f"{times[k]:>14.2f}" for k in mods) + f"{speed:>9.1f}x")


END_TO_END = (
    "import time; from semideriv.derivations import example7, verify_derivation;"
    "from semideriv.semiring import BOOL; from semideriv.kernels import BACKEND;"
    "t = time.perf_counter(); r = verify_derivation(example7(4), BOOL);"
    "print(BACKEND, r.passed, round(time.perf_counter() - t, 3))"
)


def bench_end_to_end() -> None:
    print("\nexhaustive verify of example7 over bool, n=4 (backend, passed, seconds):")
    for pure in ("1", "0"):
        env = dict(os.environ, SEMIDERIV_PURE_PYTHON=pure)
        out = subprocess.run([sys.executable, "-c", END_TO_END], env=env, capture_output=True, text=True)
        print("  " + (out.stdout.strip() or out.stderr.strip()))


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=5)
    args = ap.parse_args()
    bench_kernels(args.repeat)
    bench_end_to_end()


if __name__ == "__main__":
    main()
