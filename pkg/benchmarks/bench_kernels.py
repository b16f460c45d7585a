"""Benchmark the JIT kernels against their pure-numpy fallbacks.

Two layers:

* micro: each kernel pair runs on synthetic workloads shaped like the
  n=4 ray search (packed uint64 tight sets, int64 eliminations), after a
  cross-check that both implementations return identical results;
* end-to-end: extreme-ray enumeration in a fresh subprocess per backend,
  selected the same way users select it, via MIPATTERNS_NO_NUMBA.

Usage: python benchmarks/bench_kernels.py [--repeat 5] [--full]
"""

import argparse
import os
import subprocess
import sys
import time

import numpy as np

sys.path.insert(0, os.path.join(os.path.dirname(__file__), "..", "src"))

from mipatterns import kernels  # noqa: E402


def best_of(fn, repeat):
    times = []
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn()
        times.append(time.perf_counter() - t0)
    return min(times)


def synthetic_tight(rng, rows, nbits, density=0.45):
    masks = []
    for _ in range(rows):
        bits = rng.random(nbits) < density
        m = 0
        for pos in np.nonzero(bits)[0]:
            m |= 1 << int(pos)
        masks.append(m)
    return kernels.pack_masks(masks, nbits)


def micro_cases(rng):
    # adjacency scan shaped like the n=4 SA+SSA cone mid-run
    tight = synthetic_tight(rng, 900, 135)
    order = rng.permutation(900)
    pos, neg = np.sort(order[:450]), np.sort(order[450:])
    yield (
        "adjacency_pairs",
        "900 rays x 135 bits",
        lambda: kernels.adjacency_pairs_numpy(tight, pos, neg, 12),
        (lambda: kernels.adjacency_pairs_numba(tight, pos, neg, 12))
        if kernels.HAVE_NUMBA else None,
    )

    packed = synthetic_tight(rng, 30_000, 270)
    yield (
        "popcount_rows",
        "30000 rows x 270 bits",
        lambda: kernels.popcount_rows_numpy(packed),
        (lambda: kernels.popcount_rows_numba(packed))
        if kernels.HAVE_NUMBA else None,
    )

    a = synthetic_tight(rng, 400, 270)
    b = synthetic_tight(rng, 400, 270)
    yield (
        "and_product",
        "400 x 400 rows x 270 bits",
        lambda: kernels.and_product_numpy(a, b),
        (lambda: kernels.and_product_numba(a, b)) if kernels.HAVE_NUMBA else None,
    )

    # int64 kernel extraction shaped like n=4 brute-force cross checks
    mat = rng.integers(-2, 3, size=(60, 15)).astype(np.int64)
    combos = np.array(
        [np.sort(rng.choice(60, size=14, replace=False)) for _ in range(2000)],
        dtype=np.int64,
    )
    yield (
        "kernel_vectors_batch",
        "2000 combos of 14x15",
        lambda: kernels.kernel_vectors_batch_numpy(mat, combos),
        (lambda: kernels.kernel_vectors_batch_numba(mat, combos))
        if kernels.HAVE_NUMBA else None,
    )


def check_agreement(name, got_np, got_nb):
    if isinstance(got_np, tuple):
        same = all(np.array_equal(x, y) for x, y in zip(got_np, got_nb))
    else:
        same = np.array_equal(got_np, got_nb)
    if not same:
        raise SystemExit(f"{name}: backends disagree, refusing to time them")


def run_micro(repeat):
    rng = np.random.default_rng(7)
    rows = []
    for name, size, numpy_fn, numba_fn in micro_cases(rng):
        if numba_fn is not None:
            check_agreement(name, numpy_fn(), numba_fn())
            numba_fn()  # burn the JIT compile before timing
        t_np = best_of(numpy_fn, repeat)
        t_nb = best_of(numba_fn, repeat) if numba_fn is not None else None
        rows.append((name, size, t_np, t_nb))
    return rows


def run_end_to_end(n, families, repeat):
    """Time `cone rays --force-recompute` in a subprocess per backend."""
    results = {}
    for backend, extra_env in (("numpy", {"MIPATTERNS_NO_NUMBA": "1"}),
                               ("numba", {})):
        env = {**os.environ, **extra_env}
        env.pop("MIPATTERNS_NO_NUMBA", None)
        env.update(extra_env)
        argv = [
            sys.executable, "-m", "mipatterns.cli", "cone", "rays",
            "--n", str(n), "--ineqs", families, "--quiet",
            "--force-recompute", "--out", os.devnull,
        ]
        subprocess.run(argv, env=env, check=True)  # warm the JIT cache
        times = []
        for _ in range(repeat):
            t0 = time.perf_counter()
            subprocess.run(argv, env=env, check=True)
            times.append(time.perf_counter() - t0)
        results[backend] = min(times)
    return results


def fmt(seconds):
    return "      -" if seconds is None else f"{seconds * 1e3:9.2f}ms"


def main():
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--repeat", type=int, default=5)
    parser.add_argument("--full", action="store_true",
                        help="include the n=4 end-to-end ray run")
    args = parser.parse_args()

    print(f"selected backend: {kernels.BACKEND}")
    if not kernels.HAVE_NUMBA:
        print("numba unavailable or disabled; timing the numpy path only")

    header = f"{'kernel':24} {'workload':28} {'numpy':>11} {'numba':>11} {'speedup':>8}"
    print("\nmicro kernels (best of %d)" % args.repeat)
    print(header)
    for name, size, t_np, t_nb in run_micro(args.repeat):
        ratio = "" if t_nb is None else f"{t_np / t_nb:7.1f}x"
        print(f"{name:24} {size:28} {fmt(t_np)} {fmt(t_nb)} {ratio:>8}")

    runs = [(3, "sa,ssa")]
    if args.full:
        runs.append((4, "sa,ssa"))
    print("\nend-to-end extreme rays (subprocess per backend, best of %d)"
          % args.repeat)
    print(f"{'cone':24} {'numpy':>11} {'numba':>11} {'speedup':>8}")
    for n, families in runs:
        res = run_end_to_end(n, families, args.repeat)
        ratio = f"{res['numpy'] / res['numba']:7.1f}x"
        print(f"n={n} {families:20} {fmt(res['numpy'])} {fmt(res['numba'])} {ratio:>8}")


if __name__ == "__main__":
    main()
