"""Benchmark the lattice kernels against the exact Fraction code path.

Times two hot loops on both backends:

* the orbit scan behind ``empirical_hitting`` (distances ``d(f^n(w), v)``
  for ``n = 1..N``), compared with iterating the Zadeh extension in
  ``Fraction`` arithmetic;
* the warp-grid brute force used to cross-check the Skorokhod solver.

Every timed result is compared for exact equality before it is reported.

    python3 benchmarks/bench_kernels.py [--steps 10000] [--repeat 3] [--seed 0]
"""

import argparse
import random
import time
from fractions import Fraction

from fuzzdyn import CIRCLE, UNIT_INTERVAL, d_infty, d_sendo, d_skorokhod, rotation, tent, zadeh_extend
from fuzzdyn import _accel
from fuzzdyn.generate import random_fuzzy
from fuzzdyn.lattice import orbit_distances, skorokhod_grid_oracle

METRICS = {"infty": d_infty, "skorokhod": d_skorokhod, "sendo": d_sendo}


def best_of(repeat, fn):
    best, out = float("inf"), None
    for _ in range(repeat):
        start = time.perf_counter()
        out = fn()
        best = min(best, time.perf_counter() - start)
    return best, out


def fraction_orbit(f, w, v, steps, kind):
    metric, cur, out = METRICS[kind], w, []
    for _ in range(steps):
        cur = zadeh_extend(f, cur)
        out.append(metric(cur, v))
    return out


def bench_orbits(args, backends):
    rng = random.Random(args.seed)
    cases = [
        ("tent", tent(), random_fuzzy(rng, UNIT_INTERVAL), random_fuzzy(rng, UNIT_INTERVAL)),
        ("rotation 37/997", rotation(Fraction(37, 997)), random_fuzzy(rng, CIRCLE), random_fuzzy(rng, CIRCLE)),
    ]
    print(f"orbit scan, N = {args.steps}")
    print(f"{'map':<18}{'metric':<11}" + "".join(f"{b:>12}" for b in backends) + f"{'fraction':>12}")
    for name, f, w, v in cases:
        for kind in METRICS:
            # warm-up compiles the numba kernels
            for b in backends:
                orbit_distances(f, w, v, 8, kind, backend=b)
            row, results = [], []
            for b in backends:
                t, out = best_of(args.repeat, lambda: orbit_distances(f, w, v, args.steps, kind, backend=b))
                row.append(t)
                results.append(out)
            # the Fraction path is slow, so it runs a prefix and is scaled up
            prefix = min(args.steps, args.fraction_steps)
            t, exact = best_of(1, lambda: fraction_orbit(f, w, v, prefix, kind))
            row.append(t * args.steps / prefix)
            assert all(r[:prefix] == exact for r in results), "kernel disagrees with Fraction code"
            assert all(r == results[0] for r in results), "backends disagree"
            print(f"{name:<18}{kind:<11}" + "".join(f"{x * 1e3:>10.2f}ms" for x in row))


def bench_oracle(args, backends):
    rng = random.Random(args.seed + 1)
    pairs = [
        (random_fuzzy(rng, level_denominators=(4,), max_levels=4), random_fuzzy(rng, level_denominators=(4,), max_levels=4))
        for _ in range(args.oracle_pairs)
    ]
    print(f"\nSkorokhod grid oracle, resolution 1/32, {len(pairs)} pairs")
    for b in backends:
        skorokhod_grid_oracle(*pairs[0], 32, backend=b)
        t, out = best_of(args.repeat, lambda: [skorokhod_grid_oracle(u, v, 32, backend=b) for u, v in pairs])
        assert all(d_skorokhod(u, v) <= o for (u, v), o in zip(pairs, out))
        print(f"  {b:<8}{t * 1e3:>10.2f}ms")
    t, _ = best_of(args.repeat, lambda: [d_skorokhod(u, v) for u, v in pairs])
    print(f"  {'dp':<8}{t * 1e3:>10.2f}ms  (exact alignment solver, for scale)")


def main():
    p = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    p.add_argument("--steps", type=int, default=10_000)
    p.add_argument("--fraction-steps", type=int, default=500, help="orbit prefix timed in Fraction arithmetic")
    p.add_argument("--oracle-pairs", type=int, default=200)
    p.add_argument("--repeat", type=int, default=3)
    p.add_argument("--seed", type=int, default=0)
    args = p.parse_args()
    backends = ["numba", "numpy"] if _accel.numba is not None else ["numpy"]
    print(f"default backend: {_accel.BACKEND}")
    bench_orbits(args, backends)
    bench_oracle(args, backends)


if __name__ == "__main__":
    main()
