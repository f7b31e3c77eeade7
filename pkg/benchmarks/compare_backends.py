#!/usr/bin/env python3
"""Compare the compiled (numba) and pure-python (numpy) kernel sets.

Each backend runs in its own process: the flag is read once at import and
a process mixing both would re-time JIT compilation instead of the
kernels.  The numpy column is sized to finish in tens of seconds; scale
reps up with --reps for steadier numbers.

Usage:  python3 benchmarks/compare_backends.py [--reps N]
"""

import argparse
import json
import os
import subprocess
import sys
import time

_MICRO_BITS = 1201  # the size of the k = 600 moduli


def _battery(reps: int) -> dict:
    import random

    from etaprime import BACKEND, Modulus, build_modulus
    from etaprime import fermat_eta_test, gk_test, hk_test, pepin_test

    rng = random.Random(9)
    n = build_modulus("h", 600)
    nv = int(n.value)
    xs = [rng.randrange(2, nv) for _ in range(8)]
    res = [n.residue(x) for x in xs]
    out = {"backend": BACKEND, "timings": {}}

    def bench(name, fn, scale=1):
        k = max(1, reps * scale)
        t0 = time.perf_counter()
        for i in range(k):
            fn(i)
        out["timings"][name] = (time.perf_counter() - t0) / k

    a, b = res[0].value, res[1].value
    bench("mul %db" % _MICRO_BITS, lambda i: a * b, 20)
    bench("sqr %db" % _MICRO_BITS, lambda i: a.sqr(), 20)
    bench("divmod %db" % _MICRO_BITS, lambda i: divmod(a * b, n.value), 10)
    bench("fold-reduce %db" % _MICRO_BITS, lambda i: n.reduce(a * b), 20)
    bench("inverse %db" % _MICRO_BITS, lambda i: res[i % 8].inverse())
    gen = Modulus(nv)  # same modulus, generic division path
    bench("generic-reduce %db" % _MICRO_BITS, lambda i: gen.reduce(a * b), 10)

    t0 = time.perf_counter()
    hk_test(200)
    out["timings"]["hk_test k=200 (399 steps)"] = time.perf_counter() - t0
    t0 = time.perf_counter()
    fermat_eta_test(9)
    out["timings"]["eta F_9 (511 steps)"] = time.perf_counter() - t0
    t0 = time.perf_counter()
    pepin_test(11)
    out["timings"]["pepin F_11 (2047 squarings)"] = time.perf_counter() - t0
    t0 = time.perf_counter()
    for k in range(2, 81):
        gk_test(k)
        hk_test(k)
    out["timings"]["g+h sweep k=2..80"] = time.perf_counter() - t0
    return out


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--reps", type=int, default=30, help="micro-bench repetitions")
    ap.add_argument("--child", choices=["numba", "numpy"], help=argparse.SUPPRESS)
    args = ap.parse_args()

    if args.child:
        # warm the kernels so first-call compile/cache load is excluded
        from etaprime import run_test

        run_test("g", 2, "eta")
        run_test("g", 3, "eta")
        json.dump(_battery(args.reps), sys.stdout)
        return

    results = {}
    for backend in ("numba", "numpy"):
        env = dict(os.environ, ETAPRIME_BACKEND=backend)
        reps = args.reps if backend == "numba" else max(1, args.reps // 10)
        p = subprocess.run(
            [sys.executable, os.path.abspath(__file__), "--child", backend,
             "--reps", str(reps)],
            capture_output=True, text=True, env=env,
        )
        if p.returncode != 0:
            sys.stderr.write(p.stderr)
            sys.exit(1)
        results[backend] = json.loads(p.stdout)

    names = list(results["numba"]["timings"])
    width = max(len(s) for s in names)
    print("%-*s  %12s  %12s  %8s" % (width, "operation", "numba", "numpy", "ratio"))
    print("-" * (width + 40))
    for name in names:
        tn = results["numba"]["timings"][name]
        tp = results["numpy"]["timings"][name]
        print(
            "%-*s  %12s  %12s  %7.1fx"
            % (width, name, _fmt(tn), _fmt(tp), tp / tn)
        )


def _fmt(seconds: float) -> str:
    if seconds < 1e-3:
        return "%.1f us" % (seconds * 1e6)
    if seconds < 1.0:
        return "%.2f ms" % (seconds * 1e3)
    return "%.2f s" % seconds


if __name__ == "__main__":
    main()
