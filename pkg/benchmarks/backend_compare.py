"""Compare the compiled kernel backend against the pure-Python fallback.

Runs itself twice as a child process (CIVEC_BACKEND=c and =py), times a
build / full-decode / random-access / sequential-scan mix per codec, and
prints a side-by-side table with speedups. Results are medians of --reps
runs; sizes are deliberately modest so the Python fallback finishes.

Usage:  python3 benchmarks/backend_compare.py [--n 50000] [--reps 3]
"""

import argparse
import json
import os
import statistics
import subprocess
import sys
import time

CODECS = ("gamma", "delta", "dac", "fv", "s9", "rl", "pfd", "pfd_zz")
OPS = ("build", "decode_all", "access", "scan")


def _time(fn, reps):
    samples = []
    for _ in range(reps):
        t0 = time.perf_counter()
        fn()
        samples.append(time.perf_counter() - t0)
    return statistics.median(samples)


def child(n, reps):
    from civec import build, datasets, kernels

    vals = datasets.gen_runs(n, 1 << 20, seed=3, mean_run=8)
    idx = datasets.splitmix_array(17, 2000) % len(vals)
    out = {"backend": kernels.BACKEND, "timings": {}}
    for cid in CODECS:
        vec = build(vals, cid)
        row = {"build": _time(lambda: build(vals, cid), reps),
               "decode_all": _time(vec.decode_all, reps)}

        def probe():
            for i in idx:
                vec.access(int(i))

        def scan():
            _, cur = vec.access(0)
            for _ in cur:
                pass

        row["access"] = _time(probe, reps)
        row["scan"] = _time(scan, reps)
        out["timings"][cid] = row
    json.dump(out, sys.stdout)


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--n", type=int, default=50_000)
    ap.add_argument("--reps", type=int, default=3)
    ap.add_argument("--child", action="store_true", help=argparse.SUPPRESS)
    args = ap.parse_args()

    if args.child:
        child(args.n, args.reps)
        return

    results = {}
    for backend in ("c", "py"):
        env = dict(os.environ, CIVEC_BACKEND=backend)
        proc = subprocess.run(
            [sys.executable, os.path.abspath(__file__), "--child",
             "--n", str(args.n), "--reps", str(args.reps)],
            env=env, capture_output=True, text=True)
        if proc.returncode:
            sys.stderr.write(proc.stderr)
            if backend == "c":
                print("compiled backend unavailable; nothing to compare")
                return
            raise SystemExit(1)
        data = json.loads(proc.stdout)
        assert data["backend"] == backend, data["backend"]
        results[backend] = data["timings"]

    print(f"n={args.n}, reps={args.reps}, median seconds per operation\n")
    print(f"{'codec':8s} {'op':10s} {'compiled':>10s} {'python':>10s}"
          f" {'speedup':>8s}")
    for cid in CODECS:
        for op in OPS:
            tc = results["c"][cid][op]
            tp = results["py"][cid][op]
            print(f"{cid:8s} {op:10s} {tc:10.4f} {tp:10.4f}"
                  f" {tp / tc:7.1f}x")
        print()


if __name__ == "__main__":
    main()
