"""Time the geometry kernels on batches of random inputs.

Default: time the currently active backend. With --compare, re-run this
script in subprocesses with HADPROX_DISABLE_NUMBA toggled and print both
columns side by side.

Usage: python benchmarks/bench_kernels.py [--repeat N] [--batch N] [--compare]
"""

import argparse
import json
import os
import subprocess
import sys
import timeit

import numpy as np


def make_cases(batch: int, rng: np.random.Generator) -> dict:
    from hadprox.kernels import hyperboloid as hyp
    from hadprox.kernels import spd

    n = 5
    hp_pts = []
    for _ in range(batch):
        z = rng.normal(size=n)
        p = np.concatenate([[np.sqrt(1.0 + z @ z)], z])
        v = rng.normal(size=n + 1)
        v = hyp.project_tangent(p, v)
        q = hyp.exp(p, v)
        hp_pts.append((p, q, v))

    spd_pts = []
    for _ in range(batch):
        a = rng.normal(size=(n, n))
        p = a @ a.T + n * np.eye(n)
        b = rng.normal(size=(n, n))
        v = 0.5 * (b + b.T)
        q = spd.exp(p, 0.1 * v)
        spd_pts.append((p, q, v))

    return {
        "hyperboloid dist": lambda: [hyp.dist(p, q) for p, q, _ in hp_pts],
        "hyperboloid exp": lambda: [hyp.exp(p, v) for p, _, v in hp_pts],
        "hyperboloid log": lambda: [hyp.log(p, q) for p, q, _ in hp_pts],
        "hyperboloid transport": lambda: [hyp.transport(p, q, v) for p, q, v in hp_pts],
        "spd dist": lambda: [spd.dist(p, q) for p, q, _ in spd_pts],
        "spd exp": lambda: [spd.exp(p, 0.1 * v) for p, _, v in spd_pts],
        "spd log": lambda: [spd.log(p, q) for p, q, _ in spd_pts],
        "spd transport": lambda: [spd.transport(p, q, v) for p, q, v in spd_pts],
    }


def run_local(repeat: int, batch: int) -> dict:
    from hadprox.kernels import warmup

    backend = warmup()
    cases = make_cases(batch, np.random.default_rng(0))
    timings = {}
    for name, fn in cases.items():
        best = min(timeit.repeat(fn, number=1, repeat=repeat))
        timings[name] = best / batch
    return {"backend": backend, "per_call_s": timings}


def run_subprocess(disable_numba: bool, repeat: int, batch: int) -> dict:
    env = dict(os.environ)
    env["HADPROX_DISABLE_NUMBA"] = "1" if disable_numba else "0"
    out = subprocess.run(
        [sys.executable, os.path.abspath(__file__), "--json",
         "--repeat", str(repeat), "--batch", str(batch)],
        env=env,
        capture_output=True,
        text=True,
        check=True,
    )
    return json.loads(out.stdout)


def main() -> int:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--repeat", type=int, default=5, help="timing repeats (best taken)")
    parser.add_argument("--batch", type=int, default=2000, help="calls per timed batch")
    parser.add_argument("--compare", action="store_true", help="time numba and numpy backends")
    parser.add_argument("--json", action="store_true", help="machine-readable output")
    args = parser.parse_args()

    if args.compare:
        fast = run_subprocess(False, args.repeat, args.batch)
        slow = run_subprocess(True, args.repeat, args.batch)
        print(f"{'kernel':24s} {fast['backend']:>12s} {slow['backend']:>12s} {'speedup':>9s}")
        for name in fast["per_call_s"]:
            a = fast["per_call_s"][name]
            b = slow["per_call_s"][name]
            print(f"{name:24s} {a * 1e6:9.2f} us {b * 1e6:9.2f} us {b / a:8.1f}x")
        return 0

    result = run_local(args.repeat, args.batch)
    if args.json:
        json.dump(result, sys.stdout)
        print()
        return 0
    print(f"backend: {result['backend']}")
    for name, t in result["per_call_s"].items():
        print(f"{name:24s} {t * 1e6:9.2f} us")
    return 0


if __name__ == "__main__":
    sys.exit(main())
