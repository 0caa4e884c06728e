"""Time the compiled bitset kernels against the pure-Python reference.

The backend is fixed at import time, so each side runs in its own
subprocess (CYC_FORCE_PURE=1 selects the fallback). Run from the repo
root:

    python3 benchmarks/compare_kernels.py
    python3 benchmarks/compare_kernels.py --repeat 5 --json
"""

from __future__ import annotations

import argparse
import json
import os
import subprocess
import sys
import time


def _workloads():
    from cyclab.decomp import exact_treewidth
    from cyclab.dp import solve_pac
    from cyclab.generators import connected_graphs, grid, petersen, random_connected
    from cyclab.oracle import OracleBudget, cyclability, is_yes_pac

    budget = OracleBudget(max_vertices=64)
    pet = petersen()
    g34, _ = grid(3, 4)
    td34 = exact_treewidth(g34)[1]
    rnd = random_connected(11, 20, seed=7)

    def bench_find_cycle():
        assert cyclability(pet, budget) == 9

    def bench_subset_scan():
        assert is_yes_pac(rnd, rnd.vertices, 3, budget) in (True, False)

    def bench_dp_tables():
        assert solve_pac(g34, g34.vertices, 3, td34, width_cap=8) is True

    def bench_canonical():
        assert len(connected_graphs(7)) == 853

    return [
        ("find_cycle (petersen cyclability)", bench_find_cycle),
        ("yes_pac_scan (n=11 all-vertex PAC)", bench_subset_scan),
        ("dp bitset tables (3x4 grid, k=3)", bench_dp_tables),
        ("canonical_form (n=7 census)", bench_canonical),
    ]


def _run_worker(repeat: int) -> None:
    import cyclab

    times = {}
    for name, fn in _workloads():
        fn()  # warm caches and fail fast outside the timed region
        best = min(_timed(fn) for _ in range(repeat))
        times[name] = best
    print(json.dumps({"backend": cyclab.kernel_backend, "times": times}))


def _timed(fn) -> float:
    t0 = time.perf_counter()
    fn()
    return time.perf_counter() - t0


def _spawn(force_pure: bool, repeat: int) -> dict:
    env = dict(os.environ)
    env.pop("CYC_FORCE_PURE", None)
    if force_pure:
        env["CYC_FORCE_PURE"] = "1"
    out = subprocess.run(
        [sys.executable, os.path.abspath(__file__), "--worker", "--repeat", str(repeat)],
        env=env, capture_output=True, text=True, check=True,
    )
    return json.loads(out.stdout.splitlines()[-1])


def main() -> int:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=3, help="best-of-N timing (default 3)")
    ap.add_argument("--json", action="store_true")
    ap.add_argument("--worker", action="store_true", help=argparse.SUPPRESS)
    args = ap.parse_args()

    if args.worker:
        _run_worker(args.repeat)
        return 0

    compiled = _spawn(False, args.repeat)
    pure = _spawn(True, args.repeat)
    if compiled["backend"] != "compiled":
        print("note: compiled extension unavailable, comparing pure against itself",
              file=sys.stderr)

    rows = []
    for name in compiled["times"]:
        tc, tp = compiled["times"][name], pure["times"][name]
        rows.append({"workload": name, "compiled_s": tc, "pure_s": tp,
                     "speedup": tp / tc if tc > 0 else float("inf")})

    if args.json:
        print(json.dumps({"repeat": args.repeat, "rows": rows}, indent=2))
        return 0

    width = max(len(r["workload"]) for r in rows)
    print(f"{'workload':<{width}}  {'compiled':>10}  {'pure':>10}  {'speedup':>8}")
    for r in rows:
        print(f"{r['workload']:<{width}}  {r['compiled_s']:>9.4f}s  {r['pure_s']:>9.4f}s"
              f"  {r['speedup']:>7.1f}x")
    return 0


if __name__ == "__main__":
    sys.exit(main())
