"""Benchmark the compiled jet kernel against the numpy fallback.

Runs the same measurements in two subprocesses, one with BICONSERVE_PURE=1,
and prints a side-by-side table: raw truncated-product throughput per order
plus a full curvature-packet sweep over the four-curvature example chart.

    python benchmarks/bench_jets.py
"""

import json
import os
import pathlib
import subprocess
import sys
import time

ROOT = pathlib.Path(__file__).resolve().parent.parent


def measure() -> dict:
    import numpy as np

    from biconserve.jets import Jet, JetSpace, backend_name
    from biconserve.catalog import FamilySpec, build
    from biconserve.immersion import packet

    out = {"backend": backend_name()}
    rng = np.random.default_rng(0)
    space = JetSpace.get(4)
    for order in (2, 3, 4):
        n = space.ncoef[order]
        a = Jet(space, order, rng.normal(size=n))
        b = Jet(space, order, rng.normal(size=n))
        reps = 20000
        t0 = time.perf_counter()
        for _ in range(reps):
            a * b
        dt = time.perf_counter() - t0
        out[f"mul_order{order}_us"] = 1e6 * dt / reps

    chart = build(FamilySpec("ex41", profiles={"solve_psi": True, "c": 1.0}))
    pts = [(s, 0.3, -0.2, 0.4) for s in np.linspace(0.7, 1.3, 50)]
    t0 = time.perf_counter()
    for p in pts:
        packet(chart, p)
    out["packet_ms"] = 1e3 * (time.perf_counter() - t0) / len(pts)
    return out


def run_mode(pure: bool) -> dict:
    env = dict(os.environ)
    env["PYTHONPATH"] = str(ROOT / "src") + os.pathsep + env.get("PYTHONPATH", "")
    if pure:
        env["BICONSERVE_PURE"] = "1"
    else:
        env.pop("BICONSERVE_PURE", None)
    code = "import json, benchmarks.bench_jets as b; print(json.dumps(b.measure()))"
    proc = subprocess.run([sys.executable, "-c", code], env=env, cwd=ROOT,
                          capture_output=True, text=True, check=True)
    return json.loads(proc.stdout.strip().splitlines()[-1])


def main():
    rows = [run_mode(pure=False), run_mode(pure=True)]
    keys = ["mul_order2_us", "mul_order3_us", "mul_order4_us", "packet_ms"]
    header = f"{'backend':<10}" + "".join(f"{k:>16}" for k in keys)
    print(header)
    print("-" * len(header))
    for row in rows:
        print(f"{row['backend']:<10}" + "".join(f"{row[k]:>16.3f}" for k in keys))
    if rows[0]["backend"] == rows[1]["backend"]:
        print("note: compiled kernel not built; both rows use the fallback "
              "(run `python setup.py build_ext --inplace`)")
    else:
        speedup = rows[1]["packet_ms"] / rows[0]["packet_ms"]
        print(f"packet speedup from the compiled kernel: {speedup:.1f}x")


if __name__ == "__main__":
    main()
