"""Benchmark the compiled kernels against the pure-python fallback.

Runs the same distillation-rate workload twice: once in this process
(numba path, unless QDISTILL_NO_NUMBA is already set) and once in a
subprocess with QDISTILL_NO_NUMBA=1.  Both paths must return identical
failure counts; the report shows the wall-clock gap.

Usage: python3 benchmarks/bench_kernels.py [--trials N]
"""

import argparse
import json
import os
import subprocess
import sys
import time


WORKLOAD = r"""
import json, os, sys, time
from qdistill import kernels
from qdistill.classical import builtin
from qdistill.css import builtin_css
from qdistill.montecarlo import (DistillationConfig,
                                 estimate_distillation_rate)

trials = int(sys.argv[1])
css = builtin_css("steane")
cfg = DistillationConfig(css=css, code_round1=builtin("rep3"),
                         code_round2=builtin("rep3"))
# Warm-up compiles the kernels outside the timed region.
estimate_distillation_rate(cfg, 0.01, 64, seed=0, threads=1)
t0 = time.perf_counter()
pt = estimate_distillation_rate(cfg, 0.01, trials, seed=3, threads=1)
elapsed = time.perf_counter() - t0
print(json.dumps({"numba": kernels.USE_NUMBA, "trials": trials,
                  "failures": pt.failures, "seconds": elapsed}))
"""


def run(trials: int, force_fallback: bool) -> dict:
    env = dict(os.environ)
    if force_fallback:
        env["QDISTILL_NO_NUMBA"] = "1"
    else:
        env.pop("QDISTILL_NO_NUMBA", None)
    out = subprocess.run([sys.executable, "-c", WORKLOAD, str(trials)],
                         env=env, capture_output=True, text=True, check=True)
    return json.loads(out.stdout.strip().splitlines()[-1])


def main() -> int:
    parser = argparse.ArgumentParser()
    parser.add_argument("--trials", type=int, default=50000)
    args = parser.parse_args()

    fast = run(args.trials, force_fallback=False)
    slow = run(args.trials, force_fallback=True)

    if fast["failures"] != slow["failures"]:
        print("MISMATCH: the two paths disagree", fast, slow)
        return 1
    label = "numba" if fast["numba"] else "python (numba unavailable)"
    print(f"workload: two-round rep3 distillation, {args.trials} trials, "
          f"identical failure counts ({fast['failures']})")
    print(f"  {label:<28} {fast['seconds']:8.3f} s")
    print(f"  {'pure python fallback':<28} {slow['seconds']:8.3f} s")
    if fast["numba"] and fast["seconds"] > 0:
        print(f"  speedup                      {slow['seconds'] / fast['seconds']:8.1f}x")
    return 0


if __name__ == "__main__":
    sys.exit(main())
