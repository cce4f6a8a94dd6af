#!/usr/bin/env python3
"""Benchmark the compiled event kernel against the numpy fallback.

Times the fused uniforms -> cone-counts pass on both backends in-process,
then an end-to-end run_experiment in subprocesses with HYPERON_CH_KERNEL
forced, so the import-time backend selection is exercised for real.
"""

import argparse
import math
import os
import subprocess
import sys
import time

import numpy as np

from hyperon_ch import _kernels
from hyperon_ch._kernels import numpy_impl
from hyperon_ch.ch_inequality import CHSettings
from hyperon_ch.rng import philox_stream

END_TO_END_SNIPPET = """
import math, time
from hyperon_ch import _kernels
from hyperon_ch.ch_inequality import CHSettings
from hyperon_ch.event_generator import GeneratorConfig, run_experiment
config = GeneratorConfig(n_events={events}, seed=99)
settings = CHSettings.coplanar(math.pi / 4.0)
t0 = time.perf_counter()
est = run_experiment(config, settings, threads={threads})
dt = time.perf_counter() - t0
print(f"{{_kernels.backend_name()}}: {{dt:.3f}} s  "
      f"({{config.n_events / dt / 1e6:.1f}} Mevents/s)  value={{est.value:.6f}}")
"""


def bench_kernel(events: int, repeat: int) -> None:
    u = philox_stream(1234, 0).random((events, 7))
    axes = np.ascontiguousarray(CHSettings.coplanar(math.pi / 4.0).axes())
    cos_delta = math.cos(math.radians(10.0))
    args = (0.75, 0.664, 1.0, False, axes, cos_delta)

    backends = [("python", numpy_impl.accumulate_counts)]
    if _kernels.backend_name() == "compiled":
        backends.append(("compiled", _kernels.accumulate_counts))

    print(f"accumulate_counts, {events:,} events, best of {repeat}:")
    times = {}
    counts = {}
    for name, fn in backends:
        best = math.inf
        for _ in range(repeat):
            t0 = time.perf_counter()
            counts[name] = fn(u, *args)
            best = min(best, time.perf_counter() - t0)
        times[name] = best
        print(f"  {name:9s} {best * 1e3:8.1f} ms   {events / best / 1e6:6.1f} Mevents/s")
    if len(backends) == 2:
        same = np.array_equal(counts["python"], counts["compiled"])
        print(f"  speedup   {times['python'] / times['compiled']:8.2f}x   counts identical: {same}")
    else:
        print("  (compiled backend not built; numpy fallback only)")


def bench_end_to_end(events: int, threads: int) -> None:
    print(f"\nrun_experiment end to end, {events:,} events, threads={threads}:")
    snippet = END_TO_END_SNIPPET.format(events=events, threads=threads)
    for backend in ("python", "compiled"):
        env = dict(os.environ, HYPERON_CH_KERNEL=backend)
        proc = subprocess.run(
            [sys.executable, "-c", snippet], env=env, capture_output=True, text=True
        )
        if proc.returncode == 0:
            print("  " + proc.stdout.strip())
        else:
            print(f"  {backend}: unavailable ({proc.stderr.strip().splitlines()[-1]})")


def main() -> None:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--events", type=int, default=2_000_000)
    parser.add_argument("--repeat", type=int, default=3)
    parser.add_argument("--threads", type=int, default=1)
    args = parser.parse_args()
    bench_kernel(args.events, args.repeat)
    bench_end_to_end(args.events, args.threads)


if __name__ == "__main__":
    main()
