"""Compare the compiled and pure-numpy radiation-rate kernels.

Usage: python3 benchmarks/bench_kernels.py [--repeat N] [--tol T]

Times the per-radius shell sums (the inner loop of every emission-rate
evaluation) on the reference fiber at several atom radii, after the
coefficient cache is warm, and checks that both backends agree.
"""

from __future__ import annotations

import argparse
import math
import time

import numpy as np

from nanotorque import kernels
from nanotorque.coupling import RadiationChannels
from nanotorque.fiber_modes import FiberSpec
from nanotorque.radiation_modes import radiation_quadrature

C = 299_792_458.0


def main(argv=None):
    parser = argparse.ArgumentParser(description=__doc__.split("\n\n")[0])
    parser.add_argument("--repeat", type=int, default=20)
    parser.add_argument("--tol", type=float, default=1e-6)
    args = parser.parse_args(argv)

    fiber = FiberSpec(350e-9, 1.4537, 1.0)
    omega = 2 * math.pi * C / 780e-9
    plan = radiation_quadrature(omega, args.tol, r_max=10 * fiber.radius_a)
    channels = RadiationChannels(fiber, plan)
    backends = kernels.available_backends()
    print(f"backends: {', '.join(backends)}  (default: {kernels.BACKEND})")
    print(f"beta nodes: {plan.node_count}")
    print(f"{'r/a':>6} {'|l|<=':>6} " + " ".join(f"{b + ' [ms]':>14}" for b in backends)
          + f" {'speedup':>8} {'max rel diff':>13}")
    for r_over_a in (1.05, 2.0, 5.0, 10.0):
        r = r_over_a * fiber.radius_a
        l_top = math.ceil(omega / C * r) + 10
        l_values = list(range(-l_top, l_top + 1))
        channels.coefs(l_values)
        times, results = {}, {}
        for b in backends:
            channels.shell_sums(r, l_values, backend=b)
            t0 = time.perf_counter()
            for _ in range(args.repeat):
                results[b] = channels.shell_sums(r, l_values, backend=b)
            times[b] = (time.perf_counter() - t0) / args.repeat * 1e3
        speedup = times["python"] / times["cython"] if "cython" in times else float("nan")
        diff = 0.0
        if "cython" in results:
            ref = results["python"]
            diff = float(np.max(np.abs(results["cython"] - ref) / np.max(np.abs(ref))))
        print(f"{r_over_a:6.2f} {l_top:6d} " + " ".join(f"{times[b]:14.2f}" for b in backends)
              + f" {speedup:8.2f} {diff:13.2e}")


if __name__ == "__main__":
    main()
