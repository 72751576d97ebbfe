"""Wall-clock comparison of the compiled and pure-Python time loops.

    python3 benchmarks/bench_kernels.py [--n 50] [--t-end 0.01] [--repeat 3]
"""

import argparse
import time

import numpy as np

from stefan_sam.grid import Grid
from stefan_sam.kernels import available_backends
from stefan_sam.model import ProblemSpec
from stefan_sam.solver import SchemeSpec, run, run_with_amr

CASES = ("arithmetic", "integral", "sam_jump", "sam_levelset")


def best_time(fn, repeat):
    times = []
    for _ in range(repeat):
        t0 = time.perf_counter()
        out = fn()
        times.append(time.perf_counter() - t0)
    return min(times), out


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--n", type=int, default=50)
    ap.add_argument("--t-end", type=float, default=0.01)
    ap.add_argument("--repeat", type=int, default=3)
    args = ap.parse_args(argv)

    prob = ProblemSpec(t_end=args.t_end)
    grid = Grid(args.n)
    backends = available_backends()
    jobs = [(k, lambda b, k=k: run(prob, grid, SchemeSpec(k), backend=b)) for k in CASES]
    jobs.append(("integral_amr", lambda b: run_with_amr(prob, grid, 4, SchemeSpec("integral"), backend=b)))

    print(f"N={args.n}, t_end={args.t_end}, best of {args.repeat}")
    print(f"{'case':14s} {'steps':>8s} " + " ".join(f"{b + ' [s]':>12s}" for b in backends) + "   speed-up  max |diff|")
    for name, job in jobs:
        res = {b: best_time(lambda: job(b), args.repeat) for b in backends}
        steps = next(iter(res.values()))[1].metadata["nsteps"]
        cells = " ".join(f"{res[b][0]:12.4f}" for b in backends)
        extra = ""
        if len(backends) == 2:
            a, p = res["cython"], res["python"]
            diff = np.abs(a[1].final_state.p - p[1].final_state.p).max()
            extra = f"   {p[0] / a[0]:8.1f}x  {diff:.1e}"
        print(f"{name:14s} {steps:8d} {cells}{extra}")


if __name__ == "__main__":
    main()
