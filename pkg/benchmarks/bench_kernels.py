"""Time the numba kernels against their numpy fallbacks.

    python3 benchmarks/bench_kernels.py [--M 8] [--N 32] [--repeat 20]

Compilation is triggered once before timing.
"""

import argparse
import timeit

import numpy as np

from risce import kernels
from risce._accel import HAS_NUMBA
from risce.channel import complex_gaussian
from risce.pilots import default_dual_link_schedule


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--M", type=int, default=8)
    ap.add_argument("--N", type=int, default=32)
    ap.add_argument("--repeat", type=int, default=20)
    args = ap.parse_args(argv)

    rng = np.random.default_rng(0)
    thetas = np.ascontiguousarray(default_dual_link_schedule(args.N).thetas)
    G0 = complex_gaussian(rng, (args.M, args.N))
    Y = kernels.dual_link_forward_numpy(complex_gaussian(rng, (args.M, args.N)), thetas)

    def sweep(fn):
        G = G0.copy()
        R = Y - kernels.dual_link_forward_numpy(G, thetas)
        return lambda: fn(G, R, thetas, False)

    cases = {
        "dual_link_forward": (kernels.dual_link_forward_numpy, kernels.dual_link_forward_numba, True),
        "cd_sweep": (kernels.cd_sweep_numpy, kernels.cd_sweep_numba, False),
    }
    print(f"M={args.M} N={args.N} numba={'yes' if HAS_NUMBA else 'no'} active={kernels.BACKEND}")
    print(f"{'kernel':<18} {'numpy ms':>10} {'numba ms':>10} {'speedup':>8}")
    for name, (np_fn, nb_fn, is_forward) in cases.items():
        times = []
        for fn in (np_fn, nb_fn):
            call = (lambda f=fn: f(G0, thetas)) if is_forward else sweep(fn)
            call()  # warm-up / compile
            times.append(min(timeit.repeat(call, number=1, repeat=args.repeat)) * 1e3)
        print(f"{name:<18} {times[0]:>10.3f} {times[1]:>10.3f} {times[0] / times[1]:>7.1f}x")


if __name__ == "__main__":
    main()
