"""Time the compiled kernels against the pure-Python fallback.

    python3 benchmarks/bench_kernels.py [--repeat 5]

Both backends get identical inputs; results are checked for bit-identity
before timing.
"""
import argparse
import timeit

import numpy as np

from varietydvfs import _kernels_py

try:
    from varietydvfs import _kernels as _compiled
except ImportError:
    _compiled = None

FREQS_GHZ = (1.2, 1.6, 2.0, 2.4, 2.8)
P_IDLE = 100.0
U_FULL = 0.68


def inputs(n_blocks, seed=0):
    rng = np.random.default_rng(seed)
    freqs_hz = [f * 1e9 for f in FREQS_GHZ]
    pfull = [P_IDLE + 100.0 * (f / 2.8) ** 3 for f in FREQS_GHZ]
    ts = 10.0
    work = list(rng.uniform(0.2, 1.1, n_blocks) * ts * 0.95 * freqs_hz[-1])
    chosen = [freqs_hz[i] for i in rng.integers(0, len(freqs_hz), n_blocks)]
    chosen_p = [pfull[freqs_hz.index(f)] for f in chosen]
    return (
        (work, ts * 0.95, ts, freqs_hz, pfull, P_IDLE, U_FULL, True),
        (work, chosen, chosen_p, ts, ts * n_blocks, P_IDLE, U_FULL, True),
    )


def bench(module, args_select, args_timeline, repeat):
    number = 20
    t_sel = min(timeit.repeat(lambda: module.select_frequencies(*args_select), number=number, repeat=repeat)) / number
    t_run = min(timeit.repeat(lambda: module.run_timeline(*args_timeline), number=number, repeat=repeat)) / number
    return t_sel, t_run


def main():
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--repeat", type=int, default=5)
    parser.add_argument("--sizes", default="8,64,1000,10000")
    args = parser.parse_args()
    if _compiled is None:
        print("compiled extension not built; only the fallback is available")
    print(f"{'blocks':>7} {'kernel':<18} {'python (us)':>12} {'cython (us)':>12} {'speedup':>8}")
    for n in (int(s) for s in args.sizes.split(",")):
        a_sel, a_run = inputs(n)
        py = bench(_kernels_py, a_sel, a_run, args.repeat)
        cy = None
        if _compiled is not None:
            for name, a in (("select_frequencies", a_sel), ("run_timeline", a_run)):
                ref = getattr(_kernels_py, name)(*a)
                got = getattr(_compiled, name)(*a)
                assert all(np.array_equal(np.asarray(x), np.asarray(y)) for x, y in zip(ref, got)), name
            cy = bench(_compiled, a_sel, a_run, args.repeat)
        for i, name in enumerate(("select_frequencies", "run_timeline")):
            c = f"{cy[i] * 1e6:12.1f}" if cy else f"{'n/a':>12}"
            s = f"{py[i] / cy[i]:7.1f}x" if cy else f"{'':>8}"
            print(f"{n:>7} {name:<18} {py[i] * 1e6:12.1f} {c} {s}")


if __name__ == "__main__":
    main()
