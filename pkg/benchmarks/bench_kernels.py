"""Compare the compiled and pure-Python RK4 kernels.

    python benchmarks/bench_kernels.py [--repeat 5] [--batch 64]

Prints median wall time per call and the speedup; also checks that the two
backends give bitwise-identical results.
"""

import argparse
import statistics
import time

import numpy as np

from dyntrans import _kernels_py

try:
    from dyntrans import _kernels as _kernels_c
except ImportError:
    _kernels_c = None

# SHE k=1.5, alpha2=alpha3=1 at beta=0.005
COEF = (0.005, 1.0, -0.5137987012987013, -1.3392857142857144, 0.25, -0.6696428571428572, -63 / 88)


def median_time(fn, repeat):
    times = []
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn()
        times.append(time.perf_counter() - t0)
    return statistics.median(times)


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.split("\n\n")[0])
    ap.add_argument("--repeat", type=int, default=5)
    ap.add_argument("--batch", type=int, default=64)
    ap.add_argument("--steps", type=int, default=20000)
    args = ap.parse_args(argv)

    rng = np.random.default_rng(0)
    u0 = rng.uniform(-0.05, 0.05, (args.batch, 2))
    traj_args = (COEF, 0.01, -0.02, 0.2, args.steps, 1e-9, 0.5, 10)
    batch_args = (COEF, u0, 0.2, args.steps, 1e-9, 0.5)

    backends = {"python": _kernels_py}
    if _kernels_c is not None:
        backends["cython"] = _kernels_c
    else:
        print("compiled extension not built; timing the Python kernel only")

    rows = {}
    for name, mod in backends.items():
        t_traj = median_time(lambda: mod.rk4_trajectory(*traj_args), args.repeat)
        t_batch = median_time(lambda: mod.rk4_batch(*batch_args), args.repeat)
        rows[name] = (t_traj, t_batch)
        print(f"{name:>7}: trajectory {1e3 * t_traj:9.3f} ms   batch of {args.batch} {1e3 * t_batch:9.3f} ms")

    if "cython" in rows:
        py, cy = rows["python"], rows["cython"]
        print(f"speedup: trajectory {py[0] / cy[0]:.1f}x   batch {py[1] / cy[1]:.1f}x")
        a, b = _kernels_py.rk4_batch(*batch_args), _kernels_c.rk4_batch(*batch_args)
        same = all(np.array_equal(x, y) for x, y in zip(a, b))
        print(f"bitwise identical: {same}")


if __name__ == "__main__":
    main()
