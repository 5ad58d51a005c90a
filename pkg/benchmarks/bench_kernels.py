"""Compare the compiled kernels with the numpy fallback.

    python benchmarks/bench_kernels.py [--repeat 5]

Each case reports the best wall time per backend and the speedup of the
compiled extension. Cases mirror how the package uses the kernels: dense
eigenfunction tables, scalar evaluations inside an adaptive quadrature
integrand, and the direct quadruple sum for the printed chi norm.
"""
import argparse
import timeit

import numpy as np
from scipy import integrate

from spatialent import _kernels
from spatialent.regions import RegionSplit, overlap_table


def case_table(impl):
    xs = np.linspace(-30.0, 30.0, 2000)
    return lambda: impl.eigenfunction_table(400, xs)


def case_quadrature(impl):
    f = impl.eigenfunction_value

    def run():
        for k, l in ((3, 8), (20, 31), (60, 61)):
            integrate.quad(lambda x: f(k, x) * f(l, x), -np.inf, 0.4, limit=400, epsabs=1e-13)
    return run


def case_chi_direct(impl):
    K = 60
    table = overlap_table(K, RegionSplit(0.0))
    n = 1.0 / np.expm1((np.arange(K) + 0.2) / 8.0)
    p_aa = table.p_aa()
    return lambda: impl.chi_printed_direct(n, table.O, p_aa)


CASES = [
    ("hermite table 401 modes x 2000 points", case_table),
    ("quadrature integrand, 3 region overlaps", case_quadrature),
    ("direct chi sum, K = 60", case_chi_direct),
]


def main():
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--repeat", type=int, default=5)
    args = parser.parse_args()
    impls = _kernels.backends()
    if "compiled" not in impls:
        print("compiled extension not built; only the python backend is available")
    print(f"{'case':45s} " + " ".join(f"{name:>12s}" for name in impls) + "   speedup")
    for title, make in CASES:
        times = {}
        for name, impl in impls.items():
            fn = make(impl)
            fn()
            times[name] = min(timeit.repeat(fn, number=1, repeat=args.repeat))
        cols = " ".join(f"{times[name] * 1e3:10.2f}ms" for name in impls)
        speed = f"{times['python'] / times['compiled']:8.1f}x" if "compiled" in times else "      n/a"
        print(f"{title:45s} {cols} {speed}")


if __name__ == "__main__":
    main()
