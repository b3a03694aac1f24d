"""Time the compiled and pure-Python Jacobi kernels on random Hermitian matrices.

    python benchmarks/bench_eigen.py [--dims 2 4 8 16] [--repeat 200]
"""

import argparse
import timeit

import numpy as np

from qfannes import _kernels


def _matrix(rng, d):
    g = rng.standard_normal((d, d)) + 1j * rng.standard_normal((d, d))
    return (g + g.conj().T) / 2


def main(argv=None):
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--dims", type=int, nargs="+", default=[2, 4, 8, 16])
    parser.add_argument("--repeat", type=int, default=200)
    parser.add_argument("--seed", type=int, default=0)
    args = parser.parse_args(argv)

    kernels = {"python": _kernels.python_jacobi_eigh}
    if _kernels.compiled_jacobi_eigh is not None:
        kernels["cython"] = _kernels.compiled_jacobi_eigh
    else:
        print("compiled extension not available; timing the fallback only")

    rng = np.random.Generator(np.random.PCG64(args.seed))
    print(f"{'d':>3} " + " ".join(f"{name + ' (us)':>14}" for name in kernels) + f" {'speedup':>9} {'max |dw|':>10}")
    for d in args.dims:
        mats = [_matrix(rng, d) for _ in range(args.repeat)]
        times = {}
        for name, fn in kernels.items():
            t = timeit.timeit(lambda: [fn(a, 100, 1e-14) for a in mats], number=1)
            times[name] = 1e6 * t / len(mats)
        dw = 0.0
        if "cython" in kernels:
            for a in mats[:20]:
                dw = max(dw, float(np.abs(kernels["cython"](a, 100, 1e-14)[0] - kernels["python"](a, 100, 1e-14)[0]).max()))
        speedup = times["python"] / times["cython"] if "cython" in times else float("nan")
        print(f"{d:>3} " + " ".join(f"{times[n]:>14.1f}" for n in kernels) + f" {speedup:>8.1f}x {dw:>10.1e}")


if __name__ == "__main__":
    main()
