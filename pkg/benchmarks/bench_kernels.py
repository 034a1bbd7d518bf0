"""Wall-clock comparison of the compiled and pure-Python time-stepping kernels.

Usage::

    python benchmarks/bench_kernels.py [--sizes 64 128 256] [--repeat 3]

Each case integrates the unit circle with the zero tensor until the area
drops to 1e-3 of its initial value (about 0.5 time units), so the step
count grows like N^2.
"""

import argparse
import time

import numpy as np

from macsf import _backend
from macsf.contorsion import PsiCoefficients, canonical_tensor, psi_coefficients
from macsf.curve import SupportGrid, area, ellipse_support


def time_case(backend, S0, psi, repeat):
    best = np.inf
    steps = 0
    for _ in range(repeat):
        S = np.array(S0.values)
        start = time.perf_counter()
        _, steps, _ = _backend.advance(S, psi, 0.0, np.inf, 0.2, 10**9, 1e-3 * area(S0), backend=backend)
        best = min(best, time.perf_counter() - start)
    return best, steps


def main(argv=None):
    p = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    p.add_argument("--sizes", type=int, nargs="+", default=[64, 128, 256])
    p.add_argument("--repeat", type=int, default=3)
    args = p.parse_args(argv)

    backends = ["python"] + (["cython"] if _backend.compiled_available() else [])
    cases = {
        "circle": lambda n: (SupportGrid.constant(1.0, n), PsiCoefficients()),
        "ellipse+psi": lambda n: (ellipse_support(1.0, 0.8, n), psi_coefficients(canonical_tensor(-0.15))),
    }
    print(f"{'case':<12} {'N':>5} {'steps':>8} " + " ".join(f"{b + ' [s]':>12}" for b in backends) + f" {'speedup':>8}")
    for name, make in cases.items():
        for n in args.sizes:
            S0, co = make(n)
            psi = co.grid(n)
            results = {b: time_case(b, S0, psi, args.repeat) for b in backends}
            steps = results["python"][1]
            line = f"{name:<12} {n:>5} {steps:>8} " + " ".join(f"{results[b][0]:>12.4f}" for b in backends)
            if "cython" in results:
                line += f" {results['python'][0] / results['cython'][0]:>7.1f}x"
            print(line)


if __name__ == "__main__":
    main()
