"""Compare the compiled and numpy Newton kernels on the same batch.

    python3 benchmarks/bench_newton.py [--targets 2000] [--repeat 3]
"""
import argparse
import time

import numpy as np

from spectral_cat import _newton_py, cat
from spectral_cat.recon import MAXIT, FTOL, build_diff_matrix, build_dual_cmf
from spectral_cat.spectra import WHITE_POINTS, weight_cmf

try:
    from spectral_cat import _newton
except ImportError:
    _newton = None


def targets(A_W, m, seed=0):
    rng = np.random.default_rng(seed)
    rho = np.clip(rng.uniform(0, 1, (m, 36)), 1e-3, 1)
    return rho @ A_W


def best_of(fn, repeat):
    times = []
    for _ in range(repeat):
        t0 = time.perf_counter()
        out = fn()
        times.append(time.perf_counter() - t0)
    return min(times), out


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--targets", type=int, default=2000)
    ap.add_argument("--repeat", type=int, default=3)
    args = ap.parse_args()

    W_s = cat.reconstruct_illuminant(np.array(WHITE_POINTS["A"]))
    W_d = cat.reconstruct_illuminant(np.array(WHITE_POINTS["D65"]))
    A_S = np.ascontiguousarray(weight_cmf(W_s))
    A_SD = np.ascontiguousarray(build_dual_cmf(W_s, W_d))
    C = build_diff_matrix()
    T = targets(A_S, args.targets)

    kernels = [("python", _newton_py)]
    if _newton is not None:
        kernels.append(("cython", _newton))
    else:
        print("compiled kernel not built; timing the numpy fallback only")

    print(f"{args.targets} targets, best of {args.repeat}")
    print(f"{'variant':<10}{'backend':<9}{'seconds':>9}{'us/target':>11}"
          f"{'mean it':>9}")
    for variant, grad in (("original", A_S), ("symmetric", A_SD)):
        base = None
        for name, mod in kernels:
            secs, (rho, it, _, status) = best_of(
                lambda: mod.newton_batch(grad, A_S, C, T, MAXIT, FTOL), args.repeat)
            assert np.all(status == 0), f"{name}: {np.sum(status != 0)} failures"
            if base is None:
                base = rho
            else:
                assert np.abs(rho - base).max() < 1e-12
            print(f"{variant:<10}{name:<9}{secs:>9.3f}"
                  f"{1e6 * secs / args.targets:>11.1f}{it.mean():>9.2f}")


if __name__ == "__main__":
    main()
