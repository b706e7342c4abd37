"""Pairing errors |<delta - delta * phi_n, rho>| along the scale ladder, per kernel.

The decay exponent equals the order of the first non-vanishing kernel moment.

    python scripts/rate_ladder.py --kernels 1 3 5
"""

import argparse

import numpy as np

from mollify import gen_delta, make_moment_vanishing_mollifier
from mollify.config import DEFAULTS
from mollify.estimator import approximation_errors, estimate_rate, standard_test_functions


def run() -> None:
    p = argparse.ArgumentParser(description=__doc__, formatter_class=argparse.RawDescriptionHelpFormatter)
    p.add_argument("--kernels", type=int, nargs="+", default=[1, 3, 5], help="vanish orders")
    args = p.parse_args()
    T = gen_delta()
    scales = DEFAULTS.ladder()
    tests = standard_test_functions(T)
    for k in args.kernels:
        kernel = make_moment_vanishing_mollifier(k)
        errs = approximation_errors(T, kernel, scales, tests)
        fit = estimate_rate(T, kernel, scales, tests)
        print(f"vanish_order {k}: b = {fit.b:.4f} (expected {k + 1})")
        for n, e in zip(scales, errs[0]):
            print(f"  n={n:8.2f}  err={e:.3e}")
        print("  slopes:", np.round(fit.slopes, 4).tolist())


if __name__ == "__main__":
    run()
