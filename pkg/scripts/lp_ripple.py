"""Littlewood-Paley estimate of the Weierstrass exponent against the level count J.

For b = 4 the level sup-norms carry a period-2 ripple in j; an even number of
tail levels leaves it in the fitted slope, an odd number cancels it.

    python scripts/lp_ripple.py --J 9 10 11 12
"""

import argparse

import numpy as np

from mollify import Window, gen_weierstrass, make_lp_family
from mollify.config import DEFAULTS
from mollify.estimator import tail_count
from mollify.oracles import lp_decompose, lp_estimate_alpha


def run() -> None:
    p = argparse.ArgumentParser(description=__doc__, formatter_class=argparse.RawDescriptionHelpFormatter)
    p.add_argument("--J", type=int, nargs="+", default=[8, 9, 10, 11, 12])
    p.add_argument("--a", type=float, default=0.5)
    p.add_argument("--b", type=float, default=4.0)
    args = p.parse_args()
    W = gen_weierstrass(args.a, args.b)
    fam = make_lp_family()
    window = Window(*DEFAULTS.window)
    true = np.log(1 / args.a) / np.log(args.b)
    print(f"true exponent {true:.4f}")
    print(f"{'J':>3s} {'tail':>5s} {'alpha_LP':>9s} {'error':>8s}")
    for J in args.J:
        d = lp_decompose(W, fam, J, window)
        est = lp_estimate_alpha(d)
        tail = tail_count(J + 1, DEFAULTS.tail_fraction, 5)
        print(f"{J:3d} {tail:5d} {est.alpha:9.4f} {est.alpha - true:+8.4f}")
    print("log2 S_j:", np.round(np.log2(d.sup_norms), 3).tolist())


if __name__ == "__main__":
    run()
