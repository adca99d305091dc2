"""Spectra of truncated diagonal operators filling out the symbol range.

For zeta = delta on a fixed fine grid and a real symbol alpha, prints the
Hausdorff distance between eig(A_N) and the sampled values of alpha as N grows.
"""
import argparse

import numpy as np

from distframes.opcalc import range_filling
from distframes.quadrature import make_grid
from distframes.symbols import evaluate_symbol


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--symbol", default="sin(x) + 2")
    ap.add_argument("--sizes", default="4,8,16,32,64")
    ap.add_argument("--half-width", type=float, default=16.0)
    ap.add_argument("--nodes", type=int, default=1200)
    args = ap.parse_args()
    grid = make_grid("trapezoid", args.nodes, -args.half_width, args.half_width)
    sizes = [int(s) for s in args.sizes.split(",")]
    for n, d in range_filling("delta", lambda x: evaluate_symbol(args.symbol, x), sizes, grid):
        print(f"N={n:4d}  hausdorff(eig A_N, alpha samples) = {d:.6g}")


if __name__ == "__main__":
    np.set_printoptions(precision=6)
    main()
