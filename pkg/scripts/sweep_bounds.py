"""Print frame bounds of each builtin kernel across truncation sizes.

    python scripts/sweep_bounds.py --sizes 4,8,16,32,64
"""
import argparse

from distframes.frameops import unboundedness_sweep


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--sizes", default="4,8,16,32,64")
    args = ap.parse_args()
    sizes = [int(s) for s in args.sizes.split(",")]
    for kind in ("fourier", "delta", "weighted_fourier"):
        rep = unboundedness_sweep(kind, sizes)
        print(f"{kind}  UNBOUNDED_UPPER={rep.unbounded_upper}")
        for n, a, b in rep.rows:
            print(f"  N={n:4d}  A={a:.10g}  B={b:.10g}  B/A={b / a:.4g}")


if __name__ == "__main__":
    main()
