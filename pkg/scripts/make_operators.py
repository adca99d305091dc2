"""Regenerate the operator CSV files used by the bundled scenarios."""
from pathlib import Path

import numpy as np

from distframes.distmap import write_matrix_csv

OUT = Path(__file__).resolve().parents[1] / "src" / "distframes" / "scenarios" / "operators"


def main():
    OUT.mkdir(parents=True, exist_ok=True)
    rng = np.random.default_rng(12)
    n = 12
    a = rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))
    a[:, -3:] = 0  # rank n - 3
    write_matrix_csv(OUT / "rank_deficient_12.csv", a, "rank-deficient 12x12")


if __name__ == "__main__":
    main()
