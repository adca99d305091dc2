"""Truncated Hermite test space.

At finite N the test space, the Hilbert space and its conjugate dual all
collapse to C^N with basis h_0..h_{N-1}; the pairing <f|g> is the Euclidean
inner product, linear in f and conjugate-linear in g.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .errors import GridMismatch, SpaceMismatch
from .quadrature import QuadratureGrid

_PI_QUARTER = math.pi ** -0.25
_RESCALE_AT = 1e150


@dataclass(frozen=True)
class TestSpace:
    __test__ = False  # keep pytest from collecting this class

    dim: int
    basis_kind: str = "hermite"
    truncation: float = field(default=0.0, compare=False)

    def __post_init__(self):
        if int(self.dim) != self.dim or self.dim < 1:
            raise ValueError(f"test space needs dim >= 1, got {self.dim!r}")
        if self.basis_kind != "hermite":
            raise ValueError(f"unsupported basis kind {self.basis_kind!r}")


@dataclass(frozen=True, eq=False)
class CoeffVector:
    space: TestSpace
    coords: np.ndarray = field(repr=False)

    def __post_init__(self):
        coords = np.array(self.coords, dtype=np.complex128).reshape(-1)
        if coords.size != self.space.dim:
            raise SpaceMismatch(f"{coords.size} coordinates for a space of dim {self.space.dim}")
        coords.setflags(write=False)
        object.__setattr__(self, "coords", coords)


def hermite_space(n: int) -> TestSpace:
    if n < 1:
        raise ValueError(f"test space needs N >= 1, got {n}")
    return TestSpace(int(n), "hermite", math.sqrt(2 * n) + 4.0)


def hermite_functions(n: int, points) -> np.ndarray:
    """Orthonormal Hermite functions h_0..h_{n-1} sampled at ``points``.

    Runs the three-term recurrence on h_k * exp(x^2/2) with a per-point log
    scale, so nothing overflows or underflows prematurely for large |x| and k.
    """
    x = np.asarray(points, dtype=float).reshape(-1)
    out = np.empty((x.size, n))
    log_scale = -0.5 * x * x
    prev = np.zeros_like(x)
    cur = np.full_like(x, _PI_QUARTER)
    out[:, 0] = cur * np.exp(log_scale)
    for k in range(n - 1):
        nxt = x * math.sqrt(2.0 / (k + 1)) * cur - math.sqrt(k / (k + 1)) * prev
        prev, cur = cur, nxt
        big = np.abs(cur) > _RESCALE_AT
        if big.any():
            f = np.abs(cur[big])
            cur[big] /= f
            prev[big] /= f
            log_scale[big] += np.log(f)
        out[:, k + 1] = cur * np.exp(log_scale)
    return out


def evaluate_basis(space: TestSpace, points) -> np.ndarray:
    """E[j, n] = h_n(points[j])."""
    return hermite_functions(space.dim, points)


def _check_cover(space: TestSpace, grid: QuadratureGrid) -> None:
    if grid.domain is None:
        return
    a, b = grid.domain
    if a > -space.truncation or b < space.truncation:
        raise GridMismatch(
            f"grid domain [{a}, {b}] does not cover [-L, L] with L = {space.truncation:.4f}"
        )


def discrete_gram(space: TestSpace, grid: QuadratureGrid) -> np.ndarray:
    """G[m, n] = sum_j w_j h_m(x_j) h_n(x_j); equals I when the grid resolves the space."""
    _check_cover(space, grid)
    e = evaluate_basis(space, grid.nodes)
    return (e.T * grid.weights) @ e


def gram_defect(space: TestSpace, grid: QuadratureGrid) -> float:
    g = discrete_gram(space, grid)
    return float(np.abs(g - np.eye(space.dim)).max())
