"""Quadrature grids standing in for the measure space (X, mu).

Integrals over X become weighted sums ``sum_j w_j f(x_j)``. Three rules ship:
Gauss-Legendre and trapezoid on a bounded interval, and a Gauss-Hermite rule
reweighted by ``exp(x^2)`` so that it integrates against Lebesgue measure on
the whole line.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from enum import Enum

import numpy as np
from numpy.polynomial.hermite import hermgauss
from numpy.polynomial.legendre import leggauss

from .errors import BadDomain, GridMismatch, OverflowRisk

# largest t with exp(t) finite in float64
_EXP_LIMIT = math.log(np.finfo(float).max)


class GridKind(str, Enum):
    GAUSS_LEGENDRE = "gauss_legendre"
    TRAPEZOID = "trapezoid"
    GAUSS_HERMITE_LEBESGUE = "gauss_hermite_lebesgue"


@dataclass(frozen=True, eq=False)
class QuadratureGrid:
    kind: GridKind
    nodes: np.ndarray
    weights: np.ndarray
    domain: tuple[float, float] | None  # None marks the whole real line

    def __post_init__(self):
        nodes = np.array(self.nodes, dtype=float)
        weights = np.array(self.weights, dtype=float)
        if nodes.shape != weights.shape or nodes.ndim != 1:
            raise BadDomain("nodes and weights must be 1-D arrays of equal length")
        if np.any(np.diff(nodes) <= 0):
            raise BadDomain("nodes must be strictly ascending")
        if np.any(weights <= 0) or not np.all(np.isfinite(weights)):
            raise BadDomain("weights must be positive and finite")
        nodes.setflags(write=False)
        weights.setflags(write=False)
        object.__setattr__(self, "nodes", nodes)
        object.__setattr__(self, "weights", weights)
        object.__setattr__(self, "kind", GridKind(self.kind))

    @property
    def size(self) -> int:
        return self.nodes.size

    @property
    def unbounded(self) -> bool:
        return self.domain is None

    def same_as(self, other: "QuadratureGrid") -> bool:
        return self is other or (
            self.kind == other.kind
            and self.domain == other.domain
            and np.array_equal(self.nodes, other.nodes)
            and np.array_equal(self.weights, other.weights)
        )

    def describe(self) -> dict:
        out = {"kind": self.kind.value, "m": self.size}
        if self.domain is not None:
            out["a"], out["b"] = self.domain
        return out


@dataclass(frozen=True, eq=False)
class NodeFunction:
    """Samples of a coefficient function xi on a grid, one complex value per node."""

    grid: QuadratureGrid
    values: np.ndarray = field(repr=False)

    def __post_init__(self):
        values = np.array(self.values, dtype=np.complex128).reshape(-1)
        if values.size != self.grid.size:
            raise GridMismatch(f"{values.size} values for a grid with {self.grid.size} nodes")
        values.setflags(write=False)
        object.__setattr__(self, "values", values)


def make_grid(kind, m: int, a: float = -1.0, b: float = 1.0) -> QuadratureGrid:
    kind = GridKind(kind)
    if m < 2:
        raise BadDomain(f"need at least 2 nodes, got m={m}")
    if kind is GridKind.GAUSS_HERMITE_LEBESGUE:
        with np.errstate(all="ignore"):
            x, w = hermgauss(m)
            xmax = float(np.abs(x).max())
            if xmax * xmax >= _EXP_LIMIT:
                raise OverflowRisk(xmax)
            w = w * np.exp(x * x)
        if not np.all(np.isfinite(w) & (w > 0)):
            raise OverflowRisk(xmax)
        return QuadratureGrid(kind, x, w, None)

    a, b = float(a), float(b)
    if not (math.isfinite(a) and math.isfinite(b) and a < b):
        raise BadDomain(f"need finite a < b, got ({a}, {b})")
    if kind is GridKind.TRAPEZOID:
        x = np.linspace(a, b, m)
        w = np.full(m, (b - a) / (m - 1))
        w[0] *= 0.5
        w[-1] *= 0.5
    else:
        t, w = leggauss(m)
        half = 0.5 * (b - a)
        x = half * t + 0.5 * (a + b)
        w = half * w
    return QuadratureGrid(kind, x, w, (a, b))


def integrate(grid: QuadratureGrid, f) -> complex:
    """Weighted sum ``sum_j w_j f(x_j)``.

    ``f`` may be a NodeFunction (its grid must match) or a plain array of node values.
    """
    if isinstance(f, NodeFunction):
        if not f.grid.same_as(grid):
            raise GridMismatch("function lives on a different grid")
        values = f.values
    else:
        values = np.asarray(f, dtype=np.complex128).reshape(-1)
        if values.size != grid.size:
            raise GridMismatch(f"{values.size} values for a grid with {grid.size} nodes")
    return complex(np.dot(grid.weights, values))
