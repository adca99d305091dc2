"""Distribution-valued maps as pairing matrices.

A map x -> omega_x is stored through its action on the basis:
``pairing[j, n] = <e_n | omega_{x_j}>``. The pairing is linear in its first
slot, so for ``f = sum_n c_n e_n`` the analysis coefficient is
``<f | omega_{x_j}> = (pairing @ c)[j]``. The reversed bracket
``<omega_x | f>`` is the complex conjugate. Every module relies on this one
convention.
"""
from __future__ import annotations

import math
import re
from dataclasses import dataclass, field, replace
from enum import Enum
from pathlib import Path

import numpy as np

from .errors import (
    DimensionMismatch,
    GridMismatch,
    InadequateGrid,
    NonFinite,
    ParseError,
    SpaceMismatch,
)
from .quadrature import GridKind, NodeFunction, QuadratureGrid, make_grid
from .testspace import CoeffVector, TestSpace, evaluate_basis, gram_defect

GRAM_GATE = 1e-6


class Builtin(str, Enum):
    FOURIER = "fourier"
    DELTA = "delta"
    WEIGHTED_FOURIER = "weighted_fourier"


@dataclass(frozen=True, eq=False)
class DistributionMap:
    label: str
    grid: QuadratureGrid
    space: TestSpace
    pairing: np.ndarray = field(repr=False)

    def __post_init__(self):
        p = np.array(self.pairing, dtype=np.complex128)
        if p.ndim != 2 or p.shape != (self.grid.size, self.space.dim):
            raise DimensionMismatch(
                f"pairing has shape {p.shape}, expected ({self.grid.size}, {self.space.dim})"
            )
        if not np.all(np.isfinite(p)):
            raise NonFinite(f"pairing of {self.label!r} has NaN or Inf entries")
        p.setflags(write=False)
        object.__setattr__(self, "pairing", p)

    @property
    def shape(self) -> tuple[int, int]:
        return self.pairing.shape

    def weighted(self) -> np.ndarray:
        """U = diag(sqrt(w)) @ pairing; U^H U is the frame operator."""
        return np.sqrt(self.grid.weights)[:, None] * self.pairing

    def relabel(self, label: str) -> "DistributionMap":
        return replace(self, label=label)


def auto_grid(space: TestSpace) -> QuadratureGrid:
    """Lebesgue-reweighted Gauss-Hermite grid with one node per basis function.

    With M = N nodes the rule is exact for every product h_m h_n, so the
    discrete Gram matrix is the identity to rounding.
    """
    return make_grid(GridKind.GAUSS_HERMITE_LEBESGUE, max(space.dim, 2))


def check_grid(space: TestSpace, grid: QuadratureGrid, gate: float = GRAM_GATE) -> float:
    defect = gram_defect(space, grid)
    if not defect <= gate:
        raise InadequateGrid(defect, gate)
    return defect


def builtin_map(kind, space: TestSpace, grid: QuadratureGrid | None = None,
                gate: float = GRAM_GATE) -> DistributionMap:
    """One of the three closed-form kernels.

    fourier
        omega_x(y) = exp(-ixy)/sqrt(2 pi); <h_n|omega_x> is the inverse Fourier
        transform of h_n, i.e. i^n h_n(x).
    delta
        point evaluation, <h_n|delta_x> = h_n(x).
    weighted_fourier
        omega_x(y) = (1+y^2) exp(ixy)/sqrt(2 pi); <f|omega_x> = (F - D^2 F)(x)
        with F the Fourier transform of f. Using F h_n = (-i)^n h_n and
        h_n'' = (x^2 - 2n - 1) h_n gives (-i)^n (2n + 2 - x^2) h_n(x).
    """
    kind = Builtin(kind)
    if grid is None:
        grid = auto_grid(space)
    check_grid(space, grid, gate)
    x = grid.nodes
    e = evaluate_basis(space, x)
    n = np.arange(space.dim)
    if kind is Builtin.DELTA:
        pairing = e.astype(np.complex128)
    elif kind is Builtin.FOURIER:
        pairing = (1j ** n) * e
    else:
        pairing = ((-1j) ** n) * (2.0 * n + 2.0 - x[:, None] ** 2) * e
    return DistributionMap(kind.value, grid, space, pairing)


def map_from_samples(label: str, space: TestSpace, grid: QuadratureGrid, pairing) -> DistributionMap:
    p = np.asarray(pairing, dtype=np.complex128)
    if p.ndim != 2:
        raise DimensionMismatch(f"pairing must be 2-D, got shape {p.shape}")
    return DistributionMap(label, grid, space, p)


def _coords(space: TestSpace, f) -> np.ndarray:
    if isinstance(f, CoeffVector):
        if f.space != space:
            raise SpaceMismatch(f"vector lives in dim {f.space.dim}, map in dim {space.dim}")
        return f.coords
    c = np.asarray(f, dtype=np.complex128).reshape(-1)
    if c.size != space.dim:
        raise SpaceMismatch(f"{c.size} coordinates for a space of dim {space.dim}")
    return c


def _node_values(grid: QuadratureGrid, xi) -> np.ndarray:
    if isinstance(xi, NodeFunction):
        if not xi.grid.same_as(grid):
            raise GridMismatch("coefficient function lives on a different grid")
        return xi.values
    v = np.asarray(xi, dtype=np.complex128).reshape(-1)
    if v.size != grid.size:
        raise GridMismatch(f"{v.size} values for a grid with {grid.size} nodes")
    return v


def analysis(dmap: DistributionMap, f) -> NodeFunction:
    """f -> (x_j -> <f|omega_{x_j}>)."""
    return NodeFunction(dmap.grid, dmap.pairing @ _coords(dmap.space, f))


def synthesis(dmap: DistributionMap, xi) -> CoeffVector:
    """xi -> sum_j w_j xi_j omega_{x_j}, returned in basis coordinates.

    The coordinates t satisfy <t|g> = sum_j w_j xi_j conj(<g|omega_{x_j}>).
    """
    v = _node_values(dmap.grid, xi)
    return CoeffVector(dmap.space, dmap.pairing.conj().T @ (dmap.grid.weights * v))


def transform_map(dmap: DistributionMap, m_dag, label: str | None = None) -> DistributionMap:
    """omega_x = M zeta_x, given the matrix of M^x; <f|M zeta_x> = <M^x f|zeta_x>."""
    m = np.asarray(getattr(m_dag, "entries", m_dag), dtype=np.complex128)
    n = dmap.space.dim
    if m.shape != (n, n):
        raise DimensionMismatch(f"operator has shape {m.shape}, expected ({n}, {n})")
    return DistributionMap(label or f"M({dmap.label})", dmap.grid, dmap.space, dmap.pairing @ m)


def zero_rows(dmap: DistributionMap, rows, label: str | None = None) -> DistributionMap:
    p = np.array(dmap.pairing)
    p[list(rows), :] = 0
    return DistributionMap(label or f"{dmap.label}[zeroed]", dmap.grid, dmap.space, p)


# -- CSV exchange ---------------------------------------------------------

_HEADER = re.compile(r"^#\s*rows=(\d+)\s+cols=(\d+)\s+label=(.*)$")


def format_complex(z: complex) -> str:
    return f"{z.real:.17g}{z.imag:+.17g}i"


def parse_complex(text: str) -> complex:
    s = text.strip()
    if not s.endswith("i"):
        raise ValueError(f"entry {text!r} lacks the imaginary unit suffix 'i'")
    return complex(s[:-1] + "j")


def write_matrix_csv(path, matrix, label: str) -> None:
    m = np.asarray(matrix, dtype=np.complex128)
    lines = [f"# rows={m.shape[0]} cols={m.shape[1]} label={label}"]
    lines += [",".join(format_complex(z) for z in row) for row in m]
    Path(path).write_text("\n".join(lines) + "\n")


def read_matrix_csv(path) -> tuple[str, np.ndarray]:
    """Return (label, matrix) from the ``# rows=M cols=N label=...`` format."""
    text = Path(path).read_text().splitlines()
    if not text:
        raise ParseError(f"{path}: empty file")
    head = _HEADER.match(text[0])
    if head is None:
        raise ParseError(f"{path}:1: bad header {text[0]!r}")
    rows, cols, label = int(head.group(1)), int(head.group(2)), head.group(3)
    body = [ln for ln in text[1:] if ln.strip()]
    if len(body) != rows:
        raise ParseError(f"{path}: header says {rows} rows, found {len(body)}")
    out = np.empty((rows, cols), dtype=np.complex128)
    for i, line in enumerate(body):
        cells = line.split(",")
        if len(cells) != cols:
            raise ParseError(f"{path}:{i + 2}: expected {cols} entries, found {len(cells)}")
        try:
            out[i] = [parse_complex(c) for c in cells]
        except ValueError as exc:
            raise ParseError(f"{path}:{i + 2}: {exc}") from None
    if not np.all(np.isfinite(out)):
        raise NonFinite(f"{path}: non-finite entries")
    return label, out


def export_map(dmap: DistributionMap, path) -> None:
    write_matrix_csv(path, dmap.pairing, dmap.label)


def import_map(path, space: TestSpace, grid: QuadratureGrid) -> DistributionMap:
    label, p = read_matrix_csv(path)
    return map_from_samples(label, space, grid, p)


# -- independent oracles ----------------------------------------------------

def fourier_kernel_quadrature(space: TestSpace, x, n_points: int = 4001, half_width: float | None = None,
                              weighted: bool = False) -> np.ndarray:
    """Pairing of the Fourier-type kernels by brute-force trapezoid in y.

    Computes int h_n(y) conj(omega_x(y)) dy on a fine grid, with no use of the
    Hermite eigenrelation. ``weighted`` selects (1+y^2) exp(ixy)/sqrt(2 pi),
    otherwise exp(-ixy)/sqrt(2 pi).
    """
    x = np.asarray(x, dtype=float).reshape(-1)
    if half_width is None:
        half_width = space.truncation + 8.0
    y = np.linspace(-half_width, half_width, n_points)
    dy = y[1] - y[0]
    h = evaluate_basis(space, y)
    if weighted:
        kern = (1 + y[None, :] ** 2) * np.exp(-1j * np.outer(x, y))
    else:
        kern = np.exp(1j * np.outer(x, y))
    w = np.full(n_points, dy)
    w[[0, -1]] *= 0.5
    return (kern * w) @ h / math.sqrt(2 * math.pi)
