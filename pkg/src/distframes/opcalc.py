"""Operators built from distribution maps: diagonal operators, multipliers,
atomic maps, and spectrum comparison."""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
from scipy.sparse import csr_matrix
from scipy.sparse.csgraph import maximum_bipartite_matching

from . import numerics
from .distmap import DistributionMap, builtin_map
from .errors import DimensionMismatch, GridMismatch, Mismatch, NotGelfand
from .frameops import DEFAULT_TOLERANCES, Tolerances, classify, require_compatible
from .quadrature import QuadratureGrid
from .testspace import TestSpace, hermite_space


@dataclass(frozen=True, eq=False)
class OperatorMatrix:
    space: TestSpace
    entries: np.ndarray = field(repr=False)

    def __post_init__(self):
        a = numerics.as_complex_matrix(self.entries)
        n = self.space.dim
        if a.shape != (n, n):
            raise DimensionMismatch(f"operator has shape {a.shape}, expected ({n}, {n})")
        a.setflags(write=False)
        object.__setattr__(self, "entries", a)

    @property
    def adjoint(self) -> "OperatorMatrix":
        return OperatorMatrix(self.space, self.entries.conj().T)


@dataclass(frozen=True, eq=False)
class SymbolSamples:
    grid: QuadratureGrid
    values: np.ndarray = field(repr=False)

    def __post_init__(self):
        v = np.array(self.values, dtype=np.complex128).reshape(-1)
        if v.size != self.grid.size:
            raise GridMismatch(f"{v.size} symbol values for {self.grid.size} nodes")
        if not np.all(np.isfinite(v)):
            raise ValueError("symbol has non-finite samples")
        v.setflags(write=False)
        object.__setattr__(self, "values", v)

    @classmethod
    def from_function(cls, grid: QuadratureGrid, fn) -> "SymbolSamples":
        return cls(grid, np.broadcast_to(fn(grid.nodes), grid.nodes.shape))

    def conj(self) -> "SymbolSamples":
        return SymbolSamples(self.grid, self.values.conj())


def _entries(a, n: int | None = None) -> np.ndarray:
    m = numerics.as_complex_matrix(getattr(a, "entries", a))
    if n is not None and m.shape != (n, n):
        raise Mismatch(f"operator has shape {m.shape}, expected ({n}, {n})")
    return m


def _symbol(dmap: DistributionMap, alpha) -> np.ndarray:
    if isinstance(alpha, SymbolSamples):
        if not alpha.grid.same_as(dmap.grid):
            raise GridMismatch("symbol sampled on a different grid")
        return alpha.values
    v = np.asarray(alpha, dtype=np.complex128).reshape(-1)
    if v.size != dmap.grid.size:
        raise GridMismatch(f"{v.size} symbol values for {dmap.grid.size} nodes")
    return v


def diagonal_operator(zeta: DistributionMap, alpha) -> OperatorMatrix:
    """A f = sum_j w_j alpha_j <f|zeta_j> zeta_j."""
    a = _symbol(zeta, alpha)
    p = zeta.pairing
    return OperatorMatrix(zeta.space, p.conj().T @ ((zeta.grid.weights * a)[:, None] * p))


def eigen_residual(zeta: DistributionMap, a, alpha) -> float:
    """||pairing A - diag(alpha) pairing||_2 / ||pairing||_2.

    Row j of ``pairing @ A`` holds <A f|zeta_j> over basis vectors f, so a zero
    residual states that every zeta_j is a generalized eigenvector of A^dagger
    with eigenvalue alpha_j.
    """
    al = _symbol(zeta, alpha)
    m = _entries(a, zeta.space.dim)
    p = zeta.pairing
    scale = numerics.op_norm(p)
    if scale == 0.0:
        return 0.0
    return numerics.op_norm(p @ m - al[:, None] * p) / scale


def riesz_multiplier(omega: DistributionMap, theta: DistributionMap, alpha) -> OperatorMatrix:
    """H f = sum_j w_j alpha_j <f|theta_j> omega_j."""
    require_compatible(omega, theta)
    a = _symbol(omega, alpha)
    w = omega.grid.weights * a
    return OperatorMatrix(omega.space, omega.pairing.conj().T @ (w[:, None] * theta.pairing))


def bottleneck_distance(x, y) -> float:
    """Smallest achievable max |x_i - y_pi(i)| over bijections pi.

    Exact: binary search over the sorted pairwise distances, testing each
    threshold for a perfect bipartite matching.
    """
    x = np.asarray(x, dtype=np.complex128).reshape(-1)
    y = np.asarray(y, dtype=np.complex128).reshape(-1)
    if x.size != y.size:
        raise DimensionMismatch(f"{x.size} vs {y.size} eigenvalues")
    if x.size == 0:
        return 0.0
    d = np.abs(x[:, None] - y[None, :])
    levels = np.unique(d)

    def perfect(t: float) -> bool:
        match = maximum_bipartite_matching(csr_matrix(d <= t), perm_type="column")
        return bool(np.all(match >= 0))

    lo, hi = 0, levels.size - 1
    while lo < hi:
        mid = (lo + hi) // 2
        if perfect(levels[mid]):
            hi = mid
        else:
            lo = mid + 1
    return float(levels[lo])


def spectrum_distance(a, b) -> float:
    ea = _entries(a)
    eb = _entries(b)
    if ea.shape != eb.shape:
        raise DimensionMismatch(f"{ea.shape} vs {eb.shape}")
    return bottleneck_distance(np.linalg.eigvals(ea), np.linalg.eigvals(eb))


@dataclass(frozen=True)
class AtomicResult:
    dmap: DistributionMap
    bessel_defect: float  # max relative gap of sum w|<f|omega>|^2 against ||A^dagger f||^2
    decomposition_defect: float  # ||pairing_omega^H W pairing_zeta - A||_2 / ||A||_2


def atomic_map(zeta: DistributionMap, a, probes: int = 10, seed: int = 0,
               tolerances: Tolerances = DEFAULT_TOLERANCES) -> AtomicResult:
    """omega_x = (A^dagger)^x zeta_x, i.e. pairing_omega = pairing_zeta A^H, with certificates."""
    if not classify(zeta, tolerances).flags["gelfand"]:
        raise NotGelfand(f"map {zeta.label!r} is not a Gel'fand basis")
    n = zeta.space.dim
    m = _entries(a, n)
    omega = DistributionMap(f"atomic({zeta.label})", zeta.grid, zeta.space, zeta.pairing @ m.conj().T)

    rng = np.random.default_rng(seed)
    norm_a = numerics.op_norm(m)
    gaps = []
    for _ in range(probes):
        f = rng.standard_normal(n) + 1j * rng.standard_normal(n)
        lhs = float(np.dot(omega.grid.weights, np.abs(omega.pairing @ f) ** 2))
        rhs = float(np.linalg.norm(m.conj().T @ f) ** 2)
        scale = norm_a ** 2 * float(np.vdot(f, f).real)
        gaps.append(abs(lhs - rhs) / scale if scale > 0 else abs(lhs - rhs))
    decomp = omega.pairing.conj().T @ (zeta.grid.weights[:, None] * zeta.pairing)
    err = numerics.op_norm(decomp - m)
    return AtomicResult(omega, max(gaps), err / norm_a if norm_a > 0 else err)


def range_filling(kind, alpha_fn, sizes, grid: QuadratureGrid) -> list[tuple[int, float]]:
    """Hausdorff distance between eig(A_N) and the symbol samples on ``grid``, per N.

    A_N is the diagonal operator of the builtin ``kind`` on a fixed, oversampled
    grid. A shrinking distance is the finite-N trace of the spectrum filling out
    the essential range of alpha.
    """
    alpha = SymbolSamples.from_function(grid, alpha_fn)
    out = []
    for n in sizes:
        zeta = builtin_map(kind, hermite_space(n), grid)
        ev = np.linalg.eigvals(diagonal_operator(zeta, alpha).entries)
        d = np.abs(ev[:, None] - alpha.values[None, :])
        out.append((n, float(max(d.min(axis=1).max(), d.min(axis=0).max()))))
    return out
