"""Frame operator, frame bounds, classification and the canonical dual."""
from __future__ import annotations

from dataclasses import asdict, dataclass, field

import numpy as np

from . import numerics
from .distmap import Builtin, DistributionMap, auto_grid, builtin_map
from .errors import InadequateGrid, Mismatch, NotAFrame
from .testspace import gram_defect, hermite_space


@dataclass(frozen=True)
class Tolerances:
    parseval_tol: float = 1e-6
    rank_tol: float = 1e-10
    frame_floor: float = 1e-8  # relative to B
    gram_gate: float = 1e-6
    iso_floor: float = 1e-8  # relative to sigma_max, used by compatibility checks

    def with_overrides(self, overrides: dict | None) -> "Tolerances":
        if not overrides:
            return self
        unknown = set(overrides) - set(asdict(self))
        if unknown:
            raise ValueError(f"unknown tolerance keys: {sorted(unknown)}")
        return Tolerances(**{**asdict(self), **{k: float(v) for k, v in overrides.items()}})


DEFAULT_TOLERANCES = Tolerances()


@dataclass(frozen=True)
class FrameBounds:
    lower: float
    upper: float


@dataclass(frozen=True)
class FrameReport:
    label: str
    n: int
    m: int
    bounds: FrameBounds
    flags: dict
    tolerances: Tolerances
    gram_defect: float
    singulars: np.ndarray = field(repr=False)
    parseval_defect: float = 0.0

    def to_json(self) -> dict:
        keys = ("frame", "parseval", "mu_independent", "total", "riesz", "gelfand")
        return {
            "label": self.label,
            "N": self.n,
            "M": self.m,
            "bounds": {"A": self.bounds.lower, "B": self.bounds.upper},
            "flags": {k: bool(self.flags[k]) for k in keys},
            "gram_defect": self.gram_defect,
            "singulars": [float(s) for s in self.singulars],
            "tolerances": {
                "parseval_tol": self.tolerances.parseval_tol,
                "rank_tol": self.tolerances.rank_tol,
                "frame_floor": self.tolerances.frame_floor,
            },
        }


def frame_operator(dmap: DistributionMap) -> np.ndarray:
    """S = pairing^H diag(w) pairing, i.e. <S f|g> = sum_j w_j <f|omega_j><omega_j|g>."""
    p = dmap.pairing
    return p.conj().T @ (dmap.grid.weights[:, None] * p)


def frame_operator_oracle(dmap: DistributionMap) -> np.ndarray:
    """Same matrix by an explicit triple loop, kept free of matrix products."""
    p = dmap.pairing.tolist()
    w = dmap.grid.weights.tolist()
    m_nodes, n = dmap.shape
    out = np.zeros((n, n), dtype=np.complex128)
    for a in range(n):
        for b in range(n):
            acc = 0j
            for j in range(m_nodes):
                acc += w[j] * p[j][a].conjugate() * p[j][b]
            out[a, b] = acc
    return out


def frame_bounds(dmap: DistributionMap) -> FrameBounds:
    ev = numerics.hermitian_eigvals(frame_operator(dmap))
    return FrameBounds(float(ev[0]), float(ev[-1]))


def _is_frame(b: FrameBounds, floor: float) -> bool:
    return b.upper > 0 and b.lower >= floor * b.upper


def classify(dmap: DistributionMap, tolerances: Tolerances = DEFAULT_TOLERANCES) -> FrameReport:
    tol = tolerances
    defect = gram_defect(dmap.space, dmap.grid)
    if not defect <= tol.gram_gate:
        raise InadequateGrid(defect, tol.gram_gate)
    m_nodes, n = dmap.shape
    s = frame_operator(dmap)
    bounds = frame_bounds(dmap)
    sing = numerics.singular_values(dmap.weighted())
    rank = numerics.numerical_rank(sing, tol.rank_tol)
    parseval_defect = numerics.op_norm(s - np.eye(n))

    total = rank == n
    mu_independent = rank == m_nodes
    frame = _is_frame(bounds, tol.frame_floor)
    parseval = parseval_defect <= tol.parseval_tol
    square = m_nodes == n
    smax = float(sing[0]) if sing.size else 0.0
    riesz = bool(square and total and smax > 0 and float(sing[-1]) > np.sqrt(tol.frame_floor) * smax)
    gelfand = parseval and mu_independent and total and square
    flags = {
        "bessel": True,
        "frame": frame,
        "parseval": parseval,
        "mu_independent": mu_independent,
        "total": total,
        "riesz": riesz,
        "gelfand": gelfand,
    }
    report = FrameReport(dmap.label, n, m_nodes, bounds, flags, tol, defect, sing, parseval_defect)
    _check_flag_lattice(report)
    return report


def _check_flag_lattice(report: FrameReport) -> None:
    f = report.flags
    if f["gelfand"]:
        assert f["riesz"], "gelfand without riesz"
    if f["riesz"]:
        assert f["frame"] and f["mu_independent"] and f["total"], "riesz without frame/mu/total"
    if f["parseval"]:
        assert f["frame"], "parseval without frame"


def canonical_dual(dmap: DistributionMap, tolerances: Tolerances = DEFAULT_TOLERANCES,
                   label: str | None = None) -> DistributionMap:
    """theta = omega transformed by S^{-1}: pairing_theta = pairing S^{-1}."""
    s = frame_operator(dmap)
    bounds = frame_bounds(dmap)
    if not _is_frame(bounds, tolerances.frame_floor):
        raise NotAFrame(bounds.lower, bounds.upper)
    # S is Hermitian, so pairing S^{-1} = (S^{-1} pairing^H)^H
    theta = numerics.solve_hpd(s, dmap.pairing.conj().T).conj().T
    return DistributionMap(label or f"dual({dmap.label})", dmap.grid, dmap.space, theta)


def require_compatible(a: DistributionMap, b: DistributionMap) -> None:
    if a.space != b.space:
        raise Mismatch(f"maps {a.label!r} and {b.label!r} live on different test spaces")
    if not a.grid.same_as(b.grid):
        raise Mismatch(f"maps {a.label!r} and {b.label!r} live on different grids")


def mixed_gram(omega: DistributionMap, theta: DistributionMap) -> np.ndarray:
    """pairing_omega^H diag(w) pairing_theta: <G f|g> = sum_j w_j <f|theta_j><omega_j|g>."""
    require_compatible(omega, theta)
    return omega.pairing.conj().T @ (omega.grid.weights[:, None] * theta.pairing)


def reconstruction_residual(omega: DistributionMap, theta: DistributionMap) -> float:
    g = mixed_gram(omega, theta)
    return numerics.op_norm(g - np.eye(g.shape[0]))


@dataclass(frozen=True)
class SweepReport:
    kind: str
    rows: list  # (N, A_N, B_N)
    unbounded_upper: bool

    def to_json(self) -> dict:
        return {
            "kind": self.kind,
            "rows": [{"N": n, "A": a, "B": b} for n, a, b in self.rows],
            "flags": ["UNBOUNDED_UPPER"] if self.unbounded_upper else [],
        }


def unboundedness_sweep(kind, sizes, growth: float = 10.0) -> SweepReport:
    """Frame bounds of a builtin across truncation sizes on the auto grid.

    UNBOUNDED_UPPER is raised when B_N strictly increases along the sweep and
    the last/first ratio exceeds ``growth``.
    """
    kind = Builtin(kind)
    sizes = [int(s) for s in sizes]
    if not sizes or any(b <= a for a, b in zip(sizes, sizes[1:])):
        raise ValueError(f"sizes must be non-empty and strictly ascending, got {sizes}")
    rows = []
    for n in sizes:
        space = hermite_space(n)
        fb = frame_bounds(builtin_map(kind, space, auto_grid(space)))
        rows.append((n, fb.lower, fb.upper))
    upper = [r[2] for r in rows]
    increasing = all(b > a for a, b in zip(upper, upper[1:]))
    flagged = len(rows) > 1 and increasing and upper[0] > 0 and upper[-1] / upper[0] > growth
    return SweepReport(kind.value, rows, flagged)
