"""Mixed frame operators and compatible pairs of distribution maps."""
from __future__ import annotations

import math
from dataclasses import dataclass

from . import numerics
from .distmap import DistributionMap
from .frameops import DEFAULT_TOLERANCES, Tolerances, classify, mixed_gram
from .opcalc import OperatorMatrix


@dataclass(frozen=True)
class PairReport:
    omega: str
    theta: str
    cond_mixed: float
    mu_independent_omega: bool
    mu_independent_theta: bool
    total_omega: bool
    total_theta: bool
    compatible: bool
    tolerances: Tolerances

    def to_json(self) -> dict:
        return {
            "labels": {"omega": self.omega, "theta": self.theta},
            "cond_mixed": self.cond_mixed if math.isfinite(self.cond_mixed) else None,
            "flags": {
                "mu_independent_omega": self.mu_independent_omega,
                "mu_independent_theta": self.mu_independent_theta,
                "total_omega": self.total_omega,
                "total_theta": self.total_theta,
            },
            "compatible": self.compatible,
            "tolerances": {
                "rank_tol": self.tolerances.rank_tol,
                "iso_floor": self.tolerances.iso_floor,
            },
        }


@dataclass(frozen=True)
class CoeffSpaceReport:
    kernel_dim: int
    range_dim: int
    mu_independent: bool


def mixed_operator(theta: DistributionMap, omega: DistributionMap) -> OperatorMatrix:
    """S_{theta,omega} with <S f|g> = sum_j w_j <f|theta_j><omega_j|g>.

    Its conjugate transpose is S_{omega,theta}.
    """
    return OperatorMatrix(omega.space, mixed_gram(omega, theta))


def compatibility_report(theta: DistributionMap, omega: DistributionMap,
                         tolerances: Tolerances = DEFAULT_TOLERANCES) -> PairReport:
    """Verdict on whether (omega, theta) is a compatible pair.

    Both maps must be mu-independent and total, and S_{theta,omega} must be
    invertible with sigma_min > iso_floor * sigma_max. Completeness of the
    coefficient space holds trivially at finite size and is not reported.
    """
    rep_w = classify(omega, tolerances)
    rep_t = classify(theta, tolerances)
    sing = numerics.singular_values(mixed_gram(omega, theta))
    smax, smin = float(sing[0]), float(sing[-1])
    cond = smax / smin if smin > 0 else math.inf
    invertible = smax > 0 and smin > tolerances.iso_floor * smax
    flags = (
        rep_w.flags["mu_independent"],
        rep_t.flags["mu_independent"],
        rep_w.flags["total"],
        rep_t.flags["total"],
    )
    return PairReport(
        omega.label, theta.label, cond, *flags,
        compatible=all(flags) and invertible, tolerances=tolerances,
    )


def coefficient_space_report(dmap: DistributionMap, rank_tol: float = DEFAULT_TOLERANCES.rank_tol) -> CoeffSpaceReport:
    """Kernel and range dimension of the discrete synthesis operator."""
    rank = numerics.numerical_rank(numerics.singular_values(dmap.weighted()), rank_tol)
    m_nodes = dmap.shape[0]
    return CoeffSpaceReport(m_nodes - rank, rank, rank == m_nodes)
