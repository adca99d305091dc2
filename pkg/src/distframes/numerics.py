"""Dense complex linear algebra with explicit tolerance contracts.

Every other module goes through these helpers rather than calling LAPACK
directly, so the ordering conventions (eigenvalues ascending, singular values
descending) and the relative-tolerance checks live in one place.
"""
from __future__ import annotations

from typing import NamedTuple

import numpy as np
import scipy.linalg

from .errors import BadTolerance, IllConditioned, NonFinite, NonHermitian, NonSquare

DEFAULT_TOL = 1e-10
HERMITIAN_TOL = 1e-12
SOLVE_RATIO = 1e-12


class EigResult(NamedTuple):
    values: np.ndarray  # real, ascending
    vectors: np.ndarray  # unit eigenvectors as columns


class SvdResult(NamedTuple):
    left: np.ndarray
    singulars: np.ndarray  # descending
    right: np.ndarray  # A = left @ diag(singulars) @ right^H


def as_complex_matrix(a) -> np.ndarray:
    """Coerce to a finite 2-D complex128 array."""
    m = np.asarray(a, dtype=np.complex128)
    if m.ndim != 2:
        raise ValueError(f"expected a 2-D matrix, got shape {m.shape}")
    if not np.all(np.isfinite(m)):
        raise NonFinite("matrix has NaN or Inf entries")
    return m


def _require_square(m: np.ndarray) -> None:
    if m.shape[0] != m.shape[1]:
        raise NonSquare(f"matrix is {m.shape[0]}x{m.shape[1]}")


def hermitian_defect(h) -> float:
    h = np.asarray(h)
    return float(np.linalg.norm(h - h.conj().T))


def check_hermitian(h: np.ndarray, rel_tol: float = HERMITIAN_TOL) -> np.ndarray:
    _require_square(h)
    scale = np.linalg.norm(h)
    if hermitian_defect(h) > rel_tol * scale:
        raise NonHermitian(
            f"||H - H^H|| = {hermitian_defect(h):.3e} exceeds {rel_tol:g} * ||H|| = {rel_tol * scale:.3e}"
        )
    return 0.5 * (h + h.conj().T)


def hermitian_eig(h, rel_tol: float = HERMITIAN_TOL) -> EigResult:
    """Full spectral decomposition of a Hermitian matrix, eigenvalues ascending."""
    h = check_hermitian(as_complex_matrix(h), rel_tol)
    values, vectors = np.linalg.eigh(h)
    return EigResult(values, vectors)


def hermitian_eigvals(h, rel_tol: float = HERMITIAN_TOL) -> np.ndarray:
    h = check_hermitian(as_complex_matrix(h), rel_tol)
    return np.linalg.eigvalsh(h)


def svd(a) -> SvdResult:
    a = as_complex_matrix(a)
    u, s, vh = np.linalg.svd(a, full_matrices=False)
    return SvdResult(u, s, vh.conj().T)


def singular_values(a) -> np.ndarray:
    return np.linalg.svd(as_complex_matrix(a), compute_uv=False)


def numerical_rank(singulars, rel_tol: float = DEFAULT_TOL) -> int:
    """Count singular values above ``rel_tol * max``; zero for an all-zero list."""
    if not 0.0 < rel_tol < 1.0:
        raise BadTolerance(f"rel_tol must lie in (0, 1), got {rel_tol!r}")
    s = np.asarray(singulars, dtype=float)
    if s.size == 0:
        return 0
    smax = float(s.max())
    if smax == 0.0:
        return 0
    return int(np.count_nonzero(s > rel_tol * smax))


def solve_hpd(h, b, rel_tol: float = HERMITIAN_TOL) -> np.ndarray:
    """Solve ``H X = B`` for Hermitian positive definite ``H``.

    Raises IllConditioned when lambda_min/lambda_max <= 1e-12; the ratio is
    attached to the exception.
    """
    h = check_hermitian(as_complex_matrix(h), rel_tol)
    b = np.asarray(b, dtype=np.complex128)
    ev = np.linalg.eigvalsh(h)
    lmax = ev[-1]
    ratio = float(ev[0] / lmax) if lmax > 0 else 0.0
    if not ratio > SOLVE_RATIO:
        raise IllConditioned(ratio)
    factor = scipy.linalg.cho_factor(h, lower=True)
    return scipy.linalg.cho_solve(factor, b)


def op_norm(a) -> float:
    """Spectral norm (largest singular value)."""
    a = np.asarray(a)
    if a.size == 0:
        return 0.0
    return float(np.linalg.norm(a, 2))


def max_abs(a) -> float:
    a = np.asarray(a)
    return float(np.abs(a).max()) if a.size else 0.0
