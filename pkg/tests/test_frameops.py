import numpy as np
import pytest

from distframes import numerics
from distframes.distmap import analysis, builtin_map, map_from_samples, synthesis, transform_map
from distframes.errors import InadequateGrid, Mismatch, NotAFrame
from distframes.frameops import (
    Tolerances,
    canonical_dual,
    classify,
    frame_bounds,
    frame_operator,
    frame_operator_oracle,
    mixed_gram,
    reconstruction_residual,
    unboundedness_sweep,
)
from distframes.quadrature import make_grid
from distframes.testspace import hermite_space

from conftest import random_complex


def _jacobi_weighted_fourier_bounds(n):
    """Independent oracle: on the n-node Gauss grid S = (diag(2k+2) - J^2)^2, J the position matrix."""
    k = np.arange(n)
    j = np.diag(np.sqrt((k[:-1] + 1) / 2), 1)
    j = j + j.T
    ev = np.linalg.eigvalsh(np.linalg.matrix_power(np.diag(2.0 * k + 2) - j @ j, 2))
    return ev[0], ev[-1]


def _random_map(rng, n, m):
    space = hermite_space(n)
    grid = make_grid("gauss_legendre", m, -space.truncation, space.truncation)
    return map_from_samples("random", space, grid, random_complex(rng, m, n))


def test_zero_map():
    space = hermite_space(3)
    grid = make_grid("trapezoid", 40, -8, 8)
    zero = map_from_samples("zero", space, grid, np.zeros((40, 3)))
    assert not frame_operator(zero).any()
    assert not frame_operator_oracle(zero).any()
    rep = classify(zero)
    assert rep.flags["bessel"]
    assert not any(v for k, v in rep.flags.items() if k != "bessel")


def test_delta_frame_operator_is_identity(delta16):
    assert np.abs(frame_operator(delta16) - np.eye(16)).max() <= 1e-8


def test_weighted_fourier_oracle_and_bounds():
    wf = builtin_map("weighted_fourier", hermite_space(8))
    s = frame_operator(wf)
    assert np.abs(s - frame_operator_oracle(wf)).max() <= 1e-12 * np.abs(s).max()
    fb = frame_bounds(wf)
    lo, hi = _jacobi_weighted_fourier_bounds(8)
    assert fb.lower >= 1 - 1e-6
    assert fb.upper > 100
    assert fb.lower == pytest.approx(lo, rel=1e-10)
    assert fb.upper == pytest.approx(hi, rel=1e-10)
    # frozen regression value
    assert fb.upper == pytest.approx(196.16512451292374, rel=1e-10)


def test_oracle_random_maps(rng):
    for _ in range(20):
        dm = _random_map(rng, int(rng.integers(1, 33)), int(rng.integers(2, 33)))
        assert np.abs(frame_operator(dm) - frame_operator_oracle(dm)).max() <= 1e-12


def test_oracle_rank_one_row():
    space = hermite_space(3)
    grid = make_grid("trapezoid", 40, -8, 8)
    p = np.zeros((40, 3), dtype=complex)
    p[7] = [1 + 2j, -1j, 0.5]
    s = frame_operator_oracle(map_from_samples("r1", space, grid, p))
    np.testing.assert_allclose(s, grid.weights[7] * np.outer(p[7].conj(), p[7]), atol=1e-15)


def test_frame_operator_factorizes(rng, fourier16):
    dm = transform_map(fourier16, random_complex(rng, 16, 16))
    s = frame_operator(dm)
    for n in range(16):
        col = synthesis(dm, analysis(dm, np.eye(16)[n])).coords
        np.testing.assert_allclose(col, s[:, n], atol=1e-12 * np.abs(s).max())


def test_bounds_builtin(delta16, fourier16):
    for dm in (delta16, fourier16):
        fb = frame_bounds(dm)
        assert fb.lower == pytest.approx(1, abs=1e-10)
        assert fb.upper == pytest.approx(1, abs=1e-10)


def test_classify_fourier(fourier16):
    rep = classify(fourier16)
    assert all(rep.flags[k] for k in ("frame", "parseval", "mu_independent", "total", "riesz", "gelfand"))
    assert list(rep.singulars) == sorted(rep.singulars, reverse=True)


def test_classify_oversampled_delta():
    dm = builtin_map("delta", hermite_space(16), make_grid("gauss_hermite_lebesgue", 32))
    rep = classify(dm)
    assert rep.flags["parseval"] and not rep.flags["gelfand"] and not rep.flags["mu_independent"]
    # brute-force SVD: row rank is N < M
    assert np.linalg.matrix_rank(dm.weighted()) == 16


def test_classify_riesz_transform(fourier16):
    rep = classify(transform_map(fourier16, np.diag(np.arange(1, 17.0))))
    assert rep.flags["riesz"] and not rep.flags["parseval"] and not rep.flags["gelfand"]


def test_classify_unitary_keeps_gelfand(fourier16, rng):
    q, _ = np.linalg.qr(random_complex(rng, 16, 16))
    assert classify(transform_map(fourier16, q)).flags["gelfand"]


def test_classify_inadequate_grid():
    space = hermite_space(16)
    p = np.ones((50, 16))
    dm = map_from_samples("x", space, make_grid("trapezoid", 50, -10, 10), p)
    dm_bad = map_from_samples("x", space, make_grid("trapezoid", 20, -10, 10), np.ones((20, 16)))
    classify(dm, Tolerances(gram_gate=1.0))
    with pytest.raises(InadequateGrid):
        classify(dm_bad)


def test_report_json_keys(fourier16):
    js = classify(fourier16).to_json()
    assert set(js) == {"label", "N", "M", "bounds", "flags", "gram_defect", "singulars", "tolerances"}
    assert set(js["bounds"]) == {"A", "B"}
    assert set(js["flags"]) == {"frame", "parseval", "mu_independent", "total", "riesz", "gelfand"}


def test_dual_of_parseval_is_itself(fourier16):
    dual = canonical_dual(fourier16)
    np.testing.assert_allclose(dual.pairing, fourier16.pairing, atol=1e-12)


def test_dual_bounds_reciprocal(fourier12):
    om = transform_map(fourier12, np.diag(np.arange(1, 13.0)))
    th = canonical_dual(om)
    fb = frame_bounds(th)
    assert fb.lower == pytest.approx(1 / 144, rel=1e-9)
    assert fb.upper == pytest.approx(1, rel=1e-9)
    assert np.abs(frame_operator(th) - np.linalg.inv(frame_operator(om))).max() <= 1e-9
    assert reconstruction_residual(om, th) <= 1e-9
    back = canonical_dual(th)
    assert np.abs(back.pairing - om.pairing).max() <= 1e-9 * np.abs(om.pairing).max()


def test_dual_requires_frame(fourier12):
    d = np.diag([1.0] * 11 + [0.0])
    with pytest.raises(NotAFrame) as info:
        canonical_dual(transform_map(fourier12, d))
    assert info.value.lower <= 1e-12


def test_reconstruction_cases(fourier16, delta16):
    assert reconstruction_residual(fourier16, fourier16) <= 1e-8
    assert reconstruction_residual(fourier16, delta16) > 0.5
    other = builtin_map("delta", hermite_space(16), make_grid("trapezoid", 400, -12, 12))
    with pytest.raises(Mismatch):
        reconstruction_residual(fourier16, other)
    with pytest.raises(Mismatch):
        mixed_gram(fourier16, builtin_map("fourier", hermite_space(4)))


def test_riesz_dual_uniqueness(fourier12, rng):
    om = transform_map(fourier12, random_complex(rng, 12, 12) + 4 * np.eye(12))
    assert classify(om).flags["riesz"]
    th = canonical_dual(om)
    # any theta' with mixed Gram = I solves P^H W X = I, unique since P^H W is invertible
    pw = om.pairing.conj().T * om.grid.weights
    alt = np.linalg.solve(pw, np.eye(12))
    alt_map = map_from_samples("alt", om.space, om.grid, alt)
    assert reconstruction_residual(om, alt_map) <= 1e-10
    assert np.abs(alt - th.pairing).max() <= 1e-8


def test_sweeps():
    rep = unboundedness_sweep("weighted_fourier", [4, 8, 16, 32])
    assert rep.unbounded_upper
    for n, a, b in rep.rows:
        lo, hi = _jacobi_weighted_fourier_bounds(n)
        assert a >= 1 - 1e-6
        assert b == pytest.approx(hi, rel=1e-10)
    assert not unboundedness_sweep("fourier", [4, 8, 16, 32]).unbounded_upper
    assert not unboundedness_sweep("delta", [4, 8, 16]).unbounded_upper
    with pytest.raises(ValueError):
        unboundedness_sweep("delta", [8, 4])


def test_dual_bounds_property_on_random_frames(rng):
    for _ in range(10):
        dm = _random_map(rng, int(rng.integers(1, 10)), int(rng.integers(10, 30)))
        fb = frame_bounds(dm)
        ev = numerics.hermitian_eigvals(frame_operator(canonical_dual(dm)))
        eps = 1e-8 / fb.lower
        assert ev[0] >= 1 / fb.upper - eps and ev[-1] <= 1 / fb.lower + eps
