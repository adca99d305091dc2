import math

import numpy as np
import pytest

from distframes.distmap import (
    analysis,
    auto_grid,
    builtin_map,
    export_map,
    fourier_kernel_quadrature,
    import_map,
    map_from_samples,
    read_matrix_csv,
    synthesis,
    transform_map,
    write_matrix_csv,
)
from distframes.errors import (
    DimensionMismatch,
    GridMismatch,
    InadequateGrid,
    NonFinite,
    ParseError,
    SpaceMismatch,
)
from distframes.frameops import frame_bounds
from distframes.quadrature import NodeFunction, integrate, make_grid
from distframes.testspace import CoeffVector, evaluate_basis, hermite_space

from conftest import random_complex


def test_delta_column_zero(delta16):
    x = delta16.grid.nodes
    np.testing.assert_allclose(delta16.pairing[:, 0], math.pi ** -0.25 * np.exp(-x ** 2 / 2), atol=1e-15)


def test_fourier_matches_oscillatory_quadrature(fourier16):
    q = fourier_kernel_quadrature(fourier16.space, fourier16.grid.nodes)
    assert np.abs(q - fourier16.pairing).max() <= 1e-8
    e = evaluate_basis(fourier16.space, fourier16.grid.nodes)
    np.testing.assert_allclose(fourier16.pairing[:, 1], 1j * e[:, 1], atol=1e-15)


def test_weighted_fourier_matches_quadrature():
    space = hermite_space(8)
    wf = builtin_map("weighted_fourier", space)
    x = wf.grid.nodes
    h0 = math.pi ** -0.25 * np.exp(-x ** 2 / 2)
    np.testing.assert_allclose(wf.pairing[:, 0], (2 - x ** 2) * h0, atol=1e-14)
    q = fourier_kernel_quadrature(space, x, weighted=True)
    assert np.abs(q - wf.pairing).max() <= 1e-8 * np.abs(wf.pairing).max()


def test_builtin_rejects_bad_grid():
    space = hermite_space(16)
    L = space.truncation
    with pytest.raises(InadequateGrid) as info:
        builtin_map("delta", space, make_grid("trapezoid", 8, -L, L))
    assert info.value.defect > 0.1


def test_map_from_samples():
    space = hermite_space(2)
    grid = make_grid("trapezoid", 3, -6, 6)
    zero = map_from_samples("zero", space, grid, np.zeros((3, 2)))
    assert not zero.pairing.any()
    with pytest.raises(DimensionMismatch):
        map_from_samples("bad", space, make_grid("trapezoid", 4, -6, 6), np.zeros((3, 2)))
    with pytest.raises(NonFinite):
        map_from_samples("nan", space, grid, np.full((3, 2), np.nan))


def test_round_trip_builtin(fourier16):
    again = map_from_samples("copy", fourier16.space, fourier16.grid, fourier16.pairing)
    assert np.array_equal(again.pairing, fourier16.pairing)


def test_analysis_cases(delta16, fourier16):
    e = evaluate_basis(delta16.space, delta16.grid.nodes)
    np.testing.assert_array_equal(analysis(delta16, np.eye(16)[0]).values, e[:, 0])
    for n in (0, 3, 7):
        np.testing.assert_allclose(analysis(fourier16, np.eye(16)[n]).values, 1j ** n * e[:, n], atol=1e-15)
    assert not analysis(fourier16, np.zeros(16)).values.any()
    with pytest.raises(SpaceMismatch):
        analysis(fourier16, CoeffVector(hermite_space(3), [1, 0, 0]))


def test_synthesis_cases(delta16):
    assert not synthesis(delta16, np.zeros(16)).coords.any()
    h2 = evaluate_basis(delta16.space, delta16.grid.nodes)[:, 2]
    np.testing.assert_allclose(synthesis(delta16, h2).coords, np.eye(16)[2], atol=1e-12)
    with pytest.raises(GridMismatch):
        synthesis(delta16, NodeFunction(make_grid("trapezoid", 16, -10, 10), np.ones(16)))


def test_adjoint_identity(rng, fourier16):
    for _ in range(5):
        xi = random_complex(rng, 16)
        g = random_complex(rng, 16)
        lhs = np.vdot(g, synthesis(fourier16, xi).coords)  # <T xi | g>
        rhs = integrate(fourier16.grid, xi * analysis(fourier16, g).values.conj())
        assert abs(lhs - rhs) <= 1e-12 * max(1.0, abs(rhs))


def test_transform_identity_is_bitwise(fourier16):
    same = transform_map(fourier16, np.eye(16))
    assert np.array_equal(same.pairing, fourier16.pairing)
    with pytest.raises(DimensionMismatch):
        transform_map(fourier16, np.eye(3))


def test_transform_diag_on_delta(delta16):
    d = np.diag(np.arange(1, 17.0))
    fb = frame_bounds(transform_map(delta16, d))
    assert fb.lower == pytest.approx(1, abs=1e-10)
    assert fb.upper == pytest.approx(256, rel=1e-10)
    # brute force: sum_j w_j |<f|omega_j>|^2 = ||M^x f||^2 for random f
    rng = np.random.default_rng(0)
    om = transform_map(delta16, d)
    for _ in range(5):
        f = random_complex(rng, 16)
        lhs = np.dot(om.grid.weights, np.abs(om.pairing @ f) ** 2)
        assert lhs == pytest.approx(np.linalg.norm(d @ f) ** 2, rel=1e-10)


def test_csv_round_trip(tmp_path, rng):
    a = random_complex(rng, 5, 3) * 10.0 ** rng.integers(-30, 30, size=(5, 3))
    a[0, 0] = -0.0 + 0j
    path = tmp_path / "m.csv"
    write_matrix_csv(path, a, "my label, with comma")
    label, b = read_matrix_csv(path)
    assert label == "my label, with comma"
    assert np.array_equal(a, b)
    assert path.read_text().splitlines()[0] == "# rows=5 cols=3 label=my label, with comma"


def test_csv_entry_format(tmp_path):
    path = tmp_path / "m.csv"
    write_matrix_csv(path, [[1.5 - 0.25j]], "x")
    assert path.read_text().splitlines()[1] == "1.5-0.25i"


def test_map_export_import(tmp_path, fourier16):
    path = tmp_path / "f.csv"
    export_map(fourier16, path)
    back = import_map(path, fourier16.space, fourier16.grid)
    assert back.label == "fourier"
    assert np.array_equal(back.pairing, fourier16.pairing)


@pytest.mark.parametrize("body", [
    "# rows=1 cols=2 label=x\n1+0i\n",
    "# rows=2 cols=1 label=x\n1+0i\n",
    "rows=1 cols=1\n1+0i\n",
    "# rows=1 cols=1 label=x\n1+0\n",
    "# rows=1 cols=1 label=x\nfoo\n",
])
def test_csv_parse_errors(tmp_path, body):
    path = tmp_path / "bad.csv"
    path.write_text(body)
    with pytest.raises(ParseError):
        read_matrix_csv(path)


def test_auto_grid_is_exact_for_space():
    space = hermite_space(10)
    g = auto_grid(space)
    assert g.size == 10 and g.unbounded
