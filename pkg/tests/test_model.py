import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from truncfourier.halfline import HalfLineFunction, LogGrid, MuGrid, exp_fn
from truncfourier.model import (
    apply_model,
    closed_form_defect,
    matrix_norm,
    model_entries,
    model_identity_defect,
    model_matrix,
    mult_operator_norm,
)
from truncfourier.operator import u_exp_closed, u_trunc_fourier_exp_closed
from truncfourier.spectral import two_by_two_norm
from truncfourier.unitary import ModelElement, forward_u

# mpmath at 40 digits, frozen
F_PM_1 = 0.042554115671127969240 - 0.0072876010506399739211j
F_MP_1 = -0.16864013594317890503 + 0.98473171100530783633j
F_PM_50 = -1.8047129026435256220e-69 + 5.7661982392203170492e-69j
F_MP_50 = 0.95434908454021076670 - 0.29869352995547399868j


def test_entries_at_zero():
    m = model_matrix(0.0)
    expected = np.exp(0.25j * np.pi) / np.sqrt(2)
    assert m.f_plus_minus == pytest.approx(expected, rel=1e-15)
    assert m.f_minus_plus == pytest.approx(expected, rel=1e-15)


@pytest.mark.parametrize("mu, f_pm, f_mp", [(1.0, F_PM_1, F_MP_1), (50.0, F_PM_50, F_MP_50)])
def test_entries_frozen_oracle(mu, f_pm, f_mp):
    m = model_matrix(mu)
    assert abs(m.f_plus_minus - f_pm) <= 1e-13 * abs(f_pm)
    assert abs(m.f_minus_plus - f_mp) <= 1e-13 * abs(f_mp)


@pytest.mark.parametrize("mu", [0.0, 0.5, 1.0, 5.0])
def test_entry_moduli(mu):
    m = model_matrix(mu)
    assert abs(m.f_plus_minus) == pytest.approx(1 / np.sqrt(1 + np.exp(2 * np.pi * mu)), rel=1e-12)
    assert abs(m.f_minus_plus) == pytest.approx(1 / np.sqrt(1 + np.exp(-2 * np.pi * mu)), rel=1e-12)


def test_jordan_cell_limit():
    m = model_matrix(200.0)
    assert abs(m.f_plus_minus) < 1e-250
    assert abs(m.f_minus_plus) == pytest.approx(1.0, rel=1e-15)


@given(st.floats(0.0, 30.0))
def test_pythagoras_and_product(mu):
    f_pm, f_mp = model_entries(mu)
    assert abs(abs(f_pm) ** 2 + abs(f_mp) ** 2 - 1) <= 1e-12
    target = 0.5j / np.cosh(np.pi * mu)
    assert abs(f_pm * f_mp - target) <= 1e-12 * abs(target)


@given(st.floats(0.0, 30.0))
def test_norm_formula_matches_svd(mu):
    s0, _ = two_by_two_norm(model_matrix(mu).as_array())
    assert matrix_norm(mu) == pytest.approx(s0, rel=1e-12)
    assert s0 == pytest.approx(np.linalg.svd(model_matrix(mu).as_array(), compute_uv=False)[0], rel=1e-12)


def test_matrix_norm_values_and_monotone():
    assert matrix_norm(0.0) == pytest.approx(1 / np.sqrt(2), rel=1e-15)
    assert matrix_norm(10.0) == 1.0 or abs(matrix_norm(10.0) - 1) < 1e-15
    vals = matrix_norm(np.linspace(0, 3, 301))
    assert np.all(np.diff(vals) > 0)


def test_bad_mu():
    for bad in (-0.1, np.nan):
        with pytest.raises(ValueError):
            model_matrix(bad)
    with pytest.raises(ValueError):
        model_matrix(np.array([0.0, 1.0]))


def test_mult_operator_norm():
    assert mult_operator_norm(MuGrid(20.0, 2048)) == pytest.approx(1.0, abs=1e-12)
    assert mult_operator_norm(MuGrid(0.0, 1)) == pytest.approx(1 / np.sqrt(2), rel=1e-15)
    assert mult_operator_norm(MuGrid(0.2, 11)) < 1


def _random_element(mg, seed):
    r = np.random.default_rng(seed)
    return ModelElement(mg, r.normal(size=mg.m) + 1j * r.normal(size=mg.m),
                        r.normal(size=mg.m) + 1j * r.normal(size=mg.m))


@given(st.integers(0, 2**32 - 1), st.one_of(st.just(0.0), st.floats(0.01, 5.0)))
def test_model_norm_bound(seed, mu_max):
    mg = MuGrid(mu_max, 33) if mu_max > 0 else MuGrid(0.0, 1)
    phi = _random_element(mg, seed)
    assert apply_model(phi).norm() <= mult_operator_norm(mg) * phi.norm() * (1 + 1e-12)


def test_apply_model_zero_and_swap(mu_grid):
    zero = ModelElement.zeros(mu_grid)
    out = apply_model(zero)
    assert not out.plus.any() and not out.minus.any()
    phi = _random_element(mu_grid, 3)
    only_plus = apply_model(ModelElement(mu_grid, phi.plus, np.zeros(mu_grid.m)))
    only_minus = apply_model(ModelElement(mu_grid, np.zeros(mu_grid.m), phi.minus))
    assert not only_plus.plus.any() and only_plus.minus.any()
    assert not only_minus.minus.any() and only_minus.plus.any()


def test_apply_twice(mu_grid):
    phi = _random_element(mu_grid, 4)
    twice = apply_model(apply_model(phi))
    factor = 0.5j / np.cosh(np.pi * mu_grid.mu)
    np.testing.assert_allclose(twice.plus, factor * phi.plus, rtol=1e-12, atol=1e-300)
    np.testing.assert_allclose(twice.minus, factor * phi.minus, rtol=1e-12, atol=1e-300)


def test_apply_model_to_closed_form_u(mu_grid):
    mu = mu_grid.mu[mu_grid.mu <= 10]
    mg = MuGrid(float(mu[-1]), len(mu))
    phi = ModelElement(mg, u_exp_closed(1.0, mg.mu, 1), u_exp_closed(1.0, mg.mu, -1))
    out = apply_model(phi)
    np.testing.assert_allclose(out.plus, u_trunc_fourier_exp_closed(1.0, mg.mu, 1), rtol=1e-10)
    np.testing.assert_allclose(out.minus, u_trunc_fourier_exp_closed(1.0, mg.mu, -1), rtol=1e-10)


def test_apply_model_to_numeric_u(grid, mu_grid):
    out = apply_model(forward_u(exp_fn(1.0, grid), mu_grid))
    keep = mu_grid.mu <= 10
    ref = u_trunc_fourier_exp_closed(1.0, mu_grid.mu[keep], 1) / np.sqrt(2 * np.pi)
    assert np.max(np.abs(out.plus[keep] - ref)) <= 1e-6


@pytest.mark.parametrize("a", [0.5, 1.0, 2.0])
def test_closed_form_defect(a):
    assert closed_form_defect(a, np.linspace(0, 10, 1001)) <= 1e-10


@pytest.mark.parametrize("a", [0.5, 1.0, 2.0])
def test_numeric_defect(grid, mu_grid, a):
    assert model_identity_defect(exp_fn(a, grid), mu_grid) <= 1e-3


def test_numeric_defect_decreases_with_n(mu_grid):
    d = [model_identity_defect(exp_fn(1.0, LogGrid(-32, 32, n)), mu_grid) for n in (2048, 4096, 8192)]
    assert d[0] > d[1] > d[2]


def test_numeric_defect_zero(grid):
    assert model_identity_defect(HalfLineFunction.zeros(grid)) == 0.0
