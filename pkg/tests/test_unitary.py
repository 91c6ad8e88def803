from concurrent.futures import ThreadPoolExecutor

import mpmath
import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from truncfourier.halfline import (
    GridMismatchError,
    HalfLineFunction,
    LogGrid,
    MuGrid,
    eta_gaussian,
    exp_fn,
    norm_sq,
    standard_test_set,
)
from truncfourier.unitary import (
    ModelElement,
    forward_u,
    inverse_u,
    model_inner_product,
    parseval_defect,
)

SQRT_2PI = np.sqrt(2 * np.pi)


def test_zero_maps_to_zero(grid, mu_grid):
    phi = forward_u(HalfLineFunction.zeros(grid), mu_grid)
    assert not phi.plus.any() and not phi.minus.any()
    x = inverse_u(ModelElement.zeros(mu_grid), grid)
    assert not x.values.any()


def test_forward_e1_against_mpmath(grid, mu_grid):
    phi = forward_u(exp_fn(1.0, grid), mu_grid)
    mu = mu_grid.mu
    for j in range(0, np.searchsorted(mu, 10.0), 97):
        g = complex(mpmath.gamma(mpmath.mpc(0.5, mu[j])))
        assert abs(phi.plus[j] - g / SQRT_2PI) < 1e-6
        assert abs(phi.minus[j] - g.conjugate() / SQRT_2PI) < 1e-6


def test_forward_e2_at_zero(grid, mu_grid):
    # 2^{-1/2} Gamma(1/2) / sqrt(2 pi) = 1/2
    phi = forward_u(exp_fn(2.0, grid), mu_grid)
    assert phi.plus[0] == pytest.approx(0.5, abs=1e-6)
    assert phi.minus[0] == pytest.approx(0.5, abs=1e-6)


def test_forward_gaussian_closed_form(grid, mu_grid):
    # v = exp(-eta^2) has u(nu) = exp(-nu^2 / 4) / sqrt 2
    phi = forward_u(eta_gaussian(grid), mu_grid)
    expected = np.exp(-mu_grid.mu ** 2 / 4) / np.sqrt(2)
    assert np.max(np.abs(phi.plus - expected)) < 1e-10
    assert np.max(np.abs(phi.minus - expected)) < 1e-10


def test_parseval_zero(grid):
    assert parseval_defect(HalfLineFunction.zeros(grid)) == 0.0


def test_parseval_e1_closed_forms(grid, mu_grid):
    # ||e_1||^2 = 1/2 and 2 * int_0^inf |Gamma(1/2+i mu)|^2 d mu / (2 pi) = 1/2
    phi = forward_u(exp_fn(1.0, grid), mu_grid)
    assert norm_sq(exp_fn(1.0, grid)) == pytest.approx(0.5, rel=1e-12)
    assert phi.norm_sq() == pytest.approx(0.5, rel=1e-9)


def test_parseval_standard_set(grid, mu_grid):
    for name, x in standard_test_set(grid).items():
        assert parseval_defect(x, mu_grid) <= 1e-6, name


def test_channel_symmetry_for_real_input(grid, mu_grid):
    for name, x in standard_test_set(grid).items():
        if np.any(x.values.imag):
            continue
        phi = forward_u(x, mu_grid)
        assert np.max(np.abs(phi.minus - np.conj(phi.plus))) <= 1e-12, name


def test_roundtrip_e1_pointwise(grid, mu_grid):
    x = exp_fn(1.0, grid)
    back = inverse_u(forward_u(x, mu_grid), grid)
    keep = (grid.xi >= 0.01) & (grid.xi <= 10)
    assert np.max(np.abs(back.values - x.values)[keep]) <= 1e-8


def test_roundtrip_standard_set_interior(grid, mu_grid):
    keep = (grid.eta >= grid.eta_min + 4) & (grid.eta <= grid.eta_max - 4)
    for name, x in standard_test_set(grid).items():
        back = inverse_u(forward_u(x, mu_grid), grid)
        err = np.sum(np.abs(back.values - x.values) ** 2 * grid.weights * keep)
        assert np.sqrt(err / norm_sq(x)) <= 1e-8, name


def _band_limited(mu_grid, seed):
    r = np.random.default_rng(seed)
    k = r.integers(1, 5)
    centres = r.uniform(-8, 8, k)
    widths = r.uniform(0.5, 2.0, k)
    coeffs = r.normal(size=k) + 1j * r.normal(size=k)

    def u(nu):
        return sum(c * np.exp(-((nu - c0) / w) ** 2 / 2) for c, c0, w in zip(coeffs, centres, widths))

    mu = mu_grid.mu
    return ModelElement(mu_grid, u(mu), u(-mu))


@settings(max_examples=25)
@given(st.integers(0, 2**32 - 1))
def test_surjectivity_witness(seed):
    mg = MuGrid(20.0, 4096)
    grid = LogGrid(-32, 32, 4096)
    phi = _band_limited(mg, seed)
    back = forward_u(inverse_u(phi, grid), mg)
    assert (back - phi).norm() <= 1e-6 * phi.norm()


def test_conjugate_symmetric_data_gives_real_output(mu_grid, grid):
    phi = _band_limited(mu_grid, 7)
    sym = ModelElement(mu_grid, phi.plus, np.conj(phi.plus))
    x = inverse_u(sym, grid)
    assert np.max(np.abs(x.values.imag * np.sqrt(grid.xi))) <= 1e-12 * np.max(np.abs(x.values * np.sqrt(grid.xi)))


def test_model_element_validation(mu_grid):
    with pytest.raises(ValueError):
        ModelElement(mu_grid, np.zeros(3), np.zeros(mu_grid.m))
    bad = np.zeros(mu_grid.m)
    bad[0] = np.inf
    with pytest.raises(ValueError):
        ModelElement(mu_grid, bad, np.zeros(mu_grid.m))


def test_model_element_algebra(mu_grid):
    a = _band_limited(mu_grid, 1)
    b = _band_limited(mu_grid, 2)
    assert (a + b - b).norm() == pytest.approx(a.norm(), rel=1e-12)
    assert (2 * a).norm_sq() == pytest.approx(4 * a.norm_sq(), rel=1e-14)
    assert model_inner_product(a, a).real == pytest.approx(a.norm_sq(), rel=1e-14)
    with pytest.raises(GridMismatchError):
        a + ModelElement.zeros(MuGrid(10.0, 11))


def test_concurrent_calls_agree(grid, mu_grid):
    xs = [exp_fn(a, grid) for a in (0.5, 1.0, 2.0, 0.5, 1.0, 2.0)]
    serial = [forward_u(x, mu_grid).plus for x in xs]
    with ThreadPoolExecutor(max_workers=6) as pool:
        parallel = list(pool.map(lambda x: forward_u(x, mu_grid).plus, xs))
    for s, p in zip(serial, parallel):
        np.testing.assert_array_equal(s, p)
