"""The model matrix F(mu) and the multiplication operator M_F.

Under U the truncated Fourier operator becomes multiplication by

    F(mu) = [[0, F_pm(mu)], [F_mp(mu), 0]],
    F_pm = (2 pi)^{-1/2} e^{i pi/4} e^{-pi mu/2} Gamma(1/2 + i mu),
    F_mp = (2 pi)^{-1/2} e^{i pi/4} e^{+pi mu/2} Gamma(1/2 - i mu),

acting on columns (phi_+, phi_-).  Entries are formed in log space so that
nothing overflows for large mu.
"""

from dataclasses import dataclass

import numpy as np

from .halfline import HalfLineFunction, MuGrid, default_mu_grid, norm_sq
from .operator import apply_trunc_fourier, u_exp_closed, u_trunc_fourier_exp_closed
from .specialfn import LOG_SQRT_2PI, check_mu, log_gamma
from .unitary import ModelElement, forward_u

__all__ = [
    "ModelMatrix",
    "model_entries",
    "model_matrix",
    "matrix_norm",
    "apply_model",
    "mult_operator_norm",
    "model_identity_defect",
    "closed_form_defect",
]


@dataclass(frozen=True)
class ModelMatrix:
    """Off-diagonal entries of F(mu); the diagonal vanishes identically."""

    mu: float
    f_plus_minus: complex
    f_minus_plus: complex

    def as_array(self) -> np.ndarray:
        return np.array([[0.0, self.f_plus_minus], [self.f_minus_plus, 0.0]], dtype=complex)


def model_entries(mu):
    """Vectorized (F_pm(mu), F_mp(mu)) for mu >= 0."""
    mu = check_mu(mu)
    lg = log_gamma(0.5 + 1j * mu)
    base = -LOG_SQRT_2PI + 0.25j * np.pi
    f_pm = np.exp(base - 0.5 * np.pi * mu + lg)
    f_mp = np.exp(base + 0.5 * np.pi * mu + np.conj(lg))
    return f_pm, f_mp


def model_matrix(mu) -> ModelMatrix:
    """F(mu) at a single finite mu >= 0."""
    if np.ndim(mu) != 0:
        raise ValueError("model_matrix takes a scalar mu; use model_entries for arrays")
    f_pm, f_mp = model_entries(mu)
    return ModelMatrix(float(mu), complex(f_pm), complex(f_mp))


def matrix_norm(mu):
    """||F(mu)|| = (1 + e^{-2 pi mu})^{-1/2}."""
    mu = check_mu(mu)
    return 1.0 / np.sqrt(1.0 + np.exp(-2.0 * np.pi * mu))


def apply_model(phi: ModelElement) -> ModelElement:
    """(M_F phi)_+ = F_pm phi_-, (M_F phi)_- = F_mp phi_+ at every node."""
    f_pm, f_mp = model_entries(phi.mu_grid.mu)
    return ModelElement(phi.mu_grid, f_pm * phi.minus, f_mp * phi.plus)


def mult_operator_norm(mu_grid: MuGrid) -> float:
    """Largest ||F(mu_j)|| over the grid nodes."""
    return float(np.max(matrix_norm(mu_grid.mu)))


def model_identity_defect(x: HalfLineFunction, mu_grid: MuGrid = None) -> float:
    """||U F x - M_F U x|| / ||x|| with every piece computed numerically."""
    nx = norm_sq(x)
    if nx == 0.0:
        return 0.0
    mu_grid = default_mu_grid() if mu_grid is None else mu_grid
    lhs = forward_u(apply_trunc_fourier(x), mu_grid)
    rhs = apply_model(forward_u(x, mu_grid))
    return (lhs - rhs).norm() / np.sqrt(nx)


def closed_form_defect(a, mu) -> float:
    """Largest relative mismatch between U F e_a and F(mu) U e_a, both closed forms."""
    mu = check_mu(mu)
    f_pm, f_mp = model_entries(mu)
    lhs_p = u_trunc_fourier_exp_closed(a, mu, 1)
    lhs_m = u_trunc_fourier_exp_closed(a, mu, -1)
    rhs_p = f_pm * u_exp_closed(a, mu, -1)
    rhs_m = f_mp * u_exp_closed(a, mu, 1)
    rel_p = np.abs(lhs_p - rhs_p) / np.abs(lhs_p)
    rel_m = np.abs(lhs_m - rhs_m) / np.abs(lhs_m)
    return float(max(np.max(rel_p), np.max(rel_m)))
