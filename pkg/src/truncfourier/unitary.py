"""The isometry U from L^2(0, inf) onto the two-channel model space.

With v(eta) = e^{eta/2} x(e^eta) the two channels are

    (Ux)_+(mu) = (2 pi)^{-1/2} int v(eta) e^{+i mu eta} d eta,
    (Ux)_-(mu) = (2 pi)^{-1/2} int v(eta) e^{-i mu eta} d eta,   mu >= 0,

i.e. the Mellin transform on Re s = 1/2 split at mu = 0.  Both the forward
sum (eta -> mu) and the inverse sum (nu -> eta) are uniform-to-uniform
Fourier sums and are evaluated with a chirp-z transform.
"""

from dataclasses import dataclass
from functools import lru_cache

import numpy as np
from scipy.signal import CZT

from .halfline import (
    GridMismatchError,
    HalfLineFunction,
    LogGrid,
    MuGrid,
    default_log_grid,
    default_mu_grid,
    norm_sq,
    trapezoid_weights,
)

__all__ = [
    "ModelElement",
    "forward_u",
    "inverse_u",
    "parseval_defect",
    "model_inner_product",
]

INV_SQRT_2PI = 1.0 / np.sqrt(2.0 * np.pi)


@dataclass(frozen=True, eq=False)
class ModelElement:
    """A column (phi_+, phi_-) sampled on a MuGrid."""

    mu_grid: MuGrid
    plus: np.ndarray
    minus: np.ndarray

    def __post_init__(self):
        m = self.mu_grid.m
        for name in ("plus", "minus"):
            arr = np.asarray(getattr(self, name), dtype=complex)
            if arr.shape != (m,):
                raise ValueError(f"{name} must have {m} samples, got shape {arr.shape}")
            if not np.all(np.isfinite(arr)):
                raise ValueError(f"{name} samples must be finite")
            arr.setflags(write=False)
            object.__setattr__(self, name, arr)

    @classmethod
    def zeros(cls, mu_grid):
        z = np.zeros(mu_grid.m, dtype=complex)
        return cls(mu_grid, z, z)

    def _check(self, other):
        if other.mu_grid != self.mu_grid:
            raise GridMismatchError(f"{self.mu_grid} != {other.mu_grid}")

    def __add__(self, other):
        self._check(other)
        return ModelElement(self.mu_grid, self.plus + other.plus, self.minus + other.minus)

    def __sub__(self, other):
        self._check(other)
        return ModelElement(self.mu_grid, self.plus - other.plus, self.minus - other.minus)

    def __mul__(self, scalar):
        return ModelElement(self.mu_grid, scalar * self.plus, scalar * self.minus)

    __rmul__ = __mul__

    def norm_sq(self) -> float:
        """||phi_+||^2 + ||phi_-||^2 by the trapezoid rule in mu."""
        w = self.mu_grid.weights
        return float(np.sum((np.abs(self.plus) ** 2 + np.abs(self.minus) ** 2) * w))

    def norm(self) -> float:
        return float(np.sqrt(self.norm_sq()))


def model_inner_product(phi: ModelElement, psi: ModelElement) -> complex:
    phi._check(psi)
    w = phi.mu_grid.weights
    return complex(np.sum((phi.plus * np.conj(psi.plus) + phi.minus * np.conj(psi.minus)) * w))


@lru_cache(maxsize=32)
def _czt_plan(n_in, n_out, angle):
    # X_k = sum_j x_j exp(i * angle * j * k).  CZT objects are not mutated
    # by __call__, so sharing a cached plan between threads is safe.
    return CZT(n_in, n_out, w=np.exp(1j * angle), a=1.0)


def _fourier_sum(coeffs, start, step, n_out, out_step, sign):
    """sum_j coeffs_j exp(sign*i*t_k*s_j), s_j = start + j*step, t_k = k*out_step."""
    plan = _czt_plan(len(coeffs), n_out, sign * step * out_step)
    t = out_step * np.arange(n_out)
    return np.exp(sign * 1j * t * start) * plan(coeffs)


def forward_u(x: HalfLineFunction, mu_grid: MuGrid = None) -> ModelElement:
    """Apply U to sampled x, returning (Ux)_+ and (Ux)_- on `mu_grid`."""
    mu_grid = default_mu_grid() if mu_grid is None else mu_grid
    g = x.grid
    v = np.exp(0.5 * g.eta) * x.values
    c = v * trapezoid_weights(g.n, g.h) * INV_SQRT_2PI
    plus = _fourier_sum(c, g.eta_min, g.h, mu_grid.m, mu_grid.step, +1)
    # sum c e^{-i mu eta} = conj(sum conj(c) e^{+i mu eta}); keeps the two
    # channels exact conjugates of each other for real x.
    minus = np.conj(_fourier_sum(np.conj(c), g.eta_min, g.h, mu_grid.m, mu_grid.step, +1))
    return ModelElement(mu_grid, plus, minus)


def _inverse_sum(coeffs, mu_grid, target):
    """sum_j coeffs_j exp(-i mu_j eta_k) on the target eta nodes."""
    c = coeffs * np.exp(-1j * mu_grid.mu * target.eta_min)
    return _czt_plan(mu_grid.m, target.n, -mu_grid.step * target.h)(c)


def inverse_u(phi: ModelElement, target_grid: LogGrid = None) -> HalfLineFunction:
    """Invert U and return samples of x on `target_grid`.

    The full-line function u(nu) is phi_+(nu) for nu > 0 and phi_-(-nu) for
    nu < 0, so

        v(eta) = (2 pi)^{-1/2} [ int_0^inf phi_+ e^{-i mu eta} + int_0^inf phi_- e^{+i mu eta} ] d mu,

    and x(xi) = xi^{-1/2} v(ln xi).  Both integrals use the trapezoid rule
    on the mu grid; the node mu = 0 is shared, each channel taking half of
    it.  The second sum is formed as the conjugate of the first kind, so
    data with phi_- = conj(phi_+) gives exactly real x.
    """
    target_grid = default_log_grid() if target_grid is None else target_grid
    mg = phi.mu_grid
    w = mg.weights * INV_SQRT_2PI
    v = (_inverse_sum(w * phi.plus, mg, target_grid)
         + np.conj(_inverse_sum(w * np.conj(phi.minus), mg, target_grid)))
    return HalfLineFunction(target_grid, v * np.exp(-0.5 * target_grid.eta))


def parseval_defect(x: HalfLineFunction, mu_grid: MuGrid = None) -> float:
    """| ||(Ux)_+||^2 + ||(Ux)_-||^2 - ||x||^2 | / ||x||^2, zero for x = 0."""
    nx = norm_sq(x)
    if nx == 0.0:
        return 0.0
    return abs(forward_u(x, mu_grid).norm_sq() - nx) / nx
