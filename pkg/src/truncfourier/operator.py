"""The truncated Fourier operator on L^2(0, inf) and a dense matrix oracle.

    (F x)(t) = (2 pi)^{-1/2} int_0^inf x(xi) e^{i t xi} d xi,   t > 0.

Discretization
--------------
Each node xi_k = e^{eta_k} owns the log cell [xi_k e^{-h/2}, xi_k e^{h/2}].
The matrix of F between normalized cell indicators is

    G[j, k] = (2 pi)^{-1/2} |C_j|^{-1/2} |C_k|^{-1/2} int_{C_j} int_{C_k} e^{i t xi},

which depends on j + k only (a Hankel matrix) and has a closed form in the
sine and cosine integrals.  Because it is a compression of a contraction,
||G|| <= 1 for every grid, something a plain Nystrom matrix
(2 pi)^{-1/2} e^{i xi_j xi_k} sqrt(w_j w_k) does not guarantee once the
kernel oscillates faster than the grid resolves.  The two agree where
xi_j xi_k h is small.

The trapezoid rule halves the two end weights.  With S = diag(sqrt of the
halving factors) the matrix acting on weight-normalized samples is
``A = S G S`` and samples map through ``T = W^{-1/2} A W^{1/2}``, W being the
quadrature weights.  Then ``||T x||_W = ||A W^{1/2} x||``, ``||A|| <= 1``,
and adjointness under the shared quadrature holds exactly.
"""

import json
from dataclasses import dataclass
from functools import lru_cache

import numpy as np
from numpy.lib.stride_tricks import sliding_window_view
from scipy.linalg import svdvals
from scipy.special import gammaln, sici

from .halfline import HalfLineFunction, LogGrid, trapezoid_weights
from .specialfn import log_cosh, log_gamma, LOG_SQRT_2PI

__all__ = [
    "DEFAULT_DENSE_CAP",
    "CapExceededError",
    "ConvergenceError",
    "SingularResolventError",
    "DenseOperator",
    "hankel_values",
    "apply_trunc_fourier",
    "apply_adjoint",
    "trunc_fourier_exp_closed",
    "u_exp_closed",
    "u_trunc_fourier_exp_closed",
    "build_dense",
    "operator_norm_estimate",
    "spectral_radius_estimate",
    "resolvent_norm_numeric",
    "dump_dense",
    "load_dense",
]

DEFAULT_DENSE_CAP = 4096
_CHUNK_ROWS = 512
# Products xi_j xi_k below this go through the power series of the second
# difference; above it the sine/cosine integrals carry no cancellation.
_SERIES_CUTOFF = 8.0


class CapExceededError(ValueError):
    """Raised when a dense build would exceed the configured size cap."""


class ConvergenceError(RuntimeError):
    """Raised when an iterative or dense eigen/singular solver fails."""


class SingularResolventError(ArithmeticError):
    """Raised when zI - A is numerically singular."""


def _exp_integral(p):
    """E(p) = Ci(p) + i (Si(p) - pi/2), an antiderivative of e^{ip}/p."""
    si, ci = sici(p)
    return ci + 1j * (si - 0.5 * np.pi)


def _second_difference(P, h):
    """E(P e^h) - 2 E(P) + E(P e^{-h}) for P > 0.

    Near zero the logarithms in Ci cancel exactly; the series
    sum_{m>=1} (iP)^m / (m m!) * 4 sinh^2(m h / 2) is used there.
    """
    P = np.asarray(P, dtype=float)
    out = np.empty(P.shape, dtype=complex)
    small = P * np.exp(h) <= _SERIES_CUTOFF
    ps = P[small]
    log_p = np.log(ps)
    acc = np.zeros(ps.shape, dtype=complex)
    # term m: i^m / (m m!) * P^m * 4 sinh^2(m h / 2), in log space so that
    # sinh cannot overflow on very coarse grids
    for m in range(1, 200):
        x = 0.5 * m * h
        log_4sinh2 = 2.0 * (x + np.log(-np.expm1(-2.0 * x)))
        inc = 1j ** m * np.exp(m * log_p + log_4sinh2 - gammaln(m + 1) - np.log(m))
        acc += inc
        if np.all(np.abs(inc) <= 1e-18 * np.abs(acc)):
            break
    out[small] = acc
    pl = P[~small]
    out[~small] = (_exp_integral(pl * np.exp(h)) - 2.0 * _exp_integral(pl)
                   + _exp_integral(pl * np.exp(-h)))
    return out


@lru_cache(maxsize=16)
def _hankel_cached(eta_min, h, n):
    P = np.exp(2.0 * eta_min + h * np.arange(2 * n - 1))
    g = -1j * _second_difference(P, h) / (np.sqrt(P) * 2.0 * np.sinh(0.5 * h))
    g = g * np.exp(-LOG_SQRT_2PI)
    g.setflags(write=False)
    return g


def hankel_values(grid: LogGrid) -> np.ndarray:
    """g[s] with G[j, k] = g[j + k], s = 0 .. 2n-2 (read-only, cached)."""
    return _hankel_cached(grid.eta_min, grid.h, grid.n)


def _end_scaling(n):
    return np.sqrt(trapezoid_weights(n, 1.0))


def _hankel_matvec(g, a):
    """A @ a with A = S G S, G[j, k] = g[j + k]."""
    n = len(a)
    s = _end_scaling(n)
    a = s * a
    rows = sliding_window_view(g, n)  # row j is g[j : j + n], no copy
    out = np.empty(n, dtype=complex)
    for j0 in range(0, n, _CHUNK_ROWS):
        out[j0:j0 + _CHUNK_ROWS] = rows[j0:j0 + _CHUNK_ROWS] @ a
    return s * out


def apply_trunc_fourier(x: HalfLineFunction) -> HalfLineFunction:
    """Samples of F x at every grid node, by an O(n^2) direct sum.

    A direct sum rather than an FFT convolution keeps the relative accuracy
    at the small-xi end, where the output is divided by sqrt(w).
    """
    g = x.grid
    sw = np.sqrt(g.weights)
    return HalfLineFunction(g, _hankel_matvec(hankel_values(g), sw * x.values) / sw)


def apply_adjoint(x: HalfLineFunction) -> HalfLineFunction:
    """Samples of F* x; the kernel is e^{-i t xi}."""
    g = x.grid
    sw = np.sqrt(g.weights)
    b = np.conj(_hankel_matvec(hankel_values(g), np.conj(sw * x.values)))
    return HalfLineFunction(g, b / sw)


def _check_a(a):
    if not (np.isfinite(a) and a > 0):
        raise ValueError(f"need finite a > 0, got {a!r}")


def _check_channel(sign):
    if sign not in (1, -1):
        raise ValueError(f"channel must be +1 or -1, got {sign!r}")


def _check_mu(mu):
    mu = np.asarray(mu, dtype=float)
    if not np.all(np.isfinite(mu)) or np.any(mu < 0):
        raise ValueError(f"mu must be finite and >= 0, got {mu!r}")
    return mu


def trunc_fourier_exp_closed(a, t):
    """F e_a at t: (2 pi)^{-1/2} / (a - i t)."""
    _check_a(a)
    return np.exp(-LOG_SQRT_2PI) / (a - 1j * np.asarray(t, dtype=float))


def u_exp_closed(a, mu, sign=1):
    """a^{-1/2 - sign i mu} Gamma(1/2 + sign i mu), in log space.

    This is the Mellin integral of e_a without the (2 pi)^{-1/2} factor, so
    ``forward_u(e_a)`` equals this value divided by sqrt(2 pi).
    """
    _check_a(a)
    _check_channel(sign)
    mu = _check_mu(mu)
    lg = log_gamma(0.5 + 1j * mu)
    if sign == -1:
        lg = np.conj(lg)
    return np.exp((-0.5 - sign * 1j * mu) * np.log(a) + lg)


def u_trunc_fourier_exp_closed(a, mu, sign=1):
    """sqrt(pi/2) e^{i pi/4} a^{-1/2 + sign i mu} e^{-sign pi mu/2} / cosh(pi mu).

    Same normalization as :func:`u_exp_closed`; it equals
    F_{+-}(mu) u_exp_closed(a, mu, -1) for sign +1 and
    F_{-+}(mu) u_exp_closed(a, mu, +1) for sign -1.
    """
    _check_a(a)
    _check_channel(sign)
    mu = _check_mu(mu)
    log_val = (0.5 * np.log(0.5 * np.pi) + 0.25j * np.pi
               + (-0.5 + sign * 1j * mu) * np.log(a)
               - sign * 0.5 * np.pi * mu - log_cosh(np.pi * mu))
    return np.exp(log_val)


@dataclass(frozen=True, eq=False)
class DenseOperator:
    """Dense matrix acting on weight-normalized samples sqrt(w) x."""

    grid: LogGrid
    entries: np.ndarray

    def __post_init__(self):
        e = np.asarray(self.entries, dtype=complex)
        if e.shape != (self.grid.n, self.grid.n):
            raise ValueError(f"entries must be {self.grid.n}x{self.grid.n}, got {e.shape}")
        if not np.all(np.isfinite(e)):
            raise ValueError("entries must be finite")
        object.__setattr__(self, "entries", e)

    def __mul__(self, scalar):
        return DenseOperator(self.grid, scalar * self.entries)

    __rmul__ = __mul__

    def apply(self, x: HalfLineFunction) -> HalfLineFunction:
        sw = np.sqrt(self.grid.weights)
        return HalfLineFunction(self.grid, (self.entries @ (sw * x.values)) / sw)


def build_dense(grid: LogGrid, cap: int = DEFAULT_DENSE_CAP) -> DenseOperator:
    """Materialize A = S G S for `grid`.

    Raises
    ------
    CapExceededError
        If ``grid.n > cap``.
    """
    if grid.n > cap:
        raise CapExceededError(f"n = {grid.n} exceeds the dense cap {cap}")
    g = hankel_values(grid)
    s = _end_scaling(grid.n)
    return DenseOperator(grid, s[:, None] * sliding_window_view(g, grid.n) * s[None, :])


def operator_norm_estimate(A: DenseOperator) -> float:
    """Largest singular value from a dense SVD.

    The top singular values of A cluster just below 1, which makes
    Krylov iterations slow to separate them; a full SVD is faster here.
    """
    try:
        return float(svdvals(A.entries, check_finite=False)[0])
    except np.linalg.LinAlgError as exc:
        raise ConvergenceError(f"SVD failed for n = {A.grid.n}: {exc}") from exc


def spectral_radius_estimate(A: DenseOperator) -> float:
    """Largest eigenvalue modulus from a dense eigensolve."""
    try:
        ev = np.linalg.eigvals(A.entries)
    except np.linalg.LinAlgError as exc:
        raise ConvergenceError(f"eigvals failed for n = {A.grid.n}: {exc}") from exc
    return float(np.max(np.abs(ev)))


def resolvent_norm_numeric(A: DenseOperator, z: complex) -> float:
    """1 / sigma_min(z I - A)."""
    M = -A.entries.copy()
    M[np.diag_indices_from(M)] += z
    smin = float(svdvals(M, check_finite=False)[-1])
    if smin < 1e-300:
        raise SingularResolventError(f"z = {z} is numerically an eigenvalue")
    return 1.0 / smin


def dump_dense(A: DenseOperator, path) -> None:
    """Write a JSON header line, then little-endian complex128 entries row-major."""
    header = {"n": A.grid.n, "eta_min": A.grid.eta_min, "eta_max": A.grid.eta_max}
    with open(path, "wb") as fh:
        fh.write(json.dumps(header, sort_keys=True).encode() + b"\n")
        fh.write(np.ascontiguousarray(A.entries, dtype="<c16").tobytes())


def load_dense(path) -> DenseOperator:
    with open(path, "rb") as fh:
        header = json.loads(fh.readline())
        data = fh.read()
    grid = LogGrid(header["eta_min"], header["eta_max"], header["n"])
    n = grid.n
    if len(data) != 16 * n * n:
        raise ValueError(f"expected {16 * n * n} bytes of entries, found {len(data)}")
    entries = np.frombuffer(data, dtype="<c16").reshape(n, n).astype(complex)
    return DenseOperator(grid, entries)
