"""Spectrum, resolvent bounds and the non-normality witness.

The eigenvalues of F(mu) are zeta_{+-}(mu) = +-e^{i pi/4} / sqrt(2 cosh pi mu).
As mu runs over [0, inf) they sweep the two halves of the segment
[-e^{i pi/4}/sqrt 2, e^{i pi/4}/sqrt 2], with 0 reached only in the limit.
For z off the segment the resolvent norm is the supremum over mu of
||(zI - F(mu))^{-1}||, and since trace((zI-F)^*(zI-F)) = 2|z|^2 + 1 does not
depend on mu, that supremum is governed by d = dist(z^2, [0, i/2]).
"""

from dataclasses import dataclass
from functools import lru_cache
from typing import NamedTuple, Optional

import numpy as np
from scipy.optimize import minimize_scalar

from .halfline import MuGrid, default_mu_grid
from .model import model_entries
from .specialfn import check_mu, log_cosh

__all__ = [
    "SEGMENT_DIRECTION",
    "NORMAL_DIRECTION",
    "EigenvalueHitError",
    "OnSpectrumError",
    "SpectrumSegment",
    "ResolventBounds",
    "WitnessRow",
    "eigenvalues",
    "determinant",
    "dist_z2_to_segment",
    "normal_point",
    "dist_on_normal",
    "two_by_two_norm",
    "inverse_norm_model",
    "resolvent_bounds_matrix",
    "resolvent_bounds_operator",
    "resolvent_sup_exact",
    "resolvent_bounds_on_normal",
    "non_normality_witness",
    "loglog_slope",
    "sampled_spectrum",
    "hausdorff_to_segment",
]

SEGMENT_DIRECTION = np.exp(0.25j * np.pi)
NORMAL_DIRECTION = np.exp(0.75j * np.pi)
_ON_SEGMENT_TOL = 1e-12


class EigenvalueHitError(ArithmeticError):
    """Raised when z is (numerically) an eigenvalue of F(mu)."""


class OnSpectrumError(ArithmeticError):
    """Raised when z lies on the spectrum segment."""


@dataclass(frozen=True)
class SpectrumSegment:
    """The closed segment from endpoint_minus to endpoint_plus."""

    endpoint_plus: complex = SEGMENT_DIRECTION / np.sqrt(2.0)
    endpoint_minus: complex = -SEGMENT_DIRECTION / np.sqrt(2.0)

    @property
    def half_length(self) -> float:
        return abs(self.endpoint_plus - self.endpoint_minus) / 2.0

    def coordinates(self, z):
        """(along, across) coordinates of z relative to the segment midpoint."""
        mid = 0.5 * (self.endpoint_plus + self.endpoint_minus)
        unit = (self.endpoint_plus - mid) / self.half_length
        w = (np.asarray(z, dtype=complex) - mid) * np.conj(unit)
        return w.real, w.imag

    def distance(self, z):
        """Euclidean distance from z to the segment in the complex plane."""
        s, t = self.coordinates(z)
        over = np.maximum(np.abs(s) - self.half_length, 0.0)
        return np.hypot(over, t)


@dataclass(frozen=True)
class ResolventBounds:
    z: complex
    lower: float
    upper: float
    numeric: Optional[float] = None

    def __post_init__(self):
        if not (0.0 <= self.lower <= self.upper):
            raise ValueError(f"need 0 <= lower <= upper, got {self.lower}, {self.upper}")

    def brackets(self, slack=0.0) -> bool:
        """True when lower - slack <= numeric <= upper + slack."""
        if self.numeric is None:
            return False
        return self.lower - slack <= self.numeric <= self.upper + slack


class WitnessRow(NamedTuple):
    delta: float
    dist: float
    resolvent: float
    product: float


def _half_sech(mu):
    """1 / (2 cosh pi mu), without overflow."""
    return np.exp(-np.log(2.0) - log_cosh(np.pi * mu))


def eigenvalues(mu):
    """(zeta_+(mu), zeta_-(mu)) = +-e^{i pi/4} (2 cosh pi mu)^{-1/2}."""
    mu = check_mu(mu)
    zeta = SEGMENT_DIRECTION * np.sqrt(_half_sech(mu))
    return zeta, -zeta


def determinant(z, mu):
    """det(zI - F(mu)) = z^2 - i / (2 cosh pi mu)."""
    mu = check_mu(mu)
    return np.asarray(z, dtype=complex) ** 2 - 1j * _half_sech(mu)


def dist_z2_to_segment(z):
    """Distance from z^2 to the closed segment [0, i/2]."""
    w = np.asarray(z, dtype=complex) ** 2
    t = np.clip(w.imag, 0.0, 0.5)
    return np.abs(w - 1j * t)


def _check_on_segment(zeta):
    s, t = SpectrumSegment().coordinates(zeta)
    if abs(t) > _ON_SEGMENT_TOL or abs(s) > SpectrumSegment().half_length + _ON_SEGMENT_TOL:
        raise ValueError(f"zeta = {zeta} is not on the spectrum segment")


def normal_point(zeta, delta, side=1):
    """z = zeta + side * delta * e^{3 i pi / 4}, on the normal through zeta."""
    _check_on_segment(zeta)
    if not delta >= 0:
        raise ValueError(f"delta must be >= 0, got {delta!r}")
    if side not in (1, -1):
        raise ValueError(f"side must be +1 or -1, got {side!r}")
    return complex(zeta) + side * delta * NORMAL_DIRECTION


def dist_on_normal(zeta, delta):
    """dist(z^2, [0, i/2]) for z on the normal through zeta at distance delta."""
    _check_on_segment(zeta)
    if not delta >= 0:
        raise ValueError(f"delta must be >= 0, got {delta!r}")
    r = abs(zeta)
    return 2.0 * r * delta if delta <= r else r * r + delta * delta


def two_by_two_norm(m):
    """Exact singular values of a 2x2 matrix.

    Returns
    -------
    norm : float
        Largest singular value s0.
    inv_norm : float or None
        ``1 / s1``, or None when ``|det m| < 1e-300``.
    """
    m = np.asarray(m, dtype=complex)
    if m.shape != (2, 2):
        raise ValueError(f"expected a 2x2 matrix, got shape {m.shape}")
    a, b, c, d = m[0, 0], m[0, 1], m[1, 0], m[1, 1]
    trace = float(np.sum(np.abs(m) ** 2))
    delta = abs(a * d - b * c)
    # T^2 - 4 det^2 written as the discriminant of the Hermitian M^*M; this
    # form has no cancellation when the two singular values nearly coincide
    p = abs(a) ** 2 + abs(c) ** 2
    q = abs(b) ** 2 + abs(d) ** 2
    r = np.conj(a) * b + np.conj(c) * d
    s0_sq = 0.5 * (trace + np.hypot(p - q, 2.0 * abs(r)))
    s0 = float(np.sqrt(s0_sq))
    if delta < 1e-300:
        return s0, None
    # s0 s1 = |det|; forming s1 this way avoids the cancellation in T - sqrt(...)
    return s0, s0 / delta


def _inverse_norm_entries(z, f_pm, f_mp):
    # M = zI - F: p - q = |F_mp|^2 - |F_pm|^2, r = -(conj(z) F_pm + z conj(F_mp))
    z = complex(z)
    a_pm = np.abs(f_pm) ** 2
    a_mp = np.abs(f_mp) ** 2
    trace = 2.0 * abs(z) ** 2 + a_pm + a_mp
    disc = np.hypot(a_mp - a_pm, 2.0 * np.abs(np.conj(z) * f_pm + z * np.conj(f_mp)))
    delta = np.abs(z * z - f_pm * f_mp)
    s0 = np.sqrt(0.5 * (trace + disc))
    with np.errstate(divide="ignore"):
        return s0 / delta


def inverse_norm_model(z, mu):
    """||(zI - F(mu))^{-1}|| from the computed entries of F(mu), vectorized in mu."""
    return _inverse_norm_entries(z, *model_entries(mu))


@lru_cache(maxsize=8)
def _grid_entries(mu_grid):
    f_pm, f_mp = model_entries(mu_grid.mu)
    f_pm.setflags(write=False)
    f_mp.setflags(write=False)
    return f_pm, f_mp


def resolvent_bounds_matrix(z, mu) -> ResolventBounds:
    """Bounds on ||(zI - F(mu))^{-1}|| from |D(z, mu)| and the trace, plus the exact value."""
    mu = float(check_mu(mu))
    D = abs(determinant(z, mu))
    if D <= 1e-300:
        raise EigenvalueHitError(f"z = {z} is an eigenvalue of F({mu})")
    T = 2.0 * abs(z) ** 2 + 1.0
    upper = np.sqrt(T) / D
    lower = np.sqrt(max(T / D ** 2 - 2.0 / T, 0.0))
    numeric = float(inverse_norm_model(z, mu))
    return ResolventBounds(complex(z), float(min(lower, upper)), float(upper), numeric)


def _checked_distance(z):
    # z^2 carries a rounding error of a few ulps of |z|^2
    d = float(dist_z2_to_segment(z))
    if d <= 8.0 * np.finfo(float).eps * abs(z) ** 2:
        raise OnSpectrumError(f"z = {z} lies on the spectrum")
    return d


def resolvent_sup_exact(z) -> float:
    """sup_mu ||(zI - F(mu))^{-1}|| in closed form, (T + sqrt(T^2 - 4 d^2))^{1/2} / (sqrt 2 d)."""
    d = _checked_distance(z)
    T = 2.0 * abs(z) ** 2 + 1.0
    return float(np.sqrt(0.5 * (T + np.sqrt(max(T * T - 4.0 * d * d, 0.0)))) / d)


def _mu_sup(z, mu_grid, refine):
    values = _inverse_norm_entries(z, *_grid_entries(mu_grid))
    j = int(np.argmax(values))
    best = float(values[j])
    if refine and mu_grid.m > 1:
        lo = mu_grid.mu[max(j - 1, 0)]
        hi = mu_grid.mu[min(j + 1, mu_grid.m - 1)]
        res = minimize_scalar(lambda t: -float(inverse_norm_model(z, t)),
                              bounds=(lo, hi), method="bounded",
                              options={"xatol": 1e-13})
        best = max(best, -float(res.fun))
    return best


def resolvent_bounds_operator(z, mu_grid: MuGrid = None, refine=True) -> ResolventBounds:
    """Analytic bounds on ||(zI - F)^{-1}|| with the mu-sup oracle as numeric.

    The oracle is the largest 2x2 inverse norm over the grid nodes; with
    ``refine`` the maximum is polished by a bounded scalar search between
    the neighbours of the best node.
    """
    d = _checked_distance(z)
    mu_grid = default_mu_grid() if mu_grid is None else mu_grid
    T = 2.0 * abs(z) ** 2 + 1.0
    upper = np.sqrt(T) / d
    lower = max(upper - 2.0 * d / T ** 1.5, 0.0)
    return ResolventBounds(complex(z), float(lower), float(upper), _mu_sup(z, mu_grid, refine))


def resolvent_bounds_on_normal(zeta, delta, side=1, mu_grid: MuGrid = None) -> ResolventBounds:
    """Bounds along the normal to the segment at zeta, in terms of |zeta| delta.

    With z = zeta + side delta e^{3i pi/4}, A = (2|z|^2+1)^{1/2}/2 and
    B = 4 (2|z|^2+1)^{-3/2}:

    * zeta != 0 (needs delta <= |zeta|): A/(|zeta| delta) - B |zeta| delta
      <= ||R|| <= A/(|zeta| delta);
    * zeta == 0: 2A/|z|^2 - B <= ||R|| <= 2A/|z|^2.  That lower bound only
      holds for |z| <= sqrt 2; beyond it the sharper general bound
      2A/|z|^2 - B |z|^2 / 2 takes over, so the smaller of the two is used.
    """
    if not delta > 0:
        raise ValueError(f"delta must be > 0, got {delta!r}")
    z = normal_point(zeta, delta, side)
    r = abs(zeta)
    T = 2.0 * abs(z) ** 2 + 1.0
    A = 0.5 * np.sqrt(T)
    B = 4.0 / T ** 1.5
    if r == 0.0:
        upper = 2.0 * A / abs(z) ** 2
        lower = min(upper - B, upper - 0.5 * B * abs(z) ** 2)
    else:
        if delta > r * (1.0 + 1e-12):
            raise ValueError(f"the lower bound needs delta <= |zeta|, got {delta} > {r}")
        upper = A / (r * delta)
        lower = upper - B * r * delta
    numeric = resolvent_bounds_operator(z, mu_grid).numeric
    return ResolventBounds(z, float(max(lower, 0.0)), float(upper), numeric)


def non_normality_witness(deltas, mu_grid: MuGrid = None):
    """Rows (delta, dist(z, spectrum), ||R(z)||, delta ||R(z)||) for z = delta e^{3i pi/4}.

    For a normal operator the product would stay bounded; here it grows
    like 1/delta.
    """
    deltas = [float(d) for d in deltas]
    if not deltas:
        raise ValueError("need at least one delta")
    if any(not d > 0 for d in deltas):
        raise ValueError("deltas must be positive")
    if any(b >= a for a, b in zip(deltas, deltas[1:])):
        raise ValueError("deltas must be strictly decreasing")
    segment = SpectrumSegment()
    rows = []
    for d in deltas:
        z = d * NORMAL_DIRECTION
        res = resolvent_bounds_operator(z, mu_grid).numeric
        rows.append(WitnessRow(d, float(segment.distance(z)), res, d * res))
    return rows


def loglog_slope(x, y) -> float:
    """Least-squares slope of log y against log x."""
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    if len(x) < 2:
        raise ValueError("a slope needs at least two points")
    return float(np.polyfit(np.log(x), np.log(y), 1)[0])


def sampled_spectrum(mu_grid: MuGrid = None) -> np.ndarray:
    """zeta_+(mu_j), zeta_-(mu_j) for every node, then the limit point 0."""
    mu_grid = default_mu_grid() if mu_grid is None else mu_grid
    zp, zm = eigenvalues(mu_grid.mu)
    return np.concatenate([zp, zm, [0.0]])


def hausdorff_to_segment(points, segment: SpectrumSegment = None) -> float:
    """Hausdorff distance between a finite point set and the segment.

    The segment-to-points direction is evaluated through the projections
    onto the segment: the farthest segment point from the set sits at an
    endpoint or halfway across the widest gap between projections.
    """
    segment = SpectrumSegment() if segment is None else segment
    points = np.asarray(points, dtype=complex)
    to_segment = float(np.max(segment.distance(points)))
    s, t = segment.coordinates(points)
    L = segment.half_length
    cand = [-L, L]
    order = np.sort(np.clip(s, -L, L))
    cand.extend(0.5 * (order[1:] + order[:-1]))
    cand = np.asarray(cand)
    # distance from each candidate segment point to the nearest sample
    from_segment = 0.0
    for c in np.array_split(cand, max(1, len(cand) // 2048)):
        dist = np.abs(c[:, None] - (s + 1j * t)[None, :])
        from_segment = max(from_segment, float(np.max(np.min(dist, axis=1))))
    return max(to_segment, from_segment)
