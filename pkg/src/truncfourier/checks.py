"""Verification checks shared by the CLI and the acceptance tests.

Each check returns a list of :class:`CheckResult`.  ``passed`` is None for
study entries, which are reported but do not decide the exit status.
"""

from dataclasses import asdict, dataclass
from typing import Optional

import numpy as np

from .config import RunConfig
from .halfline import LogGrid, exp_fn, standard_test_set
from .model import closed_form_defect, matrix_norm, model_entries, model_identity_defect
from .operator import build_dense, operator_norm_estimate, spectral_radius_estimate
from .specialfn import log_cosh, log_gamma
from .spectral import (
    SEGMENT_DIRECTION,
    SpectrumSegment,
    hausdorff_to_segment,
    loglog_slope,
    non_normality_witness,
    resolvent_bounds_on_normal,
    resolvent_bounds_operator,
    sampled_spectrum,
    two_by_two_norm,
)
from .unitary import forward_u, inverse_u, parseval_defect

__all__ = [
    "CheckResult",
    "check_reflection",
    "check_entry_identities",
    "check_parseval",
    "check_parseval_shrink",
    "check_roundtrip",
    "check_model_closed",
    "check_model_numeric",
    "check_spectrum",
    "check_spectral_radius",
    "check_operator_norm",
    "check_resolvent_sandwich",
    "check_normal_line",
    "check_witness",
    "check_trace_det",
    "run_verify",
    "DENSE_N",
    "ROUNDTRIP_MARGIN",
]

DENSE_N = 2048
# Width in eta trimmed from each end of the window before comparing a
# roundtrip with its input; the window edge cuts v off and that jump is
# not representable on a finite mu window.
ROUNDTRIP_MARGIN = 4.0


@dataclass
class CheckResult:
    check: str
    value: float
    tolerance: float
    passed: Optional[bool]

    def to_dict(self):
        d = asdict(self)
        d["pass"] = d.pop("passed")
        return d


def _le(name, value, tol):
    return CheckResult(name, float(value), float(tol), bool(value <= tol))


def check_reflection(cfg: RunConfig):
    """Gamma(1/2 + i mu) Gamma(1/2 - i mu) cosh(pi mu) / pi = 1 on 300 points of [0, 30]."""
    mu = np.linspace(0.0, 30.0, 300)
    lg = log_gamma(0.5 + 1j * mu)
    log_ratio = (lg + log_gamma(0.5 - 1j * mu)) + log_cosh(np.pi * mu) - np.log(np.pi)
    resid = np.max(np.abs(np.expm1(log_ratio)))
    return [_le("reflection", resid, cfg.tol("reflection"))]


def check_entry_identities(cfg: RunConfig):
    mu = cfg.mu_grid.mu
    f_pm, f_mp = model_entries(mu)
    a_pm = 1.0 / np.sqrt(1.0 + np.exp(2.0 * np.pi * mu))
    a_mp = 1.0 / np.sqrt(1.0 + np.exp(-2.0 * np.pi * mu))
    tol = cfg.tol("entry_identity")
    out = [
        _le("entry_abs_fpm", np.max(np.abs(np.abs(f_pm) / a_pm - 1.0)), tol),
        _le("entry_abs_fmp", np.max(np.abs(np.abs(f_mp) / a_mp - 1.0)), tol),
        _le("entry_pythagoras", np.max(np.abs(np.abs(f_pm) ** 2 + np.abs(f_mp) ** 2 - 1.0)), tol),
    ]
    # the product identity F_pm F_mp = i / (2 cosh pi mu), in log form
    log_prod = np.log(f_pm * f_mp) - (np.log(0.5j) - log_cosh(np.pi * mu))
    out.append(_le("entry_product", np.max(np.abs(np.expm1(log_prod))), tol))
    out.append(_le("norm_formula", np.max(np.abs(np.abs(f_mp) - matrix_norm(mu))), tol))
    return out


def _parseval_set(grid: LogGrid, amplitudes):
    funcs = standard_test_set(grid, amplitudes)
    keys = [k for k in funcs if k.startswith("e_")] + ["gauss_0", "gauss_osc"]
    return {k: funcs[k] for k in keys}


def check_parseval(cfg: RunConfig):
    tol = cfg.tol("parseval")
    return [_le(f"parseval[{k}]", parseval_defect(x, cfg.mu_grid), tol)
            for k, x in _parseval_set(cfg.log_grid, cfg.amplitudes).items()]


def check_parseval_shrink(cfg: RunConfig, study=False):
    """Ratio defect(n) / defect(2n); the target is a factor of at least 4."""
    g1 = cfg.log_grid
    g2 = LogGrid(g1.eta_min, g1.eta_max, 2 * g1.n)
    out = []
    for (k, x1), x2 in zip(_parseval_set(g1, cfg.amplitudes).items(),
                           _parseval_set(g2, cfg.amplitudes).values()):
        d1 = parseval_defect(x1, cfg.mu_grid)
        d2 = parseval_defect(x2, cfg.mu_grid)
        ratio = d1 / d2 if d2 > 0 else np.inf
        out.append(CheckResult(f"parseval_shrink[{k}]", float(ratio), 4.0,
                               None if study else bool(ratio >= 4.0)))
    return out


def check_roundtrip(cfg: RunConfig):
    g = cfg.log_grid
    keep = (g.eta >= g.eta_min + ROUNDTRIP_MARGIN) & (g.eta <= g.eta_max - ROUNDTRIP_MARGIN)
    w = g.weights * keep
    tol = cfg.tol("roundtrip")
    out = []
    for k, x in standard_test_set(g, cfg.amplitudes).items():
        back = inverse_u(forward_u(x, cfg.mu_grid), g)
        err = np.sqrt(np.sum(np.abs(back.values - x.values) ** 2 * w) / np.sum(np.abs(x.values) ** 2 * w))
        out.append(_le(f"roundtrip[{k}]", err, tol))
    return out


def check_model_closed(cfg: RunConfig):
    mu = np.linspace(0.0, 10.0, 1001)
    tol = cfg.tol("model_closed")
    return [_le(f"model_closed[a={a:g}]", closed_form_defect(a, mu), tol) for a in cfg.amplitudes]


def check_model_numeric(cfg: RunConfig, study_convergence=False):
    g1 = cfg.log_grid
    tol = cfg.tol("model_numeric")
    out = [_le(f"model_numeric[a={a:g}]", model_identity_defect(exp_fn(a, g1), cfg.mu_grid), tol)
           for a in cfg.amplitudes]
    g2 = LogGrid(g1.eta_min, g1.eta_max, 2 * g1.n)
    d1 = model_identity_defect(exp_fn(1.0, g1), cfg.mu_grid)
    d2 = model_identity_defect(exp_fn(1.0, g2), cfg.mu_grid)
    out.append(CheckResult("model_numeric_decreasing[a=1]", float(d2 / d1), 1.0,
                           None if study_convergence else bool(d2 < d1)))
    return out


def check_spectrum(cfg: RunConfig):
    pts = sampled_spectrum(cfg.mu_grid)
    seg = SpectrumSegment()
    s, t = seg.coordinates(pts)
    transverse = float(np.max(np.abs(t)))
    overshoot = float(np.max(np.maximum(np.abs(s) - seg.half_length, 0.0)))
    return [
        _le("spectrum_transverse", max(transverse, overshoot), cfg.tol("spectrum_transverse")),
        _le("spectrum_hausdorff", hausdorff_to_segment(pts, seg), cfg.tol("spectrum_hausdorff")),
    ]


def _dense_grid(cfg):
    return LogGrid(cfg.eta_min, cfg.eta_max, DENSE_N)


def check_spectral_radius(cfg: RunConfig):
    rho = spectral_radius_estimate(build_dense(_dense_grid(cfg)))
    tol = cfg.tol("spectral_radius")
    return [_le("spectral_radius", abs(rho - 1.0 / np.sqrt(2.0)), tol)]


def check_operator_norm(cfg: RunConfig):
    est = operator_norm_estimate(build_dense(_dense_grid(cfg)))
    return [CheckResult("operator_norm", est, 1.0001, bool(0.95 <= est <= 1.0001))]


def check_resolvent_sandwich(cfg: RunConfig, avoid=0.02):
    """Worst violation, relative to the upper bound, over the z grid."""
    seg = SpectrumSegment()
    worst = 0.0
    count = 0
    for z in cfg.z_grid.points():
        if seg.distance(z) < avoid:
            continue
        rb = resolvent_bounds_operator(z, cfg.mu_grid)
        count += 1
        worst = max(worst, (rb.lower - rb.numeric) / rb.upper, (rb.numeric - rb.upper) / rb.upper)
    return [_le(f"resolvent_sandwich[{count} points]", max(worst, 0.0), cfg.tol("resolvent_slack"))]


def check_normal_line(cfg: RunConfig):
    slack = cfg.tol("resolvent_slack")
    tol = cfg.tol("normal_extrapolation")
    out = []
    for r in (0.1, 0.3, 0.5):
        zeta = r * SEGMENT_DIRECTION
        deltas = np.array([0.5, 0.2, 0.1, 0.05]) * r
        rows = [resolvent_bounds_on_normal(zeta, d, 1, cfg.mu_grid) for d in deltas]
        worst = max(max((rb.lower - rb.numeric) / rb.upper, (rb.numeric - rb.upper) / rb.upper)
                    for rb in rows)
        out.append(_le(f"normal_bracket[|zeta|={r:g}]", max(worst, 0.0), slack))
        intercept = np.polyfit(deltas, [d * rb.numeric for d, rb in zip(deltas, rows)], 1)[1]
        target = 0.5 * np.sqrt(2.0 * r * r + 1.0) / r
        out.append(_le(f"normal_extrapolation[|zeta|={r:g}]", abs(intercept / target - 1.0), tol))
    return out


WITNESS_DELTAS = tuple(np.geomspace(0.2, 0.02, 8))


def check_witness(cfg: RunConfig):
    rows = non_normality_witness(WITNESS_DELTAS, cfg.mu_grid)
    slope = loglog_slope([r.delta for r in rows], [r.resolvent for r in rows])
    products = [r.product for r in rows]
    increasing = all(b > a for a, b in zip(products, products[1:]))
    return [
        _le("witness_slope", abs(slope + 2.0), cfg.tol("witness_slope")),
        CheckResult("witness_product_increasing", float(increasing), 1.0, increasing),
    ]


def check_trace_det(cfg: RunConfig, count=1000, seed=12345):
    """Trace/determinant sandwiches for random 2x2 complex matrices."""
    rng = np.random.default_rng(seed)
    slack = cfg.tol("trace_det_slack")
    worst = 0.0
    for _ in range(count):
        m = rng.normal(size=(2, 2)) + 1j * rng.normal(size=(2, 2))
        T = float(np.sum(np.abs(m) ** 2))
        D = abs(np.linalg.det(m))
        s0, inv = two_by_two_norm(m)
        s0_sq = s0 * s0
        viol = [(T / 2 - s0_sq) / T, (s0_sq - T) / T]
        if inv is not None:
            upper = T / D ** 2
            viol += [(upper - 2.0 / T - inv ** 2) / upper, (inv ** 2 - upper) / upper]
        worst = max(worst, *viol)
    return [_le(f"trace_det[{count} matrices]", max(worst, 0.0), slack)]


def run_verify(cfg: RunConfig, slow=False, progress=None):
    """Every check in a fixed order.

    Convergence studies (doubling n) are reported with ``passed = None``.
    The dense spectral radius runs only with ``slow``.
    """
    steps = [
        ("specialfn", check_reflection),
        ("parseval", check_parseval),
        ("parseval_convergence", lambda c: check_parseval_shrink(c, study=True)),
        ("roundtrip", check_roundtrip),
        ("model_closed", check_model_closed),
        ("model_numeric", lambda c: check_model_numeric(c, study_convergence=True)),
        ("entries", check_entry_identities),
        ("spectrum", check_spectrum),
        ("operator_norm", check_operator_norm),
        ("resolvent", check_resolvent_sandwich),
        ("normal_line", check_normal_line),
        ("witness", check_witness),
        ("trace_det", check_trace_det),
    ]
    if slow:
        steps.append(("spectral_radius", check_spectral_radius))
    results = []
    for name, fn in steps:
        if progress is not None:
            progress(name)
        results.extend(fn(cfg))
    return results
