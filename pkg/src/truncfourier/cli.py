"""Command-line driver: verification suite and CSV sweeps.

Exit status is 0 when everything passes, 1 when a check fails and 2 for
usage or configuration errors.
"""

import argparse
import json
import sys
from pathlib import Path

import numpy as np

from .checks import run_verify
from .config import ConfigError, load_config
from .formats import (
    atomic_write,
    csv_text,
    read_halfline,
    read_model_element,
    write_halfline,
    write_model_element,
)
from .operator import apply_trunc_fourier
from .spectral import (
    SpectrumSegment,
    eigenvalues,
    loglog_slope,
    non_normality_witness,
    resolvent_bounds_operator,
)
from .unitary import forward_u, inverse_u

EXIT_OK = 0
EXIT_FAIL = 1
EXIT_USAGE = 2


class UsageError(Exception):
    """Bad arguments or unreadable input; maps to exit status 2."""


def _common_flags():
    p = argparse.ArgumentParser(add_help=False)
    p.add_argument("--config", help="JSON run configuration")
    p.add_argument("--json", action="store_true", help="machine-readable output only")
    p.add_argument("--out", help="output directory (overrides the config)")
    p.add_argument("--n", type=int, help="number of eta nodes")
    p.add_argument("--mu-max", type=float, help="upper end of the mu grid")
    return p


def build_parser():
    common = _common_flags()
    parser = argparse.ArgumentParser(
        prog="truncfourier",
        description="Truncated Fourier operator on L^2(0, inf): checks and CSV sweeps.")
    sub = parser.add_subparsers(dest="command", required=True)

    v = sub.add_parser("verify", parents=[common], help="run every identity check")
    v.add_argument("--slow", action="store_true",
                   help="also run the dense spectral-radius check")

    sub.add_parser("spectrum", parents=[common], help="eigenvalue curves as CSV")
    sub.add_parser("resolvent", parents=[common], help="resolvent bounds over the z grid")

    t = sub.add_parser("transform", parents=[common], help="apply U, U^{-1} or F to a CSV")
    t.add_argument("input", help="input CSV (with its .json grid sidecar)")
    t.add_argument("--direction", choices=("forward", "inverse", "fourier"), required=True)

    w = sub.add_parser("witness", parents=[common], help="non-normality witness table")
    w.add_argument("--deltas", type=float, nargs="+",
                   help="strictly decreasing positive distances (default from config)")
    return parser


def _load(args):
    cfg = load_config(args.config)
    overrides = {"n": args.n, "mu_max": args.mu_max, "output_dir": args.out}
    if getattr(args, "deltas", None):
        overrides["deltas"] = tuple(args.deltas)
    return cfg.with_overrides(**overrides)


def _emit(args, payload, prose):
    if args.json:
        print(json.dumps(payload, indent=2, sort_keys=True))
    else:
        print(prose)


def cmd_verify(args, cfg):
    progress = None if args.json else (lambda name: print(f"running {name} ...", file=sys.stderr))
    results = run_verify(cfg, slow=args.slow, progress=progress)
    failed = [r for r in results if r.passed is False]
    if args.json:
        print(json.dumps([r.to_dict() for r in results], indent=2))
    else:
        for r in results:
            tag = {True: "PASS", False: "FAIL", None: "INFO"}[r.passed]
            print(f"{tag}  {r.check:<40} value={r.value:.3e}  tol={r.tolerance:.1e}")
        print(f"{len(failed)} failed, {len(results)} reported")
    if failed:
        print(f"first failure: {failed[0].check}", file=sys.stderr)
        return EXIT_FAIL
    return EXIT_OK


def cmd_spectrum(args, cfg):
    mg = cfg.mu_grid
    zp, zm = eigenvalues(mg.mu)
    seg = SpectrumSegment()
    comments = [
        f"endpoint_plus={seg.endpoint_plus.real:.17g}{seg.endpoint_plus.imag:+.17g}j",
        f"endpoint_minus={seg.endpoint_minus.real:.17g}{seg.endpoint_minus.imag:+.17g}j",
    ]
    rows = zip(mg.mu, zp.real, zp.imag, zm.real, zm.imag)
    path = Path(cfg.output_dir) / "spectrum.csv"
    atomic_write(path, csv_text(
        ("mu", "re_zeta_plus", "im_zeta_plus", "re_zeta_minus", "im_zeta_minus"), rows, comments))
    _emit(args, {"path": str(path), "rows": mg.m}, f"wrote {path} ({mg.m} rows)")
    return EXIT_OK


def cmd_resolvent(args, cfg):
    seg = SpectrumSegment()
    rows = []
    for z in cfg.z_grid.points():
        if seg.distance(z) <= 1e-6:
            continue
        rb = resolvent_bounds_operator(z, cfg.mu_grid)
        rows.append((z.real, z.imag, rb.lower, rb.upper, rb.numeric))
    path = Path(cfg.output_dir) / "resolvent.csv"
    atomic_write(path, csv_text(("re_z", "im_z", "lower", "upper", "numeric"), rows))
    inside = sum(lo <= num <= up for _, _, lo, up, num in rows)
    _emit(args, {"path": str(path), "rows": len(rows), "bracketed": inside},
          f"wrote {path} ({len(rows)} points, {inside} bracketed)")
    return EXIT_OK


def cmd_transform(args, cfg):
    src = Path(args.input)
    try:
        if args.direction == "inverse":
            data = read_model_element(src)
        else:
            data = read_halfline(src)
    except (OSError, ValueError, KeyError) as exc:
        raise UsageError(f"cannot read {src}: {exc}") from exc
    path = Path(cfg.output_dir) / f"{src.stem}_{args.direction}.csv"
    if args.direction == "forward":
        write_model_element(forward_u(data, cfg.mu_grid), path)
    elif args.direction == "inverse":
        write_halfline(inverse_u(data, cfg.log_grid), path)
    else:
        write_halfline(apply_trunc_fourier(data), path)
    _emit(args, {"path": str(path), "direction": args.direction}, f"wrote {path}")
    return EXIT_OK


def cmd_witness(args, cfg):
    rows = non_normality_witness(cfg.deltas, cfg.mu_grid)
    path = Path(cfg.output_dir) / "witness.csv"
    atomic_write(path, csv_text(("delta", "dist", "resolvent", "product"), rows))
    slope = None
    if len(rows) >= 2:
        slope = loglog_slope([r.delta for r in rows], [r.resolvent for r in rows])
    prose = f"wrote {path} ({len(rows)} rows)"
    if slope is not None:
        prose += f"\nlog-log slope of resolvent norm vs delta: {slope:.6f}"
    _emit(args, {"path": str(path), "rows": len(rows), "slope": slope}, prose)
    return EXIT_OK


COMMANDS = {
    "verify": cmd_verify,
    "spectrum": cmd_spectrum,
    "resolvent": cmd_resolvent,
    "transform": cmd_transform,
    "witness": cmd_witness,
}


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        cfg = _load(args)
        with np.errstate(all="ignore"):
            return COMMANDS[args.command](args, cfg)
    except (ConfigError, UsageError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
