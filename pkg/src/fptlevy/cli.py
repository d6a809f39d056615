"""Command-line front end.

Every output starts with a manifest line (``# {...}`` for CSV, a
``{"manifest": ...}`` record for JSON lines) recording the command, model file,
parameters and tolerance.  Exit codes: 0 success, 1 numerical or hypothesis
failure, 2 input error.
"""

from __future__ import annotations

import argparse
import contextlib
import csv
import datetime as _dt
import json
import sys
from dataclasses import asdict, dataclass, field
from typing import Optional

import numpy as np

from . import __version__
from ._parallel import parallel_map
from .checks import CATALOG, CHECKS, run_catalog, run_checks
from .errors import FptError, InputError
from .fpt import FptModel, asymptote, asymptote_eval, fpt_density
from .inversion import DEFAULT_SPEC, QuadratureSpec
from .levy_model import diagnose
from .mc import SimConfig, ks_distance, simulate_fpt
from .modelspec import load_model
from .pricing import MarketSpec, laplace_fpt, risk_neutral_triplet, urc_gap_asymptote, urc_value

FAILED = "hypothesis-failed"


@dataclass
class RunManifest:
    command: str
    model: Optional[str]
    parameters: dict
    output: Optional[str]
    tolerance: Optional[float]
    version: str = __version__
    timestamp: str = field(default_factory=lambda: _dt.datetime.now(_dt.timezone.utc).isoformat(timespec="seconds"))

    def to_dict(self) -> dict:
        return asdict(self)


def parse_grid(text: str) -> np.ndarray:
    """``"1,2,5"``, ``"a:b:n"`` (linear) or ``"log:a:b:n"`` (geometric)."""
    try:
        if text.startswith("log:"):
            a, b, n = text[4:].split(":")
            return np.geomspace(float(a), float(b), int(n))
        if ":" in text:
            a, b, n = text.split(":")
            return np.linspace(float(a), float(b), int(n))
        return np.array([float(v) for v in text.split(",") if v.strip()])
    except ValueError:
        raise argparse.ArgumentTypeError(f"cannot parse grid {text!r}") from None


def _spec(args) -> QuadratureSpec:
    return DEFAULT_SPEC if args.tol is None else DEFAULT_SPEC.with_tolerance(args.tol)


def _manifest(args, parameters: dict) -> RunManifest:
    return RunManifest(
        command=args.command,
        model=getattr(args, "model", None),
        parameters=parameters,
        output=args.out,
        tolerance=args.tol,
    )


@contextlib.contextmanager
def _sink(path: Optional[str]):
    if path is None:
        yield sys.stdout
    else:
        with open(path, "w", newline="") as fh:
            yield fh


def _fmt(v):
    if isinstance(v, str):
        return v
    return repr(float(v))


def _write_table(args, manifest: RunManifest, columns: list, rows: list, extra: Optional[dict] = None) -> None:
    with _sink(args.out) as fh:
        if args.format == "jsonl":
            fh.write(json.dumps({"manifest": manifest.to_dict(), **(extra or {})}) + "\n")
            for row in rows:
                fh.write(json.dumps(dict(zip(columns, row))) + "\n")
            return
        fh.write("# " + json.dumps(manifest.to_dict(), sort_keys=True) + "\n")
        if extra:
            fh.write("# " + json.dumps(extra, sort_keys=True) + "\n")
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(columns)
        for row in rows:
            w.writerow([_fmt(v) for v in row])


def _write_json(args, manifest: RunManifest, payload: dict) -> None:
    with _sink(args.out) as fh:
        fh.write(json.dumps({"manifest": manifest.to_dict(), **payload}, indent=2) + "\n")


# -- commands ---------------------------------------------------------------------


def cmd_validate(args) -> int:
    trip = load_model(args.model)
    diag = diagnose(trip)
    _write_json(args, _manifest(args, {}), {"model": trip.to_dict(), "diagnostics": diag.to_dict()})
    return 0


def cmd_fpt(args) -> int:
    trip = load_model(args.model)
    model = FptModel(trip, args.b)
    spec = _spec(args)
    report = None
    note = None
    if args.asymptote != "none":
        try:
            report = asymptote(model, None if args.asymptote == "auto" else args.asymptote)
        except FptError as e:
            if args.asymptote != "auto":
                raise
            note = f"{type(e).__name__}: {e}"
    times = args.t
    dens = parallel_map(lambda s: fpt_density(model, float(s), spec), times)
    rows = []
    for s, (p, err) in zip(times, dens):
        if report is None:
            rows.append([s, p, err, FAILED, FAILED])
        else:
            a = asymptote_eval(report, s)
            rows.append([s, p, err, a, p / a])
    extra = {"asymptote": report.to_dict() if report else None}
    if note:
        extra["asymptote_note"] = note
    params = {"b": args.b, "t": [float(v) for v in times], "asymptote": args.asymptote}
    _write_table(args, _manifest(args, params), ["t", "p_b", "err", "asymptote", "ratio"], rows, extra)
    return 0


def cmd_price(args) -> int:
    trip = load_model(args.model)
    market = MarketSpec(args.r, args.K)
    # the drift is always replaced by its risk-neutral value
    calibrated = risk_neutral_triplet(args.r, trip.sigma, trip.jumps)
    model = FptModel(calibrated, market.b)
    spec = _spec(args)
    try:
        laplace = laplace_fpt(model, args.r)
    except FptError:
        laplace = None
    try:
        gap_report = urc_gap_asymptote(model, market)
    except FptError:
        gap_report = None
    values = parallel_map(lambda T: urc_value(model, MarketSpec(args.r, args.K, float(T)), spec), args.T)
    rows = []
    for T, u in zip(args.T, values):
        gap = laplace - u if laplace is not None else "n/a"
        if gap_report is None:
            asym = ratio = FAILED
        else:
            asym = asymptote_eval(gap_report, T)
            ratio = gap / asym if laplace is not None else "n/a"
        rows.append([T, u, laplace if laplace is not None else "n/a", gap, asym, ratio])
    params = {"r": args.r, "K": args.K, "b": market.b, "m_risk_neutral": calibrated.m, "T": [float(v) for v in args.T]}
    extra = {"gap_asymptote": gap_report.to_dict() if gap_report else None}
    _write_table(args, _manifest(args, params), ["T", "U_T", "laplace", "gap", "gap_asymptote", "ratio"], rows, extra)
    return 0


def cmd_simulate(args) -> int:
    trip = load_model(args.model)
    config = SimConfig(args.n, args.dt, args.horizon, eps=args.eps, seed=args.seed, bridge=not args.no_bridge)
    samples = simulate_fpt(trip, args.b, config)
    report = {
        "crossed": int(samples.crossing_times.size),
        "censored": samples.censored_count,
        "crossing_fraction": samples.crossing_fraction,
        "ks": None,
    }
    if not args.no_ks:
        try:
            report["ks"] = ks_distance(samples, FptModel(trip, args.b), _spec(args))
        except FptError as e:
            report["ks_note"] = f"{type(e).__name__}: {e}"
    params = {"b": args.b, **config.to_dict()}
    rows = [[v] for v in samples.crossing_times]
    _write_table(args, _manifest(args, params), ["crossing_time"], rows, {"report": report})
    return 0


def cmd_check(args) -> int:
    if args.model:
        results = run_checks(load_model(args.model), args.model, args.only)
    else:
        results = run_catalog(args.only)
    ok = all(r.passed for r in results)
    payload = {
        "passed": ok,
        "counts": {s: sum(r.status == s for r in results) for s in ("pass", "fail", "skip")},
        "results": [r.to_dict() for r in results],
    }
    _write_json(args, _manifest(args, {"only": args.only, "catalog": None if args.model else list(CATALOG)}), payload)
    return 0 if ok else 1


# -- parser -------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--tol", type=float, default=None, help="absolute tolerance on each density value")
    common.add_argument("--format", choices=("csv", "jsonl"), default="csv")
    common.add_argument("--out", default=None, help="output file (default: stdout)")

    p = argparse.ArgumentParser(prog="fptlevy", description=__doc__.splitlines()[0])
    p.add_argument("--version", action="version", version=__version__)
    sub = p.add_subparsers(dest="command", required=True)

    v = sub.add_parser("validate", parents=[common], help="diagnose a model file")
    v.add_argument("--model", required=True)
    v.set_defaults(func=cmd_validate)

    f = sub.add_parser("fpt", parents=[common], help="passage-time density and asymptote on a time grid")
    f.add_argument("--model", required=True)
    f.add_argument("--b", type=float, required=True)
    f.add_argument("--t", type=parse_grid, required=True, help="LIST, a:b:n or log:a:b:n")
    f.add_argument("--asymptote", choices=("auto", "stable", "gaussian", "tilted", "none"), default="auto")
    f.set_defaults(func=cmd_fpt)

    pr = sub.add_parser("price", parents=[common], help="unit recovery claim values over maturities")
    pr.add_argument("--model", required=True)
    pr.add_argument("--r", type=float, required=True)
    pr.add_argument("--K", type=float, required=True)
    pr.add_argument("--T", type=parse_grid, required=True, help="LIST, a:b:n or log:a:b:n")
    pr.set_defaults(func=cmd_price)

    s = sub.add_parser("simulate", parents=[common], help="Monte Carlo passage times and KS distance")
    s.add_argument("--model", required=True)
    s.add_argument("--b", type=float, required=True)
    s.add_argument("--n", type=int, default=100_000, help="number of paths")
    s.add_argument("--dt", type=float, default=1e-3)
    s.add_argument("--horizon", type=float, default=1.0)
    s.add_argument("--eps", type=float, default=1e-3, help="small-jump cutoff")
    s.add_argument("--seed", type=int, default=0)
    s.add_argument("--no-bridge", action="store_true", help="disable the bridge crossing correction")
    s.add_argument("--no-ks", action="store_true", help="skip the analytic KS comparison")
    s.set_defaults(func=cmd_simulate)

    c = sub.add_parser("check", parents=[common], help="run the invariant suite")
    c.add_argument("--model", default=None, help="model file (default: the built-in catalog)")
    c.add_argument("--only", nargs="*", choices=sorted(CHECKS), default=None)
    c.set_defaults(func=cmd_check)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return 2 if e.code else 0
    try:
        return args.func(args)
    except InputError as e:
        print(f"fptlevy: error: {e}", file=sys.stderr)
        return 2
    except FptError as e:
        print(f"fptlevy: {type(e).__name__}: {e}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
