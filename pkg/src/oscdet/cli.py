"""Command-line surface: spectra, actions, poles, determinants, zetas,
predictions, the verification harness, and the two figure datasets.

All numeric output is emitted with repr round-tripping so repeated runs
with the same configuration are byte-identical.
"""

from __future__ import annotations

import argparse
import csv
import json
import os
import sys
from fractions import Fraction

from . import __version__
from .actions import binomial_action, improper_action, trinomial_action_asymptotic
from .errors import AccuracyError, DivergenceError, DomainError, ModelError, TailPreconditionError
from .mellin import contributing_poles, enumerate_poles
from .potential import PotentialSpec, symanzik_map
from .predictions import (
    VerifyConfig,
    fig2_left_rows,
    fig2_right_rows,
    predict_det_ratio_g,
    predict_Z1,
    verify,
)
from .spectral import (
    harmonic_det,
    harmonic_zeta_full,
    harmonic_zeta_skew,
    shooting_det,
    zeta_full,
    zeta_skew,
)
from .spectrum import eigenvalues

_OUTDIR_ENV = "OSCDET_OUTDIR"


def _out_path(args, default_name):
    if args.out:
        return args.out
    outdir = os.environ.get(_OUTDIR_ENV)
    if outdir:
        return os.path.join(outdir, default_name)
    return None   # stdout


def _emit_rows(rows, path):
    if path is None:
        writer = csv.writer(sys.stdout, lineterminator="\n")
        for row in rows:
            writer.writerow(row)
    else:
        with open(path, "w", newline="") as fh:
            writer = csv.writer(fh, lineterminator="\n")
            for row in rows:
                writer.writerow(row)
        print(path)


def _emit_text(text, path):
    if path is None:
        print(text)
    else:
        with open(path, "w") as fh:
            fh.write(text + "\n")
        print(path)


def _spec_from_args(args) -> PotentialSpec:
    if args.spec is not None:
        return PotentialSpec.from_text(args.spec)
    return PotentialSpec(N=args.N, M=args.M, u=args.u, v=args.v, lam=args.lam)


def _add_spec_arguments(p):
    p.add_argument("--spec", help="potential as 'N M u v lambda'")
    p.add_argument("--N", type=int, default=4)
    p.add_argument("--M", type=int, default=2)
    p.add_argument("--u", type=float, default=1.0)
    p.add_argument("--v", type=float, default=1.0)
    p.add_argument("--lam", "--lambda", dest="lam", type=float, default=0.0)


def cmd_spectrum(args):
    spec = _spec_from_args(args)
    result = eigenvalues(spec, args.count, args.tol)
    rows = [["k", "parity", "value", "err_est"]]
    rows += [[str(e.k), e.parity, repr(e.value), repr(e.err_est)]
             for e in result.entries]
    _emit_rows(rows, _out_path(args, "spectrum.csv"))
    return 0


def cmd_action(args):
    spec = _spec_from_args(args)
    out = {"spec": spec.to_text()}
    if args.method == "closed":
        a = binomial_action(spec.u, spec.v, spec.N, spec.M)
        out.update(value=a.value, method=a.method, level=a.level)
    elif args.method == "asymptotic":
        out.update(value=trinomial_action_asymptotic(spec.N, spec.M, spec.v, spec.lam),
                   method="asymptotic")
    else:
        a = improper_action(spec, tol=args.tol)
        out.update(value=a.value, method=a.method,
                   residue=a.residue_used.value)
    _emit_text(json.dumps(out, indent=2, sort_keys=True), _out_path(args, "action.json"))
    return 0


def cmd_poles(args):
    window = (Fraction(args.window_lo), Fraction(args.window_hi))
    poles = enumerate_poles(args.N, args.M, window)
    lead, sub = contributing_poles(args.N, args.M)

    def encode(p):
        return {
            "sigma0": str(p.sigma0),
            "mobile": p.mobile,
            "source": p.source,
            "index": p.index,
            "d_v": str(p.d_v),
            "d_lambda": str(p.d_lambda),
            "d_g": str(p.d_g),
            "confluent": p.is_confluent,
            "pinching": p.is_pinching,
            "double": p.is_double,
        }

    out = {
        "N": args.N,
        "M": args.M,
        "poles": [encode(p) for p in poles],
        "contributing": {"leading": encode(lead), "subleading": encode(sub)},
    }
    _emit_text(json.dumps(out, indent=2, sort_keys=True), _out_path(args, "poles.json"))
    return 0


def cmd_det(args):
    spec = _spec_from_args(args)
    if args.harmonic or (spec.N == 2 and spec.v == 0.0):
        d = harmonic_det(spec.u, spec.lam + args.shift)
    else:
        d = shooting_det(spec, args.shift)
    out = {
        "spec": spec.to_text(),
        "shift": args.shift,
        "method": d.method,
        "log_abs": {"even": d.log_abs_even, "odd": d.log_abs_odd,
                    "full": d.log_abs_full, "skew": d.log_abs_skew},
        "sign": {"even": d.sign_even, "odd": d.sign_odd},
        "value": {"even": d.even, "odd": d.odd, "full": d.full, "skew": d.skew},
    }
    _emit_text(json.dumps(out, indent=2, sort_keys=True), _out_path(args, "det.json"))
    return 0


def cmd_zeta(args):
    if args.harmonic:
        z = (harmonic_zeta_skew(args.s, args.E) if args.skew
             else harmonic_zeta_full(args.s, args.E))
        spec_text = "harmonic (exact levels)"
    else:
        spec = _spec_from_args(args)
        z = (zeta_skew(spec, args.s, args.E, count=args.count, tol=args.tol)
             if args.skew else
             zeta_full(spec, args.s, args.E, count=args.count, tol=args.tol))
        spec_text = spec.to_text()
    out = {"spec": spec_text, "s": z.s, "E": z.E, "skew": args.skew,
           "value": z.value, "tail_fraction": z.tail_fraction}
    _emit_text(json.dumps(out, indent=2, sort_keys=True), _out_path(args, "zeta.json"))
    return 0


def cmd_predict(args):
    out = {
        "family": {"N": args.N, "M": 2},
        "g": args.g,
        "E": args.E,
        "v": symanzik_map(2, args.N, args.g, args.E)[0],
        "Z1": predict_Z1(args.N, args.g, args.E),
        "log_det_ratio": predict_det_ratio_g(args.N, 2, args.g, args.E),
    }
    _emit_text(json.dumps(out, indent=2, sort_keys=True), _out_path(args, "predict.json"))
    return 0


def _config_from_args(args) -> VerifyConfig:
    cfg = VerifyConfig.from_file(args.config) if args.config else VerifyConfig()
    if args.grid and args.grid != "default":
        try:
            grid = tuple(float(x) for x in args.grid.split(","))
        except ValueError as exc:
            raise DomainError(f"bad --grid value: {exc}") from exc
        cfg = VerifyConfig(**{**cfg.__dict__, "grid": grid})
    if args.jobs != 1:
        cfg = VerifyConfig(**{**cfg.__dict__, "jobs": args.jobs})
    return cfg


def _family_N(args) -> int:
    """Accept either --N or the documented --family M,N form (M must be 2)."""
    if getattr(args, "family", None):
        try:
            M, N = (int(x) for x in args.family.split(","))
        except ValueError as exc:
            raise DomainError(f"bad --family value: {exc}") from exc
        if M != 2:
            raise DomainError("the verification families are q^2 + g q^N (M = 2)")
        return N
    return args.N


def cmd_verify(args):
    cfg = _config_from_args(args)
    report = verify(_family_N(args), cfg)
    if args.format == "csv":
        _emit_rows(report.to_csv_rows(), _out_path(args, "verify.csv"))
    else:
        _emit_text(report.to_json(), _out_path(args, "verify.json"))
    return 0 if report.passed else 1


def cmd_fig2(args):
    cfg = _config_from_args(args)
    outdir = args.outdir or os.environ.get(_OUTDIR_ENV) or "."
    os.makedirs(outdir, exist_ok=True)
    families = tuple(int(x) for x in args.families.split(","))
    left = os.path.join(outdir, "fig2_left.csv")
    right = os.path.join(outdir, "fig2_right.csv")
    with open(left, "w", newline="") as fh:
        csv.writer(fh, lineterminator="\n").writerows(fig2_left_rows(families, cfg))
    with open(right, "w", newline="") as fh:
        csv.writer(fh, lineterminator="\n").writerows(fig2_right_rows(families, cfg))
    print(left)
    print(right)
    return 0


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="oscdet",
        description="Regularized actions, spectra, and spectral determinants "
                    "of even anharmonic oscillators.")
    ap.add_argument("--version", action="version", version=__version__)
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("spectrum", help="parity-split eigenvalues as CSV")
    _add_spec_arguments(p)
    p.add_argument("--count", type=int, default=16)
    p.add_argument("--tol", type=float, default=1e-6)
    p.add_argument("--out")
    p.set_defaults(func=cmd_spectrum)

    p = sub.add_parser("action", help="regularized improper action integral")
    _add_spec_arguments(p)
    p.add_argument("--method", choices=("closed", "numeric", "asymptotic"),
                   default="closed")
    p.add_argument("--tol", type=float, default=1e-9)
    p.add_argument("--out")
    p.set_defaults(func=cmd_action)

    p = sub.add_parser("poles", help="Mellin pole table as JSON")
    p.add_argument("--N", type=int, required=True)
    p.add_argument("--M", type=int, required=True)
    p.add_argument("--window-lo", type=int, default=-3)
    p.add_argument("--window-hi", type=int, default=3)
    p.add_argument("--out")
    p.set_defaults(func=cmd_poles)

    p = sub.add_parser("det", help="spectral determinants (shooting or closed)")
    _add_spec_arguments(p)
    p.add_argument("--shift", type=float, default=0.0,
                   help="additional constant added to the potential")
    p.add_argument("--harmonic", action="store_true",
                   help="force the closed harmonic form (N = 2)")
    p.add_argument("--out")
    p.set_defaults(func=cmd_det)

    p = sub.add_parser("zeta", help="spectral zeta values")
    _add_spec_arguments(p)
    p.add_argument("--s", type=int, default=2)
    p.add_argument("--E", type=float, default=0.0)
    p.add_argument("--skew", action="store_true")
    p.add_argument("--harmonic", action="store_true",
                   help="exact harmonic levels instead of a solved spectrum")
    p.add_argument("--count", type=int, default=160)
    p.add_argument("--tol", type=float, default=1e-7)
    p.add_argument("--out")
    p.set_defaults(func=cmd_zeta)

    p = sub.add_parser("predict", help="closed-form small-g predictions")
    p.add_argument("--N", type=int, required=True)
    p.add_argument("--g", type=float, required=True)
    p.add_argument("--E", type=float, default=0.0)
    p.add_argument("--out")
    p.set_defaults(func=cmd_predict)

    p = sub.add_parser("verify", help="run the prediction-vs-numerics harness")
    p.add_argument("--N", type=int, default=4)
    p.add_argument("--family", help="M,N pair; equivalent to --N with M = 2")
    p.add_argument("--grid", help="comma-separated couplings, or 'default'")
    p.add_argument("--config", help="key=value config file")
    p.add_argument("--format", choices=("json", "csv"), default="json")
    p.add_argument("--jobs", type=int, default=1)
    p.add_argument("--out")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("fig2", help="emit both figure datasets as CSV")
    p.add_argument("--families", default="4,6")
    p.add_argument("--grid", help="comma-separated couplings")
    p.add_argument("--config", help="key=value config file")
    p.add_argument("--jobs", type=int, default=1)
    p.add_argument("--outdir")
    p.set_defaults(func=cmd_fig2)

    return ap


def main(argv=None) -> int:
    ap = build_parser()
    args = ap.parse_args(argv)
    try:
        return args.func(args)
    except (AccuracyError, ModelError, TailPreconditionError, DivergenceError) as exc:
        diag = {"error": type(exc).__name__, "message": str(exc)}
        if isinstance(exc, AccuracyError) and exc.err_est is not None:
            diag["err_est"] = exc.err_est
        print(json.dumps(diag, indent=2, sort_keys=True))
        return 3
    except DomainError as exc:
        ap.exit(2, f"{ap.prog}: error: {exc}\n")


if __name__ == "__main__":
    sys.exit(main())
