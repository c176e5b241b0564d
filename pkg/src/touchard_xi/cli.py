"""Command-line interface: ``touchard-xi <subcommand> [options]``.

Exit status: 0 success, 1 verification failure, 2 usage or domain error.
"""

from __future__ import annotations

import argparse
import json
import logging
import sys
from fractions import Fraction
from pathlib import Path

import mpmath

from . import __version__
from .characters import resolve_character
from .errors import TouchardXiError
from .experiments import (
    StudyConfig,
    corrupted_g_family,
    growth_scan,
    parse_weights,
    records_to_csv,
    records_to_json,
    truncation_study,
    verify_all,
    weighted_study,
)
from .golden import hexfloat
from .lfunctions import theta_chi, theta_fe_residual, xi_lavrik
from .mpgamma import parse_complex
from .tables import TABLE_IDS, emit_tables

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2


class UsageError(Exception):
    pass


def _int_list(text: str) -> list[int]:
    try:
        values = [int(v) for v in text.split(",") if v.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}") from None
    if not values:
        raise argparse.ArgumentTypeError("empty list")
    return values


def parse_t_grid(text: str) -> list[Fraction]:
    """START:STOP:STEP, inclusive of STOP when it lies on the grid."""
    parts = text.split(":")
    if len(parts) != 3:
        raise argparse.ArgumentTypeError("t grid must be START:STOP:STEP")
    try:
        start, stop, step = (Fraction(p) for p in parts)
    except ValueError:
        raise argparse.ArgumentTypeError(f"bad t grid {text!r}") from None
    if step <= 0 or stop < start:
        raise argparse.ArgumentTypeError("t grid needs STEP > 0 and STOP >= START")
    count = int((stop - start) / step) + 1
    return [start + i * step for i in range(count)]


def _t_value(text: str) -> Fraction:
    try:
        return Fraction(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"t must be a real number, got {text!r}") from None


def _weights(text: str):
    try:
        return parse_weights(text)
    except ValueError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from None


def _mp(x: Fraction):
    return mpmath.mpf(x.numerator) / x.denominator


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--prec-bits", type=int, default=256, help="target precision in bits (default 256)")
    common.add_argument("--char", default="chi3", help="built-in character name or character file")
    common.add_argument("--format", choices=("csv", "json"), default="csv")
    common.add_argument("--out", type=Path, help="write output to this file instead of stdout")
    common.add_argument("--hexfloat", action="store_true", help="bit-exact hexadecimal floats")
    common.add_argument("--max-k", type=int, default=10)
    common.add_argument("--max-m", type=int, default=12)
    common.add_argument("--t", type=_t_value, action="append", help="a t value (repeatable)")
    common.add_argument("--t-grid", type=parse_t_grid, help="START:STOP:STEP")
    common.add_argument("--N-list", type=_int_list, default=[5, 10, 20])
    common.add_argument("--K-list", type=_int_list, default=[1, 2, 3])
    common.add_argument("--weights", type=_weights, default=None, help="FAMILY[:PARAM]")
    common.add_argument("-v", "--verbose", action="store_true")

    p = argparse.ArgumentParser(prog="touchard-xi", description=__doc__.splitlines()[0])
    p.add_argument("--version", action="version", version=__version__)
    sub = p.add_subparsers(dest="command", required=True)

    tp = sub.add_parser("tables", parents=[common], help="emit the exact polynomial/relation tables")
    tp.add_argument("--table", type=int, choices=TABLE_IDS, action="append",
                    help="table number (repeatable; default all)")
    tp.add_argument("--max-index", type=int, help="number of rows (defaults to the full table)")
    tp.add_argument("--tex", action="store_true", help="TeX tabular fragment instead of --format")

    vp = sub.add_parser("verify", parents=[common], help="exact and numeric identity sweep")
    vp.add_argument("--negative-control", action="store_true",
                    help="perturb G_3 so the sweep must report failures")

    xp = sub.add_parser("xi", parents=[common], help="completed L-function value")
    xp.add_argument("--s", help="complex argument, e.g. 0.3+2i (default 1/2 + i t)")
    xp.add_argument("--tau", default="1")
    xp.add_argument("--variant", choices=("upper", "lower"), default="upper")

    thp = sub.add_parser("theta", parents=[common], help="theta function and its functional equation")
    thp.add_argument("--tau", default="1")

    sub.add_parser("truncate", parents=[common], help="truncation study xi_N, xi_{N,K}")
    sub.add_parser("accelerate", parents=[common], help="weighted-acceleration study")
    sub.add_parser("growth", parents=[common], help="|xi_3(1/2+it)| against t^(1/4) e^(-pi t/4)")
    return p


def _t_values(args, default=None) -> list[Fraction]:
    values = list(args.t or [])
    if args.t_grid:
        values += args.t_grid
    if not values:
        if default is None:
            raise UsageError("give --t or --t-grid")
        values = list(default)
    return values


def _serialise(records, args) -> str:
    if args.format == "json":
        return records_to_json(records, args.prec_bits, args.hexfloat)
    return records_to_csv(records, args.prec_bits, args.hexfloat)


def _value_fields(value, prec: int, hexa: bool) -> tuple[str, str]:
    with mpmath.workprec(prec):
        z = mpmath.mpc(value)
        if hexa:
            return hexfloat(+z.real), hexfloat(+z.imag)
        digits = int(prec * 0.30103)
        return mpmath.nstr(z.real, digits), mpmath.nstr(z.imag, digits)


def _emit_rows(header: list[str], rows: list[list], args) -> str:
    if args.format == "json":
        return json.dumps([dict(zip(header, r)) for r in rows], indent=2) + "\n"
    lines = [",".join(header)] + [",".join(str(x) for x in r) for r in rows]
    return "\n".join(lines) + "\n"


def cmd_tables(args) -> tuple[str, int]:
    which = args.table or list(TABLE_IDS)
    fmt = "tex" if args.tex else args.format
    full = {1: 9, 2: 13, 3: 10, 4: 10, 5: 12}
    parts = [emit_tables(w, args.max_index or full[w], fmt) for w in which]
    if fmt == "json" and len(parts) > 1:
        return json.dumps([json.loads(p) for p in parts], indent=2) + "\n", EXIT_OK
    return "".join(parts), EXIT_OK


def cmd_verify(args) -> tuple[str, int]:
    g_family = corrupted_g_family() if args.negative_control else None
    kwargs = {"g_family": g_family} if g_family else {}
    ef_char = args.char if args.char != "chi3" else "chi4"
    report = verify_all(args.max_k, args.max_m, args.prec_bits, ef_character=ef_char, **kwargs)
    rows = []
    for c in report.checks:
        if c.residual is None:
            res = "none"
        elif isinstance(c.residual, (int, Fraction)):
            res = str(c.residual)
        elif isinstance(c.residual, (mpmath.mpf, mpmath.mpc)):
            res = _value_fields(c.residual, 53, args.hexfloat)[0]
        else:
            res = "nonzero"
        rows.append([c.name, "pass" if c.passed else "FAIL", res])
    text = _emit_rows(["check", "status", "residual"], rows, args)
    print(report.summary(), file=sys.stderr)
    return text, EXIT_OK if report.ok else EXIT_FAIL


def cmd_xi(args) -> tuple[str, int]:
    chi = resolve_character(args.char)
    rows = []
    with mpmath.workprec(args.prec_bits + 32):
        if args.s:
            points = [(args.s, parse_complex(args.s))]
        else:
            points = [(str(t), mpmath.mpc(0.5, _mp(t))) for t in _t_values(args, [0])]
        tau = parse_complex(args.tau)
    for label, s in points:
        rep = xi_lavrik(chi, s, tau, args.variant, args.prec_bits)
        re, im = _value_fields(rep.value, args.prec_bits, args.hexfloat)
        rows.append([label, re, im, rep.terms_used, rep.working_prec])
    return _emit_rows(["s_or_t", "xi_re", "xi_im", "terms_used", "working_prec"], rows, args), EXIT_OK


def cmd_theta(args) -> tuple[str, int]:
    chi = resolve_character(args.char)
    rep = theta_chi(chi, args.tau, args.prec_bits)
    re, im = _value_fields(rep.value, args.prec_bits, args.hexfloat)
    res = theta_fe_residual(chi, args.tau, args.prec_bits)
    res_text = _value_fields(res, 53, args.hexfloat)[0]
    header = ["tau", "theta_re", "theta_im", "terms_used", "fe_residual"]
    return _emit_rows(header, [[args.tau, re, im, rep.terms_used, res_text]], args), EXIT_OK


def _config(args, weights=None) -> StudyConfig:
    return StudyConfig(
        t_values=tuple(_mp(t) for t in _t_values(args)),
        N_values=tuple(args.N_list),
        K_values=tuple(args.K_list),
        prec=args.prec_bits,
        weights=weights or parse_weights("none"),
        character=args.char,
        output_format=args.format,
    )


def cmd_truncate(args) -> tuple[str, int]:
    return _serialise(truncation_study(_config(args)), args), EXIT_OK


def cmd_accelerate(args) -> tuple[str, int]:
    if args.weights is None or args.weights.name == "none":
        raise UsageError("accelerate needs --weights riesz:P, gaussian:C or cesaro")
    return _serialise(weighted_study(_config(args, args.weights)), args), EXIT_OK


def cmd_growth(args) -> tuple[str, int]:
    ts = [_mp(t) for t in _t_values(args)]
    records = growth_scan(ts, args.prec_bits)
    status = EXIT_OK if all(r.within_envelope for r in records) else EXIT_FAIL
    return _serialise(records, args), status


COMMANDS = {
    "tables": cmd_tables,
    "verify": cmd_verify,
    "xi": cmd_xi,
    "theta": cmd_theta,
    "truncate": cmd_truncate,
    "accelerate": cmd_accelerate,
    "growth": cmd_growth,
}


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code else EXIT_OK
    logging.basicConfig(level=logging.INFO if args.verbose else logging.ERROR,
                        format="%(levelname)s %(name)s: %(message)s")
    if args.prec_bits < 16:
        print("error: --prec-bits must be at least 16", file=sys.stderr)
        return EXIT_USAGE
    try:
        text, status = COMMANDS[args.command](args)
    except (UsageError, TouchardXiError, ValueError, KeyError) as exc:
        msg = exc.args[0] if isinstance(exc, KeyError) and exc.args else exc
        print(f"error: {msg}", file=sys.stderr)
        return EXIT_USAGE
    if args.out:
        args.out.write_text(text)
    else:
        sys.stdout.write(text)
    return status


if __name__ == "__main__":
    sys.exit(main())
