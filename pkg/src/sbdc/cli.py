"""Command line entry point: ``sbdc {decompose,verify,center,commute}``.

Exit codes: 0 success, 2 input error, 3 numerical failure, 4 verification
failure. ``SBDC_LOG`` (error|warn|info|debug) sets diagnostic verbosity.
"""
from __future__ import annotations

import argparse
import logging
import os
import sys
import time
from pathlib import Path

import numpy as np

from .center import center_basis
from .core import Field, InputError, Mode, NumericalError, SolverConfig, check_mode
from .driver import commutation_check, sbdc, verify
from .io import DecompositionReport, IoError, dumps, load_matrix_set, load_report
from .quadratic import parse_quadratic_forms

EXIT_OK, EXIT_INPUT, EXIT_NUMERICAL, EXIT_VERIFY = 0, 2, 3, 4

logger = logging.getLogger("sbdc")

_LOG_LEVELS = {"error": logging.ERROR, "warn": logging.WARNING, "warning": logging.WARNING,
               "info": logging.INFO, "debug": logging.DEBUG}


def _fmt(x: complex) -> str:
    x = complex(x)
    if x.imag == 0:
        return f"{x.real:.6g}"
    return f"{x.real:.6g}{x.imag:+.6g}j"


def format_matrix(A: np.ndarray, indent: str = "  ") -> str:
    return "\n".join(indent + "[" + ", ".join(_fmt(x) for x in row) + "]" for row in A)


def format_report_text(doc: dict) -> str:
    """Human-readable view of a serialized report; numbers at 6 significant digits."""
    lines = [
        f"mode: {doc['mode']}   field: {doc['field']}   kind: {doc['kind']}   seed: {doc['seed']}",
        f"block sizes (tree order): {doc['block_sizes']}",
        f"block sizes (sorted): {doc['block_sizes_sorted']}",
        f"certified finest: {str(doc['certified_finest']).lower()}",
        "residuals:",
    ]
    for k in sorted(doc["residuals"]):
        lines.append(f"  {k}: {doc['residuals'][k]:.6e}")
    lines.append("leaves:")
    for leaf in doc["leaves"]:
        kind = "certificate" if leaf["certified"] else "no split found within budget"
        lines.append(f"  path={leaf['path'] or 'root'} size={leaf['size']} "
                     f"center_dim={leaf['center_dim']} evidence={leaf['evidence']} ({kind})")
    from .io import decode_matrix
    lines.append("P:")
    lines.append(format_matrix(decode_matrix(doc["P"])))
    for i, blocks in enumerate(doc["blocks"]):
        lines.append(f"blocks of matrix {i + 1}:")
        for b in blocks:
            lines.append(format_matrix(decode_matrix(b)))
            lines.append("")
        lines.pop()
    return "\n".join(lines) + "\n"


def _config(args) -> SolverConfig:
    kw = {"seed": args.seed}
    if args.tol is not None:
        kw.update(tol_idem=args.tol, tol_block=args.tol)
    if args.tol_rank is not None:
        kw["tol_rank"] = args.tol_rank
    if args.tol_sym is not None:
        kw["tol_sym"] = args.tol_sym
    if getattr(args, "max_tries", None) is not None:
        kw["max_tries"] = args.max_tries
    return SolverConfig(**kw)


def _load_input(args, cfg):
    if getattr(args, "quadratic", None):
        try:
            text = Path(args.quadratic).read_text()
        except OSError as exc:
            raise IoError(f"cannot read {args.quadratic}: {exc}") from exc
        mset = parse_quadratic_forms(text, cfg=cfg)
    elif args.input:
        mset = load_matrix_set(args.input, cfg)
    else:
        raise InputError("one of --input or --quadratic is required")
    if getattr(args, "field", None):
        mset = mset.with_field(args.field)
    return mset


def _emit(text: str, output):
    if output:
        try:
            Path(output).write_text(text)
        except OSError as exc:
            raise IoError(f"cannot write {output}: {exc}") from exc
    else:
        sys.stdout.write(text)


def cmd_decompose(args) -> int:
    cfg = _config(args)
    mset = _load_input(args, cfg)
    mode = check_mode(mset, args.mode)
    start = time.perf_counter()
    dec = sbdc(mset, mode, cfg)
    elapsed = time.perf_counter() - start
    report = DecompositionReport(dec, mset.field, mset.kind, cfg,
                                 wall_time=elapsed if args.timing else None)
    doc = report.to_dict()
    _emit(dumps(doc) if args.format == "json" else format_report_text(doc), args.output)
    check = verify(dec, mset, cfg)
    if not check.passed:
        for c in check.failures():
            logger.error("verification failed: %s = %.3e (bound %s)", c.name, c.value, c.bound)
        return EXIT_VERIFY
    return EXIT_OK


def cmd_verify(args) -> int:
    report = load_report(args.report)
    mset = load_matrix_set(args.input, report.config)
    if report.field is Field.COMPLEX:
        mset = mset.with_field(Field.COMPLEX)
    check = verify(report.decomposition, mset, report.config)
    lines = [f"{'PASS' if c.passed else 'FAIL'} {c.name}: {c.value:.6e}"
             + (f" (bound {c.bound:.1e})" if c.bound is not None else "") for c in check.checks]
    sys.stdout.write("\n".join(lines) + "\n")
    return EXIT_OK if check.passed else EXIT_VERIFY


def cmd_center(args) -> int:
    cfg = _config(args)
    mset = _load_input(args, cfg)
    cb = center_basis(mset, cfg)
    out = [f"center dimension: {cb.dim} (over {cb.coeff_field.value})"]
    for k, X in enumerate(cb.basis, 1):
        out.append(f"X{k}:")
        out.append(format_matrix(X))
    sys.stdout.write("\n".join(out) + "\n")
    return EXIT_OK


def cmd_commute(args) -> int:
    cfg = _config(args)
    mset = _load_input(args, cfg)
    rep = commutation_check(mset, cfg.tol_idem)
    sys.stdout.write(f"commute: {str(rep.commute).lower()}\n"
                     f"max normalized commutator: {rep.max_commutator_norm:.6e}\n")
    if rep.worst_pair is not None and not rep.commute:
        i, j = rep.worst_pair
        sys.stdout.write(f"worst pair: A{i + 1}, A{j + 1}\n{format_matrix(rep.commutator)}\n")
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="sbdc", description="Simultaneous block diagonalization via congruence.")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, with_quadratic=True):
        src = p.add_mutually_exclusive_group()
        src.add_argument("--input", help="matrix-set JSON document")
        if with_quadratic:
            src.add_argument("--quadratic", help="text file with one quadratic form per line")
        p.add_argument("--field", choices=["real", "complex"],
                       help="coefficient field (may widen real to complex)")
        p.add_argument("--seed", type=int, default=0)
        p.add_argument("--tol", type=float, help="idempotent and block tolerance")
        p.add_argument("--tol-rank", type=float)
        p.add_argument("--tol-sym", type=float)

    p = sub.add_parser("decompose", help="finest simultaneous block diagonalization")
    common(p)
    p.add_argument("--mode", choices=[m.value for m in Mode], default="congruence")
    p.add_argument("--max-tries", type=int)
    p.add_argument("--output", help="write the report here instead of stdout")
    p.add_argument("--format", choices=["json", "text"], default="json")
    p.add_argument("--timing", action="store_true",
                   help="include wall time in the report (breaks byte-identical output)")
    p.set_defaults(func=cmd_decompose)

    p = sub.add_parser("verify", help="recheck a saved report against its input")
    p.add_argument("--input", required=True)
    p.add_argument("--report", required=True)
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("center", help="print the center dimension and a basis")
    common(p)
    p.set_defaults(func=cmd_center)

    p = sub.add_parser("commute", help="pairwise commutation check")
    common(p)
    p.set_defaults(func=cmd_commute)
    return parser


def _configure_logging():
    level = _LOG_LEVELS.get(os.environ.get("SBDC_LOG", "warn").lower(), logging.WARNING)
    root = logging.getLogger("sbdc")
    root.setLevel(level)
    # replace our own handler so it writes to the current sys.stderr
    for h in [h for h in root.handlers if getattr(h, "_sbdc_cli", False)]:
        root.removeHandler(h)
    handler = logging.StreamHandler(sys.stderr)
    handler.setFormatter(logging.Formatter("sbdc: %(levelname)s: %(message)s"))
    handler._sbdc_cli = True
    root.addHandler(handler)


def main(argv=None) -> int:
    _configure_logging()
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except InputError as exc:
        logger.error("%s", exc)
        return EXIT_INPUT
    except NumericalError as exc:
        logger.error("%s", exc)
        return EXIT_NUMERICAL


if __name__ == "__main__":
    sys.exit(main())
