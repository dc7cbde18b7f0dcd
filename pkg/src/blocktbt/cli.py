"""``blocktbt`` command line: gen, verify, recover, info.

Exit codes: 0 pass, 1 a numeric check failed, 2 malformed spec or bad
arguments, 3 the computation itself broke down (singular ``T``, ``G`` or
``E``), 4 file I/O error.
"""

import argparse
import contextlib
import json
import logging
import sys

from .errors import BlockTbtError, ESingular, GSingular, SchemaError, TNotInvertible
from .recovery import info_count
from .reporting import DEFAULT_TOLERANCES, RunConfig, run_recover, run_verify
from .serialization import dumps_spec, load_spec
from .structured import CLASSES, TOEPLITZ3D, DimTriple, Toeplitz3dSpec, random_spec

EXIT_PASS = 0
EXIT_FAIL = 1
EXIT_USAGE = 2
EXIT_RUNTIME = 3
EXIT_IO = 4


class _UsageError(Exception):
    pass


def _dims(text):
    try:
        return DimTriple.parse(text)
    except ValueError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from exc


def _tol(text):
    name, sep, value = text.partition("=")
    if not sep:
        raise argparse.ArgumentTypeError(f"expected NAME=VALUE, got {text!r}")
    if name not in DEFAULT_TOLERANCES:
        raise argparse.ArgumentTypeError(f"unknown tolerance {name!r}; choose from {', '.join(DEFAULT_TOLERANCES)}")
    try:
        v = float(value)
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"tolerance {name} is not a number: {value!r}") from exc
    if not v > 0:
        raise argparse.ArgumentTypeError(f"tolerance {name} must be positive, got {value}")
    return name, v


def _nonneg_float(text):
    v = float(text)
    if not v >= 0:
        raise argparse.ArgumentTypeError(f"must be nonnegative, got {text}")
    return v


def build_parser():
    parser = argparse.ArgumentParser(prog="blocktbt", description=__doc__.splitlines()[0])
    parser.add_argument("--verbose", action="store_true", help="log sample-point retries")
    sub = parser.add_subparsers(dest="command", required=True)

    g = sub.add_parser("gen", help="write a seeded random spec as JSON")
    g.add_argument("--dims", type=_dims, required=True, help="m1,m2,m3 (each >= 2)")
    g.add_argument("--class", dest="class_tag", choices=CLASSES, default="general")
    g.add_argument("--seed", type=int, default=0)
    g.add_argument("--shift", type=_nonneg_float, default=None, help="diagonal shift (default 2*m*max|t|)")
    g.add_argument("--out", default=None, help="output path (stdout if omitted)")

    for name, helptext in (("verify", "check the displacement identities"),
                           ("recover", "compare minimal-data reconstruction with the dense inverse")):
        c = sub.add_parser(name, help=helptext)
        c.add_argument("spec", help="path to a JSON spec")
        c.add_argument("--tol", type=_tol, action="append", default=[], metavar="NAME=VALUE",
                       help=f"override a tolerance group ({', '.join(DEFAULT_TOLERANCES)})")
        c.add_argument("--seed", type=int, default=0, help="sample-point seed")
        c.add_argument("--samples", type=int, default=5, help="number of sample points")
        c.add_argument("--format", dest="output_format", choices=("text", "json"), default="text")

    i = sub.add_parser("info", help="entry counts for T, naive and minimal inverse data")
    i.add_argument("--dims", type=_dims, required=True)
    i.add_argument("--class", dest="class_tag", choices=CLASSES, default="general")
    i.add_argument("--format", dest="output_format", choices=("text", "json"), default="text")
    return parser


def cmd_gen(args, out):
    spec = random_spec(args.dims, args.seed, args.class_tag, args.shift)
    if args.class_tag == TOEPLITZ3D:
        spec = Toeplitz3dSpec(spec.dims, spec.taus())
    text = dumps_spec(spec)
    if args.out is None:
        out.write(text)
    else:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(text)
    return EXIT_PASS


def _config(args):
    try:
        return RunConfig(dict(args.tol), args.seed, args.samples, args.output_format)
    except ValueError as exc:
        raise _UsageError(str(exc)) from exc


def _emit_report(report, config, out):
    out.write((report.to_json() if config.output_format == "json" else report.to_text()) + "\n")
    return EXIT_PASS if report.passed else EXIT_FAIL


def cmd_verify(args, out):
    config = _config(args)
    return _emit_report(run_verify(load_spec(args.spec), config), config, out)


def cmd_recover(args, out):
    config = _config(args)
    return _emit_report(run_recover(load_spec(args.spec), config), config, out)


def cmd_info(args, out):
    counts = info_count(args.dims, args.class_tag)
    if args.output_format == "json":
        doc = {"dims": list(args.dims), "class": args.class_tag, **counts.as_dict()}
        out.write(json.dumps(doc) + "\n")
    else:
        out.write(f"dims={'x'.join(map(str, args.dims))} class={args.class_tag}\n")
        out.write(f"full_T_entries: {counts.full_T_entries}\n")
        for p, v in counts.naive_recovery_entries.items():
            out.write(f"naive_recovery_entries p{p}: {v}\n")
        out.write(f"minimal_entries: {counts.minimal_entries}\n")
    return EXIT_PASS


COMMANDS = {"gen": cmd_gen, "verify": cmd_verify, "recover": cmd_recover, "info": cmd_info}


def main(argv=None, out=None, err=None):
    out = out or sys.stdout
    err = err or sys.stderr
    parser = build_parser()
    try:
        with contextlib.redirect_stdout(out), contextlib.redirect_stderr(err):
            args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code else EXIT_PASS
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, stream=err)
    try:
        return COMMANDS[args.command](args, out)
    except SchemaError as exc:
        err.write(f"blocktbt: schema error in {args.spec}: {exc}\n")
        return EXIT_USAGE
    except _UsageError as exc:
        err.write(f"blocktbt: {exc}\n")
        return EXIT_USAGE
    except OSError as exc:
        path = exc.filename or getattr(args, "out", None) or getattr(args, "spec", "?")
        err.write(f"blocktbt: cannot access {path}: {exc.strerror or exc}\n")
        return EXIT_IO
    except (TNotInvertible, GSingular, ESingular) as exc:
        err.write(f"blocktbt: {type(exc).__name__}: {exc}\n")
        return EXIT_RUNTIME
    except BlockTbtError as exc:
        err.write(f"blocktbt: {type(exc).__name__}: {exc}\n")
        return EXIT_RUNTIME


if __name__ == "__main__":
    sys.exit(main())
