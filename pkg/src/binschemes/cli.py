"""Command-line interface: ``binschemes {analyze,law,simulate,series,reproduce}``.

Exit codes: 0 success, 1 usage error, 2 I/O or malformed input, 3 empty data
or other domain error.  ``BINSCHEMES_FORMAT`` sets the default output format.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from pathlib import Path

import numpy as np

from . import theory
from .bin_model import BinSchemeSpec, EmptyDataError, validate_scheme
from .conformance import DEFAULT_THRESHOLD, build_report
from .engine import DEFAULT_MIN_COUNT, per_cycle_proportions, tally
from .generators import Family, GeneratorError, GeneratorSpec, generate, write_values
from .ingest import IngestError, read_values
from .report import FORMATS, analysis_dict, render, render_table, render_vector
from .reproduce import FIGURES, reproduce

EXIT_OK, EXIT_USAGE, EXIT_IO, EXIT_DOMAIN = 0, 1, 2, 3

DEFAULT_START = 0.0
DEFAULT_WIDTH = 0.0005
FORMAT_ENV = "BINSCHEMES_FORMAT"


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _default_format() -> str:
    env = os.environ.get(FORMAT_ENV, "table")
    return env if env in FORMATS else "table"


def _floats(text: str) -> list[float]:
    try:
        return [float(t) for t in text.replace(";", ",").split(",") if t.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated numbers, got {text!r}")


def _add_scheme_flags(p: argparse.ArgumentParser) -> None:
    g = p.add_argument_group("bin scheme")
    g.add_argument("--bins", "-D", type=int, default=9, help="bins per cycle (default 9)")
    x = g.add_mutually_exclusive_group()
    x.add_argument("--factor", "-F", type=float, help="constant inflation factor (default 10)")
    x.add_argument("--factors", type=_floats, help="comma-separated inflation factor vector")
    g.add_argument("--start", "-S", type=float, default=DEFAULT_START,
                   help=f"left edge of the first bin (default {DEFAULT_START})")
    g.add_argument("--width", "-W", type=float, default=DEFAULT_WIDTH,
                   help=f"cycle-0 bin width (default {DEFAULT_WIDTH})")


def _scheme_from(args) -> BinSchemeSpec:
    if args.factors is not None:
        spec = BinSchemeSpec.vector(args.bins, args.factors, args.start, args.width)
    else:
        F = 10.0 if args.factor is None else args.factor
        spec = BinSchemeSpec.constant(args.bins, F, args.start, args.width)
    check = validate_scheme(spec)
    if not check.ok:
        raise UsageError("invalid scheme: " + "; ".join(check.violations))
    return spec


def _emit(text: str, output: str | None) -> None:
    if output:
        try:
            Path(output).write_text(text + "\n")
        except OSError as e:
            raise OSError(f"cannot write {output}: {e.strerror or e}") from e
    else:
        sys.stdout.write(text + "\n")


def _sidecar(path: str | Path) -> Path:
    return Path(str(path) + ".meta.json")


def cmd_analyze(args) -> int:
    spec = _scheme_from(args)
    column = args.column
    try:
        data = read_values(args.input, column=column, lenient=args.lenient)
    except OSError as e:
        raise OSError(f"cannot read {args.input}: {e.strerror or e}") from e
    if data.values.size == 0 or not np.any(data.values > 0):
        raise EmptyDataError(f"{args.input}: no positive values")
    t = tally(spec, data.values, chunk_size=args.chunk_size, workers=args.workers)
    rep = build_report(t, threshold=args.threshold)
    pcs = per_cycle_proportions(t, args.min_count) if args.per_cycle else None
    meta = {"input": str(args.input),
            "defaults": {"start": DEFAULT_START, "width": DEFAULT_WIDTH}}
    side = _sidecar(args.input)
    if side.exists():
        gen = json.loads(side.read_text())
        meta["generator"] = gen
        meta["seed"] = gen.get("seed")
    _emit(render(analysis_dict(t, rep, pcs, meta, data.skipped), args.format), args.output)
    return EXIT_OK


def cmd_law(args) -> int:
    first = 1
    if args.flat is not None:
        if args.flat < 1:
            raise UsageError("--flat needs D ≥ 1")
        label, vec = f"Flat limit D={args.flat}", theory.flat_limit(args.flat).values
    elif args.base is not None:
        if args.base < 2:
            raise UsageError("--base needs an integer ≥ 2")
        if args.order == 2:
            first = 0
            label, vec = f"Benford second digit, base {args.base}", \
                theory.benford_second_order(args.base).values
        else:
            label, vec = f"Benford first digit, base {args.base}", \
                theory.benford_vector(args.base).values
    else:
        if args.factor is None:
            raise UsageError("--bins requires --factor")
        if args.bins < 1 or not args.factor > 0:
            raise UsageError("need --bins ≥ 1 and --factor > 0")
        label = f"General law D={args.bins} F={args.factor:g}"
        vec = theory.general_law_vector(args.bins, args.factor).values
    _emit(render_vector(label, vec, args.format, first=first), None)
    return EXIT_OK


_FAMILY_FLAGS = {
    Family.KOverX: {"A": "a", "B": "b"},
    Family.Lognormal: {"location": "location", "shape": "shape"},
    Family.ExpGrowth: {"base": "base", "growth_factor": "rate"},
    Family.LogTriangular: {"lo": "lo", "mode": "mode", "hi": "hi"},
    Family.ChainUniform: {"depth": "depth", "top": "top"},
    Family.Uniform: {"a": "a", "b": "b"},
    Family.NormalPositive: {"mean": "mean", "sd": "sd"},
}


def cmd_simulate(args) -> int:
    family = Family(args.family)
    params = {}
    for name, flag in _FAMILY_FLAGS[family].items():
        value = getattr(args, flag)
        if value is None:
            raise UsageError(f"--family {family.value} requires --{flag}")
        params[name] = value
    try:
        spec = GeneratorSpec(family, params, args.n, args.seed)
        values = generate(spec)
    except GeneratorError as e:
        raise UsageError(str(e)) from e
    meta = spec.metadata()
    header = json.dumps(meta, sort_keys=True)
    if args.output:
        try:
            write_values(args.output, values)
            _sidecar(args.output).write_text(header + "\n")
        except OSError as e:
            raise OSError(f"cannot write {args.output}: {e.strerror or e}") from e
    else:
        for v in values:
            sys.stdout.write(repr(float(v)) + "\n")
    sys.stderr.write(header + "\n")
    return EXIT_OK


def cmd_series(args) -> int:
    if args.bins < 1 or not args.factor > 0 or args.n_max < 1 or not args.tolerance > 0:
        raise UsageError("need --bins ≥ 1, --factor > 0, --n-max ≥ 1, --tolerance > 0")
    table = theory.series_table(args.bins, args.factor, args.n_max)
    limit = np.array(theory.general_law_vector(args.bins, args.factor).values)
    gaps = np.abs(table - limit).max(axis=1)
    result = theory.convergence_profile(args.bins, args.factor, args.tolerance, args.n_max)
    shown = [N for N in range(1, args.n_max + 1) if N == 1 or N % args.step == 0 or N == args.n_max]
    if args.format == "json":
        out = {
            "bins": args.bins, "factor": args.factor, "limit": list(limit),
            "rows": [{"N": N, "vector": list(table[N - 1]), "max_gap": float(gaps[N - 1])}
                     for N in shown],
            "n_reached": result.n_reached, "max_abs_gap": result.max_abs_gap,
            "converged": result.converged, "tolerance": args.tolerance,
        }
        _emit(json.dumps(out, indent=2), None)
        return EXIT_OK
    sep = "\t" if args.format == "tsv" else "  "
    lines = [sep.join(["N"] + [f"d{d}" for d in range(1, args.bins + 1)] + ["max_gap"])]
    for N in shown:
        cells = [repr(float(v)) if args.format == "tsv" else f"{v:.6f}" for v in table[N - 1]]
        lines.append(sep.join([str(N)] + cells + [f"{gaps[N - 1]:.3e}"]))
    status = "reached" if result.converged else "not reached"
    lines.append(f"N_reached={result.n_reached} ({status}; tolerance {args.tolerance:g}, "
                 f"gap {result.max_abs_gap:.3e})")
    _emit("\n".join(lines), None)
    return EXIT_OK


def cmd_reproduce(args) -> int:
    if args.n < 1:
        raise UsageError("--n must be ≥ 1")
    _emit(render_table(reproduce(args.figure, args.seed, args.n), args.format), None)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    fmt = _default_format()
    p = _Parser(prog="binschemes", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    a = sub.add_parser("analyze", help="tally a numeric file under a bin scheme")
    a.add_argument("input")
    a.add_argument("--column", help="CSV column name or 0-based index")
    _add_scheme_flags(a)
    a.add_argument("--per-cycle", action="store_true", help="include per-cycle proportions")
    a.add_argument("--min-count", type=int, default=DEFAULT_MIN_COUNT)
    a.add_argument("--threshold", type=float, default=DEFAULT_THRESHOLD,
                   help="MAD threshold for the Conforming verdict")
    a.add_argument("--lenient", action="store_true", help="skip malformed lines and count them")
    a.add_argument("--chunk-size", type=int)
    a.add_argument("--workers", type=int)
    a.add_argument("--format", choices=FORMATS, default=fmt)
    a.add_argument("--output", "-o")
    a.set_defaults(func=cmd_analyze)

    law = sub.add_parser("law", help="print a theoretical proportion vector")
    which = law.add_mutually_exclusive_group(required=True)
    which.add_argument("--bins", "-D", type=int)
    which.add_argument("--base", type=int)
    which.add_argument("--flat", type=int, metavar="D")
    law.add_argument("--factor", "-F", type=float)
    law.add_argument("--order", type=int, choices=(1, 2), default=1)
    law.add_argument("--format", choices=FORMATS, default=fmt)
    law.set_defaults(func=cmd_law)

    s = sub.add_parser("simulate", help="write synthetic data, one value per line")
    s.add_argument("--family", required=True, choices=[f.value for f in Family])
    for flag, kind in (("a", float), ("b", float), ("location", float), ("shape", float),
                       ("base", float), ("rate", float), ("lo", float), ("mode", float),
                       ("hi", float), ("depth", int), ("top", float), ("mean", float),
                       ("sd", float)):
        s.add_argument(f"--{flag}", type=kind)
    s.add_argument("--n", type=int, default=100_000)
    s.add_argument("--seed", type=int, default=0)
    s.add_argument("--output", "-o")
    s.set_defaults(func=cmd_simulate)

    se = sub.add_parser("series", help="finite-cycle k/x proportions converging to the law")
    se.add_argument("--bins", "-D", type=int, required=True)
    se.add_argument("--factor", "-F", type=float, required=True)
    se.add_argument("--n-max", type=int, default=200)
    se.add_argument("--tolerance", type=float, default=1e-3)
    se.add_argument("--step", type=int, default=1, help="print every step-th N")
    se.add_argument("--format", choices=FORMATS, default=fmt)
    se.set_defaults(func=cmd_series)

    r = sub.add_parser("reproduce", help="re-run a published table on synthetic data")
    r.add_argument("figure", choices=list(FIGURES))
    r.add_argument("--seed", type=int, default=0)
    r.add_argument("--n", type=int, default=100_000)
    r.add_argument("--format", choices=FORMATS, default=fmt)
    r.set_defaults(func=cmd_reproduce)
    return p


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except UsageError as e:
        print(f"binschemes: usage error: {e}", file=sys.stderr)
        return EXIT_USAGE
    except IngestError as e:
        print(f"binschemes: {e}", file=sys.stderr)
        return EXIT_IO
    except OSError as e:
        print(f"binschemes: {e}", file=sys.stderr)
        return EXIT_IO
    except ValueError as e:  # EmptyDataError, SchemeError and other domain errors
        print(f"binschemes: {e}", file=sys.stderr)
        return EXIT_DOMAIN


if __name__ == "__main__":
    raise SystemExit(main())
