"""Command-line front end.

Subcommands::

    seqaccel table t1 .. t5 | t4a | b1 | b2     regenerate a reference table
    seqaccel accelerate                         walk a transformation path
    seqaccel hyp2f1                             evaluate 2F1(a, b; c; z)
    seqaccel oscillator                         oscillator coefficients and k_3

Exit codes: 0 ok, 2 numeric breakdown or no convergence, 3 resource limit,
4 unparseable or unsupported input.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import sys
from dataclasses import dataclass, field
from fractions import Fraction
from importlib import metadata
from typing import Any, Callable, Sequence

from .hyp2f1 import (
    CrossoverError,
    DegenerateParameterError,
    Hyp2F1Params,
    NoConvergenceError,
    classify,
    crossover_index,
    evaluate,
    partial_sums,
)
from .oscillator import (
    InsufficientCoefficientsError,
    asymptotic_ratio,
    coefficients,
    k3_approximant,
)
from .paths import EmptyPathError, PathSpec, walk
from .scalar import (
    ExactComplex,
    PoleError,
    Precision,
    PrecisionError,
    format_fixed,
    format_sci,
    mp,
    parse_number,
)
from .transforms import KINDS, BreakdownError, SequenceWindow

EXIT_OK = 0
EXIT_BREAKDOWN = 2
EXIT_RESOURCE = 3
EXIT_PARSE = 4

LEVIN_KINDS = ("levin_d", "weniger_delta")


class CliError(Exception):
    def __init__(self, message: str, code: int):
        super().__init__(message)
        self.code = code


def artifact_version() -> str:
    try:
        return metadata.version("artifact")
    except metadata.PackageNotFoundError:
        return "0+unknown"


# -- reports and rendering --------------------------------------------------------


@dataclass
class Report:
    table: str
    precision: str
    columns: list[str]
    rows: list[tuple[int, dict[str, str]]] = field(default_factory=list)
    index_name: str = "n"

    def add(self, n: int, cols: dict[str, str]) -> None:
        self.rows.append((n, cols))


def render_value(x: Any, digits: int, prec: Precision) -> str:
    """Decimal string, or ``p/q`` for exact values in rational mode."""
    if prec.mode == "exact":
        if isinstance(x, int):
            return str(x)
        if isinstance(x, Fraction):
            return str(x)
        if isinstance(x, ExactComplex):
            im = str(x.imag)
            return f"{x.real}{'' if im.startswith('-') else '+'}{im}i"
    return format_sci(x, digits)


def to_json(rep: Report) -> str:
    doc = {
        "meta": {"table": rep.table, "precision": rep.precision, "version": artifact_version()},
        "rows": [{rep.index_name: n, "cols": {c: cols.get(c, "") for c in rep.columns}} for n, cols in rep.rows],
    }
    return json.dumps(doc, indent=2) + "\n"


def to_csv(rep: Report) -> str:
    buf = io.StringIO()
    buf.write(f"# table={rep.table} precision={rep.precision} version={artifact_version()}\n")
    w = csv.writer(buf, lineterminator="\n")
    w.writerow([rep.index_name, *rep.columns])
    for n, cols in rep.rows:
        w.writerow([n, *(cols.get(c, "") for c in rep.columns)])
    return buf.getvalue()


def to_text(rep: Report) -> str:
    header = [rep.index_name, *rep.columns]
    body = [[str(n), *(cols.get(c, "") for c in rep.columns)] for n, cols in rep.rows]
    widths = [max(len(r[i]) for r in [header, *body]) for i in range(len(header))]
    lines = [f"# table={rep.table} precision={rep.precision} version={artifact_version()}"]
    for r in [header, *body]:
        lines.append("  ".join(cell.rjust(wd) for cell, wd in zip(r, widths)).rstrip())
    return "\n".join(lines) + "\n"


RENDERERS: dict[str, Callable[[Report], str]] = {"json": to_json, "csv": to_csv, "text": to_text}


# -- table sources ----------------------------------------------------------------


def _ln_sums(P: Precision, count: int, skip: int) -> SequenceWindow:
    # ln(1 + z) = z 2F1(1, 1; 2; -z) at z = 7/2
    z = Fraction(7, 2)
    w = partial_sums(Hyp2F1Params(1, 1, 2, -z), count - 1, skip, P)
    return w.map(lambda s: P.number(z) * s)


def _complex_sums(P: Precision, count: int, skip: int) -> SequenceWindow:
    if P.mode == "exact":
        raise PrecisionError("the argument (1 + i sqrt 3)/2 is not rational")
    z = P.complex(P.number(Fraction(1, 2)), P.sqrt(P.number(3)) / 2)
    params = Hyp2F1Params(P.number(Fraction(2, 3)), P.number(Fraction(4, 3)), P.number(Fraction(1, 3)), z)
    return partial_sums(params, count - 1, skip, P)


def _hyp_sums(a: str, b: str, c: str, z: str) -> Callable[[Precision, int, int], SequenceWindow]:
    def source(P: Precision, count: int, skip: int) -> SequenceWindow:
        return partial_sums(Hyp2F1Params.parse(a, b, c, z), count - 1, skip, P)

    return source


@dataclass(frozen=True)
class TableSpec:
    title: str
    rows: int  # rows n = 0 .. rows - 1
    columns: tuple[str, ...]
    source: Callable[[Precision, int, int], SequenceWindow]
    skip: int | None = 0  # None: the crossover index of the series
    params: tuple[str, str, str, str] | None = None


TABLES: dict[str, TableSpec] = {
    "t1": TableSpec(
        "ln(1+z) at z = 7/2",
        16,
        ("epsilon", "theta", "levin_d", "weniger_delta"),
        _ln_sums,
    ),
    "t2": TableSpec(
        "2F1(2/3, 4/3; 1/3; (1 + i sqrt 3)/2)",
        16,
        ("epsilon", "levin_d"),
        _complex_sums,
    ),
    "t3": TableSpec(
        "2F1(3/7, 5/2; 7/2; 0.77)",
        17,
        ("epsilon", "theta", "levin_d", "weniger_delta"),
        _hyp_sums("3/7", "5/2", "7/2", "0.77"),
        params=("3/7", "5/2", "7/2", "0.77"),
    ),
    "t4": TableSpec(
        "2F1(3/7, 5/2; -7/2; 0.77)",
        31,
        ("aitken", "epsilon", "theta"),
        _hyp_sums("3/7", "5/2", "-7/2", "0.77"),
        params=("3/7", "5/2", "-7/2", "0.77"),
    ),
    "t4a": TableSpec(
        "2F1(3/7, 5/2; -7/2; 0.77)",
        31,
        ("iterated_theta", "levin_d", "weniger_delta"),
        _hyp_sums("3/7", "5/2", "-7/2", "0.77"),
        params=("3/7", "5/2", "-7/2", "0.77"),
    ),
    "t5": TableSpec(
        "2F1(3/7, 5/2; -7/2; 0.77), leading terms skipped",
        21,
        ("epsilon", "levin_d", "weniger_delta"),
        _hyp_sums("3/7", "5/2", "-7/2", "0.77"),
        skip=None,
        params=("3/7", "5/2", "-7/2", "0.77"),
    ),
}

# rows listed in the coefficient table
B1_ROWS = (*range(16), *range(25, 301, 25))
B2_ORDERS = 13
SCALE_N = {"desk": 150, "paper": 300}


def _row_m(kind: str, n: int) -> int:
    """Last sequence index behind row ``n`` of an index-constant column."""
    return n + 1 if kind in LEVIN_KINDS else n


def build_sequence_table(tid: str, P: Precision, digits: int, path: PathSpec, skip: int | None) -> Report:
    spec = TABLES[tid]
    if skip is None:
        skip = spec.skip
    if skip is None:
        skip = crossover_index(Hyp2F1Params.parse(*spec.params)) or 0
    window = spec.source(P, spec.rows + 1, skip)
    rep = Report(tid, str(P), ["s", *spec.columns])
    cols: dict[str, dict[int, Any]] = {}
    for kind in spec.columns:
        refs = walk(kind, window, path)
        if path.kind == "index":
            cols[kind] = {r.m: r.value for r in refs}
        else:
            cols[kind] = {r.n: r.value for r in refs}
    for n in range(spec.rows):
        row = {"s": render_value(window[n], digits, P)}
        for kind in spec.columns:
            key = _row_m(kind, n) if path.kind == "index" else n
            v = cols[kind].get(key)
            row[kind] = "" if v is None else render_value(v, digits, P)
        rep.add(n, row)
    return rep


def _transcendental(P: Precision, digits: int) -> Precision:
    if P.mode == "mp":
        return P
    return mp(max(32, digits + 10))


def build_b1(P: Precision, digits: int | None, N: int) -> Report:
    coeffs = coefficients(N, 3)
    R = _transcendental(P, 10)
    rep = Report("b1", str(P), ["c_n", "ratio"])
    for n in B1_ROWS:
        if n > N:
            break
        c = coeffs.c[n]
        ratio = asymptotic_ratio(n, c, R)
        rep.add(
            n,
            {
                "c_n": render_value(c, digits or 10, P),
                "ratio": format_fixed(ratio, 5) if digits is None else format_sci(ratio, digits),
            },
        )
    return rep


def build_b2(P: Precision, digits: int | None, N: int) -> Report:
    digits = digits or 22
    coeffs = coefficients(N, 3)
    R = _transcendental(P, digits)
    rep = Report("b2", str(P), ["l", "n", "k3"], index_name="row")
    row = 0
    for l in range(B2_ORDERS):  # noqa: E741
        top = N - 1 - l
        for n in range(top - 2, top + 1):
            if n < 0:
                continue
            approx = k3_approximant(l, n, coeffs, R)
            rep.add(row, {"l": str(l), "n": str(n), "k3": format_sci(approx.value, digits)})
            row += 1
    return rep


# -- subcommands -------------------------------------------------------------------


def cmd_table(args: argparse.Namespace) -> Report:
    P = args.precision
    if args.table in TABLES:
        return build_sequence_table(args.table, P, args.digits or 13, args.path, args.skip)
    N = SCALE_N[args.scale]
    if args.table == "b2" and args.scale == "paper" and not args.long_run:
        raise CliError("b2 at paper scale needs --long-run (several minutes)", EXIT_RESOURCE)
    if args.table == "b1":
        return build_b1(P, args.digits, N)
    return build_b2(P, args.digits, N)


def _read_series(path: str, column: str | None) -> list[Any]:
    """Values from a file: one per line, or a CSV column; ``#`` starts a comment."""
    try:
        with open(path, encoding="utf-8") as fh:
            lines = [ln.split("#", 1)[0].strip() for ln in fh]
    except OSError as exc:
        raise CliError(f"cannot read {path}: {exc}", EXIT_PARSE) from exc
    lines = [ln for ln in lines if ln]
    if column is not None or (lines and "," in lines[0]):
        reader = csv.reader(lines)
        header = next(reader, [])
        if column is None:
            raise CliError("CSV input needs --column", EXIT_PARSE)
        if column not in header:
            raise CliError(f"no column {column!r} in {header}", EXIT_PARSE)
        i = header.index(column)
        texts = [r[i] for r in reader if len(r) > i and r[i].strip()]
    else:
        texts = lines
    try:
        return [parse_number(t) for t in texts]
    except ValueError as exc:
        raise CliError(str(exc), EXIT_PARSE) from exc


def _params(args: argparse.Namespace) -> Hyp2F1Params:
    missing = [k for k in "abcz" if getattr(args, k) is None]
    if missing:
        raise CliError(f"missing parameter(s) {', '.join('--' + k for k in missing)}", EXIT_PARSE)
    try:
        return Hyp2F1Params.parse(args.a, args.b, args.c, args.z)
    except ValueError as exc:
        raise CliError(str(exc), EXIT_PARSE) from exc


def cmd_accelerate(args: argparse.Namespace) -> Report:
    P = args.precision
    if args.file is not None:
        raw = _read_series(args.file, args.column)
        values = [P.number(v) if not isinstance(v, ExactComplex) else P.complex(v.real, v.imag) for v in raw]
        source = args.file
    else:
        params = _params(args)
        values = list(partial_sums(params, args.terms - 1, args.skip or 0, P).values)
        source = f"2F1({args.a}, {args.b}; {args.c}; {args.z})"
    if args.prefactor is not None:
        f = P.number(parse_number(args.prefactor))
        values = [f * v for v in values]
    if len(values) < 3:
        raise CliError(f"need at least 3 values, got {len(values)}", EXIT_PARSE)
    refs = walk(args.kind, SequenceWindow(tuple(values)), args.path)
    rep = Report(f"accelerate {args.kind} {args.path} {source}", str(P), ["k", "n", "value", "diagnostics"], index_name="m")
    for r in refs:
        diag = f"inputs={r.inputs.start}..{r.inputs.stop - 1}"
        if r.note:
            diag += f"; {r.note}"
        rep.add(r.m, {"k": str(r.k), "n": str(r.n), "value": render_value(r.value, args.digits or 13, P), "diagnostics": diag})
    return rep


def _auto_strategy(params: Hyp2F1Params) -> tuple[str, str, int | None]:
    """``(strategy, kind, skip)`` chosen from the series' convergence class."""
    try:
        cross = crossover_index(params)
    except CrossoverError:
        cross = None
    cls = classify(params).kind
    if cls == "terminating":
        return "direct_sum", "", None
    if cross:
        return "skip_then_accelerate", "weniger_delta", cross
    if cls == "inside_unit_disk":
        if params.z.real ** 2 + params.z.imag ** 2 <= Fraction(1, 4):
            return "direct_sum", "", None
        return "accelerate", "weniger_delta", 0
    if cls == "boundary_divergent":
        raise CliError("the series diverges on the unit circle; no strategy applies", EXIT_PARSE)
    if cls.startswith("boundary"):
        return "accelerate", "levin_d", 0
    return "accelerate", "weniger_delta", 0


def cmd_hyp2f1(args: argparse.Namespace) -> Report | str:
    params = _params(args)
    if args.crossover_only:
        try:
            cross = crossover_index(params)
        except CrossoverError as exc:
            raise CliError(str(exc), EXIT_BREAKDOWN) from exc
        return "none" if cross is None else str(cross)
    P = args.precision
    if P.mode == "exact":
        raise CliError("2F1 values need a floating precision (machine or mp:D)", EXIT_PARSE)
    digits = args.digits or 13
    if args.auto:
        strategy, kind, skip = _auto_strategy(params)
        if args.skip is not None:
            skip = args.skip
    else:
        strategy, kind, skip = args.strategy, args.kind, args.skip
    tol = max(10.0 ** -(digits + 1), 10 * P.eps)
    res = evaluate(
        params,
        strategy,
        kind or "weniger_delta",
        skip=skip,
        n_sums=args.terms,
        prec=P,
        tol=tol,
    )
    try:
        cross = crossover_index(params)
    except CrossoverError:
        cross = None
    d = res.diagnostics
    acc = d.get("accuracy")
    cols = {
        "value": format_sci(res.value, digits),
        "class": classify(params).kind,
        "strategy": strategy,
        "kind": kind if strategy != "direct_sum" and strategy != "continue_then_sum" else "",
        "crossover": "none" if cross is None else str(cross),
        "skip": "" if d.get("skip") is None else str(d["skip"]),
        "sums": str(d.get("sums", d.get("terms", ""))),
        "order": "" if d.get("order") is None else str(d["order"]),
        "accuracy": "" if acc is None else format_sci(acc, 3),
    }
    rep = Report(f"hyp2f1 {args.a} {args.b} {args.c} {args.z}", str(P), list(cols))
    rep.add(0, cols)
    return rep


def _parse_k3(text: str) -> tuple[int, int]:
    l, _, n = text.partition(":")  # noqa: E741
    if not (l.isdigit() and n.isdigit()):
        raise argparse.ArgumentTypeError(f"expected L:N, got {text!r}")
    return int(l), int(n)


def cmd_oscillator(args: argparse.Namespace) -> Report:
    P = args.precision
    need = max([args.N] + [l + n + 1 for l, n in args.k3])  # noqa: E741
    if args.k3 and need > args.N:
        raise CliError(f"k3 approximants need c_0 .. c_{need}; raise --N", EXIT_RESOURCE)
    coeffs = coefficients(args.N, args.m)
    if args.k3:
        if args.m != 3:
            raise CliError("k3 approximants are defined for m = 3", EXIT_PARSE)
        digits = args.digits or 22
        R = _transcendental(P, digits)
        rep = Report(f"k3 N={args.N}", str(P), ["l", "n", "k3"], index_name="row")
        for i, (l, n) in enumerate(args.k3):  # noqa: E741
            a = k3_approximant(l, n, coeffs, R)
            rep.add(i, {"l": str(l), "n": str(n), "k3": format_sci(a.value, digits)})
        return rep
    exact = args.export == "rational"
    out_prec = Precision.parse("rational") if exact else P
    rep = Report(f"coefficients m={args.m} N={args.N}", "rational" if exact else str(P), ["c_n"])
    for n, c in enumerate(coeffs.c):
        rep.add(n, {"c_n": render_value(c, args.digits or 10, out_prec)})
    return rep


# -- argument parsing -------------------------------------------------------------


class _Parser(argparse.ArgumentParser):
    """Usage errors exit with the parse code instead of argparse's 2."""

    def error(self, message: str):  # type: ignore[override]
        self.print_usage(sys.stderr)
        self.exit(EXIT_PARSE, f"{self.prog}: error: {message}\n")


def _precision(text: str) -> Precision:
    try:
        return Precision.parse(text)
    except ValueError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from exc


def _path(text: str) -> PathSpec:
    try:
        return PathSpec.parse(text)
    except ValueError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from exc


def _positive(text: str) -> int:
    v = int(text)
    if v < 1:
        raise argparse.ArgumentTypeError("must be positive")
    return v


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--precision", type=_precision, default=mp(), help="machine | mp:D | rational (default mp:32)")
    common.add_argument("--format", choices=sorted(RENDERERS), default="text")
    common.add_argument("--digits", type=_positive, default=None, help="significant digits in output")

    hyp = argparse.ArgumentParser(add_help=False)
    for name in "abcz":
        hyp.add_argument(f"--{name}", default=None, help="rational p/q, decimal, or complex re+imi")

    parser = _Parser(prog="seqaccel", description="Sequence transformations and series summation.")
    parser.add_argument("--version", action="version", version=f"%(prog)s {artifact_version()}")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("table", parents=[common], help="regenerate a reference table")
    p.add_argument("table", choices=[*TABLES, "b1", "b2"])
    p.add_argument("--scale", choices=("desk", "paper"), default="desk")
    p.add_argument("--long-run", action="store_true", help="allow the full b2 run at paper scale")
    p.add_argument("--skip", type=int, default=None, help="series terms to skip (t5 default: crossover index)")
    p.add_argument("--path", type=_path, default=PathSpec.index_constant(0))
    p.set_defaults(func=cmd_table)

    p = sub.add_parser("accelerate", parents=[common, hyp], help="transform a sequence along a path")
    p.add_argument("--file", default=None, help="one value per line, or CSV with --column")
    p.add_argument("--column", default=None)
    p.add_argument("--kind", choices=KINDS, default="epsilon")
    p.add_argument("--path", type=_path, default=PathSpec.index_constant(0))
    p.add_argument("--terms", type=_positive, default=16, help="partial sums of the builtin series")
    p.add_argument("--skip", type=int, default=None)
    p.add_argument("--prefactor", default=None, help="multiply every input by this constant")
    p.set_defaults(func=cmd_accelerate)

    p = sub.add_parser("hyp2f1", parents=[common, hyp], help="evaluate 2F1(a, b; c; z)")
    p.add_argument("--auto", action="store_true", help="pick a strategy from the convergence class")
    p.add_argument(
        "--strategy",
        choices=("direct_sum", "accelerate", "skip_then_accelerate", "continue_then_sum"),
        default="direct_sum",
    )
    p.add_argument("--kind", choices=KINDS, default="weniger_delta")
    p.add_argument("--terms", type=_positive, default=None, help="fixed number of partial sums")
    p.add_argument("--skip", type=int, default=None)
    p.add_argument("--crossover-only", action="store_true")
    p.set_defaults(func=cmd_hyp2f1)

    p = sub.add_parser("oscillator", parents=[common], help="renormalized oscillator coefficients")
    p.add_argument("--N", type=int, default=SCALE_N["desk"])
    p.add_argument("--m", type=_positive, default=3)
    p.add_argument("--export", choices=("rational", "decimal"), default="decimal")
    p.add_argument("--k3", type=_parse_k3, action="append", default=[], metavar="L:N")
    p.set_defaults(func=cmd_oscillator)
    return parser


_VALUE_FLAGS = ("--a", "--b", "--c", "--z", "--prefactor")


def _glue_negative_values(argv: list[str]) -> list[str]:
    """Rewrite ``--c -7/2`` as ``--c=-7/2``.

    argparse only recognizes plain negative integers and decimals as values,
    so rationals and complex literals with a leading minus need the ``=``.
    """
    out: list[str] = []
    i = 0
    while i < len(argv):
        tok = argv[i]
        if tok in _VALUE_FLAGS and i + 1 < len(argv) and argv[i + 1].startswith("-"):
            out.append(f"{tok}={argv[i + 1]}")
            i += 2
            continue
        out.append(tok)
        i += 1
    return out


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(_glue_negative_values(list(sys.argv[1:] if argv is None else argv)))
    if getattr(args, "skip", None) is not None and args.skip < 0:
        parser.error("--skip must be nonnegative")
    try:
        out = args.func(args)
    except CliError as exc:
        print(f"seqaccel: {exc}", file=sys.stderr)
        return exc.code
    except (EmptyPathError, BreakdownError, NoConvergenceError, CrossoverError) as exc:
        print(f"seqaccel: {exc}", file=sys.stderr)
        return EXIT_BREAKDOWN
    except InsufficientCoefficientsError as exc:
        print(f"seqaccel: {exc}", file=sys.stderr)
        return EXIT_RESOURCE
    except (PrecisionError, PoleError, DegenerateParameterError, ValueError) as exc:
        print(f"seqaccel: {exc}", file=sys.stderr)
        return EXIT_PARSE
    if isinstance(out, str):
        sys.stdout.write(out + "\n")
    else:
        sys.stdout.write(RENDERERS[args.format](out))
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
