"""Command line interface: ``ordlocus <subcommand> ...``.

Exit status is 0 on success, 1 for usage or input errors and 2 when a
computation fails (diagnostics go to standard error).
"""

from __future__ import annotations

import argparse
import functools
import json
import logging
import sys
from dataclasses import replace

from . import codec
from .alexander import alexander_points, alexander_polynomial
from .laurent import format_poly, positive_real_roots
from .locus import SEEDS, WINDOW, BuildOptions, build_locus
from .orderability import alexander_arc_check, orderable_slopes
from .plotting import PlotOptions, save_svg
from .presentations import PresentationError, load_presentation, two_bridge
from .psl2r import ConvergenceFailure, InvalidInput
from .tracer import TraceError

log = logging.getLogger("ordlocus")

EXIT_OK, EXIT_USAGE, EXIT_COMPUTE = 0, 1, 2

HELP_WIDTH = 80


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(f"{self.prog}: error: {message}")


_Formatter = functools.partial(argparse.ArgumentDefaultsHelpFormatter, width=HELP_WIDTH)


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(
        prog="ordlocus",
        description="Holonomy extension loci and orderable Dehn fillings of knot exteriors.",
        formatter_class=_Formatter,
    )
    parser.add_argument("-v", "--verbose", action="count", default=0,
                        help="more logging on standard error (repeat for debug)")
    sub = parser.add_subparsers(dest="command", metavar="COMMAND", parser_class=_Parser)

    p = sub.add_parser("twobridge", help="write the presentation of the two-bridge knot K(p, q)",
                       formatter_class=_Formatter)
    p.add_argument("p", type=int, help="odd integer p >= 3")
    p.add_argument("q", type=int, help="0 < q < p, coprime to p")
    p.add_argument("-o", "--output", default="-", help="output file ('-' for standard output)")
    p.add_argument("--genus", type=int, default=None, help="Seifert genus recorded in the file")

    p = sub.add_parser("alex", help="Alexander polynomial, positive real roots and Alexander points",
                       formatter_class=_Formatter)
    p.add_argument("input", help="presentation file")
    p.add_argument("--json", action="store_true", default=False, help="print JSON instead of text")

    p = sub.add_parser("locus", help="compute the locus of a presentation", formatter_class=_Formatter)
    p.add_argument("input", help="presentation file")
    p.add_argument("-o", "--output", required=True, help="locus JSON file to write")
    p.add_argument("--svg", default=None, help="also render the locus to this SVG file")
    p.add_argument("--csv", default=None, help="also write the arc points to this CSV file")
    _add_build_options(p)

    p = sub.add_parser("orderable", help="report orderable filling slopes",
                       formatter_class=_Formatter)
    p.add_argument("input", help="presentation file or locus JSON file")
    p.add_argument("--json", action="store_true", default=False, help="print JSON instead of text")
    p.add_argument("--el-range", nargs=2, type=int, metavar=("LO", "HI"), default=None,
                   help="also test the integer slopes LO..HI against the elliptic-side arcs")
    _add_build_options(p)

    p = sub.add_parser("plot", help="render a locus JSON file to SVG", formatter_class=_Formatter)
    p.add_argument("input", help="locus JSON file")
    p.add_argument("-o", "--output", required=True, help="SVG file to write")
    p.add_argument("--quotient", action="store_true", default=False,
                   help="draw the quotient by the translations and the reflection")
    p.add_argument("--debug-su2", action="store_true", default=False,
                   help="overlay points dropped as SU(2) characters")
    return parser


def _add_build_options(p):
    p.add_argument("--window", nargs=2, type=float, metavar=("X", "Y"), default=list(WINDOW),
                   help="plot window |x| <= X, |y| <= Y")
    p.add_argument("--seeds", type=int, default=SEEDS, help="number of geometric seed lines")
    p.add_argument("--el", action="store_true", default=False,
                   help="also trace the elliptic-side (translation) locus")
    p.add_argument("--slopes", type=float, nargs="*", default=[],
                   help="boundary-slope candidates to compare asymptotes against")
    p.add_argument("--no-alexander-seeding", action="store_true", default=False,
                   help="do not seed at the Alexander points")


def _options(args, el: bool = False) -> BuildOptions:
    x, y = args.window
    if x <= 0 or y <= 0:
        raise UsageError("--window entries must be positive")
    if args.seeds < 1:
        raise UsageError("--seeds must be positive")
    return BuildOptions(window=(x, y), seeds=args.seeds, el=args.el or el,
                        slope_candidates=tuple(args.slopes),
                        alexander_seeding=not args.no_alexander_seeding)


def _write(path: str, text: str) -> None:
    if path == "-":
        sys.stdout.write(text)
        return
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(text)


def _load(path: str):
    try:
        return load_presentation(path)
    except OSError as exc:
        raise UsageError(f"cannot read {path}: {exc.strerror}") from None


def cmd_twobridge(args) -> int:
    P = two_bridge(args.p, args.q)
    if args.genus is not None:
        P = replace(P, genus=args.genus)
    _write(args.output, P.to_text())
    return EXIT_OK


def cmd_alex(args) -> int:
    P = _load(args.input)
    delta = alexander_polynomial(P)
    roots = positive_real_roots(delta)
    points = alexander_points(P, delta)
    if args.json:
        doc = {
            "polynomial": format_poly(delta),
            "coefficients": list(delta.coeffs),
            "positive_roots": [{"root": r, "multiplicity": m} for r, m in roots],
            "alexander_points": [
                {"x": a.x, "root": a.root, "multiplicity": a.multiplicity, "simple": a.simple}
                for a in points
            ],
        }
        sys.stdout.write(json.dumps(doc, indent=1) + "\n")
        return EXIT_OK
    print(format_poly(delta))
    for r, m in roots:
        print(f"root {r:.12g} multiplicity {m}")
    if not points:
        print("no Alexander points")
    for a in points:
        kind = "simple" if a.simple else f"multiplicity {a.multiplicity}"
        print(f"Alexander point x = {a.x:.12g} ({kind})")
    return EXIT_OK


def _report_validation(locus) -> bool:
    report = locus.diagnostics.get("validation", {})
    ok = bool(report.get("passed", False))
    if not ok:
        for name, entry in report.items():
            if isinstance(entry, dict) and not entry.get("passed", True):
                print(f"validation failed: {name}: {entry.get('witness')}", file=sys.stderr)
    return ok


def cmd_locus(args) -> int:
    P = _load(args.input)
    locus = build_locus(P, _options(args))
    codec.save(locus, args.output)
    if args.svg:
        save_svg(locus, args.svg)
    if args.csv:
        _write(args.csv, codec.to_csv(locus))
    for ap in locus.alexander_points:
        log.info("Alexander point %.6f", ap.x)
    for check in alexander_arc_check(locus) if locus.alexander_points else ():
        if not check.found:
            print(f"no arc found through the Alexander point x = {check.x:.6f}", file=sys.stderr)
    return EXIT_OK if _report_validation(locus) else EXIT_COMPUTE


def cmd_orderable(args) -> int:
    if args.input.endswith(".json"):
        try:
            locus = codec.load(args.input)
        except OSError as exc:
            raise UsageError(f"cannot read {args.input}: {exc.strerror}") from None
    else:
        locus = build_locus(_load(args.input), _options(args, el=args.el_range is not None))
    if args.el_range is not None and not locus.el_arcs:
        print("locus has no elliptic-side arcs; EL hits skipped", file=sys.stderr)
    report = orderable_slopes(locus, tuple(args.el_range) if args.el_range else None)
    if args.json:
        sys.stdout.write(json.dumps(report.to_dict(), indent=1) + "\n")
    else:
        sys.stdout.write(report.to_text())
    return EXIT_OK


def cmd_plot(args) -> int:
    try:
        locus = codec.load(args.input)
    except OSError as exc:
        raise UsageError(f"cannot read {args.input}: {exc.strerror}") from None
    save_svg(locus, args.output, PlotOptions(quotient=args.quotient, debug_su2=args.debug_su2))
    return EXIT_OK


COMMANDS = {
    "twobridge": cmd_twobridge,
    "alex": cmd_alex,
    "locus": cmd_locus,
    "orderable": cmd_orderable,
    "plot": cmd_plot,
}


def run_cli(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except UsageError as exc:
        parser.print_usage(sys.stderr)
        print(exc, file=sys.stderr)
        return EXIT_USAGE
    except SystemExit as exc:  # --help
        return EXIT_OK if not exc.code else EXIT_USAGE
    level = logging.WARNING - 10 * min(args.verbose, 2)
    logging.basicConfig(level=level, format="%(levelname)s %(name)s: %(message)s")
    if args.command is None:
        parser.print_help(sys.stderr)
        return EXIT_USAGE
    try:
        return COMMANDS[args.command](args)
    except UsageError as exc:
        print(f"ordlocus {args.command}: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (PresentationError, codec.CodecError) as exc:
        print(f"ordlocus {args.command}: invalid input: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (TraceError, ConvergenceFailure, InvalidInput, ArithmeticError, ValueError) as exc:
        print(f"ordlocus {args.command}: computation failed: {exc}", file=sys.stderr)
        return EXIT_COMPUTE


def main() -> None:
    sys.exit(run_cli())


if __name__ == "__main__":
    main()
