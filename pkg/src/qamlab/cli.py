"""Command-line front end: architecture exploration, channel trials, widths.

Exit codes: 0 success, 2 input error, 3 convergence demand failed.
"""

from __future__ import annotations

import argparse
import sys
from fractions import Fraction
from importlib import resources
from pathlib import Path

from . import channel_sim as cs
from . import formats
from . import hls_explorer as hx
from . import qam_decoder as qd
from .formats import ParseError
from .widths import infer_widths, render_widths

EXIT_OK = 0
EXIT_INPUT = 2
EXIT_NOT_CONVERGED = 3


def data_path(name: str) -> Path:
    """Path of a bundled data file (designs, arch configs, trials, exprs)."""
    return Path(resources.files("qamlab") / "data" / name)


def _read(path: str) -> str:
    return Path(path).read_text()


def _num(x: Fraction) -> str:
    return str(x.numerator) if x.denominator == 1 else f"{float(x):.2f}"


def render_reports(reports: list[hx.DesignReport], fmt: str) -> str:
    cols = ("config_id", "latency_cycles", "latency_ns", "mbaud", "mbps",
            "rel_area", "goal30")
    rows = [
        (
            r.config_id,
            str(r.latency_cycles),
            _num(r.latency_ns),
            f"{float(r.mbaud):.2f}",
            f"{float(r.mbps):.2f}",
            f"{r.rel_area:.3f}",
            "yes" if r.meets_30mbps else "no",
        )
        for r in reports
    ]
    if fmt == "csv":
        return "\n".join([",".join(cols)] + [",".join(row) for row in rows]) + "\n"
    widths = [max(len(c), *(len(row[i]) for row in rows)) for i, c in enumerate(cols)]
    lines = ["  ".join(c.ljust(widths[i]) for i, c in enumerate(cols)).rstrip()]
    for row in rows:
        lines.append("  ".join(v.ljust(widths[i]) for i, v in enumerate(row)).rstrip())
    return "\n".join(lines) + "\n"


def _emit(text: str, out: str | None):
    if out:
        Path(out).write_text(text)
    else:
        sys.stdout.write(text)


def cmd_explore(args) -> int:
    try:
        design = formats.parse_design(_read(args.design))
        if args.clock is not None:
            design = hx.with_clock(design, Fraction(args.clock))
        reports = []
        for path in args.arch:
            config = formats.parse_arch(_read(path), design)
            reports.append(hx.evaluate(design, config, config_id=Path(path).stem))
    except (OSError, ParseError, hx.DirectiveError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    _emit(render_reports(reports, args.format), args.out)
    return EXIT_OK


def cmd_simulate(args) -> int:
    try:
        spec = formats.parse_trial(_read(args.trial))
    except (OSError, ParseError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    params = qd.DecoderParams(
        x_width=spec.config.x_width,
        round_coef_updates=spec.round_updates,
        mu_shift=spec.mu_shift,
    )
    metrics = cs.run_trial(spec.config, params)
    _emit(cs.render_metrics(metrics, args.format), args.out)
    if spec.require_converged and not metrics.converged:
        print("error: trial demands convergence but ser is above threshold",
              file=sys.stderr)
        return EXIT_NOT_CONVERGED
    return EXIT_OK


def cmd_widths(args) -> int:
    try:
        root = formats.parse_expr(_read(args.expr))
    except (OSError, ParseError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    infer_widths(root)
    _emit(render_widths(root) + "\n", args.out)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="qamlab",
        description="Fixed-point QAM equalizer lab and architecture explorer",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("explore", help="evaluate architecture configs for a design")
    p.add_argument("design", help="design file")
    p.add_argument("arch", nargs="+", help="architecture config files")
    p.add_argument("--clock", help="clock period in ns (overrides design file)")
    p.add_argument("--format", choices=("table", "csv"), default="table")
    p.add_argument("--out", help="write the report to a file")
    p.set_defaults(func=cmd_explore)

    p = sub.add_parser("simulate", help="run a channel/equalizer trial")
    p.add_argument("trial", help="trial file")
    p.add_argument("--format", choices=("table", "csv"), default="table")
    p.add_argument("--out", help="write the report to a file")
    p.set_defaults(func=cmd_simulate)

    p = sub.add_parser("widths", help="infer bit widths for an expression file")
    p.add_argument("expr", help="expression file (prefix notation)")
    p.add_argument("--out", help="write the report to a file")
    p.set_defaults(func=cmd_widths)

    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
