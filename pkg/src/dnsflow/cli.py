"""``adequacy`` command line entry point."""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

from .network import CaseVariant, fixture_path
from .report import EXIT_INPUT_ERROR, InputError, RunConfig, render_tables, run


def _cases(text: str) -> tuple[CaseVariant, ...]:
    if text.strip().lower() == "all":
        return tuple(CaseVariant)
    try:
        return (CaseVariant.parse(text),)
    except ValueError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from None


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="adequacy",
        description="DNS/GNS/wheeling loss by DC load flow, compared with max-flow/min-cut.",
    )
    sub = parser.add_subparsers(dest="command", required=True)
    p = sub.add_parser("run", help="evaluate the case study")
    p.add_argument("--network", type=Path, default=None,
                   help="network document (default: bundled 5-bus fixture)")
    p.add_argument("--case", type=_cases, default=tuple(CaseVariant), help="1, 2, 3 or all")
    p.add_argument("--method", choices=("pm", "mcmf", "both"), default="both")
    p.add_argument("--losses", choices=("on", "off", "both"), default="both")
    p.add_argument("--eps", type=float, default=1e-6, help="congestion margin in MW")
    p.add_argument("--tol", type=float, default=1e-6, help="loss iteration tolerance in MW")
    p.add_argument("--max-iter", type=int, default=50)
    p.add_argument("--format", choices=("table", "structured"), default="table")
    p.add_argument("--out", type=Path, default=None, help="write output here instead of stdout")
    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        config = RunConfig(
            network_path=args.network if args.network is not None else fixture_path(),
            cases=args.case,
            method=args.method,
            losses=args.losses,
            eps_mw=args.eps,
            tol_mw=args.tol,
            max_iter=args.max_iter,
            output_format=args.format,
        )
        report, code = run(config)
    except InputError as exc:
        print(f"adequacy: error: {exc}", file=sys.stderr)
        return EXIT_INPUT_ERROR

    text = report.to_json() if config.output_format == "structured" else render_tables(report)
    if args.out is not None:
        args.out.write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)
    if code:
        print("adequacy: warning: lossy flow did not converge", file=sys.stderr)
    return code


if __name__ == "__main__":
    sys.exit(main())
