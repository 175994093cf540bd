#!/usr/bin/env python3
"""
ACV - asymptotic critical values of polynomials
Run: python acv.py {badfaces|values|witness|bound|emit-curve} PROBLEM.json [options]

Bad faces of the Newton polyhedron, candidate critical values at infinity,
witness curves and their verification.
"""

import argparse
import logging
import os
import sys

sys.path.insert(0, os.path.dirname(os.path.abspath(__file__)))

from mpmath import mp

from app.errors import ParseError
from app.orchestrator.state import Command
from app.orchestrator.workflow import ACVPipeline
from app.parsers.problem_parser import load_chart_file, load_problem
from app.utils.settings import load_settings
from app.verifier.numeric import emit_curve_samples

logger = logging.getLogger("acv")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(description="Asymptotic critical values via bad faces and witness curves")
    parser.add_argument("command", choices=[c.value for c in Command], help="Pipeline command")
    parser.add_argument("problem", help="Path to the JSON problem file")
    parser.add_argument("--seed", type=int, default=None, help="Seed of every random generator")
    parser.add_argument("--chart", default=None, help="JSON file with a chart matrix W (or {\"faces\": [...]})")
    parser.add_argument("--ustar", default=None, help="Comma-separated override of u''* for the first bad face")
    parser.add_argument("--nondegenerate", action="store_true", help="Assert non-degeneracy at infinity")
    parser.add_argument("--all-faces", action="store_true", help="Report every bad face, not only the maximal ones")
    parser.add_argument("--tmin", type=float, default=None, help="Smallest grid parameter")
    parser.add_argument("--tmax", type=float, default=None, help="Largest grid parameter")
    parser.add_argument("--points", type=int, default=None, help="Number of grid samples")
    parser.add_argument("--precision", type=int, default=None, help="Working precision in decimal digits")
    parser.add_argument("--out", "-o", default=None, help="Write the report (or CSV) to this file")
    parser.add_argument("--log-level", default=None, help="Logging level (default INFO or ACV_LOG_LEVEL)")
    return parser


def _write(text: str, path: str = None):
    if path:
        with open(path, "w", encoding="utf-8") as handle:
            handle.write(text)
        logger.info(f"Output saved to: {path}")
    else:
        sys.stdout.write(text)
        if not text.endswith("\n"):
            sys.stdout.write("\n")


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    level = (args.log_level or os.getenv("ACV_LOG_LEVEL") or "INFO").upper()
    logging.basicConfig(level=getattr(logging, level, logging.INFO), format="%(name)s - %(message)s")

    try:
        spec = load_problem(args.problem)
        if args.chart:
            spec.charts = load_chart_file(args.chart)
        if args.ustar:
            spec.u_star = [v.strip() for v in args.ustar.split(",") if v.strip()]
            try:
                spec.base_point_override()
            except ValueError as e:
                raise ParseError(f"Invalid --ustar: {e}", field="u_star") from None
        seed = args.seed
        if seed is None and not os.getenv("ACV_SEED"):
            seed = spec.seed
        grid = spec.grid
        settings = load_settings(
            seed=seed,
            precision=args.precision,
            nondegenerate=args.nondegenerate or spec.nondegenerate_at_infinity,
            tmin=args.tmin if args.tmin is not None else (grid.tmin if grid else None),
            tmax=args.tmax if args.tmax is not None else (grid.tmax if grid else None),
            points=args.points if args.points is not None else (grid.points if grid else None),
            log_level=level,
            exhaustive_faces=args.all_faces,
        )
    except ParseError as e:
        print(e.describe(), file=sys.stderr)
        return e.exit_code
    except ValueError as e:
        print(f"[cli-io] {e}", file=sys.stderr)
        return ParseError.exit_code

    command = Command(args.command)
    pipeline = ACVPipeline(settings)
    report = pipeline.run(spec, command)

    if command == Command.BOUND:
        logger.info(f"Volume bound: {report.volume_bound}")
    if command == Command.EMIT_CURVE:
        f = spec.polynomial()
        blocks = []
        with mp.workdps(settings.precision):
            for entry in pipeline.last_state.get("witnesses", []):
                if entry["witness"] is None or entry["verification"] is None:
                    continue
                header = f"# face {entry['face_index']} target {mp.nstr(mp.mpc(entry['target']), 17)}\n"
                blocks.append(header + emit_curve_samples(f, entry["witness"], settings.grid))
        _write("".join(blocks), args.out)
    else:
        _write(report.to_json(), args.out)

    if report.error:
        print(report.error, file=sys.stderr)
    return report.exit_code


if __name__ == "__main__":
    sys.exit(main())
