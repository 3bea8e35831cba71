"""Command line entry point: ``latspec analyze``, ``latspec gcdlcm``, ``latspec kn``.

Exit status: 0 when every containment assertion passes, 1 when one fails,
2 on bad input or an unmet hypothesis that blocks the whole analysis.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from .bounds import kn_constants
from .errors import LatspecError
from .report import (
    BOUND_FAMILIES,
    FIXTURES,
    AnalysisRequest,
    emit_disks_svg,
    fixture_text,
    parse_integer_set,
    run,
)

KN_METHODS = {"closed": "closed_form", "exhaustive": "exhaustive"}


def _bounds_arg(text: str) -> list[str]:
    fams = [t.strip() for t in text.split(",") if t.strip()]
    bad = [t for t in fams if t not in BOUND_FAMILIES]
    if bad:
        raise argparse.ArgumentTypeError("unknown bound family: %s" % ", ".join(bad))
    return fams


def _common(p: argparse.ArgumentParser) -> None:
    p.add_argument("--which", choices=("primal", "dual", "both"), default="primal")
    p.add_argument("--bounds", type=_bounds_arg, default=None,
                   help="comma separated subset of %s" % ",".join(BOUND_FAMILIES))
    p.add_argument("--json", dest="json_path", type=Path, help="write the report here instead of stdout")
    p.add_argument("--svg", dest="svg_path", type=Path, help="write a disk plot (primal if present)")
    p.add_argument("--strict-order", action="store_true", help="refuse to re-index the input")
    p.add_argument("--kn", choices=sorted(KN_METHODS), default="closed")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="latspec", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    a = sub.add_parser("analyze", help="analyze a poset file")
    src = a.add_mutually_exclusive_group(required=True)
    src.add_argument("path", nargs="?", type=Path)
    src.add_argument("--fixture", choices=FIXTURES)
    _common(a)

    g = sub.add_parser("gcdlcm", help="analyze a set of integers under divisibility")
    g.add_argument("--set", dest="integers", required=True, help="e.g. 1,2,3,6")
    g.add_argument("--f", dest="f_spec", default="pow:1", help="pow:<alpha>")
    g.add_argument("--closure", action="store_true", help="replace the set by its factor closure")
    _common(g)

    k = sub.add_parser("kn", help="print the extreme K(n) constants")
    k.add_argument("n", type=int)
    k.add_argument("--kn", choices=sorted(KN_METHODS), default="closed")
    return parser


def _request(args) -> AnalysisRequest:
    common = dict(
        which=args.which,
        bounds=args.bounds,
        strict_order=args.strict_order,
        kn_method=KN_METHODS[args.kn],
    )
    if args.command == "analyze":
        if args.fixture:
            return AnalysisRequest(poset_text=fixture_text(args.fixture), source_name=args.fixture, **common)
        text = args.path.read_text(encoding="utf-8")
        return AnalysisRequest(poset_text=text, source_name=args.path.name, **common)
    return AnalysisRequest(
        integers=parse_integer_set(args.integers), f_spec=args.f_spec, closure=args.closure, **common
    )


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        if args.command == "kn":
            c = kn_constants(args.n, KN_METHODS[args.kn])
            print(json.dumps({"n": c.n, "c_n": c.c_n, "C_n": c.C_n, "method": c.method}, sort_keys=True))
            return 0
        report = run(_request(args))
        if args.svg_path:
            problem = "primal" if args.which != "dual" else "dual"
            emit_disks_svg(report, args.svg_path, problem)
    except (LatspecError, OSError) as exc:
        print("latspec: error: %s: %s" % (type(exc).__module__.rsplit(".", 1)[-1], exc), file=sys.stderr)
        return 2
    if args.json_path:
        args.json_path.write_text(report.to_json(), encoding="utf-8")
        for a in report.data["assertions"]:
            print("%s %s" % ("PASS" if a["pass"] else "FAIL", a["name"]))
    else:
        sys.stdout.write(report.to_json())
    return 0 if report.passed else 1


if __name__ == "__main__":
    sys.exit(main())
