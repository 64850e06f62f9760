"""Command line front end.

Subcommands: verify (one named suite on one algebra), scan (semibrick
growth across base fields), fan (g-vector fan export), wallchamber
(rank 2 SVG picture).  Reports go to stdout or --out.  The process exit
code mirrors the report: 0 all pass, 1 any failure, 2 window-limited
results only.
"""

from __future__ import annotations

import argparse
import os
import sys
import time

from .algebra import load_algebra
from . import reports


def _algebra_text(arg):
    if os.path.exists(arg):
        with open(arg) as fh:
            return fh.read()
    bundled = os.path.join(os.path.dirname(__file__), "data", arg + ".alg")
    if os.path.exists(bundled):
        with open(bundled) as fh:
            return fh.read()
    raise SystemExit("no such algebra file or bundled name: %s" % arg)


def _algebra_id(arg):
    base = os.path.basename(arg)
    if base.endswith(".alg"):
        base = base[: -len(".alg")]
    return base


def _parse_bound(text):
    try:
        return tuple(int(x) for x in text.split(","))
    except ValueError:
        raise SystemExit("bad bound %r, expected d1,d2,..." % text)


def _parse_range(text, what):
    try:
        lo, hi = text.split(":")
        return int(lo), int(hi)
    except ValueError:
        raise SystemExit("bad %s %r, expected a:b" % (what, text))


def _parse_fields(text):
    try:
        fields = tuple(int(x) for x in text.split(","))
    except ValueError:
        raise SystemExit("bad field list %r, expected 2,3,5" % text)
    for p in fields:
        if not 2 <= p <= 13:
            raise SystemExit("field size %d out of range" % p)
    return fields


def _emit(payload, out):
    if out:
        with open(out, "w") as fh:
            fh.write(payload)
    else:
        sys.stdout.write(payload)


def _run_verify(args):
    text = _algebra_text(args.algebra)
    algebra = load_algebra(text)
    if args.bound:
        bound = _parse_bound(args.bound)
    else:
        bound = (2,) * algebra.n
    aid = _algebra_id(args.algebra)
    t0 = time.perf_counter()
    if args.suite == "smalo":
        rep = reports.suite_smalo(algebra, bound, aid)
    elif args.suite == "semistable":
        grid = _parse_range(args.grid, "grid")
        rep = reports.suite_semistable(algebra, bound, grid, args.depth, aid)
    elif args.suite == "numdis":
        rep = reports.suite_numdis(algebra, bound, aid)
    else:
        rep = reports.suite_brickfinite(algebra, bound, aid)
    timings = {"seconds": round(time.perf_counter() - t0, 3)} if args.timings else None
    _emit(reports.render_json(rep, timings), args.out)
    return reports.exit_code(rep)


def _run_scan(args):
    text = _algebra_text(args.algebra)
    grid = _parse_range(args.grid, "grid")
    fields = _parse_fields(args.fields)
    bound = _parse_bound(args.bound) if args.bound else None
    t0 = time.perf_counter()
    rep = reports.suite_scan(
        text, grid, fields, args.depth, bound, _algebra_id(args.algebra)
    )
    timings = {"seconds": round(time.perf_counter() - t0, 3)} if args.timings else None
    _emit(reports.render_json(rep, timings), args.out)
    return reports.exit_code(rep)


def _run_fan(args):
    algebra = load_algebra(_algebra_text(args.algebra))
    fan = reports.fan_json(algebra, args.depth, _algebra_id(args.algebra))
    _emit(reports.render_json(fan), args.out)
    return 0


def _run_wallchamber(args):
    algebra = load_algebra(_algebra_text(args.algebra))
    bound = _parse_bound(args.bound) if args.bound else None
    window = _parse_range(args.window, "window")
    svg = reports.wallchamber_svg(algebra, bound, window, args.depth)
    _emit(svg, args.out)
    return 0


def build_parser():
    parser = argparse.ArgumentParser(
        prog="torslab",
        description="torsion class and stability verification over finite fields",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p):
        p.add_argument("--algebra", required=True,
                       help="algebra file path or bundled name")
        p.add_argument("--out", help="write the report here instead of stdout")
        p.add_argument("--timings", action="store_true",
                       help="attach wall clock timing to the report")

    v = sub.add_parser("verify", help="run one verification suite")
    common(v)
    v.add_argument("--suite", required=True,
                   choices=("smalo", "semistable", "numdis", "brickfinite"))
    v.add_argument("--bound", help="dimension bound d1,d2,...")
    v.add_argument("--grid", default="-4:4", help="lattice weight grid a:b")
    v.add_argument("--depth", type=int, default=6, help="mutation walk depth")
    v.set_defaults(run=_run_verify)

    s = sub.add_parser("scan", help="semibrick growth scan across fields")
    common(s)
    s.add_argument("--fields", default="2,3,5", help="prime list 2,3,5")
    s.add_argument("--grid", default="-4:4", help="lattice weight grid a:b")
    s.add_argument("--bound", help="dimension bound d1,d2,...")
    s.add_argument("--depth", type=int, default=6, help="mutation walk depth")
    s.set_defaults(run=_run_scan)

    f = sub.add_parser("fan", help="export the enumerated g-vector fan")
    common(f)
    f.add_argument("--depth", type=int, default=6, help="mutation walk depth")
    f.set_defaults(run=_run_fan)

    w = sub.add_parser("wallchamber", help="rank 2 wall and chamber SVG")
    common(w)
    w.add_argument("--window", default="-5:5", help="drawing window a:b")
    w.add_argument("--bound", help="dimension bound d1,d2,...")
    w.add_argument("--depth", type=int, default=6, help="fan overlay depth")
    w.set_defaults(run=_run_wallchamber)
    return parser


def _glue_negative_values(argv):
    """Join option values like -4:4 onto their flag so argparse accepts them."""
    glued = []
    skip = False
    for k, tok in enumerate(argv):
        if skip:
            skip = False
            continue
        nxt = argv[k + 1] if k + 1 < len(argv) else None
        if (
            tok in ("--grid", "--window", "--bound")
            and nxt is not None
            and nxt.startswith("-")
            and any(ch.isdigit() for ch in nxt)
        ):
            glued.append(tok + "=" + nxt)
            skip = True
        else:
            glued.append(tok)
    return glued


def main(argv=None):
    if argv is None:
        argv = sys.argv[1:]
    args = build_parser().parse_args(_glue_negative_values(list(argv)))
    try:
        return args.run(args)
    except reports.ReportError as exc:
        print("error: %s" % exc, file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
