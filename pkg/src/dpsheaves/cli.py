"""Command-line front end.

Every subcommand builds a payload dict; multi-row results put their rows
under ``"rows"``.  JSON output adds ``"schema": "v1"``; CSV output writes one
line per row with the scalar payload fields repeated.  Exact rationals are
always rendered as ``"p/q"`` strings.

Exit codes: 0 success, 2 parse error, 3 domain error.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import sys
from fractions import Fraction

from . import brillnoether, existence, goodbundle, lbcoh
from .chern import (
    ChernCharacter,
    discriminant,
    euler,
    euler_pair,
    format_character,
    parse_character,
)
from .errors import DomainError, EmptyPrioritaryStack, ParseError
from .lattice import Divisor, Surface, format_rational, minus_one_curves, parse_divisor, parse_rational
from .weyl import orbit, orbit_min_pairing

SCHEMA = "v1"
CAVEAT = "witness is a numerically exceptional character; it may not be realized by an exceptional bundle"


def _value(x):
    """Render a payload value as JSON-ready data."""
    if isinstance(x, bool) or x is None:
        return x
    if isinstance(x, Fraction):
        return format_rational(x)
    if isinstance(x, int):
        return x
    if isinstance(x, Divisor):
        return str(x)
    if isinstance(x, ChernCharacter):
        return format_character(x)
    if isinstance(x, (list, tuple)):
        return [_value(y) for y in x]
    if isinstance(x, dict):
        return {k: _value(y) for k, y in x.items()}
    return str(x)


def csv_cell(x) -> str:
    """CSV rendering of an already JSON-ready value."""
    if x is None:
        return ""
    if isinstance(x, bool):
        return "true" if x else "false"
    if isinstance(x, list):
        return "|".join(csv_cell(y) for y in x)
    return str(x)


def render(payload: dict, fmt: str) -> str:
    data = {"schema": SCHEMA, **_value(payload)}
    if fmt == "json":
        return json.dumps(data, indent=2) + "\n"
    scalars = {k: v for k, v in data.items() if k != "rows"}
    rows = data.get("rows")
    records = [{**scalars, **row} for row in rows] if rows is not None else [scalars]
    header = list(scalars)
    for rec in records:
        header += [k for k in rec if k not in header]
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(header)
    for rec in records:
        writer.writerow([csv_cell(rec.get(k)) for k in header])
    return buf.getvalue()


# -- subcommands ------------------------------------------------------------
def _surface(args) -> Surface:
    return Surface.parse(args.surface)


def cmd_curves(args):
    s = _surface(args)
    curves = minus_one_curves(s)
    return {"surface": s.name, "count": len(curves), "rows": [{"curve": c} for c in curves]}


def cmd_weyl_orbit(args):
    s = _surface(args)
    d = parse_divisor(args.divisor, s)
    members = sorted(orbit(d), key=lambda x: x.coeffs)
    payload = {"surface": s.name, "divisor": d, "size": len(members)}
    if args.pair_with:
        nu = parse_divisor(args.pair_with, s)
        payload["pair_with"] = nu
        payload["min_pairing"] = orbit_min_pairing(nu, d)
    payload["rows"] = [{"member": x} for x in members]
    return payload


def cmd_chi(args):
    s = _surface(args)
    v = parse_character(args.character, s)
    payload = {"surface": s.name, "character": v, "c2": v.c2, "chi": euler(v)}
    if v.r > 0:
        payload["slope"] = v.nu
        payload["discriminant"] = discriminant(v)
    if args.second:
        w = parse_character(args.second, s)
        payload["second"] = w
        payload["chi_pair"] = euler_pair(v, w)
    return payload


def _first_character(args, s: Surface) -> ChernCharacter:
    return parse_character(args.character, s)


def cmd_goodbundle(args):
    s = _surface(args)
    if s.is_quadric:
        raise DomainError("good bundles are built on X_m")
    if args.nu is None:
        raise DomainError("goodbundle needs --nu")
    nu = parse_divisor(args.nu, s)
    g = goodbundle.construct(args.rank, nu)
    return {
        "surface": s.name,
        "r": g.r,
        "slope": nu,
        "twist": g.twist,
        "a": g.a,
        "b": g.b,
        "d": list(g.d),
        "delta_min": goodbundle.delta_min(args.rank, nu),
        "bundle": str(g),
        "rows": [{"index": i, "summand": x} for i, x in enumerate(g.summands, 1)],
    }


def _cohomology_payload(v: ChernCharacter):
    if v.r == 1:
        h = lbcoh.h_vector(v.c1)
        return {"h0": h.h0, "h1": h.h1, "h2": h.h2, "non_special": h.non_special, "case_trace": ["LineBundle"]}
    verdict = brillnoether.general_cohomology(v)
    h = verdict.h
    return {
        "h0": h.h0,
        "h1": h.h1,
        "h2": h.h2,
        "non_special": verdict.non_special,
        "case_trace": [t.value for t in verdict.case_trace],
    }


def cmd_cohomology(args):
    s = _surface(args)
    v = _first_character(args, s)
    return {"surface": s.name, "character": v, "chi": euler(v), **_cohomology_payload(v)}


def cmd_nonspecial(args):
    s = _surface(args)
    v = _first_character(args, s)
    if v.r == 1:
        return {"surface": s.name, "character": v, "non_special": lbcoh.h_vector(v.c1).non_special}
    closed = brillnoether.is_non_special(v)
    recursive = brillnoether.general_cohomology(v).non_special
    assert closed == recursive
    return {"surface": s.name, "character": v, "non_special": closed}


def _existence_payload(v: ChernCharacter, line_bundles_only: bool = False):
    verdict = existence.classify(v)
    dl = verdict.dl
    if line_bundles_only and verdict.verdict != existence.Verdict.OUTSIDE_SCOPE:
        dl = existence.dl_condition(v, line_bundles_only=True)
    out = {
        "delta": discriminant(v),
        "mu": existence.anticanonical_degree(v),
        "dl": None if dl is None else ("holds" if dl.holds else "fails"),
        "witness": None if dl is None else dl.witness,
        "verdict": verdict.verdict.value,
        "reason": verdict.reason,
    }
    if dl is not None and not dl.holds:
        out["caveat"] = CAVEAT
    return out


def cmd_existence(args):
    s = _surface(args)
    v = _first_character(args, s)
    return {"surface": s.name, "character": v, **_existence_payload(v, args.line_bundles_only)}


def cmd_atlas(args):
    s = _surface(args)
    c1 = parse_divisor(args.c1, s)
    hi, lo = sorted((parse_rational(args.ch2_from), parse_rational(args.ch2_to)), reverse=True)
    ChernCharacter(s, args.rank, c1, hi)  # validates integrality of the sweep start
    brillnoether.check_supported(s)
    rows = []
    ch2 = Fraction(hi)
    while ch2 >= lo:
        v = ChernCharacter(s, args.rank, c1, ch2)
        row = {"ch2": ch2, "c2": v.c2, "delta": discriminant(v), "chi": euler(v)}
        try:
            row.update(_cohomology_payload(v))
            row["reason"] = None
        except EmptyPrioritaryStack:
            row.update(h0=None, h1=None, h2=None, non_special=None, case_trace=[], reason="empty_prioritary_stack")
        if args.existence:
            row["existence"] = existence.classify(v).verdict.value
        rows.append(row)
        ch2 -= 1
    return {"surface": s.name, "r": args.rank, "c1": c1, "count": len(rows), "rows": rows}


COMMANDS = {
    "curves": cmd_curves,
    "weyl-orbit": cmd_weyl_orbit,
    "chi": cmd_chi,
    "goodbundle": cmd_goodbundle,
    "cohomology": cmd_cohomology,
    "nonspecial": cmd_nonspecial,
    "existence": cmd_existence,
    "atlas": cmd_atlas,
}


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise ParseError(message)


def build_parser() -> argparse.ArgumentParser:
    common = _Parser(add_help=False)
    common.add_argument("--surface", required=True, help="Xm (m = 0..8), P2 or Q")
    common.add_argument("--format", choices=("json", "csv"), default="json")
    parser = _Parser(prog="dpsheaves", description="Exact Brill-Noether and existence calculus on del Pezzo surfaces.")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    sub.add_parser("curves", parents=[common], help="list (-1)-curves")
    p = sub.add_parser("weyl-orbit", parents=[common], help="Weyl orbit of a class")
    p.add_argument("--divisor", required=True)
    p.add_argument("--pair-with", help="report the minimum pairing of this class with the orbit")
    p = sub.add_parser("chi", parents=[common], help="Euler characteristic and invariants")
    p.add_argument("--character", required=True)
    p.add_argument("--second", help="second character for chi(v, w)")
    p = sub.add_parser("goodbundle", parents=[common], help="good bundle of given rank and slope")
    p.add_argument("-r", "--rank", type=int, required=True)
    p.add_argument("--nu", help="total slope, e.g. -8/5L+2/5E1")
    for name, text in (("cohomology", "general-sheaf h-vector"), ("nonspecial", "is the general sheaf non-special")):
        p = sub.add_parser(name, parents=[common], help=text)
        p.add_argument("--character", required=True)
    p = sub.add_parser("existence", parents=[common], help="moduli nonemptiness classification")
    p.add_argument("--character", required=True)
    p.add_argument("--line-bundles-only", action="store_true", help="test DL against line bundles only")
    p = sub.add_parser("atlas", parents=[common], help="sweep ch2 at fixed rank and c1")
    p.add_argument("-r", "--rank", type=int, required=True)
    p.add_argument("--c1", required=True)
    p.add_argument("--ch2-from", required=True)
    p.add_argument("--ch2-to", required=True)
    p.add_argument("--existence", action="store_true", help="add the existence verdict per row")
    return parser


def _error(kind: str, exc: Exception, stream) -> None:
    stream.write(json.dumps({"schema": SCHEMA, "error": kind, "message": str(exc)}) + "\n")


def run(argv=None, stdout=None, stderr=None) -> int:
    stdout = stdout or sys.stdout
    stderr = stderr or sys.stderr
    try:
        args = build_parser().parse_args(argv)
        payload = COMMANDS[args.command](args)
        stdout.write(render(payload, args.format))
        return 0
    except ParseError as exc:
        _error("parse", exc, stderr)
        return 2
    except DomainError as exc:
        _error("domain", exc, stderr)
        return 3


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
