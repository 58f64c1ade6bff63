"""Command-line front end.

Every command prints one JSON document on stdout (or an indented text
rendering with ``--pretty``).  Exit codes: 0 success, 1 usage or input
error, 2 validation failure, 3 unreachable database URL.
"""

from __future__ import annotations

import argparse
import json
import re
import sys
from fractions import Fraction
from pathlib import Path
from typing import Sequence

from . import __version__, toric
from .database import DatabaseError, FetchError, load_database, match_period
from .degeneration import degenerate
from .lattice import Cone, secondary_fan_chambers
from .mutation import MutationData, NotLaurent, mutate
from .polynomial import (LaurentPolynomial, ParseError, classical_period, default_variables,
                         format_polynomial, loads_records, parse, parse_with_variables)
from .scaffold import (BasisPartition, ConvexPartition, InversionReport, NotLaurentError,
                       Scaffolding, convex_partition_clauses, default_s_choices,
                       default_variables as mirror_columns, enumerate_scaffoldings,
                       forward_mirror, invert)


class UsageError(Exception):
    pass


class ValidationFailure(Exception):
    def __init__(self, message: str, payload: dict | None = None):
        super().__init__(message)
        self.payload = payload


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(1, f"{self.prog}: error: {message}\n")


# ---------------------------------------------------------------------------
# input helpers

_RECORD_LINE = re.compile(r"^\s*-?\d+(\s+-?\d+)*\s*$")


def read_text(arg: str) -> str:
    if arg == "-":
        return sys.stdin.read()
    path = Path(arg)
    if path.is_file():
        return path.read_text(encoding="utf-8")
    return arg


def read_polynomial(arg: str) -> tuple[LaurentPolynomial, list[str]]:
    """A polynomial given as text, as a file of text, or as a file of term records."""
    text = read_text(arg)
    lines = [l for l in text.splitlines() if l.strip() and not l.lstrip().startswith("#")]
    if lines and all(_RECORD_LINE.match(l) for l in lines) and len(lines[0].split()) > 1:
        f = loads_records(text)
        return f, default_variables(f.dim)
    f, names = parse_with_variables(text.strip())
    return f, names


def read_json(arg: str) -> dict:
    try:
        return json.loads(read_text(arg))
    except json.JSONDecodeError as exc:
        raise UsageError(f"invalid JSON: {exc}") from None


def parse_partition(spec: str, names: Sequence[str]) -> BasisPartition:
    """``"0,1|2"`` or ``"x,y|z"``: parts separated by '|', the rest is free."""
    index = {n: i for i, n in enumerate(names)}
    parts = []
    for chunk in spec.split("|"):
        chunk = chunk.strip()
        if not chunk:
            continue
        part = []
        for item in chunk.split(","):
            item = item.strip()
            if item in index:
                part.append(index[item])
            elif re.fullmatch(r"\d+", item) and int(item) < len(names):
                part.append(int(item))
            else:
                raise UsageError(f"unknown variable {item!r} in partition")
        parts.append(part)
    try:
        return BasisPartition.from_parts(parts, len(names))
    except ValueError as exc:
        raise UsageError(str(exc)) from None


def parse_int_list(spec: str) -> list[int]:
    try:
        return [int(x) for x in spec.split(",") if x.strip()]
    except ValueError:
        raise UsageError(f"expected a comma-separated list of integers, got {spec!r}") from None


def parse_chamber(spec: str) -> int | tuple[Fraction, ...]:
    """An index into the sorted chamber list, or a stability vector like ``5,2``."""
    if re.fullmatch(r"\d+", spec.strip()):
        return int(spec)
    try:
        return tuple(Fraction(x.strip()) for x in spec.split(","))
    except ValueError:
        raise UsageError(f"cannot read chamber {spec!r}") from None


def frac_list(v) -> list[str]:
    return [toric._frac_text(Fraction(x)) for x in v]


# ---------------------------------------------------------------------------
# scaffold selection


def select_scaffolding(args, f: LaurentPolynomial, names: list[str]) -> Scaffolding:
    if args.scaffolding:
        try:
            return Scaffolding.from_json(read_json(args.scaffolding))
        except (KeyError, TypeError, ValueError) as exc:
            raise UsageError(f"bad scaffolding file: {exc}") from None
    if args.partition is None:
        raise UsageError("give --partition or --scaffolding")
    found = enumerate_scaffoldings(f, parse_partition(args.partition, names), args.allow_shift)
    if not found:
        raise ValidationFailure("no scaffolding of f for this partition")
    if not 0 <= args.index < len(found):
        raise UsageError(f"--index {args.index} out of range ({len(found)} scaffoldings)")
    return found[args.index]


def select_chambers(report: InversionReport, chamber) -> list[int]:
    if chamber is None:
        return list(range(len(report.chambers)))
    if isinstance(chamber, int):
        if not 0 <= chamber < len(report.chambers):
            raise UsageError(f"--chamber {chamber} out of range ({len(report.chambers)} chambers)")
        return [chamber]
    if len(chamber) != len(report.characters[0]):
        raise UsageError("stability vector has the wrong length")
    for i, c in enumerate(report.chambers):
        if c.contains(chamber):
            return [i]
    raise ValidationFailure("stability condition lies on a wall or outside the cone of characters")


def preferred_chamber(report: InversionReport) -> int:
    """First chamber in which every convex-partition condition holds, else 0."""
    for i, c in enumerate(report.chambers):
        if all(c.clauses.values()):
            return i
    return 0


def _invert(args):
    f, names = read_polynomial(args.input)
    sc = select_scaffolding(args, f, names)
    s_pos = parse_int_list(args.s_choices) if args.s_choices else None
    try:
        report = invert(f, sc, s_pos)
    except ValueError as exc:
        raise ValidationFailure(str(exc)) from None
    return f, names, sc, report


# ---------------------------------------------------------------------------
# commands


def cmd_period(args) -> dict:
    f, names = read_polynomial(args.input)
    if args.dmax < 0:
        raise UsageError("--dmax must be non-negative")
    return {"polynomial": format_polynomial(f, names), "dmax": args.dmax,
            "period": classical_period(f, args.dmax, prune=not args.naive)}


def cmd_newton(args) -> dict:
    f, names = read_polynomial(args.input)
    if f.is_zero():
        raise UsageError("the zero polynomial has no Newton polytope")
    P = f.newton_polytope()
    return {"variables": names, "dim": P.dim, "vertices": [list(v) for v in P.vertices],
            "inequalities": [list(a) for a in P.inequalities],
            "equations": [list(e) for e in P.equations],
            "lattice_points": len(P.lattice_points()),
            "origin_interior": P.interior_contains((0,) * f.dim)}


def cmd_scaffold(args) -> dict:
    f, names = read_polynomial(args.input)
    part = parse_partition(args.partition, names)
    found = enumerate_scaffoldings(f, part, args.allow_shift)
    return {"variables": names, "partition": part.to_json(), "count": len(found),
            "scaffoldings": [sc.to_json() for sc in found]}


def cmd_invert(args) -> dict:
    _, names, sc, report = _invert(args)
    out = report.to_json()
    out["variables"] = names
    out["scaffolding"] = sc.to_json()
    if not report.ok:
        raise ValidationFailure(report.reason, out)
    keep = select_chambers(report, parse_chamber(args.chamber) if args.chamber else None)
    out["chambers"] = [dict(report.chambers[i].to_json(), index=i) for i in keep]
    return out


def cmd_degenerate(args) -> dict:
    f, names, sc, report = _invert(args)
    if not report.ok:
        raise ValidationFailure(report.reason)
    if args.chamber:
        (idx,) = select_chambers(report, parse_chamber(args.chamber))
    else:
        idx = preferred_chamber(report)
    ch = report.chambers[idx]
    d = degenerate(report.weight_matrix, ch.fan, f.newton_polytope())
    out = d.to_json()
    out.update({"variables": names, "chamber": idx, "omega": frac_list(ch.omega)})
    return out


def cmd_forward(args) -> dict:
    data = read_json(args.input)
    try:
        g = toric.GITData.from_json(data)
        cp = ConvexPartition.from_json(data)
    except (KeyError, TypeError, ValueError) as exc:
        raise UsageError(f"bad input: {exc}") from None
    try:
        g.check()
    except ValueError as exc:
        raise ValidationFailure(str(exc)) from None
    s = parse_int_list(args.s_choices) if args.s_choices else data.get("s")
    s = tuple(s) if s is not None else default_s_choices(cp)
    fan = None
    try:
        fan = toric.git_to_fan(g)
    except ValueError:
        pass
    clauses = convex_partition_clauses(g, cp, fan)
    try:
        f = forward_mirror(g, cp, s)
    except (NotLaurentError, ValueError) as exc:
        raise ValidationFailure(str(exc), {"clauses": clauses}) from None
    cols = list(mirror_columns(cp, s))
    return {"polynomial": format_polynomial(f), "variables": default_variables(f.dim),
            "columns": cols, "s": list(s), "clauses": clauses}


def cmd_mutate(args) -> dict:
    f, names = read_polynomial(args.input)
    if args.spec:
        spec = read_json(args.spec)
        weight, factor_text = spec.get("weight"), spec.get("factor")
    else:
        weight = parse_int_list(args.weight) if args.weight else None
        factor_text = args.factor
    if weight is None or factor_text is None:
        raise UsageError("give --weight and --factor, or --spec")
    try:
        m = MutationData(tuple(weight), parse(str(factor_text), names))
        m.check(f.dim)
    except ParseError:
        raise
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    try:
        g = mutate(f, m)
    except NotLaurent as exc:
        raise ValidationFailure(str(exc)) from None
    return {"variables": names, "polynomial": format_polynomial(g, names)}


def cmd_match(args) -> dict:
    f, names = read_polynomial(args.input)
    period = classical_period(f, args.dmax, prune=True)
    records = load_database(args.db, refresh=args.refresh)
    matches = match_period(period, records, args.min_overlap)
    return {"period": period, "database": args.db, "records": len(records),
            "matches": [m.to_json() for m in matches], "new": not matches}


# ---------------------------------------------------------------------------
# rendering and entry point


def render(obj, indent: int = 0) -> str:
    pad = "  " * indent
    if isinstance(obj, dict):
        lines = []
        for k, v in obj.items():
            if isinstance(v, (dict, list)) and v and not _flat(v):
                lines.append(f"{pad}{k}:")
                lines.append(render(v, indent + 1))
            else:
                lines.append(f"{pad}{k}: {_inline(v)}")
        return "\n".join(lines)
    if isinstance(obj, list):
        out = []
        for item in obj:
            if isinstance(item, (dict, list)) and not _flat(item):
                out.append(f"{pad}-")
                out.append(render(item, indent + 1))
            else:
                out.append(f"{pad}- {_inline(item)}")
        return "\n".join(out)
    return pad + _inline(obj)


def _flat(v) -> bool:
    if isinstance(v, dict):
        return False
    return all(not isinstance(x, (dict, list)) or (isinstance(x, list) and _flat(x)) for x in v)


def _inline(v) -> str:
    if isinstance(v, list):
        return "(" + ", ".join(_inline(x) for x in v) + ")"
    if isinstance(v, bool):
        return "yes" if v else "no"
    return str(v)


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="laurent-inversion",
                description="Laurent inversion: periods, scaffoldings, GIT data and degenerations.")
    p.add_argument("--version", action="version", version=__version__)
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def common(sp, poly=True):
        if poly:
            sp.add_argument("input", help="polynomial text, a file containing it, or '-' for stdin")
        sp.add_argument("--pretty", action="store_true", help="human-readable output")

    sp = sub.add_parser("period", help="classical period sequence")
    common(sp)
    sp.add_argument("--dmax", type=int, default=10)
    sp.add_argument("--naive", action="store_true", help="skip Newton polytope pruning")
    sp.set_defaults(func=cmd_period)

    sp = sub.add_parser("newton", help="Newton polytope")
    common(sp)
    sp.set_defaults(func=cmd_newton)

    sp = sub.add_parser("scaffold", help="enumerate scaffoldings")
    common(sp)
    sp.add_argument("--partition", required=True, help="e.g. '0,1|2' or 'x,y|z'; rest is free")
    sp.add_argument("--allow-shift", action="store_true", help="allow a constant offset")
    sp.set_defaults(func=cmd_scaffold)

    for name, func, text in (("invert", cmd_invert, "GIT data from a scaffolding"),
                             ("degenerate", cmd_degenerate, "toric degeneration fan")):
        sp = sub.add_parser(name, help=text)
        common(sp)
        sp.add_argument("--partition", help="enumerate with this partition")
        sp.add_argument("--scaffolding", help="scaffolding JSON file instead of --partition")
        sp.add_argument("--index", type=int, default=0, help="which enumerated scaffolding")
        sp.add_argument("--allow-shift", action="store_true")
        sp.add_argument("--s-choices", help="position of s_i inside each part's block, e.g. '0,1'")
        sp.add_argument("--chamber", help="chamber index or stability vector such as '5,2'")
        sp.set_defaults(func=func)

    sp = sub.add_parser("forward", help="Laurent polynomial from GIT data and a convex partition")
    common(sp)
    sp.add_argument("--s-choices", help="column index s_i for each part, e.g. '3,5'")
    sp.set_defaults(func=cmd_forward)

    sp = sub.add_parser("mutate", help="apply an algebraic mutation")
    common(sp)
    sp.add_argument("--weight", help="weight covector, e.g. '0,1'")
    sp.add_argument("--factor", help="factor polynomial in the same variables")
    sp.add_argument("--spec", help='JSON file {"weight": [...], "factor": "..."}')
    sp.set_defaults(func=cmd_mutate)

    sp = sub.add_parser("match", help="compare the period with a database")
    common(sp)
    sp.add_argument("--db", required=True, help="JSONL file or http(s) URL")
    sp.add_argument("--dmax", type=int, default=10)
    sp.add_argument("--min-overlap", type=int, default=8)
    sp.add_argument("--refresh", action="store_true", help="ignore the fetch cache")
    sp.set_defaults(func=cmd_match)
    return p


def emit(obj, pretty: bool, stream) -> None:
    stream.write((render(obj) if pretty else json.dumps(obj, sort_keys=False)) + "\n")


def main(argv: Sequence[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        out = args.func(args)
    except (UsageError, ParseError, OSError) as exc:
        if isinstance(exc, FetchError):
            print(f"error: {exc}", file=sys.stderr)
            return 3
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except (ValidationFailure, DatabaseError, toric.GITError) as exc:
        print(f"validation failed: {exc}", file=sys.stderr)
        payload = getattr(exc, "payload", None)
        if payload is not None:
            emit(payload, args.pretty, sys.stdout)
        return 2
    emit(out, args.pretty, sys.stdout)
    return 0


if __name__ == "__main__":
    sys.exit(main())
