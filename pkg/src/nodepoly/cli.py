"""Command-line front end.  Each subcommand adapts one library call.

Exit status: 0 on success, 1 on a domain error, 2 on a usage error.
"""

from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction
from pathlib import Path
from typing import Sequence

from . import bell, enriques, families, kazarian, kp_core, partition_lattice
from .exactalg import SparsePolynomial, format_rational


class DomainError(Exception):
    pass


def _jsonable(value):
    if isinstance(value, SparsePolynomial):
        return {"text": value.to_text(), "terms": value.to_records()}
    if isinstance(value, Fraction):
        return format_rational(value)
    if isinstance(value, families.LinearForm):
        return {"text": value.to_polynomial().to_text(),
                "coefficients": {n: format_rational(c) for n, c in zip("dksx", value.coefficients())}}
    return value


def _human(value) -> str:
    if isinstance(value, SparsePolynomial):
        return value.pretty()
    if isinstance(value, Fraction):
        return format_rational(value)
    return str(value)


class Output:
    def __init__(self, fmt: str, out, err):
        self.fmt, self.out, self.err = fmt, out, err

    def emit(self, text_lines: Sequence[str], payload: dict):
        if self.fmt == "json":
            self.out.write(json.dumps(payload, sort_keys=True) + "\n")
        else:
            for line in text_lines:
                self.out.write(line + "\n")

    def warn(self, message: str):
        self.err.write(f"warning: {message}\n")


# subcommand handlers ------------------------------------------------------

def cmd_bell(args, out: Output):
    if args.partial is None:
        poly = bell.complete_bell(args.r)
        label = f"P_{args.r}"
    else:
        poly = bell.partial_bell(args.r, args.partial)
        label = f"B_{args.r},{args.partial}"
    out.emit([poly.to_text()], {"name": label, "polynomial": _jsonable(poly)})


def cmd_bclass(args, out: Output):
    bset = kp_core.b_classes(args.delta)
    out.emit([f"b{i} = {b.to_text()}" for i, b in enumerate(bset, start=1)],
             {"delta": args.delta, "classes": [_jsonable(b) for b in bset]})


def cmd_xclass(args, out: Output):
    poly = kp_core.x_class(args.i, oracle=args.oracle)
    source = "chern-root product" if args.oracle or args.i not in kp_core.X_CLASS_TABLE else "table"
    out.emit([poly.to_text()], {"i": args.i, "source": source, "polynomial": _jsonable(poly)})


def _surface(text: str | None) -> families.SurfaceInvariants | None:
    if text is None:
        return None
    path = Path(text)
    if path.suffix == ".json" and path.exists():
        text = path.read_text()
    try:
        return families.SurfaceInvariants.parse(text)
    except (json.JSONDecodeError, KeyError) as exc:
        raise DomainError(f"cannot read surface {text!r}: {exc}") from None


def cmd_nodepoly(args, out: Output):
    surface = _surface(args.surface)
    if args.delta == 8:
        out.warn(families.DELTA8_CAVEAT)
    if args.check_validity:
        if surface is not None and surface.label.startswith("P2 degree"):
            m = int(surface.label.split()[-1])
            report = families.validity_check("plane", args.delta, d=m)
        elif args.m is not None:
            report = families.validity_check("generic", args.delta, m=args.m)
        else:
            report = None
            out.warn("validity check needs a P2 preset surface or --m")
        if report is not None:
            for line in report.lines():
                if "caveat" not in line:
                    out.warn(line)
    poly = families.node_polynomial(args.delta)
    if surface is None:
        out.emit([poly.pretty()], {"delta": args.delta, "polynomial": _jsonable(poly.body)})
        return
    value = poly.evaluate(surface)
    out.emit([format_rational(value)],
             {"delta": args.delta, "surface": dict(zip("dksx", surface.values())), "count": _jsonable(value)})


def cmd_p4(args, out: Output):
    if args.times_q1 is not None:
        q1 = families.GRASSMANNIAN_RING.gen("q1")
        res = families.p4_pairing(args.delta, args.m, q1 ** args.times_q1)
        value = res.to_rational() if args.m is not None else res
        out.emit([_human(value)], {"delta": args.delta, "m": args.m, "times_q1": args.times_q1,
                                   "degree": _jsonable(value)})
        return
    res = families.p4_node_class(args.delta, args.m)
    if res.degree is None:
        out.emit([res.node_class.pretty()], {"delta": args.delta, "m": args.m,
                                              "class": _jsonable(res.node_class)})
        return
    value = res.degree.to_rational() if args.m is not None else res.degree
    out.emit([_human(value)], {"delta": args.delta, "m": args.m, "degree": _jsonable(value)})


def cmd_quintic(args, out: Output):
    total = families.p4_node_class(6, 5).degree_value()
    line_part = families.planes_through_line_count()
    value = families.quintic_irreducible_count()
    out.emit([format_rational(value)], {
        "six_nodal_quintics": format_rational(total), "conics": families.QUINTIC_CONICS,
        "lines": families.QUINTIC_LINES, "per_line": format_rational(line_part),
        "irreducible": format_rational(value)})


def _diagram(args) -> enriques.EnriquesDiagram:
    if args.file:
        return enriques.EnriquesDiagram.from_json(Path(args.file).read_text())
    if args.name:
        try:
            return enriques.builtin(args.name)
        except KeyError as exc:
            raise DomainError(exc.args[0]) from None
    raise DomainError("give --file or --name")


def cmd_enriques(args, out: Output):
    if args.action == "enumerate":
        found = enriques.enumerate_classes(args.max_expcod, args.max_roots)
        rows = []
        for d in found:
            inv = enriques.invariants(d)
            rows.append({"name": d.name, "expcod": inv.expcod, "mu": inv.mu, "delta": inv.delta,
                         "diagram": d.to_mapping()})
        out.emit([f"{r['name'] or '-'}\texpcod={r['expcod']}\tmu={r['mu']}\tdelta={r['delta']}"
                  for r in rows], {"classes": rows})
        return
    diagram = _diagram(args)
    problems = enriques.validate(diagram)
    if args.action == "validate":
        out.emit(["ok"] if not problems else problems, {"valid": not problems, "violations": problems})
        if problems:
            raise DomainError("diagram is invalid")
        return
    if problems:
        raise DomainError("; ".join(problems))
    inv = enriques.invariants(diagram)
    fields = vars(inv)
    out.emit([f"{k}={v}" for k, v in fields.items()], dict(fields))


def cmd_seqcount(args, out: Output):
    value = enriques.sequence_count(args.types)
    out.emit([str(value)], {"types": args.types, "count": value})


def cmd_partition(args, out: Output):
    if args.moebius:
        ok = partition_lattice.verify_moebius_recursion(args.r)
        top = partition_lattice.m_coefficient(partition_lattice.SetPartition.coarsest(args.r))
        out.emit([f"interval sums vanish: {ok}", f"m(top) = {format_rational(top)}"],
                 {"r": args.r, "moebius_ok": ok, "m_top": format_rational(top)})
        if not ok:
            raise DomainError("Moebius recursion check failed")
        return
    if args.profiles:
        table = partition_lattice.profile_table(args.r)
        rows = sorted(table.items(), reverse=True)
        out.emit([f"{','.join(map(str, p))}: {c}" for p, c in rows],
                 {"r": args.r, "profiles": [{"profile": list(p), "count": c} for p, c in rows]})
        return
    parts = partition_lattice.all_partitions(args.r)
    out.emit([f"{p}\tm={format_rational(partition_lattice.m_coefficient(p))}" for p in parts],
             {"r": args.r, "partitions": [
                 {"blocks": [list(b) for b in p.blocks],
                  "m": format_rational(partition_lattice.m_coefficient(p))} for p in parts]})


def cmd_kazarian(args, out: Output):
    if args.sing is None:
        raise DomainError("--sing is required")
    spec = kazarian.parse_spec(args.sing)
    if args.action == "a-form":
        form = kazarian.a_linear_form(spec)
        out.emit([form.pretty()], {"sing": spec.key, "a_form": _jsonable(form)})
        return
    if args.action == "count":
        result = kazarian.multisingularity_count(spec, _surface(args.surface))
    else:
        if args.n is None:
            raise DomainError("contact needs --n")
        result = kazarian.contact_count(args.n, spec, args.d)
    for c in result.caveats:
        out.warn(c)
    out.emit([_human(result.value)], {"sing": spec.key, "value": _jsonable(result.value),
                                      "caveats": result.caveats})


# parser -------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=("text", "json"), default=argparse.SUPPRESS,
                        help="output format (default: text)")
    parser = argparse.ArgumentParser(prog="nodepoly", parents=[common],
                                     description="Exact node polynomials and related enumerative formulas.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("bell", parents=[common], help="complete or partial Bell polynomial")
    p.add_argument("--r", type=int, required=True)
    p.add_argument("--partial", type=int, metavar="K")
    p.set_defaults(handler=cmd_bell)

    p = sub.add_parser("bclass", parents=[common], help="universal b-classes b1..b_delta")
    p.add_argument("--delta", type=int, required=True)
    p.set_defaults(handler=cmd_bclass)

    p = sub.add_parser("xclass", parents=[common], help="class of the i-fold point locus")
    p.add_argument("--i", type=int, required=True)
    p.add_argument("--oracle", action="store_true", help="recompute from Chern roots")
    p.set_defaults(handler=cmd_xclass)

    p = sub.add_parser("nodepoly", parents=[common], help="node polynomial or count on a surface")
    p.add_argument("--delta", type=int, required=True)
    p.add_argument("--surface", help='"P2:m", JSON text, or a .json file')
    p.add_argument("--check-validity", action="store_true")
    p.add_argument("--m", type=int, help="ampleness level for the generic validity check")
    p.set_defaults(handler=cmd_nodepoly)

    p = sub.add_parser("p4", parents=[common], help="nodal plane sections of a threefold in P^4")
    p.add_argument("--m", type=int, help="degree of the threefold (symbolic if omitted)")
    p.add_argument("--delta", type=int, required=True)
    p.add_argument("--times-q1", type=int, metavar="K", help="pair the class with q1^K")
    p.set_defaults(handler=cmd_p4)

    p = sub.add_parser("quintic-irreducible", parents=[common],
                       help="irreducible 6-nodal plane quintics on a quintic threefold")
    p.set_defaults(handler=cmd_quintic)

    p = sub.add_parser("enriques", parents=[common], help="Enriques diagrams")
    p.add_argument("action", choices=("validate", "invariants", "enumerate"))
    p.add_argument("--file")
    p.add_argument("--name")
    p.add_argument("--max-expcod", type=int, default=4)
    p.add_argument("--max-roots", type=int, default=1)
    p.set_defaults(handler=cmd_enriques)

    p = sub.add_parser("seqcount", parents=[common], help="count singularity sequences")
    p.add_argument("--types", required=True, help='e.g. "D4+2A1"')
    p.set_defaults(handler=cmd_seqcount)

    p = sub.add_parser("partition", parents=[common], help="set partitions and Moebius coefficients")
    p.add_argument("--r", type=int, required=True)
    mode = p.add_mutually_exclusive_group()
    mode.add_argument("--moebius", action="store_true")
    mode.add_argument("--profiles", action="store_true")
    p.set_defaults(handler=cmd_partition)

    p = sub.add_parser("kazarian", parents=[common], help="multisingularity forms and counts")
    p.add_argument("action", choices=("a-form", "count", "contact"))
    p.add_argument("--sing")
    p.add_argument("--surface")
    p.add_argument("--n", type=int)
    p.add_argument("--d", type=int)
    p.set_defaults(handler=cmd_kazarian)
    return parser


def run(argv: Sequence[str] | None = None, stdout=None, stderr=None) -> int:
    stdout = stdout or sys.stdout
    stderr = stderr or sys.stderr
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    out = Output(getattr(args, "format", "text"), stdout, stderr)
    try:
        args.handler(args, out)
    except (DomainError, ValueError, ArithmeticError, KeyError, IndexError, OSError) as exc:
        msg = exc.args[0] if exc.args else str(exc)
        stderr.write(f"error: {msg}\n")
        return 1
    return 0


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
