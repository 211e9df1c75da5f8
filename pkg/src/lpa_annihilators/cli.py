"""``lpa`` command line: read a workspace file, run one command, print JSON.

Exit status: 0 on success, 2 on validation errors, 3 on capacity errors.
"""

from __future__ import annotations

import argparse
import json
import sys
from dataclasses import dataclass, field

from .closure import breaking_vertices, enumerate_hs, hereditary_closure, perp, s_saturation
from .dsl import Workspace, parse_element, parse_workspace
from .errors import CapacityError, ContractViolation, ValidationError
from .graph import cycle_has_exit, find_cycles, validation_warnings
from .ideals import (
    AdmissiblePair,
    IdealPresentation,
    annihilator,
    boolean_meet,
    graded_envelope,
    graded_join,
    graded_presentation,
    is_annihilator_ideal,
    is_baer,
    is_quasi_baer,
    is_reflexive,
    is_rickart,
    validate_pair,
    zero_pair,
)
from .symbolic import normal_form, verify_annihilation

COMMANDS = (
    "closure",
    "saturation",
    "breaking",
    "perp",
    "envelope",
    "ann",
    "reflexive",
    "is-annihilator",
    "join",
    "meet-ann",
    "quasibaer",
    "baer",
    "rickart",
    "hs-list",
    "verify",
    "normal-form",
)

EXIT_OK, EXIT_INTERNAL, EXIT_VALIDATION, EXIT_CAPACITY = 0, 1, 2, 3


@dataclass
class CommandOptions:
    ideals: list[str] = field(default_factory=list)
    cap: int = 3
    args: list[str] = field(default_factory=list)


def _assignments(args: list[str]) -> dict[str, list[str]]:
    """Parse ``KEY={a,b}`` / ``KEY=a,b`` / ``KEY=`` positional arguments."""
    out = {}
    for arg in args:
        if "=" not in arg:
            raise ValidationError("bad_argument", f"expected KEY=VALUE, got {arg!r}")
        key, value = arg.split("=", 1)
        value = value.strip().strip("{}")
        out[key.strip()] = sorted(v for v in value.replace(",", " ").split() if v)
    return out


def _vertex_arg(ws: Workspace, assigns: dict, key: str) -> frozenset[str]:
    return ws.graph.check_vertices(assigns.get(key, []))


def _presentation(ws: Workspace, opts: CommandOptions, assigns: dict) -> tuple[IdealPresentation, dict]:
    if "H" in assigns or "S" in assigns:
        pair = validate_pair(ws.graph, assigns.get("H", []), assigns.get("S", []))
        return graded_presentation(pair), {"H": sorted(pair.H), "S": sorted(pair.S)}
    if opts.ideals:
        name = opts.ideals[0]
        return ws.ideal(name), {"ideal": name}
    return graded_presentation(zero_pair(ws.graph)), {"ideal": None}


def _graded_pair(ws: Workspace, opts: CommandOptions, assigns: dict) -> tuple[AdmissiblePair, dict]:
    pres, echo = _presentation(ws, opts, assigns)
    if not pres.is_graded:
        raise ValidationError("not_graded", "this command needs a graded ideal (no cycle data)")
    return pres.pair, echo


def _two_ideals(ws: Workspace, opts: CommandOptions) -> list[IdealPresentation]:
    if len(opts.ideals) != 2:
        raise ValidationError("bad_argument", "this command needs exactly two --ideal options")
    return [ws.ideal(n) for n in opts.ideals]


def run_command(ws: Workspace, command: str, options: CommandOptions | None = None) -> dict:
    """Run one command against a parsed workspace and return a JSON-ready dict."""
    opts = options or CommandOptions()
    g = ws.graph
    out: dict = {"command": command}
    warnings = validation_warnings(g)
    if warnings:
        out["warnings"] = warnings

    if command == "normal-form":
        text = " ".join(opts.args)
        x = parse_element(g, text)
        nf = normal_form(x)
        out.update(
            input={"element": text},
            normal_form=str(nf),
            is_zero=not nf.terms,
            monomials=[
                {"coeff": str(c), "p": list(p), "q": list(q), "range": v, "degree": len(p) - len(q)}
                for c, p, q, v in nf.monomials()
            ],
        )
        return out

    assigns = _assignments(opts.args)

    if command == "closure":
        V = _vertex_arg(ws, assigns, "V")
        out.update(input={"V": sorted(V)}, result=sorted(hereditary_closure(g, V)))
    elif command == "saturation":
        H, S = _vertex_arg(ws, assigns, "H"), _vertex_arg(ws, assigns, "S")
        out.update(input={"H": sorted(H), "S": sorted(S)}, result=sorted(s_saturation(g, H, S)))
    elif command == "breaking":
        H = _vertex_arg(ws, assigns, "H")
        out.update(input={"H": sorted(H)}, result=sorted(breaking_vertices(g, H)))
    elif command == "perp":
        H = _vertex_arg(ws, assigns, "H")
        out.update(input={"H": sorted(H)}, result=sorted(perp(g, H)))
    elif command == "envelope":
        pres, echo = _presentation(ws, opts, assigns)
        out.update(input=echo, result=graded_envelope(pres).as_dict())
    elif command == "ann":
        pres, echo = _presentation(ws, opts, assigns)
        out.update(input=echo, result=annihilator(pres).as_dict())
    elif command == "reflexive":
        pair, echo = _graded_pair(ws, opts, assigns)
        out.update(input=echo, reflexive=is_reflexive(pair))
    elif command == "is-annihilator":
        pres, echo = _presentation(ws, opts, assigns)
        # annihilators are graded, so cycle data rules it out
        verdict = pres.is_graded and is_annihilator_ideal(pres.pair)
        out.update(input=echo, annihilator_ideal=verdict)
    elif command == "join":
        a, b = (graded_envelope(p) for p in _two_ideals(ws, opts))
        out.update(input={"ideals": list(opts.ideals)}, result=graded_join(a, b).as_dict())
    elif command == "meet-ann":
        a, b = (graded_envelope(p) for p in _two_ideals(ws, opts))
        out.update(input={"ideals": list(opts.ideals)}, result=boolean_meet(a, b).as_dict())
    elif command == "quasibaer":
        verdict = is_quasi_baer(g)
        out.update(
            quasi_baer=verdict.holds,
            witness_H=None if verdict.holds else sorted(verdict.witness),
            join=None if verdict.holds else verdict.join.as_dict(),
        )
    elif command == "baer":
        cycles = find_cycles(g)
        out.update(
            baer=is_baer(g),
            finite=g.is_finite(),
            cycles_with_exits=[list(c.edges) for c in cycles if cycle_has_exit(g, c)],
        )
    elif command == "rickart":
        out.update(rickart=is_rickart(g))
    elif command == "hs-list":
        out.update(hs_sets=[sorted(H) for H in enumerate_hs(g)])
    elif command == "verify":
        pres, echo = _presentation(ws, opts, assigns)
        report = verify_annihilation(g, pres, opts.cap)
        echo["cap"] = opts.cap
        out.update(input=echo, **report.as_dict())
    else:
        raise ValidationError("unknown_command", f"unknown command {command!r}")
    return out


def dumps(doc: dict) -> str:
    return json.dumps(doc, indent=2, sort_keys=True) + "\n"


class _JsonArgumentParser(argparse.ArgumentParser):
    def error(self, message: str):
        sys.stdout.write(dumps({"error": "usage", "message": message}))
        raise SystemExit(EXIT_VALIDATION)


def build_parser() -> argparse.ArgumentParser:
    parser = _JsonArgumentParser(prog="lpa", description=__doc__.splitlines()[0])
    parser.add_argument("command", choices=COMMANDS)
    parser.add_argument("args", nargs="*", help="KEY=VALUE vertex sets (H=, S=, V=) or an element for normal-form")
    parser.add_argument("--file", "-f", default="-", help="workspace file (default: stdin)")
    parser.add_argument("--ideal", action="append", default=[], help="named ideal; give twice for join/meet-ann")
    parser.add_argument("--cap", type=int, default=3, help="path length cap for verify")
    parser.add_argument("--json", action="store_true", help="accepted for compatibility; output is always JSON")
    return parser


def main(argv: list[str] | None = None) -> int:
    ns = build_parser().parse_args(argv)
    try:
        if ns.file == "-":
            text = sys.stdin.read()
        else:
            with open(ns.file, encoding="utf-8") as fh:
                text = fh.read()
        ws = parse_workspace(text)
        doc = run_command(ws, ns.command, CommandOptions(ns.ideal, ns.cap, ns.args))
    except OSError as err:
        sys.stdout.write(dumps({"error": "io", "message": str(err)}))
        return EXIT_VALIDATION
    except ValidationError as err:
        sys.stdout.write(dumps(err.to_dict()))
        return EXIT_VALIDATION
    except CapacityError as err:
        sys.stdout.write(dumps(err.to_dict()))
        return EXIT_CAPACITY
    except ContractViolation as err:
        sys.stdout.write(dumps({"error": "contract_violation", "message": str(err)}))
        return EXIT_INTERNAL
    sys.stdout.write(dumps(doc))
    return EXIT_OK


if __name__ == "__main__":
    raise SystemExit(main())
