"""Command-line front end: one manifest in, one deterministic report out.

Every command prints a single report, JSON by default (stable key order,
stable list order) or indented plain text with --format text. Exit codes:
0 when the command answered and every requested check passed, 1 when a
check failed or an operation error occurred, 2 on usage, parse or
reference errors.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from importlib import resources
from typing import Sequence

from .calculus import (
    AxiomStep,
    PRESET_NAMES,
    Proof,
    RuleStep,
    SchemaStep,
    closure,
)
from .errors import ManifestError, VtyError
from .formulas import Formula, format_formula, parse_formula
from .machines import (
    WorldBounds,
    fixed_output_brute,
    fixed_output_recognize,
    format_machine,
    parse_machine,
)
from .manifest import Bounds, Manifest, load_manifest, parse_manifest
from .projection import classify_relation, minimal_axiom_subsets, project, registry_report
from .varieties import (
    check_bijective_variety,
    check_prevariety,
    check_variety,
    consistency_report,
)

SEED_MANIFEST_LABEL = "seed_registry.vty"


def _seed_manifest() -> Manifest:
    text = resources.files("vty").joinpath("data/seed_registry.vty").read_text("utf-8")
    return parse_manifest(text, source=SEED_MANIFEST_LABEL)


def _parse_bounds_override(text: str) -> dict[str, int]:
    values: dict[str, int] = {}
    for part in text.split(","):
        part = part.strip()
        if not part:
            continue
        key, sep, raw = part.partition("=")
        if not sep or key not in ("depth", "atoms", "enum", "size") or not raw.isdigit():
            raise argparse.ArgumentTypeError(
                f"bad bounds entry {part!r}; expected depth=N,atoms=N,enum=N,size=N"
            )
        values[key] = int(raw)
    return values


def _formula_arg(text: str) -> Formula:
    try:
        return parse_formula(text)
    except VtyError as exc:
        raise argparse.ArgumentTypeError(str(exc))


def _schedule_arg(text: str) -> tuple[int, ...]:
    try:
        return tuple(int(part) for part in text.split(",") if part.strip())
    except ValueError:
        raise argparse.ArgumentTypeError(f"bad fuel schedule {text!r}")


def _inputs_arg(text: str) -> tuple[int, ...]:
    try:
        return tuple(int(part) for part in text.split(",") if part.strip())
    except ValueError:
        raise argparse.ArgumentTypeError(f"bad input list {text!r}")


def _global_options() -> argparse.ArgumentParser:
    # attached to the root parser and every subcommand, so the flags are
    # accepted on either side of the command word; SUPPRESS keeps a
    # subcommand's unset flag from clobbering a value given before it
    parent = argparse.ArgumentParser(add_help=False)
    parent.add_argument(
        "--format", choices=("json", "text"), default=argparse.SUPPRESS,
        help="report format (env VTY_FORMAT sets the default, else json)",
    )
    parent.add_argument(
        "--bounds", type=_parse_bounds_override, default=argparse.SUPPRESS,
        help="override manifest bounds, e.g. depth=4,atoms=12,enum=100000,size=20000",
    )
    return parent


def build_parser() -> argparse.ArgumentParser:
    shared = _global_options()
    parser = argparse.ArgumentParser(
        prog="vty",
        description="check logical varieties, project theorems, run desk-scale models",
        parents=[shared],
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def add(name: str, help_text: str, manifest_arg: bool = True):
        cmd = sub.add_parser(name, help=help_text, parents=[shared])
        if manifest_arg:
            cmd.add_argument("manifest", nargs="?", default=None,
                             help="manifest file (default: the packaged seed registry)")
        return cmd

    cmd = add("check-prevariety", "verify the union equations and report consistency")
    cmd.add_argument("--prevariety", default=None, help="prevariety id (default: first)")

    cmd = add("check-variety", "verify the width-k witness condition")
    cmd.add_argument("--prevariety", default=None)
    cmd.add_argument("--depth", type=int, default=1, metavar="K",
                     help="maximum index tuple width (default 1)")
    cmd.add_argument("--bijective", action="store_true",
                     help="require injective maps as well")
    cmd.add_argument("--mode", choices=("prevariety", "variety"), default="variety",
                     help="bijective mode: prevariety skips the closure equations")

    cmd = add("closure", "bounded theorem set of one calculus")
    cmd.add_argument("--calculus", default=None, help="calculus id")
    cmd.add_argument("--depth", type=int, default=None)
    cmd.add_argument("--with-proofs", action="store_true")

    cmd = add("consistency", "per-component and pooled satisfiability")
    cmd.add_argument("--prevariety", default=None)

    cmd = add("project", "partition registry classes under a theorem's dependencies")
    cmd.add_argument("--theorem", required=True, help="theorem record id")

    cmd = add("classify", "consistent/sufficient/irreducible flags for an axiom set")
    cmd.add_argument("--axioms", type=_formula_arg, nargs="+", required=True)
    cmd.add_argument("--goal", type=_formula_arg, required=True)
    cmd.add_argument("--base", choices=PRESET_NAMES, default="hilbert")
    cmd.add_argument("--depth", type=int, default=None)

    cmd = add("minimal-subsets", "all minimal sufficient axiom subsets")
    cmd.add_argument("--axioms", type=_formula_arg, nargs="+", required=True)
    cmd.add_argument("--goal", type=_formula_arg, required=True)
    cmd.add_argument("--base", choices=PRESET_NAMES, default="hilbert")
    cmd.add_argument("--depth", type=int, default=None)

    fixed = add("fixed-output", "search machine worlds for a target output",
                manifest_arg=False)
    mode = fixed.add_subparsers(dest="mode", required=True)
    brute = mode.add_parser("brute", help="exhaust a bounded world", parents=[shared])
    brute.add_argument("--y", type=int, required=True, help="target output")
    brute.add_argument("--max-instructions", type=int, default=3)
    brute.add_argument("--max-registers", type=int, default=1)
    brute.add_argument("--inputs", type=_inputs_arg, default=(0,))
    brute.add_argument("--fuel", type=int, default=50)
    recognize = mode.add_parser("recognize", help="dovetail one machine",
                                parents=[shared])
    recognize.add_argument("--machine", required=True, help="machine text file")
    recognize.add_argument("--y", type=int, required=True)
    recognize.add_argument("--schedule", type=_schedule_arg, required=True,
                           help="strictly increasing fuel list, e.g. 8,16,32")
    recognize.add_argument("--max-input", type=int, default=None)

    add("report-matrix", "class-by-theorem corollary matrix")
    return parser


# --- command bodies ----------------------------------------------------------


def _substitution_dict(substitution) -> dict[str, str]:
    return {var: format_formula(value) for var, value in substitution}


def _proof_dict(proof: Proof) -> dict:
    steps = []
    for step in proof.steps:
        j = step.justification
        if isinstance(j, AxiomStep):
            kind: dict = {"kind": "axiom"}
        elif isinstance(j, SchemaStep):
            kind = {"kind": "schema", "schema": j.schema_id,
                    "substitution": _substitution_dict(j.substitution)}
        else:
            assert isinstance(j, RuleStep)
            kind = {"kind": "rule", "rule": j.rule_name,
                    "premises": list(j.premises),
                    "substitution": _substitution_dict(j.substitution)}
        steps.append({"formula": format_formula(step.formula), **kind})
    return {"steps": steps, "rule_applications": proof.rule_applications()}


def _cmd_check_prevariety(args, manifest: Manifest, bounds: Bounds):
    pv = manifest.prevariety(args.prevariety)
    structure = check_prevariety(pv, size_cap=bounds.size)
    consistency = consistency_report(pv, atom_cap=bounds.atoms, size_cap=bounds.size)
    result = {"structure": structure.to_dict(), "consistency": consistency.to_dict()}
    return result, 0 if structure.passed else 1


def _cmd_check_variety(args, manifest: Manifest, bounds: Bounds):
    pv = manifest.prevariety(args.prevariety)
    witnesses = manifest.prevariety_witnesses(
        args.prevariety or manifest.default_prevariety_id()
    )
    if args.bijective:
        report = check_bijective_variety(pv, args.mode, args.depth, witnesses,
                                         size_cap=bounds.size)
    else:
        report = check_variety(pv, args.depth, witnesses, size_cap=bounds.size)
    return report.to_dict(), 0 if report.passed else 1


def _cmd_closure(args, manifest: Manifest, bounds: Bounds):
    if args.calculus is None:
        if len(manifest.calculi) != 1:
            raise ManifestError(
                "pick a calculus with --calculus; the manifest declares "
                f"{len(manifest.calculi)}", manifest.source, 0)
        calculus_id = manifest.calculi[0].calculus_id
    else:
        calculus_id = args.calculus
    calc = manifest.calculus(calculus_id)
    depth = args.depth if args.depth is not None else calc.closure_depth
    result = closure(calc, depth, size_cap=bounds.size)
    formulas = sorted(format_formula(f) for f in result.formulas())
    out = {
        "calculus": calculus_id,
        "depth": result.depth,
        "domain_size": result.domain_size,
        "count": len(formulas),
        "formulas": formulas,
    }
    if args.with_proofs:
        out["proofs"] = {
            format_formula(entry.formula): _proof_dict(entry.proof)
            for entry in result.entries
        }
        out["costs"] = {
            format_formula(entry.formula): entry.cost for entry in result.entries
        }
    return out, 0


def _cmd_consistency(args, manifest: Manifest, bounds: Bounds):
    pv = manifest.prevariety(args.prevariety)
    report = consistency_report(pv, atom_cap=bounds.atoms, size_cap=bounds.size)
    return report.to_dict(), 0


def _cmd_project(args, manifest: Manifest, bounds: Bounds):
    profiles, theorems, declarations = manifest.registry()
    by_id = {t.theorem_id: t for t in theorems}
    if args.theorem not in by_id:
        raise ManifestError(f"unknown theorem record {args.theorem!r}",
                            manifest.source, 0)
    report = project(by_id[args.theorem], profiles, declarations)
    return report.to_dict(), 0


def _cmd_classify(args, manifest: Manifest, bounds: Bounds):
    depth = args.depth if args.depth is not None else bounds.depth
    report = classify_relation(
        args.axioms, args.goal, args.base, depth,
        atom_cap=bounds.atoms, size_cap=bounds.size,
    )
    out = report.to_dict()
    if report.proof is not None:
        out["proof"] = _proof_dict(report.proof)
    return out, 0


def _cmd_minimal_subsets(args, manifest: Manifest, bounds: Bounds):
    depth = args.depth if args.depth is not None else bounds.depth
    subsets = minimal_axiom_subsets(args.axioms, args.goal, args.base, depth,
                                    size_cap=bounds.size)
    return {
        "depth": depth,
        "base": args.base,
        "subsets": [sorted(format_formula(f) for f in s) for s in subsets],
    }, 0


def _cmd_fixed_output(args, manifest: Manifest, bounds: Bounds):
    if args.mode == "brute":
        world = WorldBounds(args.max_instructions, args.max_registers,
                            tuple(args.inputs), args.fuel)
        result = fixed_output_brute(world, args.y, enumeration_cap=bounds.enum)
        return {
            "mode": "brute",
            "target": result.target,
            "world": {
                "max_instructions": world.max_instructions,
                "max_registers": world.max_registers,
                "inputs": list(world.inputs),
                "fuel": world.fuel,
            },
            "runs": result.runs,
            "hits": [
                {
                    "machine": format_machine(hit.machine).splitlines(),
                    "input": hit.input_value,
                    "steps": hit.steps,
                }
                for hit in result.hits
            ],
        }, 0
    with open(args.machine, "r", encoding="utf-8") as handle:
        machine = parse_machine(handle.read())
    recognition = fixed_output_recognize(machine, args.y, args.schedule,
                                         max_input=args.max_input)
    return {
        "mode": "recognize",
        "target": recognition.target,
        "verdict": recognition.verdict,
        "input": recognition.input_value,
        "fuel": recognition.fuel,
        "stages": recognition.stages,
        "probes": recognition.probes,
    }, 0


def _cmd_report_matrix(args, manifest: Manifest, bounds: Bounds):
    profiles, theorems, declarations = manifest.registry()
    report = registry_report(profiles, theorems, declarations)
    return report.to_dict(), 0


_COMMANDS = {
    "check-prevariety": _cmd_check_prevariety,
    "check-variety": _cmd_check_variety,
    "closure": _cmd_closure,
    "consistency": _cmd_consistency,
    "project": _cmd_project,
    "classify": _cmd_classify,
    "minimal-subsets": _cmd_minimal_subsets,
    "fixed-output": _cmd_fixed_output,
    "report-matrix": _cmd_report_matrix,
}


# --- report emission ---------------------------------------------------------


def _render_text(value, indent: int = 0) -> list[str]:
    pad = "  " * indent
    if isinstance(value, dict):
        lines = []
        for key in sorted(value):
            inner = value[key]
            if isinstance(inner, (dict, list)) and inner:
                lines.append(f"{pad}{key}:")
                lines.extend(_render_text(inner, indent + 1))
            else:
                lines.append(f"{pad}{key}: {_scalar(inner)}")
        return lines
    if isinstance(value, list):
        lines = []
        for inner in value:
            if isinstance(inner, (dict, list)) and inner:
                lines.append(f"{pad}-")
                lines.extend(_render_text(inner, indent + 1))
            else:
                lines.append(f"{pad}- {_scalar(inner)}")
        return lines
    return [f"{pad}{_scalar(value)}"]


def _scalar(value) -> str:
    if value is None:
        return "none"
    if isinstance(value, bool):
        return "yes" if value else "no"
    if isinstance(value, (list, dict)):
        return "(empty)"
    return str(value)


def _emit(report: dict, fmt: str) -> None:
    if fmt == "json":
        print(json.dumps(report, indent=2, sort_keys=True))
    else:
        print("\n".join(_render_text(report)))


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    fmt = getattr(args, "format", None) or os.environ.get("VTY_FORMAT", "json")
    overrides = dict(getattr(args, "bounds", None) or {})
    manifest_path = getattr(args, "manifest", None)
    report: dict = {
        "command": args.command,
        "manifest": manifest_path or SEED_MANIFEST_LABEL,
        "errors": [],
    }
    try:
        manifest = load_manifest(manifest_path) if manifest_path else _seed_manifest()
    except (OSError, ManifestError) as exc:
        report["errors"] = [str(exc)]
        _emit(report, fmt)
        return 2
    bounds = Bounds(**{**manifest.bounds.to_dict(), **overrides})
    report["bounds"] = bounds.to_dict()
    try:
        result, code = _COMMANDS[args.command](args, manifest, bounds)
    except ManifestError as exc:
        report["errors"] = [str(exc)]
        _emit(report, fmt)
        return 2
    except (OSError, VtyError, ValueError) as exc:
        # ValueError covers argument values the parser cannot see through,
        # like a non-increasing fuel schedule or an empty world
        report["errors"] = [str(exc)]
        _emit(report, fmt)
        return 1
    report["result"] = result
    if args.command == "report-matrix" and fmt == "text":
        profiles, theorems, declarations = manifest.registry()
        print(registry_report(profiles, theorems, declarations).to_text())
        return code
    _emit(report, fmt)
    return code


def entry_point() -> None:
    sys.exit(main())


if __name__ == "__main__":
    entry_point()
