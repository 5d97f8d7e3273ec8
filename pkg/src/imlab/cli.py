"""Command-line surface: file I/O for models/topologies/derivations and the
workbench commands.

Exit codes: 0 for success/valid/accepted, 1 for invalid/rejected/countermodel
found, 2 for usage errors.
"""

from __future__ import annotations

import argparse
import json
import sys
from typing import Optional, Sequence

from .formula import ParseError, modal_depth, parse, propositions, render
from .hilbert import (
    Logic, check_derivation, check_entailment, parse_derivation, parse_entailment,
)
from .opspace import frame_to_space, space_classify
from .relframe import BirelFrame, classify_frame, frame_properties, mask_of, worlds_of
from .search import find_countermodel, irreflexivize, largest_bisimulation
from .semantics import (
    BirelModel, describe_validity, extension, relational_extension, valid_on_frame,
)
from .sweeps import (
    BOX_OVER_MEET, LOEB, backward_gap_report, box_over_meet_countermodel, box_over_meet_sweep,
    loeb_refutation, loeb_scattered_sweep,
)
from .topo import parse_topology, topo_properties

__all__ = ["main", "dispatch", "parse_model", "format_model", "ModelParseError"]


class ModelParseError(ValueError):
    pass


def parse_model(text: str, close_valuation: bool = False) -> BirelModel:
    """Load the line-oriented model format: ``worlds n``, ``pre i j``,
    ``mod i j``, ``val p i...``; closures are applied to the generator
    edges, and valuations must be (or are made) upward closed."""
    n: Optional[int] = None
    pre_edges: list[tuple[int, int]] = []
    mod_edges: list[tuple[int, int]] = []
    vals: dict[str, list[int]] = {}

    def world(lineno: int, token: str) -> int:
        if not token.isdigit() or n is None or not int(token) < n:
            raise ModelParseError(f"line {lineno}: bad world index {token!r}")
        return int(token)

    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        words = line.split()
        if words[0] == "worlds":
            if n is not None or len(words) != 2 or not words[1].isdigit() or int(words[1]) < 1:
                raise ModelParseError(f"line {lineno}: bad worlds line")
            n = int(words[1])
        elif words[0] in ("pre", "mod"):
            if n is None:
                raise ModelParseError(f"line {lineno}: edge before 'worlds'")
            if len(words) != 3:
                raise ModelParseError(f"line {lineno}: {words[0]} needs two world indices")
            edge = (world(lineno, words[1]), world(lineno, words[2]))
            (pre_edges if words[0] == "pre" else mod_edges).append(edge)
        elif words[0] == "val":
            if n is None:
                raise ModelParseError(f"line {lineno}: valuation before 'worlds'")
            if len(words) < 2:
                raise ModelParseError(f"line {lineno}: val needs a proposition name")
            name = words[1]
            if not (name[0].islower() and name.isidentifier()):
                raise ModelParseError(f"line {lineno}: bad proposition name {name!r}")
            vals.setdefault(name, []).extend(world(lineno, w) for w in words[2:])
        else:
            raise ModelParseError(f"line {lineno}: unknown directive {words[0]!r}")
    if n is None:
        raise ModelParseError("missing worlds line")
    frame = BirelFrame.from_edges(n, pre_edges, mod_edges)
    valuation = {}
    for name, worlds in vals.items():
        mask = mask_of(worlds)
        if close_valuation:
            for w in range(n):
                if (mask >> w) & 1:
                    mask |= frame.pre.rows[w]
        valuation[name] = mask
    return BirelModel(frame, valuation)  # raises on non-closed valuations


def load_model(path: str, close_valuation: bool = False) -> BirelModel:
    with open(path, encoding="utf-8") as fh:
        return parse_model(fh.read(), close_valuation)


def format_model(m: BirelModel) -> str:
    lines = [f"worlds {m.n}"]
    for i, j in sorted(m.frame.pre.pairs):
        if i != j:
            lines.append(f"pre {i} {j}")
    for i, j in sorted(m.frame.mod.pairs):
        lines.append(f"mod {i} {j}")
    for p in sorted(m.valuation):
        lines.append(("val " + p + " " +
                      " ".join(str(w) for w in worlds_of(m.valuation[p]))).strip())
    return "\n".join(lines) + "\n"


def _world_list(mask: int) -> list[int]:
    return list(worlds_of(mask))


def _emit(report: dict, as_json: bool, lines: Sequence[str]) -> None:
    if as_json:
        print(json.dumps(report, indent=2, sort_keys=True))
    else:
        for line in lines:
            print(line)


def _witness_json(valuation, world) -> dict:
    return {
        "valuation": {p: _world_list(v) for p, v in sorted((valuation or {}).items())},
        "world": world,
    }


# ---------------------------------------------------------------------------
# Commands
# ---------------------------------------------------------------------------

def _cmd_parse(args) -> int:
    f = parse(args.formula)
    report = {
        "command": "parse",
        "verdict": "ok",
        "formula": render(f),
        "modal_depth": modal_depth(f),
        "propositions": list(propositions(f)),
    }
    _emit(report, args.json, [render(f)])
    return 0


def _cmd_eval(args) -> int:
    model = load_model(args.model, args.close_valuation)
    f = parse(args.formula)
    lines = []
    report = {"command": "eval", "verdict": "ok", "formula": render(f), "extension": {}}
    if args.semantics in ("operator", "both"):
        ext = extension(model, f)
        report["extension"]["operator"] = _world_list(ext)
        lines.append(f"operator:   {_world_list(ext)}")
    if args.semantics in ("relational", "both"):
        ext = relational_extension(model, f)
        report["extension"]["relational"] = _world_list(ext)
        lines.append(f"relational: {_world_list(ext)}")
    _emit(report, args.json, lines)
    return 0


def _cmd_valid(args) -> int:
    model = load_model(args.model, args.close_valuation)
    f = parse(args.formula)
    res = valid_on_frame(model.frame, f)
    report = {
        "command": "valid",
        "verdict": "valid" if res.valid else "invalid",
        "formula": render(f),
        "witness": None if res.valid else _witness_json(res.valuation, res.world),
        "stats": {"valuations_checked": res.valuations_checked},
    }
    _emit(report, args.json, [describe_validity(res)])
    return 0 if res.valid else 1


def _cmd_classify_frame(args) -> int:
    model = load_model(args.model, args.close_valuation)
    props = frame_properties(model.frame)
    classes = sorted(l.value for l in classify_frame(model.frame))
    report = {
        "command": "classify-frame",
        "verdict": "ok",
        "properties": {
            "forward_confluent": props.forward_confluent,
            "backward_confluent": props.backward_confluent,
            "downward_confluent": props.downward_confluent,
            "locally_linear": props.locally_linear,
            "mod_reflexive": props.mod_reflexive,
            "mod_irreflexive": props.mod_irreflexive,
        },
        "classes": classes,
    }
    lines = [f"{k}: {v}" for k, v in report["properties"].items()]
    lines.append("classes: " + " ".join(classes))
    _emit(report, args.json, lines)
    return 0


def _cmd_classify_space(args) -> int:
    model = load_model(args.model, args.close_valuation)
    c = space_classify(frame_to_space(model.frame))
    report = {
        "command": "classify-space",
        "verdict": "ok" if not c.law_violations else "law-violation",
        "law_violations": list(c.law_violations),
        "flags": {
            "diamond_coarse": c.diamond_coarse,
            "diamond_regular": c.diamond_regular,
            "box_regular": c.box_regular,
            "extremally_disconnected": c.extremally_disconnected,
            "ed_literal_equation": c.ed_literal_equation,
            "hereditarily_ed": c.hereditarily_ed,
            "cs4": c.cs4,
        },
        "classes": sorted(l.value for l in c.classes),
    }
    lines = [f"{k}: {v}" for k, v in report["flags"].items()]
    lines.append("classes: " + " ".join(report["classes"]))
    for v in c.law_violations:
        lines.append(f"law violation: {v}")
    _emit(report, args.json, lines)
    return 0


def _cmd_topo_props(args) -> int:
    with open(args.topology, encoding="utf-8") as fh:
        t = parse_topology(fh.read())
    props = topo_properties(t)
    report = {
        "command": "topo-props",
        "verdict": "ok",
        "properties": {
            "t_d": props.t_d,
            "extremally_disconnected": props.extremally_disconnected,
            "hereditarily_ed": props.hereditarily_ed,
            "scattered": props.scattered,
        },
    }
    _emit(report, args.json, [f"{k}: {v}" for k, v in report["properties"].items()])
    return 0


def _cmd_derive(args) -> int:
    logic = Logic.from_name(args.logic)
    with open(args.file, encoding="utf-8") as fh:
        derivation = parse_derivation(fh.read())
    verdict = check_derivation(derivation, logic)
    report = {
        "command": "derive",
        "verdict": "accepted" if verdict.ok else "rejected",
        "logic": logic.value,
        "steps": len(derivation.steps),
        "offending_step": verdict.step,
        "message": verdict.message,
    }
    if verdict.ok:
        lines = [f"accepted: {len(derivation.steps)} steps, concludes "
                 f"{render(derivation.conclusion)}"]
    else:
        lines = [f"rejected at step {verdict.step}: {verdict.message}"]
    _emit(report, args.json, lines)
    return 0 if verdict.ok else 1


def _cmd_entail(args) -> int:
    logic = Logic.from_name(args.logic)
    with open(args.file, encoding="utf-8") as fh:
        cert = parse_entailment(fh.read())
    verdict = check_entailment(cert, logic)
    report = {
        "command": "entail",
        "verdict": "accepted" if verdict.ok else "rejected",
        "logic": logic.value,
        "premises": [render(p) for p in cert.premises],
        "conclusion": render(cert.conclusion),
        "offending_step": verdict.step,
        "message": verdict.message,
    }
    lines = ["accepted" if verdict.ok
             else f"rejected at step {verdict.step}: {verdict.message}"]
    _emit(report, args.json, lines)
    return 0 if verdict.ok else 1


def _cmd_search(args) -> int:
    logic = Logic.from_name(args.logic)
    f = parse(args.formula)
    res = find_countermodel(f, logic, args.max_worlds)
    report = {
        "command": "search",
        "verdict": "countermodel" if res.found else "exhausted",
        "formula": render(f),
        "logic": logic.value,
        "witness": None if not res.found else _witness_json(res.model.valuation, res.world),
        "stats": {"frames_enumerated": res.frames_enumerated,
                  "valuations_checked": res.valuations_checked},
    }
    if res.found:
        lines = [f"countermodel found (refuted at world {res.world}):",
                 format_model(res.model).rstrip()]
    else:
        lines = [f"no countermodel with at most {args.max_worlds} worlds "
                 f"({res.frames_enumerated} frames, {res.valuations_checked} valuations)"]
    _emit(report, args.json, lines)
    return 1 if res.found else 0


def _cmd_irreflexivize(args) -> int:
    model = load_model(args.model, args.close_valuation)
    out = irreflexivize(model, args.copies)
    report = {
        "command": "irreflexivize",
        "verdict": "ok",
        "copies": args.copies,
        "model": format_model(out),
    }
    _emit(report, args.json, [format_model(out).rstrip()])
    return 0


def _cmd_bisim(args) -> int:
    m1 = load_model(args.model, args.close_valuation)
    m2 = load_model(args.model2, args.close_valuation)
    pairs = sorted(largest_bisimulation(m1, m2))
    report = {
        "command": "bisim",
        "verdict": "bisimilar" if pairs else "empty",
        "pairs": [list(p) for p in pairs],
    }
    lines = ([" ".join(f"({w},{v})" for w, v in pairs)] if pairs
             else ["no bisimulation (empty relation)"])
    _emit(report, args.json, lines)
    return 0 if pairs else 1


def _demo_box_over_meet(as_json: bool) -> int:
    sweep = box_over_meet_sweep(3)
    model, ext, world = box_over_meet_countermodel()
    refuted = not (ext >> world) & 1
    ok = sweep.ok and refuted
    report = {
        "command": "demo",
        "demo": "lemma-6.2",
        "verdict": "ok" if ok else "failed",
        "formula": render(BOX_OVER_MEET),
        "meet_sweep": {"spaces_checked": sweep.spaces_checked,
                       "skipped_non_td": sweep.skipped_non_td,
                       "violations": len(sweep.violations)},
        "countermodel": {"model": format_model(model),
                         "extension": _world_list(ext), "refuted_world": world},
    }
    lines = [
        f"formula: {render(BOX_OVER_MEET)}",
        f"valid on all {sweep.spaces_checked} meet-induced derivative spaces on <=3 points "
        f"({sweep.skipped_non_td} skipped: not T_d); violations: {len(sweep.violations)}",
        "countermodel under the lead topology (3 points):",
        format_model(model).rstrip(),
        f"extension {_world_list(ext)}: world {world} refutes it",
    ]
    _emit(report, as_json, lines)
    return 0 if ok else 1


def _demo_backward_gap(as_json: bool) -> int:
    model, ante, cons, found, exhausted = backward_gap_report()
    ok = ((ante >> 0) & 1 == 1 and (cons >> 0) & 1 == 0
          and found.found and not exhausted.found)
    report = {
        "command": "demo",
        "demo": "footnote-2",
        "verdict": "ok" if ok else "failed",
        "model": format_model(model),
        "satisfies": {"formula": "<>p -> []q", "worlds": _world_list(ante)},
        "refutes": {"formula": "[](p -> q)", "worlds": _world_list(cons)},
        "k4i_search": {"found": found.found,
                       "frames_enumerated": found.frames_enumerated},
        "ik4_search": {"found": exhausted.found,
                       "frames_enumerated": exhausted.frames_enumerated},
    }
    lines = [
        "model (w=0, v=1, u=2):",
        format_model(model).rstrip(),
        f"<>p -> []q holds at {_world_list(ante)} (w=0 satisfies it)",
        f"[](p -> q) holds at {_world_list(cons)} (w=0 refutes it)",
        f"fs countermodel search, K4I, <=3 worlds: "
        f"{'found' if found.found else 'none'} "
        f"({found.frames_enumerated} frames)",
        f"fs countermodel search, IK4, <=3 worlds: "
        f"{'found' if exhausted.found else 'exhausted'} "
        f"({exhausted.frames_enumerated} frames)",
    ]
    _emit(report, as_json, lines)
    return 0 if ok else 1


def _demo_loeb(as_json: bool) -> int:
    model, ext = loeb_refutation()
    sweep = loeb_scattered_sweep(4)
    ok = ext == 0 and sweep.ok
    report = {
        "command": "demo",
        "demo": "loeb",
        "verdict": "ok" if ok else "failed",
        "formula": render(LOEB),
        "refutation": {"model": format_model(model), "extension": _world_list(ext)},
        "td_sweep": {"spaces_checked": sweep.spaces_checked,
                     "skipped_non_td": sweep.skipped,
                     "violations": len(sweep.violations)},
    }
    lines = [
        f"formula: {render(LOEB)}",
        "one-world reflexive model:",
        format_model(model).rstrip(),
        f"extension {_world_list(ext)}: world 0 refutes it",
        f"valid on all {sweep.spaces_checked} single-topology T_d derivative spaces "
        f"on <=4 points ({sweep.skipped} non-T_d skipped); "
        f"violations: {len(sweep.violations)}",
    ]
    _emit(report, as_json, lines)
    return 0 if ok else 1


_DEMOS = {
    "lemma-6.2": _demo_box_over_meet,
    "footnote-2": _demo_backward_gap,
    "loeb": _demo_loeb,
}


def _cmd_demo(args) -> int:
    return _DEMOS[args.name](args.json)


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="imlab",
        description="finite-model workbench for transitive intuitionistic modal logics")
    sub = parser.add_subparsers(dest="command", required=True)

    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--json", action="store_true", help="structured output")

    model_flags = argparse.ArgumentParser(add_help=False)
    model_flags.add_argument("--model", required=True, help="model file")
    model_flags.add_argument("--close-valuation", action="store_true",
                             help="upward-close valuations instead of rejecting them")

    p = sub.add_parser("parse", parents=[common], help="parse and reprint a formula")
    p.add_argument("formula")
    p.set_defaults(fn=_cmd_parse)

    p = sub.add_parser("eval", parents=[common, model_flags],
                       help="extension of a formula in a model")
    p.add_argument("--semantics", choices=("operator", "relational", "both"),
                   default="both")
    p.add_argument("formula")
    p.set_defaults(fn=_cmd_eval)

    p = sub.add_parser("valid", parents=[common, model_flags],
                       help="validity on the model's frame, all open valuations")
    p.add_argument("formula")
    p.set_defaults(fn=_cmd_valid)

    p = sub.add_parser("classify-frame", parents=[common, model_flags],
                       help="confluence properties and frame classes")
    p.set_defaults(fn=_cmd_classify_frame)

    p = sub.add_parser("classify-space", parents=[common, model_flags],
                       help="regularity flags of the frame's operator space")
    p.set_defaults(fn=_cmd_classify_space)

    p = sub.add_parser("topo-props", parents=[common],
                       help="properties of a topology file")
    p.add_argument("--topology", required=True)
    p.set_defaults(fn=_cmd_topo_props)

    p = sub.add_parser("derive", parents=[common], help="check a derivation file")
    p.add_argument("--logic", required=True)
    p.add_argument("file")
    p.set_defaults(fn=_cmd_derive)

    p = sub.add_parser("entail", parents=[common],
                       help="check an entailment certificate file")
    p.add_argument("--logic", required=True)
    p.add_argument("file")
    p.set_defaults(fn=_cmd_entail)

    p = sub.add_parser("search", parents=[common],
                       help="countermodel search over a frame class")
    p.add_argument("--logic", required=True)
    p.add_argument("--max-worlds", type=int, default=3)
    p.add_argument("formula")
    p.set_defaults(fn=_cmd_search)

    p = sub.add_parser("irreflexivize", parents=[common, model_flags],
                       help="stack indexed copies to make the modal relation irreflexive")
    p.add_argument("-k", "--copies", type=int, default=2)
    p.set_defaults(fn=_cmd_irreflexivize)

    p = sub.add_parser("bisim", parents=[common, model_flags],
                       help="largest two-relation bisimulation between two models")
    p.add_argument("--model2", required=True)
    p.set_defaults(fn=_cmd_bisim)

    p = sub.add_parser("demo", parents=[common], help="reproduce a named example")
    p.add_argument("name", choices=sorted(_DEMOS))
    p.set_defaults(fn=_cmd_demo)
    return parser


def dispatch(argv: Sequence[str]) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return 2 if exc.code not in (0, None) else 0
    try:
        return args.fn(args)
    except (ParseError, ModelParseError, OSError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


def main() -> None:
    sys.exit(dispatch(sys.argv[1:]))


if __name__ == "__main__":
    main()
