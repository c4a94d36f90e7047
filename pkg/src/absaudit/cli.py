"""Command-line interface.

Exit codes: 0 success; 1 validation, audit or comparison failure; 2 usage
error; 3 enumeration capacity exceeded.
"""

from __future__ import annotations

import argparse
import json
import sys

from . import taxonomy
from .abstraction import pushforward, validate_abstraction
from .audit import audit_abstraction
from .dot import abstraction_dot, model_dot
from .errors import (
    AbsauditError,
    CapacityError,
    ModelError,
    ParseError,
    RenormalizationRequiredError,
)
from .freecat import hom_set
from .scm import (
    Distribution,
    Scm,
    intervene,
    joint_distribution,
    marginal,
    underlying_graph,
    validate_scm,
)
from .textfmt import Document, parse_path

OK, FAIL, USAGE, CAPACITY = 0, 1, 2, 3


def _load(paths: list[str]) -> Document:
    doc = Document()
    for path in paths:
        doc.merge(parse_path(path))
    return doc


def _pick_model(doc: Document, name: str | None) -> Scm:
    if name is not None:
        if name not in doc.models:
            raise ModelError(f"no model named {name!r} in the given files")
        return doc.models[name]
    if len(doc.models) != 1:
        raise ModelError(
            "several models loaded; choose one with --model "
            f"({', '.join(doc.models) or 'none found'})"
        )
    return next(iter(doc.models.values()))


def _pick_abstraction(doc: Document, name: str | None):
    if name is not None:
        if name not in doc.abstractions:
            raise ModelError(f"no abstraction named {name!r} in the given files")
        return doc.abstractions[name]
    if len(doc.abstractions) != 1:
        raise ModelError(
            "several abstractions loaded; choose one with --abs "
            f"({', '.join(doc.abstractions) or 'none found'})"
        )
    return next(iter(doc.abstractions.values()))


def _parse_do(items: list[str]) -> dict[str, str]:
    out: dict[str, str] = {}
    for item in items:
        if "=" not in item:
            raise ModelError(f"--do expects VAR=VALUE, found {item!r}")
        var, val = item.split("=", 1)
        out[var] = val
    return out


def _dist_rows(dist: Distribution) -> list[tuple[str, float]]:
    import itertools

    rows = []
    for outcome in itertools.product(*dist.domains):
        p = dist.prob(outcome)
        if p != 0.0:
            rows.append((" ".join(str(x) for x in outcome), p))
    return rows


def _print_dist(dist: Distribution, as_json: bool) -> None:
    if as_json:
        payload = {
            "scope": list(dist.scope),
            "probs": {k: v for k, v in _dist_rows(dist)},
        }
        print(json.dumps(payload, sort_keys=True))
    else:
        print(" ".join(dist.scope))
        for key, p in _dist_rows(dist):
            print(f"{key} : {p!r}")


# ---------------------------------------------------------------------------
# Subcommands
# ---------------------------------------------------------------------------

def _cmd_validate(args) -> int:
    doc = _load(args.files)
    results = []
    ok = True
    for model in doc.models.values():
        report = validate_scm(model)
        results.append(("model", model.name, report))
        ok &= report.ok
    for abstraction in doc.abstractions.values():
        source, target = doc.resolve(abstraction)
        report = validate_abstraction(abstraction, source, target)
        results.append(("abstraction", abstraction.name, report))
        ok &= report.ok
    if args.format == "json":
        payload = [
            {
                "kind": kind,
                "name": name,
                "ok": report.ok,
                "issues": [
                    {"code": issue.code, "message": issue.message}
                    for issue in report.issues
                ],
            }
            for kind, name, report in results
        ]
        print(json.dumps(payload, sort_keys=True))
    else:
        for kind, name, report in results:
            status = "ok" if report.ok else "INVALID"
            print(f"{kind} {name}: {status}")
            for issue in report.issues:
                print(f"  [{issue.code}] {issue.message}")
    return OK if ok else FAIL


def _cmd_graph(args) -> int:
    doc = _load(args.files)
    if args.abs_map:
        if not args.dot:
            raise ModelError("--abs on the graph command requires --dot")
        abstraction = _pick_abstraction(doc, args.abs_map)
        source, target = doc.resolve(abstraction)
        sys.stdout.write(abstraction_dot(abstraction, source, target))
        return OK
    model = _pick_model(doc, args.model)
    dag = underlying_graph(model)
    if args.dot:
        sys.stdout.write(model_dot(model))
        return OK
    if args.hom:
        src, tgt = args.hom
        morphisms = hom_set(dag, src, tgt)
        if args.format == "json":
            print(json.dumps([str(m) for m in morphisms]))
        else:
            print(f"hom({src}, {tgt}) in {model.name}: {len(morphisms)} morphism(s)")
            for m in morphisms:
                print(f"  {m}")
        return OK
    if args.format == "json":
        payload = {
            "name": model.name,
            "nodes": list(dag.nodes),
            "edges": [[u, v] for u, v in dag.edges],
        }
        print(json.dumps(payload, sort_keys=True))
    else:
        print(f"model {model.name}")
        print(f"  nodes: {' '.join(dag.nodes)}")
        for u, v in dag.edges:
            print(f"  {u} -> {v}")
    return OK


def _cmd_dist(args) -> int:
    doc = _load(args.files)
    model = _pick_model(doc, args.model)
    report = validate_scm(model)
    if not report.ok:
        for issue in report.issues:
            print(f"[{issue.code}] {issue.message}", file=sys.stderr)
        return FAIL
    if args.do:
        model = intervene(model, _parse_do(args.do))
    dist = joint_distribution(model)
    if args.marginal:
        dist = marginal(dist, args.marginal.split(","))
    _print_dist(dist, args.format == "json")
    return OK


def _cmd_audit(args) -> int:
    doc = _load(args.files)
    abstraction = _pick_abstraction(doc, args.abs)
    source, target = doc.resolve(abstraction)
    report = validate_abstraction(abstraction, source, target)
    if not report.ok:
        for issue in report.issues:
            print(f"[{issue.code}] {issue.message}", file=sys.stderr)
        return FAIL
    profile = audit_abstraction(abstraction, source, target)
    if args.format == "json":
        print(json.dumps(profile.to_dict(), sort_keys=True))
    else:
        print(profile.to_text())
    if args.require:
        flat = profile.flat()
        failed = []
        for prop in args.require.split(","):
            prop = prop.strip()
            if prop not in flat:
                raise ModelError(
                    f"unknown property {prop!r}; choose from "
                    f"{', '.join(sorted(flat))}"
                )
            if flat[prop] is not True:
                failed.append(prop)
        if failed:
            print(f"required properties not satisfied: {', '.join(failed)}",
                  file=sys.stderr)
            return FAIL
    return OK


def _cmd_classify(args) -> int:
    doc = _load(args.files)
    abstraction = _pick_abstraction(doc, args.abs)
    source, target = doc.resolve(abstraction)
    labels = taxonomy.detect_types(abstraction, source, target)
    if args.format == "json":
        print(json.dumps(labels, sort_keys=True))
    else:
        print(f"classification of {abstraction.name}")
        for layer in ("structural", "distributional"):
            names = labels[layer] or ["(none)"]
            print(f"  {layer}: {', '.join(names)}")
    return OK


def _cmd_tables(args) -> int:
    which = args.which
    names = ["structural", "distributional"] if which == "both" else [which]
    if args.truth and which == "both":
        print("--truth needs --which structural or distributional", file=sys.stderr)
        return USAGE
    ok = True
    payload = {}
    for name in names:
        computed = (
            taxonomy.structural_matrix()
            if name == "structural"
            else taxonomy.distributional_matrix()
        )
        expected = (
            taxonomy.load_table(args.truth) if args.truth else taxonomy.shipped_table(name)
        )
        diff = computed.diff(expected)
        payload[name] = {
            "cells": {
                f"{row} | {col}": computed.cells[(row, col)].value
                for row in computed.rows
                for col in computed.cols
            },
            "matches_ground_truth": not diff,
            "differences": diff,
        }
        if args.format != "json":
            print(computed.to_text())
            if diff:
                print("MISMATCH against ground truth:")
                for line in diff:
                    print(f"  {line}")
            else:
                size = len(computed.rows) * len(computed.cols)
                print(f"matches ground truth ({size}/{size} cells)")
            print()
        ok &= not diff
    if args.format == "json":
        print(json.dumps(payload, sort_keys=True))
    return OK if ok else FAIL


def _cmd_push(args) -> int:
    doc = _load(args.files)
    abstraction = _pick_abstraction(doc, args.abs)
    source, target = doc.resolve(abstraction)
    report = validate_abstraction(abstraction, source, target)
    if not report.ok:
        for issue in report.issues:
            print(f"[{issue.code}] {issue.message}", file=sys.stderr)
        return FAIL
    model = source
    if args.do:
        model = intervene(model, _parse_do(args.do))
    dist = joint_distribution(model)
    pushed = pushforward(
        abstraction, dist, source, target, renormalize=args.renormalize
    )
    _print_dist(pushed, args.format == "json")
    return OK


# ---------------------------------------------------------------------------
# Entry point
# ---------------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="absaudit",
        description="Audit and classify abstraction maps between causal models.",
    )
    parser.add_argument(
        "--format", choices=("text", "json"), default="text",
        help="output format (default: text)",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("validate", help="check files for well-formedness")
    p.add_argument("files", nargs="+")
    p.set_defaults(func=_cmd_validate)

    p = sub.add_parser("graph", help="show a model's graph")
    p.add_argument("files", nargs="+")
    p.add_argument("--model", help="model name when several are loaded")
    p.add_argument("--dot", action="store_true", help="emit Graphviz DOT")
    p.add_argument(
        "--abs", dest="abs_map", metavar="NAME",
        help="with --dot, render this abstraction (both graphs plus map arrows)",
    )
    p.add_argument(
        "--hom", nargs=2, metavar=("SRC", "TGT"),
        help="list all morphisms between two nodes",
    )
    p.set_defaults(func=_cmd_graph)

    p = sub.add_parser("dist", help="compute the joint distribution")
    p.add_argument("files", nargs="+")
    p.add_argument("--model", help="model name when several are loaded")
    p.add_argument(
        "--do", action="append", default=[], metavar="VAR=VALUE",
        help="intervene before computing (repeatable)",
    )
    p.add_argument("--marginal", help="comma-separated variables to keep")
    p.set_defaults(func=_cmd_dist)

    p = sub.add_parser("audit", help="audit an abstraction's properties")
    p.add_argument("files", nargs="+")
    p.add_argument("--abs", help="abstraction name when several are loaded")
    p.add_argument(
        "--require", metavar="PROPS",
        help="comma-separated properties that must hold (exit 1 otherwise)",
    )
    p.set_defaults(func=_cmd_audit)

    p = sub.add_parser("classify", help="name the taxonomy types of a map")
    p.add_argument("files", nargs="+")
    p.add_argument("--abs", help="abstraction name when several are loaded")
    p.set_defaults(func=_cmd_classify)

    p = sub.add_parser(
        "tables", help="recompute the admissibility tables from witnesses"
    )
    p.add_argument(
        "--which", choices=("structural", "distributional", "both"),
        default="both",
    )
    p.add_argument("--truth", help="compare against this table file instead")
    p.set_defaults(func=_cmd_tables)

    p = sub.add_parser("push", help="push the source distribution forward")
    p.add_argument("files", nargs="+")
    p.add_argument("--abs", help="abstraction name when several are loaded")
    p.add_argument(
        "--do", action="append", default=[], metavar="VAR=VALUE",
        help="intervene on the source first (repeatable)",
    )
    p.add_argument(
        "--renormalize", action="store_true",
        help="rescale mass lost to a partial outcome layer",
    )
    p.set_defaults(func=_cmd_push)
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except CapacityError as exc:
        print(f"capacity: {exc}", file=sys.stderr)
        return CAPACITY
    except ParseError as exc:
        print(f"parse error: {exc}", file=sys.stderr)
        return FAIL
    except RenormalizationRequiredError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return FAIL
    except (ModelError, AbsauditError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return FAIL
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return FAIL


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
