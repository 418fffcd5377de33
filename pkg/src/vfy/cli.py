"""Command-line driver.

`vfy verify` decides a model's goal, `vfy explain` additionally renders
the explanation tree of a refutation, and `vfy provenance` lists the
provenances of a chosen literal under the counterexample. Exit status:
0 when the goal is proved, 1 when a counterexample was found, 2 for
usage, parse, or resource errors.
"""

from __future__ import annotations

import argparse
import json
import sys

from .core import Interpretation, Theory
from .explain import ExplanationTree, assign_interest, build_tree
from .ground import DEFAULT_MAX_GROUND_NODES, GroundingLimitError
from .lang import (ModelError, parse_literal, parse_model, print_formula,
                   print_literal)
from .provenance import ProvenanceSet, provenances, prune_seen, theory_formulas
from .sat import SolverLimitError, find_counterexample

EXIT_PROVED = 0
EXIT_COUNTEREXAMPLE = 1
EXIT_ERROR = 2


def build_arg_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="vfy",
        description="Verify goals of finite-universe predicate-logic models "
                    "and explain refutations.")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p: argparse.ArgumentParser) -> None:
        p.add_argument("model", help="path to a .vfy model file")
        p.add_argument("--engine", choices=("dpll", "brute"), default="dpll",
                       help="satisfiability engine (default: dpll)")
        p.add_argument("--max-ground-nodes", type=int,
                       default=DEFAULT_MAX_GROUND_NODES, metavar="N",
                       help="grounding size budget (default: %(default)s)")

    p_verify = sub.add_parser("verify", help="prove the goal or print a counterexample")
    common(p_verify)
    p_verify.add_argument("--format", choices=("text", "json"), default="text")
    p_verify.add_argument("--full-model", action="store_true",
                          help="print defined atoms too, not only inputs")

    p_explain = sub.add_parser("explain", help="verify, then render the explanation tree")
    common(p_explain)
    p_explain.add_argument("--format", choices=("text", "dot", "json"), default="text")
    p_explain.add_argument("--full-model", action="store_true",
                           help="print defined atoms too, not only inputs")

    p_prov = sub.add_parser("provenance",
                            help="list provenances of a literal under the counterexample")
    common(p_prov)
    p_prov.add_argument("--format", choices=("text", "json"), default="text")
    p_prov.add_argument("--literal", required=True, metavar="LIT",
                        help="literal to explain, for example '!unoccupied(rt2131)'")
    p_prov.add_argument("--prune-seen", action="store_true",
                        help="drop provenances mentioning literals already "
                             "in the explanation tree")
    return parser


def render_tree(tree: ExplanationTree, fmt: str) -> str:
    if fmt == "text":
        lines = [print_formula(tree.root)]
        for node, depth in tree.iter_nodes():
            suffix = " (see above)" if node.cutoff else ""
            lines.append("  " * depth + print_literal(node.literal) + suffix)
        return "\n".join(lines) + "\n"
    if fmt == "dot":
        def esc(s: str) -> str:
            return s.replace("\\", "\\\\").replace('"', '\\"')
        lines = ["digraph explanation {",
                 f'  n0 [label="{esc(print_formula(tree.root))}" shape=box];']
        edges = []
        counter = [0]

        def emit(node, parent: str) -> None:
            counter[0] += 1
            name = f"n{counter[0]}"
            style = " style=dashed" if node.cutoff else ""
            lines.append(f'  {name} [label="{esc(print_literal(node.literal))}"{style}];')
            edges.append(f"  {parent} -> {name};")
            for child in node.children:
                emit(child, name)

        for child in tree.children:
            emit(child, "n0")
        return "\n".join(lines + edges + ["}"]) + "\n"
    if fmt == "json":
        nodes = []

        def emit(node) -> int:
            node_id = len(nodes)
            entry = {
                "id": node_id,
                "literal": print_formula(node.literal.atom),
                "sign": node.literal.sign,
                "children": [],
                "cutoff": node.cutoff,
            }
            nodes.append(entry)
            for child in node.children:
                entry["children"].append(emit(child))
            return node_id

        for child in tree.children:
            emit(child)
        return json.dumps({"root": print_formula(tree.root), "nodes": nodes},
                          indent=2) + "\n"
    raise ValueError(f"unknown format {fmt!r}")


def interpretation_lines(t: Theory, interp: Interpretation, full: bool) -> list[str]:
    defined = {d.head.name for d in t.definitions}
    atoms = [a for a in interp.true_atoms if full or a.pred.name not in defined]
    return sorted(print_formula(a) for a in atoms)


def render_provenances(literal_text: str, pset: ProvenanceSet, fmt: str) -> str:
    if fmt == "json":
        return json.dumps({
            "result": "counterexample",
            "literal": literal_text,
            "provenances": [[print_formula(m) for m in p] for p in pset],
        }, indent=2) + "\n"
    lines = ["COUNTEREXAMPLE", f"why {literal_text}:"]
    if not len(pset):
        lines.append("  no provenances: the literal is independent of the theory")
    for i, prov in enumerate(pset, start=1):
        lines.append(f"provenance {i}:")
        if not prov:
            lines.append("  (follows from the theory alone)")
        for member in prov:
            lines.append(f"  {print_formula(member)}")
    return "\n".join(lines) + "\n"


def run(args: argparse.Namespace) -> int:
    try:
        with open(args.model, encoding="utf-8") as handle:
            text = handle.read()
    except OSError as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_ERROR

    try:
        theory = parse_model(text, args.model)
    except ModelError as e:
        for diag in e.diagnostics:
            print(diag.render(args.model), file=sys.stderr)
        return EXIT_ERROR

    try:
        interp = find_counterexample(theory, engine=args.engine,
                                     max_ground_nodes=args.max_ground_nodes)
    except (GroundingLimitError, SolverLimitError) as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_ERROR

    if interp is None:
        if getattr(args, "format", "text") == "json":
            print(json.dumps({"result": "proved"}))
        else:
            print("PROVED")
        return EXIT_PROVED

    if args.command == "verify":
        if args.format == "json":
            print(json.dumps({
                "result": "counterexample",
                "atoms": interpretation_lines(theory, interp, args.full_model),
            }, indent=2))
        else:
            print("COUNTEREXAMPLE")
            for line in interpretation_lines(theory, interp, args.full_model):
                print(f"  {line}")
        return EXIT_COUNTEREXAMPLE

    interest = assign_interest(theory)

    if args.command == "explain":
        tree = build_tree(theory, interp, interest)
        if args.format == "text":
            print("COUNTEREXAMPLE")
            for line in interpretation_lines(theory, interp, args.full_model):
                print(f"  {line}")
            print()
            print(render_tree(tree, "text"), end="")
        else:
            print(render_tree(tree, args.format), end="")
        return EXIT_COUNTEREXAMPLE

    # provenance
    try:
        lit = parse_literal(args.literal, theory)
    except ModelError as e:
        for diag in e.diagnostics:
            print(diag.render("<literal>"), file=sys.stderr)
        return EXIT_ERROR
    if not lit.holds_in(interp):
        print(f"error: literal {args.literal} is false under the counterexample",
              file=sys.stderr)
        return EXIT_ERROR
    pset = provenances(theory_formulas(theory), interp, lit)
    if args.prune_seen:
        tree = build_tree(theory, interp, interest)
        seen = [node.literal for node, _ in tree.iter_nodes()]
        pset = prune_seen(pset, seen)
    print(render_provenances(print_literal(lit), pset, args.format), end="")
    return EXIT_COUNTEREXAMPLE


def main(argv: list[str] | None = None) -> int:
    parser = build_arg_parser()
    args = parser.parse_args(argv)
    return run(args)


if __name__ == "__main__":
    sys.exit(main())
