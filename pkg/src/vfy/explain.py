"""Interest-guided explanations.

Three pieces: automatic interest-tier assignment from the definition
dependency structure, the explanation recursion that selects the literals
accounting for a formula's truth value, and the two-phase tree builder
that keeps unfolding defined literals until everything bottoms out in
undefined predicates (with repeated literals cut off).
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Iterator, Sequence

from .core import (And, Atom, Eq, Formula, Interpretation, Literal, Not,
                   Theory, free_vars, instantiate_definition, iter_atoms)
from .ground import evaluate, rewrite_step

TIER_UNDEFINED = 4          # no definition: points straight at an input
TIER_DEPENDS_UNDEFINED = 3  # defined, reaches at least one undefined predicate
TIER_DEPENDS_DEFINED = 2    # defined, reaches only defined predicates
TIER_NO_DEPENDENCIES = 1    # defined purely by equalities
TIER_EQUALITY = 0


@dataclass(frozen=True)
class InterestMap:
    """Total map from predicate name to interest tier; larger is more
    interesting. Equality sits below every predicate at tier 0."""

    tiers: dict[str, int]

    def of_predicate(self, name: str) -> int:
        return self.tiers[name]

    def of_literal(self, lit: Literal) -> int:
        if isinstance(lit.atom, Eq):
            return TIER_EQUALITY
        return self.tiers[lit.atom.pred.name]


def assign_interest(t: Theory) -> InterestMap:
    """Tier predicates by how their definitions depend on each other.

    Undefined predicates are most interesting; defined ones rank lower
    the further they sit from undefined inputs; equality is least.
    Overrides from the theory replace the computed tier.
    """
    direct = {d.head.name: frozenset(a.pred.name for a in iter_atoms(d.body))
              for d in t.definitions}
    memo: dict[str, frozenset[str]] = {}

    def reachable(name: str, visiting: set[str]) -> frozenset[str]:
        if name in memo:
            return memo[name]
        if name in visiting:
            return frozenset()
        visiting.add(name)
        out: set[str] = set()
        for dep in direct.get(name, ()):
            out.add(dep)
            out |= reachable(dep, visiting)
        visiting.discard(name)
        memo[name] = frozenset(out)
        return memo[name]

    tiers: dict[str, int] = {}
    for p in t.predicates:
        if p.name not in direct:
            tiers[p.name] = TIER_UNDEFINED
            continue
        deps = reachable(p.name, set())
        if not deps:
            tiers[p.name] = TIER_NO_DEPENDENCIES
        elif any(dep not in direct for dep in deps):
            tiers[p.name] = TIER_DEPENDS_UNDEFINED
        else:
            tiers[p.name] = TIER_DEPENDS_DEFINED
    for name, tier in t.interest_overrides.items():
        if name in tiers:
            tiers[name] = tier
    return InterestMap(tiers)


@dataclass(frozen=True)
class Explanation:
    """The selected literals, in first-production order, plus the
    interest tier the selection carried."""

    literals: tuple[Literal, ...]
    interest: int


def explain(f: Formula, interp: Interpretation, interest: InterestMap) -> Explanation:
    """Select the literals that account for the truth value of a closed
    formula under the interpretation.

    Atoms explain themselves, signed by their truth value. Negation
    passes through. For a conjunction that is false, the explanation of
    the false conjunct with the least interest wins (earliest position on
    ties); for a true conjunction, the explanations of all conjuncts of
    maximal interest are combined in position order. Everything else is
    explained through its one-step rewriting.
    """
    if free_vars(f):
        raise ValueError("explain requires a closed formula")
    literals, tier = _expl(f, interp, interest)
    return Explanation(tuple(literals), tier)


def _expl(f: Formula, interp: Interpretation,
          interest: InterestMap) -> tuple[list[Literal], int]:
    if isinstance(f, (Atom, Eq)):
        lit = Literal(evaluate(f, interp), f)
        return [lit], interest.of_literal(lit)
    if isinstance(f, Not):
        return _expl(f.body, interp, interest)
    if isinstance(f, And):
        truths = [evaluate(item, interp) for item in f.items]
        if all(truths):
            subs = [_expl(item, interp, interest) for item in f.items]
            top = max(tier for _, tier in subs)
            merged: list[Literal] = []
            seen: set[Literal] = set()
            for literals, tier in subs:
                if tier != top:
                    continue
                for lit in literals:
                    if lit not in seen:
                        seen.add(lit)
                        merged.append(lit)
            return merged, top
        best: tuple[list[Literal], int] | None = None
        for item, truth in zip(f.items, truths):
            if truth:
                continue
            literals, tier = _expl(item, interp, interest)
            if best is None or tier < best[1]:
                best = (literals, tier)
        assert best is not None
        return best
    return _expl(rewrite_step(f), interp, interest)


@dataclass
class TreeNode:
    literal: Literal
    children: list[TreeNode] = field(default_factory=list)
    cutoff: bool = False


@dataclass
class ExplanationTree:
    """The goal at the root, one node per produced literal below it."""

    root: Formula
    children: list[TreeNode]

    def iter_nodes(self) -> Iterator[tuple[TreeNode, int]]:
        """Depth-first (node, depth) pairs; the root formula is depth 0."""
        def rec(node: TreeNode, depth: int) -> Iterator[tuple[TreeNode, int]]:
            yield node, depth
            for child in node.children:
                yield from rec(child, depth + 1)
        for child in self.children:
            yield from rec(child, 1)


ChildOrder = Callable[[Literal | None, tuple[Literal, ...]], Sequence[Literal]]


def build_tree(t: Theory, interp: Interpretation, interest: InterestMap,
               child_order: ChildOrder | None = None) -> ExplanationTree:
    """Explain the goal, then keep unfolding defined literals.

    Construction is depth-first, children in explanation order. A literal
    (same sign, same atom) is expanded at most once across the whole
    tree; any later occurrence becomes a cutoff node. Literals of
    undefined predicates and equality literals are leaves.

    `child_order` can reorder the children of one parent (None for the
    root); it exists to demonstrate how expansion order shapes the tree
    and must return a permutation of the literals it is given.
    """
    definitions = {d.head.name: d for d in t.definitions}
    expanded: set[Literal] = set()

    def ordered(parent: Literal | None, literals: tuple[Literal, ...]) -> tuple[Literal, ...]:
        if child_order is None:
            return literals
        out = tuple(child_order(parent, literals))
        if sorted(map(repr, out)) != sorted(map(repr, literals)):
            raise ValueError("child_order must permute the explanation literals")
        return out

    def expand(node: TreeNode) -> None:
        lit = node.literal
        if isinstance(lit.atom, Eq):
            return
        definition = definitions.get(lit.atom.pred.name)
        if definition is None:
            return
        if lit in expanded:
            node.cutoff = True
            return
        expanded.add(lit)
        body = instantiate_definition(definition, lit.atom.args, lit.sign)
        explanation = explain(body, interp, interest)
        for child_lit in ordered(lit, explanation.literals):
            child = TreeNode(child_lit)
            node.children.append(child)
            expand(child)

    top = explain(t.goal, interp, interest)
    tree = ExplanationTree(t.goal, [])
    for lit in ordered(None, top.literals):
        node = TreeNode(lit)
        tree.children.append(node)
        expand(node)
    return tree
