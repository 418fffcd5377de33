"""Provenances: sets of formulas that explain why a literal is true.

A provenance for a true literal L, with respect to a set of formulas all
true under an interpretation, is a set of formulas that (a) stay true
when L's atom is flipped and (b) together with the formula set entail L.
The collector walks the formulas with two mutually recursive functions,
one for formulas that flip from true to false, the dual for formulas
that flip from false to true.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Iterable, Iterator, Sequence

from .core import (And, Atom, Const, Eq, Formula, Iff, Interpretation,
                   Literal, Not, Theory, instantiate_definition, iter_atoms,
                   strip_double_negations)
from .ground import evaluate, rewrite_step


class EnumerationLimitError(RuntimeError):
    """The exhaustive entailment check would enumerate too many atoms."""


Provenance = tuple[Formula, ...]


@dataclass(frozen=True)
class ProvenanceSet:
    """Deduplicated provenances in first-emission order; each provenance
    keeps its member formulas in position order."""

    provenances: tuple[Provenance, ...]

    def __len__(self) -> int:
        return len(self.provenances)

    def __iter__(self) -> Iterator[Provenance]:
        return iter(self.provenances)

    def as_sets(self) -> list[frozenset[Formula]]:
        return [frozenset(p) for p in self.provenances]


def l_alternate(interp: Interpretation, lit: Literal) -> Interpretation:
    """The interpretation identical to interp except lit's atom flips."""
    if isinstance(lit.atom, Eq):
        raise ValueError("equality is structural; it has no alternate interpretation")
    if not lit.holds_in(interp):
        raise ValueError("the literal must be true in the interpretation")
    if lit.sign:
        return Interpretation(interp.true_atoms - {lit.atom})
    return Interpretation(interp.true_atoms | {lit.atom})


def cross_union(a: Iterable[frozenset], b: Iterable[frozenset]) -> set[frozenset]:
    """Pairwise unions of two families of sets."""
    return {x | y for x in a for y in b}


def _merge(a: Provenance, b: Provenance) -> Provenance:
    return a + tuple(x for x in b if x not in a)


def _cross(a: list[Provenance], b: list[Provenance]) -> list[Provenance]:
    out: list[Provenance] = []
    seen: set[frozenset] = set()
    for x in a:
        for y in b:
            merged = _merge(x, y)
            key = frozenset(merged)
            if key not in seen:
                seen.add(key)
                out.append(merged)
    return out


def _dedup(provs: list[Provenance]) -> list[Provenance]:
    out: list[Provenance] = []
    seen: set[frozenset] = set()
    for p in provs:
        key = frozenset(p)
        if key not in seen:
            seen.add(key)
            out.append(p)
    return out


def provenances(formulas: Sequence[Formula], interp: Interpretation,
                lit: Literal) -> ProvenanceSet:
    """All provenances of a literal with respect to a formula set.

    Every formula must be true under the interpretation and the literal
    must be a true non-equality literal. If no formula changes truth
    value in the alternate interpretation, the literal is independent of
    the set and the result is empty.
    """
    formulas = tuple(formulas)
    for f in formulas:
        if not evaluate(f, interp):
            raise ValueError("every theory formula must be true under the interpretation")
    if not lit.holds_in(interp):
        raise ValueError("the literal must be true under the interpretation")
    alt = l_alternate(interp, lit)
    collected: list[Provenance] = []
    for f in formulas:
        if not evaluate(f, alt):
            collected.extend(_why_true(f, interp, alt))
    final: list[Provenance] = []
    seen: set[frozenset] = set()
    for prov in collected:
        normalized = tuple(strip_double_negations(member) for member in prov)
        deduped: Provenance = ()
        for member in normalized:
            if member not in deduped:
                deduped += (member,)
        key = frozenset(deduped)
        if key not in seen:
            seen.add(key)
            final.append(deduped)
    return ProvenanceSet(tuple(final))


def _why_true(f: Formula, interp: Interpretation,
              alt: Interpretation) -> list[Provenance]:
    # Invariant: f is true under interp and false under the alternate.
    if not evaluate(f, interp) or evaluate(f, alt):
        raise ValueError("collector invariant violated: expected true/false")
    if isinstance(f, Atom):
        return [()]
    if isinstance(f, Eq):
        raise ValueError("equality truth cannot differ between alternates")
    if isinstance(f, Not):
        return _why_false(f.body, interp, alt)
    if isinstance(f, And):
        out: list[Provenance] = []
        for item in f.items:
            if not evaluate(item, alt):
                out.extend(_why_true(item, interp, alt))
        return _dedup(out)
    return _why_true(rewrite_step(f), interp, alt)


def _why_false(f: Formula, interp: Interpretation,
               alt: Interpretation) -> list[Provenance]:
    # Invariant: f is false under interp and true under the alternate.
    if evaluate(f, interp) or not evaluate(f, alt):
        raise ValueError("collector invariant violated: expected false/true")
    if isinstance(f, Atom):
        return [()]
    if isinstance(f, Eq):
        raise ValueError("equality truth cannot differ between alternates")
    if isinstance(f, Not):
        return _why_true(f.body, interp, alt)
    if isinstance(f, And):
        stay_true = tuple(item for item in f.items if evaluate(item, interp))
        flipped = [item for item in f.items if not evaluate(item, interp)]
        acc: list[Provenance] = [()]
        for q in flipped:
            acc = _cross(acc, _why_false(q, interp, alt))
        return _dedup([_merge(stay_true, p) for p in acc])
    return _why_false(rewrite_step(f), interp, alt)


def prune_seen(pset: ProvenanceSet, literals: Iterable[Literal]) -> ProvenanceSet:
    """Drop provenances that mention a literal already encountered
    elsewhere (for example in an explanation tree)."""
    shapes = {strip_double_negations(lit.formula()) for lit in literals}
    kept = tuple(p for p in pset.provenances
                 if not any(member in shapes for member in p))
    return ProvenanceSet(kept)


def check_provenance(formulas: Sequence[Formula], interp: Interpretation,
                     lit: Literal, provenance: Iterable[Formula],
                     atom_limit: int = 20) -> bool:
    """Exhaustively verify one provenance.

    True iff every member is true in both the interpretation and its
    alternate, and every interpretation over the ground atoms of the
    involved predicates that satisfies the formula set plus the
    provenance also satisfies the literal.
    """
    formulas = tuple(formulas)
    provenance = tuple(provenance)
    alt = l_alternate(interp, lit)
    for member in provenance:
        if not evaluate(member, interp) or not evaluate(member, alt):
            return False
    target = lit.formula()
    atoms = _atom_space(formulas + provenance + (target,))
    if len(atoms) > atom_limit:
        raise EnumerationLimitError(
            f"entailment check over {len(atoms)} ground atoms exceeds "
            f"the limit of {atom_limit}")
    for bits in itertools.product((False, True), repeat=len(atoms)):
        candidate = Interpretation(frozenset(
            atom for atom, bit in zip(atoms, bits) if bit))
        if all(evaluate(f, candidate) for f in formulas) and \
                all(evaluate(p, candidate) for p in provenance):
            if not evaluate(target, candidate):
                return False
    return True


def theory_formulas(t: Theory) -> list[Formula]:
    """The formula set a theory contributes to provenance queries: its
    axioms plus one head-body biconditional per definition instance."""
    out: list[Formula] = list(t.axioms)
    for d in t.definitions:
        pools = [[Const(c, s) for c in s.constants] for s in d.head.arg_sorts]
        for combo in itertools.product(*pools):
            head = Atom(d.head, tuple(combo))
            out.append(Iff(head, instantiate_definition(d, combo)))
    return out


def _atom_space(formulas: tuple[Formula, ...]) -> list[Atom]:
    decls = []
    for f in formulas:
        for atom in iter_atoms(f):
            if atom.pred not in decls:
                decls.append(atom.pred)
    out: list[Atom] = []
    for pred in decls:
        pools = [[Const(c, s) for c in s.constants] for s in pred.arg_sorts]
        for combo in itertools.product(*pools):
            out.append(Atom(pred, tuple(combo)))
    return out
