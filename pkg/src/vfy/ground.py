"""Quantifier elimination over finite universes and truth evaluation.

`rewrite_step` performs exactly one rewriting step on the top connective;
`ground` drives it to a fixpoint, yielding a formula built from atoms,
equalities, negation and conjunction only. Double negations introduced on
the way are deliberately kept: downstream consumers strip them themselves
where it matters.
"""

from __future__ import annotations

from .core import (And, Atom, Const, Eq, Exists, Forall, Formula, Iff, Implies,
                   Interpretation, Not, Or, Var, free_vars, substitute)

DEFAULT_MAX_GROUND_NODES = 1_000_000


class GroundingLimitError(RuntimeError):
    """Grounding grew past the configured node budget."""


def rewrite_step(f: Formula) -> Formula:
    """Rewrite the top node once; no recursion into subformulas.

    Disjunction becomes a negated conjunction of negations, implication
    a negated conjunction, biconditional a pair of implications, and a
    universal quantifier the conjunction of its instances in constant
    declaration order (a singleton sort yields the instance directly).
    Existential quantification goes through the universal dual.
    """
    if isinstance(f, Or):
        return Not(And(tuple(Not(item) for item in f.items)))
    if isinstance(f, Implies):
        return Not(And((f.lhs, Not(f.rhs))))
    if isinstance(f, Iff):
        return And((Implies(f.lhs, f.rhs), Implies(f.rhs, f.lhs)))
    if isinstance(f, Forall):
        instances = tuple(substitute(f.body, f.var, Const(c, f.var.sort))
                          for c in f.var.sort.constants)
        if len(instances) == 1:
            return instances[0]
        return And(instances)
    if isinstance(f, Exists):
        return Not(Forall(f.var, Not(f.body)))
    raise ValueError(
        "rewrite_step applies to disjunction, implication, biconditional "
        "and quantifiers only")


def ground(f: Formula, max_nodes: int = DEFAULT_MAX_GROUND_NODES) -> Formula:
    """Exhaustively rewrite a closed formula into ground normal form.

    The result contains no quantifier, no variable, and no connective
    other than negation and conjunction. Exceeding `max_nodes` raises
    GroundingLimitError naming the quantifier being expanded.
    """
    if free_vars(f):
        names = ", ".join(sorted(v.name for v in free_vars(f)))
        raise ValueError(f"cannot ground a formula with free variable(s): {names}")
    counter = [0]

    def go(g: Formula, quant: str | None) -> Formula:
        counter[0] += 1
        if counter[0] > max_nodes:
            at = quant or "the input formula"
            raise GroundingLimitError(
                f"grounding exceeded {max_nodes} nodes while expanding {at}")
        if isinstance(g, (Atom, Eq)):
            return g
        if isinstance(g, Not):
            return Not(go(g.body, quant))
        if isinstance(g, And):
            return And(tuple(go(item, quant) for item in g.items))
        if isinstance(g, Forall):
            return go(rewrite_step(g), f"forall {g.var.name}: {g.var.sort.name}")
        if isinstance(g, Exists):
            return go(rewrite_step(g), f"exists {g.var.name}: {g.var.sort.name}")
        return go(rewrite_step(g), quant)

    return go(f, None)


def evaluate(f: Formula, interp: Interpretation) -> bool:
    """Truth of a closed formula under an interpretation.

    Quantifiers iterate the sort's constants; equality holds exactly for
    identical constants; an atom absent from the interpretation is false.
    """
    return _ev(f, interp, {})


def _resolve(term, env: dict[str, Const]) -> Const:
    if isinstance(term, Var):
        try:
            return env[term.name]
        except KeyError:
            raise ValueError(f"free variable {term.name!r} in evaluation") from None
    return term


def _ev(f: Formula, interp: Interpretation, env: dict[str, Const]) -> bool:
    if isinstance(f, Atom):
        if any(isinstance(t, Var) for t in f.args):
            f = Atom(f.pred, tuple(_resolve(t, env) for t in f.args))
        return f in interp.true_atoms
    if isinstance(f, Eq):
        return _resolve(f.lhs, env) == _resolve(f.rhs, env)
    if isinstance(f, Not):
        return not _ev(f.body, interp, env)
    if isinstance(f, And):
        return all(_ev(item, interp, env) for item in f.items)
    if isinstance(f, Or):
        return any(_ev(item, interp, env) for item in f.items)
    if isinstance(f, Implies):
        return not _ev(f.lhs, interp, env) or _ev(f.rhs, interp, env)
    if isinstance(f, Iff):
        return _ev(f.lhs, interp, env) == _ev(f.rhs, interp, env)
    if isinstance(f, Forall):
        return all(_ev(f.body, interp, {**env, f.var.name: Const(c, f.var.sort)})
                   for c in f.var.sort.constants)
    if isinstance(f, Exists):
        return any(_ev(f.body, interp, {**env, f.var.name: Const(c, f.var.sort)})
                   for c in f.var.sort.constants)
    raise TypeError(f"not a formula: {f!r}")
