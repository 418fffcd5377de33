"""Logical data model: sorts, terms, formulas, definitions, theories,
literals and interpretations.

Everything in this module is immutable after construction and safe to
share between threads; all operations are pure functions of their
inputs.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Iterator, Union


class SortError(ValueError):
    """An argument does not have the sort an operation requires."""


@dataclass(frozen=True)
class Sort:
    """A named, finite universe slice.

    Constant order is declaration order and must be preserved: quantifier
    expansion and explanation tie-breaking both depend on it.
    """

    name: str
    constants: tuple[str, ...]

    def __post_init__(self) -> None:
        if not self.constants:
            raise ValueError(f"sort {self.name!r} declares no constants")
        if len(set(self.constants)) != len(self.constants):
            raise ValueError(f"sort {self.name!r} repeats a constant")


@dataclass(frozen=True)
class PredicateDecl:
    """A predicate symbol with its argument sorts (arity may be zero)."""

    name: str
    arg_sorts: tuple[Sort, ...] = ()

    @property
    def arity(self) -> int:
        return len(self.arg_sorts)


@dataclass(frozen=True)
class Var:
    name: str
    sort: Sort


@dataclass(frozen=True)
class Const:
    name: str
    sort: Sort


Term = Union[Var, Const]


@dataclass(frozen=True)
class Atom:
    """A predicate applied to terms; argument count and sorts must match."""

    pred: PredicateDecl
    args: tuple[Term, ...] = ()

    def __post_init__(self) -> None:
        if len(self.args) != self.pred.arity:
            raise SortError(
                f"{self.pred.name} expects {self.pred.arity} argument(s), "
                f"got {len(self.args)}")
        for term, sort in zip(self.args, self.pred.arg_sorts):
            if term.sort != sort:
                raise SortError(
                    f"argument {term.name!r} of {self.pred.name} has sort "
                    f"{term.sort.name}, expected {sort.name}")


@dataclass(frozen=True)
class Eq:
    """Built-in equality; both operands must share a sort."""

    lhs: Term
    rhs: Term

    def __post_init__(self) -> None:
        if self.lhs.sort != self.rhs.sort:
            raise SortError(
                f"equality operands {self.lhs.name!r} and {self.rhs.name!r} "
                f"have different sorts ({self.lhs.sort.name} vs {self.rhs.sort.name})")


@dataclass(frozen=True)
class Not:
    body: Formula


@dataclass(frozen=True)
class And:
    """N-ary conjunction, at least two conjuncts, order preserved."""

    items: tuple[Formula, ...]

    def __post_init__(self) -> None:
        if len(self.items) < 2:
            raise ValueError("conjunction needs at least two conjuncts")


@dataclass(frozen=True)
class Or:
    """N-ary disjunction, at least two disjuncts, order preserved."""

    items: tuple[Formula, ...]

    def __post_init__(self) -> None:
        if len(self.items) < 2:
            raise ValueError("disjunction needs at least two disjuncts")


@dataclass(frozen=True)
class Implies:
    lhs: Formula
    rhs: Formula


@dataclass(frozen=True)
class Iff:
    lhs: Formula
    rhs: Formula


@dataclass(frozen=True)
class Forall:
    var: Var
    body: Formula


@dataclass(frozen=True)
class Exists:
    var: Var
    body: Formula


Formula = Union[Atom, Eq, Not, And, Or, Implies, Iff, Forall, Exists]

_BINARY = (Implies, Iff)
_NARY = (And, Or)
_QUANT = (Forall, Exists)


@dataclass(frozen=True)
class Definition:
    """p(x1, ..., xn) defined as a body formula over exactly those params."""

    head: PredicateDecl
    params: tuple[Var, ...]
    body: Formula


@dataclass(frozen=True)
class Literal:
    """A signed ground atom or ground equality (sign True = positive)."""

    sign: bool
    atom: Union[Atom, Eq]

    def __post_init__(self) -> None:
        for term in _atom_terms(self.atom):
            if isinstance(term, Var):
                raise ValueError(
                    f"literal argument {term.name!r} is a variable; literals must be ground")

    def formula(self) -> Formula:
        return self.atom if self.sign else Not(self.atom)

    def holds_in(self, interp: Interpretation) -> bool:
        if isinstance(self.atom, Eq):
            truth = self.atom.lhs == self.atom.rhs
        else:
            truth = self.atom in interp.true_atoms
        return truth == self.sign


@dataclass(frozen=True)
class Interpretation:
    """The set of true ground atoms; any atom not in the set is false.

    Equality atoms are never stored: equality is structural (two
    constants are equal exactly when they are the same constant).
    """

    true_atoms: frozenset[Atom] = frozenset()

    def __post_init__(self) -> None:
        for atom in self.true_atoms:
            if isinstance(atom, Eq):
                raise ValueError("interpretations never store equality atoms")
            if any(isinstance(t, Var) for t in atom.args):
                raise ValueError("interpretations contain ground atoms only")


@dataclass(frozen=True)
class Theory:
    """Sorts, predicates, definitions, axioms and one closed goal."""

    sorts: tuple[Sort, ...] = ()
    predicates: tuple[PredicateDecl, ...] = ()
    definitions: tuple[Definition, ...] = ()
    axioms: tuple[Formula, ...] = ()
    goal: Formula = None  # type: ignore[assignment]
    interest_overrides: dict[str, int] = field(default_factory=dict)

    def sort(self, name: str) -> Sort | None:
        for s in self.sorts:
            if s.name == name:
                return s
        return None

    def predicate(self, name: str) -> PredicateDecl | None:
        for p in self.predicates:
            if p.name == name:
                return p
        return None

    def definition_for(self, pred_name: str) -> Definition | None:
        for d in self.definitions:
            if d.head.name == pred_name:
                return d
        return None

    def constant(self, name: str) -> Const | None:
        for s in self.sorts:
            if name in s.constants:
                return Const(name, s)
        return None

    def ground_atoms(self) -> list[Atom]:
        """All well-sorted ground atoms, in declaration/constant order."""
        out = []
        for p in self.predicates:
            pools = [[Const(c, s) for c in s.constants] for s in p.arg_sorts]
            for combo in itertools.product(*pools):
                out.append(Atom(p, tuple(combo)))
        return out


def _atom_terms(atom: Union[Atom, Eq]) -> tuple[Term, ...]:
    if isinstance(atom, Eq):
        return (atom.lhs, atom.rhs)
    return atom.args


def iter_atoms(f: Formula) -> Iterator[Atom]:
    """Yield every Atom occurrence (duplicates included), left to right."""
    if isinstance(f, Atom):
        yield f
    elif isinstance(f, Eq):
        return
    elif isinstance(f, Not):
        yield from iter_atoms(f.body)
    elif isinstance(f, _NARY):
        for item in f.items:
            yield from iter_atoms(item)
    elif isinstance(f, _BINARY):
        yield from iter_atoms(f.lhs)
        yield from iter_atoms(f.rhs)
    elif isinstance(f, _QUANT):
        yield from iter_atoms(f.body)
    else:
        raise TypeError(f"not a formula: {f!r}")


def free_vars(f: Formula) -> frozenset[Var]:
    return frozenset(_free_vars(f, frozenset()))


def _free_vars(f: Formula, bound: frozenset[str]) -> set[Var]:
    if isinstance(f, (Atom, Eq)):
        return {t for t in _atom_terms(f) if isinstance(t, Var) and t.name not in bound}
    if isinstance(f, Not):
        return _free_vars(f.body, bound)
    if isinstance(f, _NARY):
        out: set[Var] = set()
        for item in f.items:
            out |= _free_vars(item, bound)
        return out
    if isinstance(f, _BINARY):
        return _free_vars(f.lhs, bound) | _free_vars(f.rhs, bound)
    if isinstance(f, _QUANT):
        return _free_vars(f.body, bound | {f.var.name})
    raise TypeError(f"not a formula: {f!r}")


def is_closed(f: Formula) -> bool:
    return not free_vars(f)


def is_ground(f: Formula) -> bool:
    """True when f contains no quantifier and no variable."""
    if isinstance(f, (Atom, Eq)):
        return not any(isinstance(t, Var) for t in _atom_terms(f))
    if isinstance(f, Not):
        return is_ground(f.body)
    if isinstance(f, _NARY):
        return all(is_ground(item) for item in f.items)
    if isinstance(f, _BINARY):
        return is_ground(f.lhs) and is_ground(f.rhs)
    if isinstance(f, _QUANT):
        return False
    raise TypeError(f"not a formula: {f!r}")


def node_count(f: Formula) -> int:
    if isinstance(f, (Atom, Eq)):
        return 1
    if isinstance(f, Not):
        return 1 + node_count(f.body)
    if isinstance(f, _NARY):
        return 1 + sum(node_count(item) for item in f.items)
    if isinstance(f, _BINARY):
        return 1 + node_count(f.lhs) + node_count(f.rhs)
    if isinstance(f, _QUANT):
        return 1 + node_count(f.body)
    raise TypeError(f"not a formula: {f!r}")


def substitute(f: Formula, var: Var, const: Const) -> Formula:
    """Replace every free occurrence of var by const.

    Bound occurrences are untouched; a quantifier binding the same name
    shadows the substitution. Substituting a constant can never capture.
    """
    if const.sort != var.sort:
        raise SortError(
            f"cannot substitute {const.name!r} ({const.sort.name}) for "
            f"{var.name!r} ({var.sort.name})")
    return _subst(f, var, const)


def _subst(f: Formula, var: Var, const: Const) -> Formula:
    if isinstance(f, Atom):
        if var not in f.args:
            return f
        return Atom(f.pred, tuple(const if t == var else t for t in f.args))
    if isinstance(f, Eq):
        if var != f.lhs and var != f.rhs:
            return f
        return Eq(const if f.lhs == var else f.lhs, const if f.rhs == var else f.rhs)
    if isinstance(f, Not):
        return Not(_subst(f.body, var, const))
    if isinstance(f, And):
        return And(tuple(_subst(item, var, const) for item in f.items))
    if isinstance(f, Or):
        return Or(tuple(_subst(item, var, const) for item in f.items))
    if isinstance(f, Implies):
        return Implies(_subst(f.lhs, var, const), _subst(f.rhs, var, const))
    if isinstance(f, Iff):
        return Iff(_subst(f.lhs, var, const), _subst(f.rhs, var, const))
    if isinstance(f, Forall):
        if f.var.name == var.name:
            return f
        return Forall(f.var, _subst(f.body, var, const))
    if isinstance(f, Exists):
        if f.var.name == var.name:
            return f
        return Exists(f.var, _subst(f.body, var, const))
    raise TypeError(f"not a formula: {f!r}")


def instantiate_definition(d: Definition, args: tuple[Const, ...] | list[Const],
                           sign: bool = True) -> Formula:
    """Substitute args for the definition's params in its body.

    With sign False the instantiated body is wrapped in a negation, which
    is how a negative defined literal unfolds.
    """
    args = tuple(args)
    if len(args) != len(d.params):
        raise SortError(
            f"definition of {d.head.name} takes {len(d.params)} argument(s), "
            f"got {len(args)}")
    body = d.body
    for param, arg in zip(d.params, args):
        if arg.sort != param.sort:
            raise SortError(
                f"argument {arg.name!r} for parameter {param.name!r} of "
                f"{d.head.name} has sort {arg.sort.name}, expected {param.sort.name}")
        body = substitute(body, param, arg)
    return body if sign else Not(body)


def definition_biconditional(d: Definition) -> Formula:
    """The definition read logically: its head and body agree for all params."""
    f: Formula = Iff(Atom(d.head, d.params), d.body)
    for param in reversed(d.params):
        f = Forall(param, f)
    return f


def strip_double_negations(f: Formula) -> Formula:
    """Remove every doubly negated wrapper anywhere in the formula."""
    if isinstance(f, Not):
        if isinstance(f.body, Not):
            return strip_double_negations(f.body.body)
        return Not(strip_double_negations(f.body))
    if isinstance(f, (Atom, Eq)):
        return f
    if isinstance(f, And):
        return And(tuple(strip_double_negations(item) for item in f.items))
    if isinstance(f, Or):
        return Or(tuple(strip_double_negations(item) for item in f.items))
    if isinstance(f, Implies):
        return Implies(strip_double_negations(f.lhs), strip_double_negations(f.rhs))
    if isinstance(f, Iff):
        return Iff(strip_double_negations(f.lhs), strip_double_negations(f.rhs))
    if isinstance(f, Forall):
        return Forall(f.var, strip_double_negations(f.body))
    if isinstance(f, Exists):
        return Exists(f.var, strip_double_negations(f.body))
    raise TypeError(f"not a formula: {f!r}")


@dataclass(frozen=True)
class TheoryDiagnostic:
    """One violated theory invariant; `where` names the offending part."""

    kind: str
    where: str
    message: str


def check_theory(t: Theory) -> list[TheoryDiagnostic]:
    """Validate every Theory invariant; empty result means the theory is sound.

    Reported kinds: duplicate-sort, duplicate-constant, duplicate-predicate,
    undeclared-predicate, sort-mismatch, unknown-constant, free-variable,
    duplicate-definition, bad-definition, cyclic-definitions,
    bad-interest-override, missing-goal.
    """
    diags: list[TheoryDiagnostic] = []

    seen_sorts: set[str] = set()
    seen_consts: dict[str, str] = {}
    for s in t.sorts:
        where = f"sort {s.name}"
        if s.name in seen_sorts:
            diags.append(TheoryDiagnostic("duplicate-sort", where,
                                          f"sort {s.name} declared twice"))
        seen_sorts.add(s.name)
        for c in s.constants:
            if c in seen_consts and seen_consts[c] != s.name:
                diags.append(TheoryDiagnostic(
                    "duplicate-constant", where,
                    f"constant {c} already belongs to sort {seen_consts[c]}"))
            seen_consts.setdefault(c, s.name)

    seen_preds: set[str] = set()
    for p in t.predicates:
        where = f"predicate {p.name}"
        if p.name in seen_preds:
            diags.append(TheoryDiagnostic("duplicate-predicate", where,
                                          f"predicate {p.name} declared twice"))
        seen_preds.add(p.name)
        for s in p.arg_sorts:
            if t.sort(s.name) != s:
                diags.append(TheoryDiagnostic(
                    "sort-mismatch", where,
                    f"predicate {p.name} uses sort {s.name} not declared by the theory"))

    defined: set[str] = set()
    for d in t.definitions:
        where = f"definition {d.head.name}"
        decl = t.predicate(d.head.name)
        if decl is None:
            diags.append(TheoryDiagnostic("undeclared-predicate", where,
                                          f"defined predicate {d.head.name} is not declared"))
        elif decl != d.head:
            diags.append(TheoryDiagnostic(
                "sort-mismatch", where,
                f"definition head of {d.head.name} disagrees with its declaration"))
        if d.head.name in defined:
            diags.append(TheoryDiagnostic("duplicate-definition", where,
                                          f"predicate {d.head.name} has two definitions"))
        defined.add(d.head.name)

        names = [p.name for p in d.params]
        if len(set(names)) != len(names):
            diags.append(TheoryDiagnostic("bad-definition", where,
                                          "definition parameters are not pairwise distinct"))
        if len(d.params) != d.head.arity:
            diags.append(TheoryDiagnostic(
                "bad-definition", where,
                f"{len(d.params)} parameter(s) for arity {d.head.arity}"))
        else:
            for param, sort in zip(d.params, d.head.arg_sorts):
                if param.sort != sort:
                    diags.append(TheoryDiagnostic(
                        "bad-definition", where,
                        f"parameter {param.name} has sort {param.sort.name}, "
                        f"expected {sort.name}"))
        scope = {p.name: p for p in d.params}
        diags.extend(_check_formula(d.body, t, scope, where))
        extra = {v.name for v in free_vars(d.body)} - set(names)
        if extra:
            diags.append(TheoryDiagnostic(
                "free-variable", where,
                f"definition body mentions non-parameter variable(s): "
                f"{', '.join(sorted(extra))}"))

    for i, axiom in enumerate(t.axioms, start=1):
        where = f"axiom {i}"
        diags.extend(_check_formula(axiom, t, {}, where))

    if t.goal is None:
        diags.append(TheoryDiagnostic("missing-goal", "goal", "theory declares no goal"))
    else:
        diags.extend(_check_formula(t.goal, t, {}, "goal"))

    deps = {d.head.name: frozenset(a.pred.name for a in iter_atoms(d.body))
            for d in t.definitions}
    for cycle in _definition_cycles(deps):
        diags.append(TheoryDiagnostic(
            "cyclic-definitions", f"definition {cycle[0]}",
            "definitions form a cycle: " + " -> ".join(cycle)))

    for name, tier in t.interest_overrides.items():
        where = f"interest {name}"
        if t.predicate(name) is None:
            diags.append(TheoryDiagnostic("bad-interest-override", where,
                                          f"interest override for undeclared predicate {name}"))
        if tier < 0:
            diags.append(TheoryDiagnostic("bad-interest-override", where,
                                          f"interest tier must be non-negative, got {tier}"))

    return diags


def _check_formula(f: Formula, t: Theory, scope: dict[str, Var],
                   where: str) -> list[TheoryDiagnostic]:
    diags: list[TheoryDiagnostic] = []

    def check_term(term: Term) -> None:
        if isinstance(term, Var):
            bound = scope.get(term.name)
            if bound is None:
                diags.append(TheoryDiagnostic(
                    "free-variable", where, f"variable {term.name} is not bound"))
            elif bound != term:
                diags.append(TheoryDiagnostic(
                    "sort-mismatch", where,
                    f"variable {term.name} used with sort {term.sort.name}, "
                    f"bound with sort {bound.sort.name}"))
        else:
            known = t.constant(term.name)
            if known is None:
                diags.append(TheoryDiagnostic(
                    "unknown-constant", where,
                    f"constant {term.name} belongs to no declared sort"))
            elif known != term:
                diags.append(TheoryDiagnostic(
                    "sort-mismatch", where,
                    f"constant {term.name} used with sort {term.sort.name}, "
                    f"declared in sort {known.sort.name}"))

    if isinstance(f, Atom):
        decl = t.predicate(f.pred.name)
        if decl is None:
            diags.append(TheoryDiagnostic(
                "undeclared-predicate", where,
                f"predicate {f.pred.name} is not declared"))
        elif decl != f.pred:
            diags.append(TheoryDiagnostic(
                "sort-mismatch", where,
                f"atom of {f.pred.name} disagrees with the declared signature"))
        for term in f.args:
            check_term(term)
    elif isinstance(f, Eq):
        check_term(f.lhs)
        check_term(f.rhs)
    elif isinstance(f, Not):
        diags.extend(_check_formula(f.body, t, scope, where))
    elif isinstance(f, _NARY):
        for item in f.items:
            diags.extend(_check_formula(item, t, scope, where))
    elif isinstance(f, _BINARY):
        diags.extend(_check_formula(f.lhs, t, scope, where))
        diags.extend(_check_formula(f.rhs, t, scope, where))
    elif isinstance(f, _QUANT):
        if t.sort(f.var.sort.name) != f.var.sort:
            diags.append(TheoryDiagnostic(
                "sort-mismatch", where,
                f"quantifier binds {f.var.name} over undeclared sort {f.var.sort.name}"))
        inner = dict(scope)
        inner[f.var.name] = f.var
        diags.extend(_check_formula(f.body, t, inner, where))
    else:
        raise TypeError(f"not a formula: {f!r}")
    return diags


def _definition_cycles(deps: dict[str, frozenset[str]]) -> list[list[str]]:
    colors: dict[str, int] = {}
    path: list[str] = []
    cycles: list[list[str]] = []

    def visit(n: str) -> None:
        colors[n] = 1
        path.append(n)
        for m in sorted(deps.get(n, ())):
            if m not in deps:
                continue
            state = colors.get(m, 0)
            if state == 0:
                visit(m)
            elif state == 1:
                cycles.append(path[path.index(m):] + [m])
        path.pop()
        colors[n] = 2

    for n in sorted(deps):
        if colors.get(n, 0) == 0:
            visit(n)
    return cycles
