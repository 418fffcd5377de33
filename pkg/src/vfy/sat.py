"""Ground satisfiability: definitional CNF transformation, a DPLL solver
with unit propagation, a brute-force oracle, DIMACS export, and the
verification driver that searches for a counterexample to a theory's goal.
"""

from __future__ import annotations

import itertools
from collections import deque
from dataclasses import dataclass

from .core import (And, Atom, Eq, Formula, Interpretation, Not, Theory,
                   definition_biconditional)
from .ground import DEFAULT_MAX_GROUND_NODES, ground
from .lang import print_formula

BRUTE_VAR_LIMIT = 24


class SolverLimitError(RuntimeError):
    """A solver resource guard was exceeded."""


@dataclass
class CnfProblem:
    """Clauses over integer literals; sign is polarity.

    Variables 1..n_original stand for the ground atoms of the source
    formula (atom_vars is that bijection); higher indices are auxiliary
    variables introduced by the definitional transformation.
    """

    var_count: int
    clauses: list[list[int]]
    atom_vars: dict[Atom, int]
    n_original: int

    def is_original(self, var: int) -> bool:
        return 1 <= var <= self.n_original


@dataclass
class SatResult:
    satisfiable: bool
    assignment: dict[int, bool] | None = None


def _collect_atoms(f: Formula, seen: dict[Atom, int]) -> None:
    if isinstance(f, Atom):
        if f not in seen:
            seen[f] = len(seen) + 1
    elif isinstance(f, Eq):
        pass
    elif isinstance(f, Not):
        _collect_atoms(f.body, seen)
    elif isinstance(f, And):
        for item in f.items:
            _collect_atoms(item, seen)
    else:
        raise ValueError(
            "CNF transformation expects ground normal form "
            "(atoms, equalities, negation, conjunction)")


def _fold(f: Formula):
    """Evaluate equalities structurally; simplify the boolean skeleton."""
    if isinstance(f, Atom):
        return f
    if isinstance(f, Eq):
        return f.lhs == f.rhs
    if isinstance(f, Not):
        body = _fold(f.body)
        if isinstance(body, bool):
            return not body
        return Not(body)
    if isinstance(f, And):
        kept = []
        for item in f.items:
            folded = _fold(item)
            if folded is False:
                return False
            if folded is True:
                continue
            kept.append(folded)
        if not kept:
            return True
        if len(kept) == 1:
            return kept[0]
        return And(tuple(kept))
    raise ValueError("CNF transformation expects ground normal form")


def to_cnf(g: Formula) -> CnfProblem:
    """Definitional CNF, equisatisfiable with the ground formula.

    A total CNF assignment satisfies the clauses iff its restriction to
    the original atoms satisfies the source formula (atoms pruned by
    equality folding are unconstrained).
    """
    atoms: dict[Atom, int] = {}
    _collect_atoms(g, atoms)
    n_original = len(atoms)
    folded = _fold(g)
    if folded is True:
        return CnfProblem(n_original, [], atoms, n_original)
    if folded is False:
        return CnfProblem(n_original, [[]], atoms, n_original)

    clauses: list[list[int]] = []
    counter = [n_original]

    def enc(f: Formula) -> int:
        if isinstance(f, Atom):
            return atoms[f]
        if isinstance(f, Not):
            return -enc(f.body)
        assert isinstance(f, And)
        lits = [enc(item) for item in f.items]
        counter[0] += 1
        aux = counter[0]
        for lit in lits:
            clauses.append([-aux, lit])
        clauses.append([aux] + [-lit for lit in lits])
        return aux

    def assert_true(f: Formula) -> None:
        # Top-level conjunctions become one unit assertion per conjunct.
        if isinstance(f, And):
            for item in f.items:
                assert_true(item)
        else:
            clauses.append([enc(f)])

    assert_true(folded)
    return CnfProblem(counter[0], clauses, atoms, n_original)


def solve(cnf: CnfProblem, engine: str = "dpll") -> SatResult:
    """Decide the CNF; `dpll` propagates units and backtracks
    chronologically, branching lowest variable first with the false
    branch first; `brute` enumerates every assignment (at most
    BRUTE_VAR_LIMIT variables)."""
    if engine == "dpll":
        return _solve_dpll(cnf.var_count, cnf.clauses)
    if engine == "brute":
        return _solve_brute(cnf.var_count, cnf.clauses)
    raise ValueError(f"unknown engine {engine!r}")


def _solve_brute(var_count: int, clauses: list[list[int]]) -> SatResult:
    if var_count > BRUTE_VAR_LIMIT:
        raise SolverLimitError(
            f"brute-force enumeration limited to {BRUTE_VAR_LIMIT} variables, "
            f"got {var_count}")
    for bits in itertools.product((False, True), repeat=var_count):
        if all(any(bits[abs(l) - 1] == (l > 0) for l in clause) for clause in clauses):
            return SatResult(True, {i + 1: bits[i] for i in range(var_count)})
    return SatResult(False)


def _solve_dpll(var_count: int, clauses: list[list[int]]) -> SatResult:
    if any(not clause for clause in clauses):
        return SatResult(False)

    m = len(clauses)
    pos: list[list[int]] = [[] for _ in range(var_count + 1)]
    neg: list[list[int]] = [[] for _ in range(var_count + 1)]
    for ci, clause in enumerate(clauses):
        for lit in clause:
            (pos if lit > 0 else neg)[abs(lit)].append(ci)

    unassigned = [len(clause) for clause in clauses]
    sat_at = [-1] * m                      # trail length when satisfied
    assign: list[bool | None] = [None] * (var_count + 1)
    trail: list[int] = []
    pending: deque[int] = deque()          # clause indices that may be unit

    def set_var(v: int, value: bool) -> bool:
        assign[v] = value
        trail.append(v)
        depth = len(trail)
        for ci in (pos[v] if value else neg[v]):
            if sat_at[ci] < 0:
                sat_at[ci] = depth
        conflict = False
        for ci in (neg[v] if value else pos[v]):
            unassigned[ci] -= 1
            if sat_at[ci] < 0:
                if unassigned[ci] == 0:
                    conflict = True
                elif unassigned[ci] == 1:
                    pending.append(ci)
        return conflict

    def propagate() -> bool:
        while pending:
            ci = pending.popleft()
            if sat_at[ci] >= 0:
                continue
            unit = 0
            for lit in clauses[ci]:
                if assign[abs(lit)] is None:
                    unit = lit
                    break
            if unit == 0:
                return True
            if set_var(abs(unit), unit > 0):
                return True
        return False

    def backtrack(to_len: int) -> None:
        while len(trail) > to_len:
            depth = len(trail)
            v = trail.pop()
            value = assign[v]
            assign[v] = None
            for ci in (neg[v] if value else pos[v]):
                unassigned[ci] += 1
            for ci in (pos[v] if value else neg[v]):
                if sat_at[ci] >= depth:
                    sat_at[ci] = -1
        pending.clear()

    for ci, clause in enumerate(clauses):
        if len(clause) == 1:
            pending.append(ci)
    if propagate():
        return SatResult(False)

    decisions: list[list] = []             # [var, trail length before, flipped]
    while True:
        v = 0
        for i in range(1, var_count + 1):
            if assign[i] is None:
                v = i
                break
        if v == 0:
            return SatResult(True, {i: bool(assign[i]) for i in range(1, var_count + 1)})
        decisions.append([v, len(trail), False])
        conflict = set_var(v, False) or propagate()
        while conflict:
            while decisions and decisions[-1][2]:
                d = decisions.pop()
                backtrack(d[1])
            if not decisions:
                return SatResult(False)
            d = decisions[-1]
            backtrack(d[1])
            d[2] = True
            conflict = set_var(d[0], True) or propagate()


def to_dimacs(cnf: CnfProblem) -> str:
    """Standard DIMACS text; comments record the original atom mapping."""
    lines = [f"c {v} {print_formula(atom)}" for atom, v in cnf.atom_vars.items()]
    lines.append(f"p cnf {cnf.var_count} {len(cnf.clauses)}")
    for clause in cnf.clauses:
        lines.append(" ".join(str(l) for l in clause) + " 0")
    return "\n".join(lines) + "\n"


def verification_formula(t: Theory) -> Formula:
    """The refutation target: axioms, definitions read as biconditionals,
    and the negated goal, as one conjunction."""
    parts: list[Formula] = list(t.axioms)
    parts.extend(definition_biconditional(d) for d in t.definitions)
    parts.append(Not(t.goal))
    return parts[0] if len(parts) == 1 else And(tuple(parts))


def find_counterexample(t: Theory, engine: str = "dpll",
                        max_ground_nodes: int = DEFAULT_MAX_GROUND_NODES,
                        ) -> Interpretation | None:
    """Search for an interpretation that satisfies the axioms and
    definitions but refutes the goal. None means the goal is proved."""
    g = ground(verification_formula(t), max_ground_nodes)
    cnf = to_cnf(g)
    result = solve(cnf, engine)
    if not result.satisfiable:
        return None
    assert result.assignment is not None
    true_atoms = frozenset(atom for atom, var in cnf.atom_vars.items()
                           if result.assignment.get(var, False))
    return Interpretation(true_atoms)
