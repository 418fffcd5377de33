"""Finite-model verification with human-oriented failure explanations.

Models declare finite sorts, predicates, definitions, axioms and one
goal. Verification reduces the goal to propositional satisfiability over
the finite universe; a satisfying assignment of the axioms, the
definitions and the negated goal is a counterexample. Counterexamples
are then explained two ways: an interest-guided tree of literals that
unfolds definitions down to raw inputs, and provenance sets that list
which formulas force a chosen literal to hold.
"""

from .core import (And, Atom, Const, Definition, Eq, Exists, Forall, Formula,
                   Iff, Implies, Interpretation, Literal, Not, Or,
                   PredicateDecl, Sort, SortError, Term, Theory,
                   TheoryDiagnostic, Var, check_theory,
                   definition_biconditional, free_vars, instantiate_definition,
                   is_closed, is_ground, node_count, strip_double_negations,
                   substitute)
from .explain import (Explanation, ExplanationTree, InterestMap, TreeNode,
                      assign_interest, build_tree, explain)
from .ground import (DEFAULT_MAX_GROUND_NODES, GroundingLimitError, evaluate,
                     ground, rewrite_step)
from .lang import (Diagnostic, ModelError, SourceModel, parse_formula,
                   parse_literal, parse_model, parse_model_with_source,
                   print_formula, print_literal, print_theory)
from .provenance import (EnumerationLimitError, ProvenanceSet,
                         check_provenance, cross_union, l_alternate,
                         provenances, prune_seen, theory_formulas)
from .sat import (BRUTE_VAR_LIMIT, CnfProblem, SatResult, SolverLimitError,
                  find_counterexample, solve, to_cnf, to_dimacs,
                  verification_formula)

__version__ = "0.1.0"

__all__ = [
    "And", "Atom", "Const", "Definition", "Eq", "Exists", "Forall", "Formula",
    "Iff", "Implies", "Interpretation", "Literal", "Not", "Or",
    "PredicateDecl", "Sort", "SortError", "Term", "Theory", "TheoryDiagnostic",
    "Var", "check_theory", "definition_biconditional", "free_vars",
    "instantiate_definition", "is_closed", "is_ground", "node_count",
    "strip_double_negations", "substitute",
    "Explanation", "ExplanationTree", "InterestMap", "TreeNode",
    "assign_interest", "build_tree", "explain",
    "DEFAULT_MAX_GROUND_NODES", "GroundingLimitError", "evaluate", "ground",
    "rewrite_step",
    "Diagnostic", "ModelError", "SourceModel", "parse_formula",
    "parse_literal", "parse_model", "parse_model_with_source",
    "print_formula", "print_literal", "print_theory",
    "EnumerationLimitError", "ProvenanceSet", "check_provenance",
    "cross_union", "l_alternate", "provenances", "prune_seen",
    "theory_formulas",
    "BRUTE_VAR_LIMIT", "CnfProblem", "SatResult", "SolverLimitError",
    "find_counterexample", "solve", "to_cnf", "to_dimacs",
    "verification_formula",
]
