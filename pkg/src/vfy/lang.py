"""The `.vfy` modeling language: parser and pretty printer.

Statement forms::

    sort S = { c1, c2 }        # finite universe slice
    pred p(S1, S2)             # predicate declaration (parens optional when zero-ary)
    def p(x, y) := <formula>   # at most one definition per predicate
    axiom <formula>
    goal <formula>             # exactly one per model
    interest p = 3             # override the automatic interest tier

Formulas use ``!``, ``&``, ``|``, ``->``, ``<->``, ``=``, ``!=``,
``forall x: S . f`` and ``exists x: S . f``. Precedence, tightest first:
``!``, ``&``, ``|``, ``->`` (right-associative), ``<->``
(right-associative). A quantifier extends as far right as possible.
``a != b`` is sugar for ``!(a = b)``. Comments run from ``#`` to the end
of the line.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .core import (And, Atom, Const, Definition, Eq, Exists, Forall, Formula,
                   Iff, Implies, Literal, Not, Or, PredicateDecl, Sort, Theory,
                   Var, check_theory, free_vars)

_KEYWORDS = {"sort", "pred", "def", "axiom", "goal", "interest", "forall", "exists"}
_STATEMENT_KEYWORDS = {"sort", "pred", "def", "axiom", "goal", "interest"}


@dataclass(frozen=True)
class Diagnostic:
    """A positioned problem report; line and column are 1-based."""

    message: str
    line: int
    col: int

    def render(self, path: str = "<model>") -> str:
        return f"{path}:{self.line}:{self.col}: {self.message}"


class ModelError(Exception):
    """Raised when a model cannot be parsed or fails validation."""

    def __init__(self, diagnostics: list[Diagnostic]):
        self.diagnostics = list(diagnostics)
        super().__init__("; ".join(d.render() for d in self.diagnostics))


@dataclass
class SourceModel:
    """A parsed source file; spans map statement keys (for example
    ``definition safe`` or ``axiom 2``) to their (line, col) start."""

    path: str
    text: str
    spans: dict[str, tuple[int, int]] = field(default_factory=dict)


@dataclass(frozen=True)
class _Token:
    kind: str
    text: str
    line: int
    col: int


_PUNCT = {
    "<->": "DARROW", "->": "ARROW", ":=": "ASSIGN", "!=": "NEQ",
    "{": "LBRACE", "}": "RBRACE", "(": "LPAREN", ")": "RPAREN",
    ",": "COMMA", ".": "DOT", ":": "COLON", "=": "EQ", "!": "NOT",
    "&": "AND", "|": "OR",
}


def _lex(text: str) -> tuple[list[_Token], list[Diagnostic]]:
    tokens: list[_Token] = []
    diags: list[Diagnostic] = []
    line, col = 1, 1
    i = 0
    n = len(text)
    while i < n:
        ch = text[i]
        if ch == "\n":
            line += 1
            col = 1
            i += 1
            continue
        if ch in " \t\r":
            i += 1
            col += 1
            continue
        if ch == "#":
            while i < n and text[i] != "\n":
                i += 1
            continue
        if ch.isalpha() or ch == "_":
            j = i
            while j < n and (text[j].isalnum() or text[j] == "_"):
                j += 1
            word = text[i:j]
            kind = "KEYWORD" if word in _KEYWORDS else "IDENT"
            tokens.append(_Token(kind, word, line, col))
            col += j - i
            i = j
            continue
        if ch.isdigit():
            j = i
            while j < n and text[j].isdigit():
                j += 1
            tokens.append(_Token("INT", text[i:j], line, col))
            col += j - i
            i = j
            continue
        matched = False
        for lit in ("<->", "->", ":=", "!="):
            if text.startswith(lit, i):
                tokens.append(_Token(_PUNCT[lit], lit, line, col))
                i += len(lit)
                col += len(lit)
                matched = True
                break
        if matched:
            continue
        if ch in _PUNCT:
            tokens.append(_Token(_PUNCT[ch], ch, line, col))
            i += 1
            col += 1
            continue
        diags.append(Diagnostic(f"unexpected character {ch!r}", line, col))
        i += 1
        col += 1
    tokens.append(_Token("EOF", "", line, col))
    return tokens, diags


class _ParseError(Exception):
    def __init__(self, diag: Diagnostic):
        self.diag = diag
        super().__init__(diag.message)


class _Parser:
    def __init__(self, tokens: list[_Token]):
        self.tokens = tokens
        self.pos = 0
        self.sorts: dict[str, Sort] = {}
        self.sort_order: list[str] = []
        self.preds: dict[str, PredicateDecl] = {}
        self.pred_order: list[str] = []
        self.constants: dict[str, Sort] = {}

    def peek(self) -> _Token:
        return self.tokens[self.pos]

    def next(self) -> _Token:
        tok = self.tokens[self.pos]
        if tok.kind != "EOF":
            self.pos += 1
        return tok

    def err(self, message: str, tok: _Token | None = None) -> _ParseError:
        tok = tok or self.peek()
        return _ParseError(Diagnostic(message, tok.line, tok.col))

    def expect(self, kind: str, what: str) -> _Token:
        tok = self.peek()
        if tok.kind != kind:
            shown = tok.text or "end of input"
            raise self.err(f"expected {what}, found {shown!r}", tok)
        return self.next()

    def expect_ident(self, what: str) -> _Token:
        tok = self.peek()
        if tok.kind != "IDENT":
            shown = tok.text or "end of input"
            raise self.err(f"expected {what}, found {shown!r}", tok)
        return self.next()

    # -- statements -------------------------------------------------

    def sort_stmt(self) -> Sort:
        name = self.expect_ident("sort name")
        self.expect("EQ", "'='")
        self.expect("LBRACE", "'{'")
        constants = [self.expect_ident("constant name")]
        while self.peek().kind == "COMMA":
            self.next()
            constants.append(self.expect_ident("constant name"))
        self.expect("RBRACE", "'}'")
        if name.text in self.sorts:
            raise self.err(f"sort {name.text} already declared", name)
        for tok in constants:
            if tok.text in self.constants:
                raise self.err(
                    f"constant {tok.text} already belongs to sort "
                    f"{self.constants[tok.text].name}", tok)
        if len({tok.text for tok in constants}) != len(constants):
            raise self.err("sort repeats a constant", name)
        sort = Sort(name.text, tuple(tok.text for tok in constants))
        self.sorts[name.text] = sort
        self.sort_order.append(name.text)
        for tok in constants:
            self.constants[tok.text] = sort
        return sort

    def pred_stmt(self) -> PredicateDecl:
        name = self.expect_ident("predicate name")
        arg_sorts: list[Sort] = []
        if self.peek().kind == "LPAREN":
            self.next()
            if self.peek().kind != "RPAREN":
                arg_sorts.append(self.sort_ref())
                while self.peek().kind == "COMMA":
                    self.next()
                    arg_sorts.append(self.sort_ref())
            self.expect("RPAREN", "')'")
        if name.text in self.preds:
            raise self.err(f"predicate {name.text} already declared", name)
        decl = PredicateDecl(name.text, tuple(arg_sorts))
        self.preds[name.text] = decl
        self.pred_order.append(name.text)
        return decl

    def sort_ref(self) -> Sort:
        tok = self.expect_ident("sort name")
        sort = self.sorts.get(tok.text)
        if sort is None:
            raise self.err(f"unknown sort {tok.text}", tok)
        return sort

    def def_stmt(self) -> Definition:
        name = self.expect_ident("predicate name")
        decl = self.preds.get(name.text)
        if decl is None:
            raise self.err(f"definition for undeclared predicate {name.text}", name)
        params: list[Var] = []
        if self.peek().kind == "LPAREN":
            self.next()
            if self.peek().kind != "RPAREN":
                params.append(self.param(decl, len(params), name))
                while self.peek().kind == "COMMA":
                    self.next()
                    params.append(self.param(decl, len(params), name))
            self.expect("RPAREN", "')'")
        if len(params) != decl.arity:
            raise self.err(
                f"definition of {name.text} has {len(params)} parameter(s), "
                f"declaration has arity {decl.arity}", name)
        if len({p.name for p in params}) != len(params):
            raise self.err("definition parameters must be distinct", name)
        self.expect("ASSIGN", "':='")
        body = self.formula({p.name: p for p in params})
        return Definition(decl, tuple(params), body)

    def param(self, decl: PredicateDecl, index: int, head: _Token) -> Var:
        tok = self.expect_ident("parameter name")
        if index >= decl.arity:
            raise self.err(
                f"definition of {decl.name} has more parameters than "
                f"the declared arity {decl.arity}", tok)
        return Var(tok.text, decl.arg_sorts[index])

    def interest_stmt(self) -> tuple[str, int]:
        name = self.expect_ident("predicate name")
        if name.text not in self.preds:
            raise self.err(f"interest override for undeclared predicate {name.text}", name)
        self.expect("EQ", "'='")
        value = self.expect("INT", "a non-negative integer")
        return name.text, int(value.text)

    # -- formulas ---------------------------------------------------

    def formula(self, scope: dict[str, Var]) -> Formula:
        return self.iff(scope)

    def iff(self, scope) -> Formula:
        lhs = self.implies(scope)
        if self.peek().kind == "DARROW":
            self.next()
            return Iff(lhs, self.iff(scope))
        return lhs

    def implies(self, scope) -> Formula:
        lhs = self.disjunction(scope)
        if self.peek().kind == "ARROW":
            self.next()
            return Implies(lhs, self.implies(scope))
        return lhs

    def disjunction(self, scope) -> Formula:
        parts = [self.conjunction(scope)]
        while self.peek().kind == "OR":
            self.next()
            parts.append(self.conjunction(scope))
        return parts[0] if len(parts) == 1 else Or(tuple(parts))

    def conjunction(self, scope) -> Formula:
        parts = [self.unary(scope)]
        while self.peek().kind == "AND":
            self.next()
            parts.append(self.unary(scope))
        return parts[0] if len(parts) == 1 else And(tuple(parts))

    def unary(self, scope) -> Formula:
        tok = self.peek()
        if tok.kind == "NOT":
            self.next()
            return Not(self.unary(scope))
        if tok.kind == "KEYWORD" and tok.text in ("forall", "exists"):
            self.next()
            name = self.expect_ident("variable name")
            self.expect("COLON", "':'")
            sort = self.sort_ref()
            self.expect("DOT", "'.'")
            var = Var(name.text, sort)
            inner = dict(scope)
            inner[name.text] = var
            body = self.iff(inner)
            return Forall(var, body) if tok.text == "forall" else Exists(var, body)
        return self.primary(scope)

    def primary(self, scope) -> Formula:
        tok = self.peek()
        if tok.kind == "LPAREN":
            self.next()
            inner = self.iff(scope)
            self.expect("RPAREN", "')'")
            return inner
        if tok.kind != "IDENT":
            shown = tok.text or "end of input"
            raise self.err(f"expected a formula, found {shown!r}", tok)
        name = self.next()
        after = self.peek()
        if after.kind == "LPAREN":
            return self.atom_with_args(name, scope)
        if after.kind in ("EQ", "NEQ"):
            self.next()
            lhs = self.term(name, scope)
            rhs_tok = self.expect_ident("a constant or variable")
            rhs = self.term(rhs_tok, scope)
            if lhs.sort != rhs.sort:
                raise self.err(
                    f"equality operands have different sorts "
                    f"({lhs.sort.name} vs {rhs.sort.name})", rhs_tok)
            eq = Eq(lhs, rhs)
            return eq if after.kind == "EQ" else Not(eq)
        decl = self.preds.get(name.text)
        if decl is None:
            raise self.err(f"unknown predicate {name.text}", name)
        if decl.arity != 0:
            raise self.err(
                f"predicate {name.text} takes {decl.arity} argument(s)", name)
        return Atom(decl, ())

    def atom_with_args(self, name: _Token, scope) -> Formula:
        decl = self.preds.get(name.text)
        if decl is None:
            raise self.err(f"unknown predicate {name.text}", name)
        self.expect("LPAREN", "'('")
        args: list = []
        arg_toks: list[_Token] = []
        if self.peek().kind != "RPAREN":
            arg_toks.append(self.expect_ident("a constant or variable"))
            args.append(self.term(arg_toks[-1], scope))
            while self.peek().kind == "COMMA":
                self.next()
                arg_toks.append(self.expect_ident("a constant or variable"))
                args.append(self.term(arg_toks[-1], scope))
        self.expect("RPAREN", "')'")
        if len(args) != decl.arity:
            raise self.err(
                f"predicate {name.text} takes {decl.arity} argument(s), "
                f"got {len(args)}", name)
        for term, sort, tok in zip(args, decl.arg_sorts, arg_toks):
            if term.sort != sort:
                raise self.err(
                    f"argument {tok.text} has sort {term.sort.name}, "
                    f"{name.text} expects {sort.name}", tok)
        return Atom(decl, tuple(args))

    def term(self, tok: _Token, scope):
        var = scope.get(tok.text)
        if var is not None:
            return var
        sort = self.constants.get(tok.text)
        if sort is not None:
            return Const(tok.text, sort)
        raise self.err(f"unknown constant or variable {tok.text}", tok)


def parse_model(text: str, path: str = "<model>") -> Theory:
    theory, _ = parse_model_with_source(text, path)
    return theory


def parse_model_with_source(text: str, path: str = "<model>") -> tuple[Theory, SourceModel]:
    """Parse a model; raises ModelError carrying positioned diagnostics.

    Parsing recovers at statement boundaries so several problems can be
    reported at once. The returned theory always passes check_theory.
    """
    tokens, diags = _lex(text)
    source = SourceModel(path, text)
    parser = _Parser(tokens)
    definitions: list[Definition] = []
    axioms: list[Formula] = []
    goal: Formula | None = None
    overrides: dict[str, int] = {}
    axiom_count = 0

    def sync() -> None:
        while True:
            tok = parser.peek()
            if tok.kind == "EOF":
                return
            if tok.kind == "KEYWORD" and tok.text in _STATEMENT_KEYWORDS:
                return
            parser.next()

    while parser.peek().kind != "EOF":
        tok = parser.peek()
        if tok.kind != "KEYWORD" or tok.text not in _STATEMENT_KEYWORDS:
            shown = tok.text or "end of input"
            diags.append(Diagnostic(
                f"expected a statement (sort/pred/def/axiom/goal/interest), "
                f"found {shown!r}", tok.line, tok.col))
            parser.next()
            sync()
            continue
        parser.next()
        try:
            if tok.text == "sort":
                sort = parser.sort_stmt()
                source.spans[f"sort {sort.name}"] = (tok.line, tok.col)
            elif tok.text == "pred":
                decl = parser.pred_stmt()
                source.spans[f"predicate {decl.name}"] = (tok.line, tok.col)
            elif tok.text == "def":
                d = parser.def_stmt()
                definitions.append(d)
                source.spans.setdefault(f"definition {d.head.name}", (tok.line, tok.col))
            elif tok.text == "axiom":
                axioms.append(parser.formula({}))
                axiom_count += 1
                source.spans[f"axiom {axiom_count}"] = (tok.line, tok.col)
            elif tok.text == "goal":
                if goal is not None:
                    diags.append(Diagnostic("model already has a goal", tok.line, tok.col))
                    parser.formula({})
                else:
                    goal = parser.formula({})
                    source.spans["goal"] = (tok.line, tok.col)
            elif tok.text == "interest":
                name, tier = parser.interest_stmt()
                overrides[name] = tier
                source.spans[f"interest {name}"] = (tok.line, tok.col)
        except _ParseError as e:
            diags.append(e.diag)
            sync()

    if goal is None and not diags:
        diags.append(Diagnostic("model declares no goal", 1, 1))
    if diags:
        raise ModelError(diags)

    theory = Theory(
        sorts=tuple(parser.sorts[n] for n in parser.sort_order),
        predicates=tuple(parser.preds[n] for n in parser.pred_order),
        definitions=tuple(definitions),
        axioms=tuple(axioms),
        goal=goal,
        interest_overrides=overrides,
    )
    for diag in check_theory(theory):
        line, col = source.spans.get(diag.where, (1, 1))
        diags.append(Diagnostic(f"{diag.where}: {diag.message}", line, col))
    if diags:
        raise ModelError(diags)
    return theory, source


def parse_formula(text: str, theory: Theory, require_closed: bool = True) -> Formula:
    """Parse a standalone formula in the context of a theory's declarations."""
    tokens, diags = _lex(text)
    if diags:
        raise ModelError(diags)
    parser = _Parser(tokens)
    parser.sorts = {s.name: s for s in theory.sorts}
    parser.sort_order = [s.name for s in theory.sorts]
    parser.preds = {p.name: p for p in theory.predicates}
    parser.pred_order = [p.name for p in theory.predicates]
    parser.constants = {c: s for s in theory.sorts for c in s.constants}
    try:
        f = parser.formula({})
        tok = parser.peek()
        if tok.kind != "EOF":
            raise parser.err(f"trailing input after formula: {tok.text!r}", tok)
    except _ParseError as e:
        raise ModelError([e.diag]) from None
    if require_closed:
        stray = free_vars(f)
        if stray:
            names = ", ".join(sorted(v.name for v in stray))
            raise ModelError([Diagnostic(f"formula is not closed: {names}", 1, 1)])
    return f


def parse_literal(text: str, theory: Theory) -> Literal:
    """Parse a ground literal such as ``p(a, b)`` or ``!unoccupied(rt2131)``."""
    f = parse_formula(text, theory)
    sign = True
    if isinstance(f, Not):
        sign = False
        f = f.body
    if not isinstance(f, (Atom, Eq)):
        raise ModelError([Diagnostic(
            "expected a literal: an optionally negated atom or equality", 1, 1)])
    return Literal(sign, f)


# -- printing -------------------------------------------------------

_PREC_IFF = 1
_PREC_IMPLIES = 2
_PREC_OR = 3
_PREC_AND = 4
_PREC_EQ = 5
_PREC_NOT = 6
_PREC_ATOM = 7


def print_formula(f: Formula) -> str:
    """Render with minimal parentheses; parse_formula round-trips the result."""
    return _pf(f, 0, True)


def _pf(f: Formula, min_prec: int, tail: bool) -> str:
    if isinstance(f, Atom):
        if not f.args:
            return f.pred.name
        return f"{f.pred.name}({', '.join(t.name for t in f.args)})"
    if isinstance(f, Eq):
        s = f"{f.lhs.name} = {f.rhs.name}"
        return f"({s})" if _PREC_EQ < min_prec else s
    if isinstance(f, Not):
        if isinstance(f.body, Eq):
            s = f"{f.body.lhs.name} != {f.body.rhs.name}"
            return f"({s})" if _PREC_EQ < min_prec else s
        return "!" + _pf(f.body, _PREC_NOT, False)
    if isinstance(f, And):
        parts = [_pf(item, _PREC_AND + 1, False) for item in f.items[:-1]]
        parts.append(_pf(f.items[-1], _PREC_AND + 1, tail))
        s = " & ".join(parts)
        return f"({s})" if _PREC_AND < min_prec else s
    if isinstance(f, Or):
        parts = [_pf(item, _PREC_OR + 1, False) for item in f.items[:-1]]
        parts.append(_pf(f.items[-1], _PREC_OR + 1, tail))
        s = " | ".join(parts)
        return f"({s})" if _PREC_OR < min_prec else s
    if isinstance(f, Implies):
        s = _pf(f.lhs, _PREC_IMPLIES + 1, False) + " -> " + _pf(f.rhs, _PREC_IMPLIES, tail)
        return f"({s})" if _PREC_IMPLIES < min_prec else s
    if isinstance(f, Iff):
        s = _pf(f.lhs, _PREC_IFF + 1, False) + " <-> " + _pf(f.rhs, _PREC_IFF, tail)
        return f"({s})" if _PREC_IFF < min_prec else s
    if isinstance(f, (Forall, Exists)):
        word = "forall" if isinstance(f, Forall) else "exists"
        s = f"{word} {f.var.name}: {f.var.sort.name} . " + _pf(f.body, 0, True)
        if min_prec > 0 and not tail:
            return f"({s})"
        return s
    raise TypeError(f"not a formula: {f!r}")


def print_literal(lit: Literal) -> str:
    return print_formula(lit.formula())


def print_theory(t: Theory) -> str:
    """Render a theory back to model syntax; parse_model round-trips it."""
    lines: list[str] = []
    for s in t.sorts:
        lines.append(f"sort {s.name} = {{ {', '.join(s.constants)} }}")
    for p in t.predicates:
        if p.arity:
            lines.append(f"pred {p.name}({', '.join(s.name for s in p.arg_sorts)})")
        else:
            lines.append(f"pred {p.name}")
    for name, tier in t.interest_overrides.items():
        lines.append(f"interest {name} = {tier}")
    for d in t.definitions:
        if d.params:
            head = f"{d.head.name}({', '.join(p.name for p in d.params)})"
        else:
            head = d.head.name
        lines.append(f"def {head} := {print_formula(d.body)}")
    for axiom in t.axioms:
        lines.append(f"axiom {print_formula(axiom)}")
    lines.append(f"goal {print_formula(t.goal)}")
    return "\n".join(lines) + "\n"
