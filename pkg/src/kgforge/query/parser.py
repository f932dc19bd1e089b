"""Recursive-descent parser for the pattern query language.

Grammar (linear paths of 1-3 nodes):

    query   := 'MATCH' pattern ('WHERE' expr)? 'RETURN' proj (',' proj)*
               ('ORDER' 'BY' ident)? ('LIMIT' int)?
    pattern := nodepat (edgepat nodepat){0,2}
    nodepat := '(' var (':' label)? ')'
    edgepat := '-[' var? (':' predicate)? ']->'
    expr    := term ('AND' term)*
    term    := string 'IN' var '.' prop
             | func '(' args ')' cmp number
             | 'SIZE' '(' 'intersect' '(' ref ',' ref ')' ')' cmp number
    proj    := (var '.' prop | 'TYPE' '(' var ')' | 'LABELS' '(' var ')')
               ('AS' alias)?

Built-in functions: u_fraction(x.Prop), symbol_fraction(x.Prop, "C").
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field

from ..errors import QuerySyntaxError, UnboundVariable

KEYWORDS = {"MATCH", "WHERE", "RETURN", "AND", "IN", "AS", "ORDER", "BY", "LIMIT", "SIZE"}

TOKEN_RE = re.compile(
    r"""
    (?P<ws>\s+)
  | (?P<arrow>\]->)
  | (?P<lbracket>-\[)
  | (?P<string>"(?:[^"\\]|\\.)*")
  | (?P<number>\d+\.\d+|\d+)
  | (?P<cmp><=|>=|<>|=|<|>)
  | (?P<ident>[A-Za-z_][A-Za-z0-9_]*)
  | (?P<punct>[():.,])
    """,
    re.VERBOSE,
)


@dataclass
class Token:
    kind: str
    text: str
    pos: int


def tokenize(text: str):
    tokens = []
    pos = 0
    while pos < len(text):
        m = TOKEN_RE.match(text, pos)
        if not m:
            raise QuerySyntaxError(pos, "a token", text[pos])
        pos = m.end()
        kind = m.lastgroup
        if kind == "ws":
            continue
        value = m.group()
        if kind == "ident" and value.upper() in KEYWORDS:
            tokens.append(Token(value.upper(), value, m.start()))
        else:
            tokens.append(Token(kind, value, m.start()))
    tokens.append(Token("eof", "", len(text)))
    return tokens


# -- AST ---------------------------------------------------------------

@dataclass
class NodeStep:
    var: str
    label: str | None = None


@dataclass
class EdgeStep:
    var: str | None = None
    predicate: str | None = None


@dataclass
class Membership:
    value: str
    var: str
    prop: str


@dataclass
class FuncCmp:
    func: str           # u_fraction | symbol_fraction
    var: str
    prop: str
    symbol: str | None  # for symbol_fraction
    op: str
    number: float


@dataclass
class SizeCmp:
    left: tuple         # (var, prop)
    right: tuple
    op: str
    number: float


@dataclass
class And:
    terms: list


@dataclass
class Projection:
    kind: str           # prop | type | labels
    var: str
    prop: str | None
    alias: str


@dataclass
class QuerySpec:
    nodes: list = field(default_factory=list)
    edges: list = field(default_factory=list)
    where: object = None
    projections: list = field(default_factory=list)
    order_by: str | None = None
    limit: int | None = None


def _unquote(raw: str) -> str:
    body = raw[1:-1]
    return body.replace('\\"', '"').replace("\\\\", "\\")


class Parser:
    def __init__(self, text: str):
        self.text = text
        self.tokens = tokenize(text)
        self.i = 0

    def peek(self) -> Token:
        return self.tokens[self.i]

    def next(self) -> Token:
        tok = self.tokens[self.i]
        self.i += 1
        return tok

    def expect(self, kind, text=None) -> Token:
        tok = self.peek()
        if tok.kind != kind or (text is not None and tok.text != text):
            raise QuerySyntaxError(tok.pos, text or kind, tok.text or "end of input")
        return self.next()

    def accept(self, kind, text=None):
        tok = self.peek()
        if tok.kind == kind and (text is None or tok.text == text):
            return self.next()
        return None

    # -- entry points --------------------------------------------------

    def parse_query(self) -> QuerySpec:
        spec = QuerySpec()
        self.expect("MATCH")
        spec.nodes.append(self.node_pattern())
        while self.peek().kind == "lbracket":
            if len(spec.nodes) == 3:
                tok = self.peek()
                raise QuerySyntaxError(tok.pos, "WHERE, RETURN", tok.text)
            spec.edges.append(self.edge_pattern())
            spec.nodes.append(self.node_pattern())
        if self.accept("WHERE"):
            spec.where = self.expression()
        self.expect("RETURN")
        spec.projections.append(self.projection())
        while self.accept("punct", ","):
            spec.projections.append(self.projection())
        if self.accept("ORDER"):
            self.expect("BY")
            spec.order_by = self.expect("ident").text
        if self.accept("LIMIT"):
            tok = self.expect("number")
            spec.limit = int(tok.text)
        self.expect("eof")
        self._check_bindings(spec)
        return spec

    def parse_expression(self):
        expr = self.expression()
        self.expect("eof")
        return expr

    # -- pattern -------------------------------------------------------

    def node_pattern(self) -> NodeStep:
        self.expect("punct", "(")
        var = self.expect("ident").text
        label = None
        if self.accept("punct", ":"):
            label = self.expect("ident").text
        self.expect("punct", ")")
        return NodeStep(var, label)

    def edge_pattern(self) -> EdgeStep:
        self.expect("lbracket")
        var = None
        predicate = None
        tok = self.accept("ident")
        if tok:
            var = tok.text
        if self.accept("punct", ":"):
            predicate = self.expect("ident").text
        self.expect("arrow")
        return EdgeStep(var, predicate)

    # -- expressions ---------------------------------------------------

    def expression(self):
        terms = [self.term()]
        while self.accept("AND"):
            terms.append(self.term())
        return terms[0] if len(terms) == 1 else And(terms)

    def term(self):
        tok = self.peek()
        if tok.kind == "string":
            value = _unquote(self.next().text)
            self.expect("IN")
            var, prop = self.prop_ref()
            return Membership(value, var, prop)
        if tok.kind == "SIZE":
            self.next()
            self.expect("punct", "(")
            self.expect("ident", "intersect")
            self.expect("punct", "(")
            left = self.prop_ref()
            self.expect("punct", ",")
            right = self.prop_ref()
            self.expect("punct", ")")
            self.expect("punct", ")")
            op = self.expect("cmp").text
            number = float(self.expect("number").text)
            return SizeCmp(left, right, op, number)
        if tok.kind == "ident" and tok.text in ("u_fraction", "symbol_fraction"):
            func = self.next().text
            self.expect("punct", "(")
            var, prop = self.prop_ref()
            symbol = None
            if func == "symbol_fraction":
                self.expect("punct", ",")
                symbol = _unquote(self.expect("string").text)
            self.expect("punct", ")")
            op = self.expect("cmp").text
            number = float(self.expect("number").text)
            return FuncCmp(func, var, prop, symbol, op, number)
        raise QuerySyntaxError(tok.pos, "a condition", tok.text or "end of input")

    def prop_ref(self):
        var = self.expect("ident").text
        self.expect("punct", ".")
        prop = self.expect("ident").text
        return var, prop

    # -- projections ---------------------------------------------------

    def projection(self) -> Projection:
        tok = self.peek()
        if tok.kind == "ident" and tok.text in ("TYPE", "LABELS"):
            func = self.next().text
            self.expect("punct", "(")
            var = self.expect("ident").text
            self.expect("punct", ")")
            proj = Projection(func.lower(), var, None, f"{func}({var})")
        else:
            var, prop = self.prop_ref()
            proj = Projection("prop", var, prop, f"{var}.{prop}")
        if self.accept("AS"):
            proj.alias = self.expect("ident").text
        return proj

    # -- binding check ---------------------------------------------------

    def _check_bindings(self, spec: QuerySpec):
        bound = {step.var for step in spec.nodes}
        bound |= {e.var for e in spec.edges if e.var}
        used = set()
        for proj in spec.projections:
            used.add(proj.var)
        for term in _iter_terms(spec.where):
            if isinstance(term, Membership):
                used.add(term.var)
            elif isinstance(term, FuncCmp):
                used.add(term.var)
            elif isinstance(term, SizeCmp):
                used.add(term.left[0])
                used.add(term.right[0])
        unbound = used - bound
        if unbound:
            raise UnboundVariable(", ".join(sorted(unbound)))


def _iter_terms(expr):
    if expr is None:
        return
    if isinstance(expr, And):
        for term in expr.terms:
            yield from _iter_terms(term)
    else:
        yield expr


def parse_query(text: str) -> QuerySpec:
    return Parser(text).parse_query()


def parse_filter(text: str):
    """Parse a bare WHERE-style expression (used by view property filters)."""
    return Parser(text).parse_expression()
