"""Recursive-descent parser for AMDL snippets.

Grammar (one statement per snippet, `;`-terminated):

    vardecl    := "var" NAME [ "{" quant ("," quant)* "}" ]
                  ( ">=" NUMBER | "<=" NUMBER )* [ "," ("integer"|"binary") ] ";"
    objective  := ("minimize"|"maximize") ":" linexpr ";"
    constraint := [ "forall" "(" quant ("," quant)* ")" ":" ]
                  [ "indicator" "(" ref "=" INT ")" ":" ]
                  linexpr ("<="|">="|"="|"==") linexpr ";"
    sos        := ("sos1"|"sos2") [ "(" quant ")" ] ":" ref ("," ref)* ";"
    quant      := NAME "in" NAME
    linexpr    := ["+"|"-"] item (("+"|"-") item)*
    item       := "sum" "(" quant ")" ( "(" linexpr ")" | term ) | term
    term       := factor ("*" factor)*        # factors: NUMBER | ref
    ref        := NAME [ "[" idx ("," idx)* "]" ]
    idx        := NAME [("+"|"-") INT] | INT
"""

from __future__ import annotations

import re
from dataclasses import dataclass

from ..errors import AmdlSyntaxError, NonlinearTerm
from .ast import (
    ConstraintStmt,
    IndexExpr,
    LinExpr,
    ObjectiveStmt,
    Quantifier,
    SosStmt,
    Statement,
    SumExpr,
    SymbolRef,
    Term,
    VarDecl,
)

_TOKEN_RE = re.compile(
    r"""
    (?P<ws>\s+)
  | (?P<number>\d+\.\d*|\.\d+|\d+)
  | (?P<name>[A-Za-z_][A-Za-z0-9_]*)
  | (?P<op><=|>=|==|[{}()\[\],;:*+\-=])
    """,
    re.VERBOSE,
)

KEYWORDS = {"var", "forall", "sum", "in", "minimize", "maximize",
            "integer", "binary", "sos1", "sos2", "indicator"}


@dataclass(frozen=True)
class Token:
    kind: str  # "number" | "name" | "op" | "eof"
    text: str
    line: int
    col: int


def tokenize(text: str) -> list[Token]:
    tokens: list[Token] = []
    line, col, pos = 1, 1, 0
    while pos < len(text):
        m = _TOKEN_RE.match(text, pos)
        if not m:
            raise AmdlSyntaxError(line, col, "a token", text[pos])
        kind = m.lastgroup or ""
        chunk = m.group()
        if kind != "ws":
            tokens.append(Token(kind, chunk, line, col))
        newlines = chunk.count("\n")
        if newlines:
            line += newlines
            col = len(chunk) - chunk.rfind("\n")
        else:
            col += len(chunk)
        pos = m.end()
    tokens.append(Token("eof", "", line, col))
    return tokens


class _Parser:
    def __init__(self, tokens: list[Token]):
        self.tokens = tokens
        self.pos = 0

    @property
    def cur(self) -> Token:
        return self.tokens[self.pos]

    def error(self, expected: str) -> AmdlSyntaxError:
        t = self.cur
        return AmdlSyntaxError(t.line, t.col, expected, t.text or "<end>")

    def accept(self, text: str) -> bool:
        if self.cur.text == text and self.cur.kind in ("op", "name"):
            self.pos += 1
            return True
        return False

    def expect(self, text: str) -> Token:
        if self.cur.text == text:
            tok = self.cur
            self.pos += 1
            return tok
        raise self.error(repr(text))

    def name(self, what: str = "identifier") -> str:
        if self.cur.kind == "name":
            tok = self.cur
            self.pos += 1
            return tok.text
        raise self.error(what)

    def number(self) -> float:
        if self.cur.kind == "number":
            tok = self.cur
            self.pos += 1
            return float(tok.text)
        raise self.error("number")

    # -- grammar --

    def statement(self) -> Statement:
        if self.cur.text == "var":
            stmt: Statement = self.vardecl()
        elif self.cur.text in ("minimize", "maximize"):
            stmt = self.objective()
        elif self.cur.text in ("sos1", "sos2"):
            stmt = self.sos()
        else:
            stmt = self.constraint()
        self.expect(";")
        if self.cur.kind != "eof":
            raise self.error("end of snippet")
        return stmt

    def quantifier(self) -> Quantifier:
        idx = self.name("index variable")
        self.expect("in")
        dim = self.name("dimension name")
        return Quantifier(idx, dim)

    def vardecl(self) -> VarDecl:
        self.expect("var")
        decl = VarDecl(name=self.name("variable name"))
        if self.accept("{"):
            decl.quantifiers.append(self.quantifier())
            while self.accept(","):
                if self.cur.text in ("integer", "binary"):
                    raise self.error("quantifier")
                decl.quantifiers.append(self.quantifier())
            self.expect("}")
        while self.cur.text in (">=", "<="):
            op = self.cur.text
            self.pos += 1
            sign = -1.0 if self.accept("-") else 1.0
            bound = sign * self.number()
            if op == ">=":
                decl.lb = bound
            else:
                decl.ub = bound
        if self.accept(","):
            if self.cur.text in ("integer", "binary"):
                decl.domain = self.cur.text
                self.pos += 1
            else:
                raise self.error("'integer' or 'binary'")
        return decl

    def objective(self) -> ObjectiveStmt:
        sense = "min" if self.cur.text == "minimize" else "max"
        self.pos += 1
        self.expect(":")
        return ObjectiveStmt(sense=sense, expr=self.linexpr())

    def sos(self) -> SosStmt:
        kind = self.cur.text
        self.pos += 1
        stmt = SosStmt(kind=kind)
        if self.accept("("):
            stmt.quantifier = self.quantifier()
            self.expect(")")
        self.expect(":")
        stmt.members.append(self.ref())
        while self.accept(","):
            stmt.members.append(self.ref())
        return stmt

    def constraint(self) -> ConstraintStmt:
        stmt = ConstraintStmt()
        if self.accept("forall"):
            self.expect("(")
            stmt.quantifiers.append(self.quantifier())
            while self.accept(","):
                stmt.quantifiers.append(self.quantifier())
            self.expect(")")
            self.expect(":")
        if self.accept("indicator"):
            self.expect("(")
            ref = self.ref()
            self.expect("=")
            value = int(self.number())
            if value not in (0, 1):
                raise self.error("indicator value 0 or 1")
            self.expect(")")
            self.expect(":")
            stmt.indicator = (ref, value)
        stmt.lhs = self.linexpr()
        if self.cur.text in ("<=", ">=", "=", "=="):
            stmt.sense = "=" if self.cur.text == "==" else self.cur.text
            self.pos += 1
        else:
            raise self.error("'<=', '>=' or '='")
        stmt.rhs = self.linexpr()
        return stmt

    def linexpr(self) -> LinExpr:
        expr = LinExpr()
        sign = 1.0
        if self.accept("-"):
            sign = -1.0
        else:
            self.accept("+")
        expr.items.append(self.item(sign))
        while self.cur.text in ("+", "-"):
            sign = 1.0 if self.cur.text == "+" else -1.0
            self.pos += 1
            expr.items.append(self.item(sign))
        return expr

    def item(self, sign: float) -> Term | SumExpr:
        if self.cur.text == "sum":
            self.pos += 1
            self.expect("(")
            quant = self.quantifier()
            self.expect(")")
            if self.accept("("):
                body = self.linexpr()
                self.expect(")")
            else:
                body = LinExpr(items=[self.term(1.0)])
            return SumExpr(sign=sign, index=quant.index, dim=quant.dim, body=body)
        return self.term(sign)

    def term(self, sign: float) -> Term:
        term = Term(sign=sign)
        self.factor(term)
        while self.accept("*"):
            self.factor(term)
        return term

    def factor(self, term: Term) -> None:
        if self.cur.kind == "number":
            term.number *= self.number()
        elif self.cur.kind == "name" and self.cur.text not in KEYWORDS:
            term.refs.append(self.ref())
        else:
            raise self.error("number or symbol reference")

    def ref(self) -> SymbolRef:
        symbol = self.name("symbol")
        indices: list[IndexExpr] = []
        if self.accept("["):
            indices.append(self.index_expr())
            while self.accept(","):
                indices.append(self.index_expr())
            self.expect("]")
        return SymbolRef(symbol=symbol, indices=tuple(indices))

    def index_expr(self) -> IndexExpr:
        if self.cur.kind == "number":
            return IndexExpr(var=None, offset=int(self.number()))
        var = self.name("index")
        offset = 0
        if self.cur.text in ("+", "-"):
            neg = self.cur.text == "-"
            self.pos += 1
            offset = int(self.number())
            if neg:
                offset = -offset
        return IndexExpr(var=var, offset=offset)


def _check_linearity(expr: LinExpr, var_symbols: set[str]) -> None:
    for item in expr.items:
        if isinstance(item, SumExpr):
            _check_linearity(item.body, var_symbols)
        else:
            var_refs = [r for r in item.refs if r.symbol in var_symbols]
            if len(var_refs) > 1:
                raise NonlinearTerm(
                    f"product of variables {var_refs[0].symbol} and {var_refs[1].symbol}"
                )


def parse_amdl(text: str, var_symbols: set[str] | None = None) -> Statement:
    """Parse one AMDL statement.

    When `var_symbols` is given, terms multiplying two known variables raise
    NonlinearTerm here; otherwise that check happens during expansion.
    """
    stmt = _Parser(tokenize(text)).statement()
    if var_symbols is not None:
        if isinstance(stmt, ConstraintStmt):
            _check_linearity(stmt.lhs, var_symbols)
            _check_linearity(stmt.rhs, var_symbols)
        elif isinstance(stmt, ObjectiveStmt):
            _check_linearity(stmt.expr, var_symbols)
    return stmt
