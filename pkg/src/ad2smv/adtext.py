"""Parser and printer for the textual activity-diagram language.

One statement per declaration, `#` line comments, `;` terminators:

    activity controlledLoop {
      input project : {long, short} ;
      local iterations : 0 .. 4 init 0 ;
      initial start ;
      action work "work" { iterations := iterations + 1 ; } ;
      decision d ;
      edge d -> work [ iterations < 3 ] ;
      ...
    }

Declaration order is preserved and meaningful: it drives the canonical
node numbering and the emission order of the generated state machine.
"""

from __future__ import annotations

from dataclasses import dataclass

from .model import (
    ActivityDiagram,
    And,
    Arith,
    BoolConst,
    Cmp,
    EnumDomain,
    Expr,
    IntConst,
    Node,
    Not,
    Or,
    RangeDomain,
    SymConst,
    Transition,
    TRUE,
    Value,
    Var,
    VariableDecl,
)

KEYWORDS = frozenset(
    {
        "activity",
        "input",
        "local",
        "init",
        "initial",
        "final",
        "action",
        "decision",
        "merge",
        "fork",
        "join",
        "edge",
        "true",
        "false",
    }
)

_PUNCT = ("->", ":=", "..", "!=", "<=", ">=", "{", "}", "(", ")", "[", "]",
          ";", ":", ",", "=", "<", ">", "+", "-", "&", "|", "!")


@dataclass(frozen=True)
class SourceSpan:
    begin: int
    end: int
    line: int
    column: int

    def __post_init__(self) -> None:
        if self.begin > self.end:
            raise ValueError("span begin after end")


@dataclass(frozen=True)
class ParseError:
    message: str
    span: SourceSpan

    def __str__(self) -> str:
        return f"{self.span.line}:{self.span.column}: {self.message}"


class AdSyntaxError(Exception):
    """Raised by parse_ad; carries all collected ParseError records."""

    def __init__(self, errors: list[ParseError]):
        super().__init__("; ".join(str(e) for e in errors))
        self.errors = errors


@dataclass(frozen=True)
class _Token:
    kind: str  # IDENT, INT, STRING, punctuation text, or EOF
    text: str
    span: SourceSpan


def _lex(text: str) -> list[_Token]:
    tokens: list[_Token] = []
    i, line, col = 0, 1, 1
    n = len(text)

    def span(begin: int, end: int, bline: int, bcol: int) -> SourceSpan:
        return SourceSpan(begin, end, bline, bcol)

    while i < n:
        c = text[i]
        if c == "\n":
            i += 1
            line += 1
            col = 1
            continue
        if c in " \t\r":
            i += 1
            col += 1
            continue
        if c == "#":
            while i < n and text[i] != "\n":
                i += 1
            continue
        begin, bline, bcol = i, line, col
        if c == '"':
            i += 1
            col += 1
            chars: list[str] = []
            while i < n and text[i] != '"':
                if text[i] == "\n":
                    raise AdSyntaxError(
                        [ParseError("unterminated string", span(begin, i, bline, bcol))]
                    )
                chars.append(text[i])
                i += 1
                col += 1
            if i >= n:
                raise AdSyntaxError(
                    [ParseError("unterminated string", span(begin, i, bline, bcol))]
                )
            i += 1
            col += 1
            tokens.append(_Token("STRING", "".join(chars), span(begin, i, bline, bcol)))
            continue
        if c.isdigit():
            j = i
            while j < n and text[j].isdigit():
                j += 1
            tokens.append(_Token("INT", text[i:j], span(begin, j, bline, bcol)))
            col += j - i
            i = j
            continue
        if c.isalpha() or c == "_":
            j = i
            while j < n and (text[j].isalnum() or text[j] == "_"):
                j += 1
            tokens.append(_Token("IDENT", text[i:j], span(begin, j, bline, bcol)))
            col += j - i
            i = j
            continue
        for p in _PUNCT:
            if text.startswith(p, i):
                tokens.append(_Token(p, p, span(begin, i + len(p), bline, bcol)))
                i += len(p)
                col += len(p)
                break
        else:
            raise AdSyntaxError(
                [ParseError(f"unexpected character {c!r}", span(begin, i + 1, bline, bcol))]
            )
    tokens.append(_Token("EOF", "", span(n, n, line, col)))
    return tokens


class _Parser:
    def __init__(self, tokens: list[_Token]):
        self.tokens = tokens
        self.pos = 0
        self.errors: list[ParseError] = []

    def peek(self) -> _Token:
        return self.tokens[self.pos]

    def advance(self) -> _Token:
        tok = self.tokens[self.pos]
        if tok.kind != "EOF":
            self.pos += 1
        return tok

    def fail(self, message: str) -> AdSyntaxError:
        self.errors.append(ParseError(message, self.peek().span))
        return AdSyntaxError(self.errors)

    def expect(self, kind: str) -> _Token:
        tok = self.peek()
        if tok.kind != kind:
            raise self.fail(f"expected {kind}, found {tok.text or tok.kind!r}")
        return self.advance()

    def expect_ident(self) -> _Token:
        tok = self.peek()
        if tok.kind != "IDENT" or tok.text in KEYWORDS:
            raise self.fail(f"expected identifier, found {tok.text or tok.kind!r}")
        return self.advance()

    def at_keyword(self, word: str) -> bool:
        tok = self.peek()
        return tok.kind == "IDENT" and tok.text == word

    def expect_keyword(self, word: str) -> _Token:
        if not self.at_keyword(word):
            raise self.fail(f"expected {word!r}, found {self.peek().text or 'end of input'!r}")
        return self.advance()

    # -- grammar ----------------------------------------------------------

    def activity(self) -> ActivityDiagram:
        self.expect_keyword("activity")
        name = self.expect_ident().text
        self.expect("{")
        vars_: list[VariableDecl] = []
        nodes: list[Node] = []
        edges: list[tuple[_Token, _Token, Expr]] = []
        while not self.peek().kind == "}":
            tok = self.peek()
            if tok.kind == "EOF":
                raise self.fail("unterminated activity block")
            if tok.kind != "IDENT":
                raise self.fail(f"expected a declaration, found {tok.text!r}")
            word = tok.text
            if word in ("input", "local"):
                vars_.append(self.var_decl())
            elif word == "action":
                nodes.append(self.action_decl())
            elif word in ("initial", "final", "decision", "merge", "fork", "join"):
                self.advance()
                ident = self.expect_ident()
                self.expect(";")
                nodes.append(Node(ident.text, word))
            elif word == "edge":
                edges.append(self.edge_decl())
            else:
                raise self.fail(f"unknown declaration {word!r}")
        self.expect("}")
        if self.peek().kind != "EOF":
            raise self.fail("trailing input after activity block")
        return self.assemble(name, vars_, nodes, edges)

    def var_decl(self) -> VariableDecl:
        kind = self.advance().text  # input | local
        name_tok = self.expect_ident()
        self.expect(":")
        domain = self.domain()
        init: Value | None = None
        if self.at_keyword("init"):
            init_tok = self.advance()
            if kind == "input":
                self.errors.append(
                    ParseError("input variables cannot carry an init value", init_tok.span)
                )
            init = self.value()
        self.expect(";")
        return VariableDecl(name_tok.text, domain, kind, init)

    def domain(self):
        tok = self.peek()
        if tok.kind == "{":
            self.advance()
            members = [self.expect_ident().text]
            while self.peek().kind == ",":
                self.advance()
                members.append(self.expect_ident().text)
            self.expect("}")
            try:
                return EnumDomain(tuple(members))
            except ValueError as exc:
                raise self.fail(str(exc)) from None
        lo = self.int_literal()
        self.expect("..")
        hi = self.int_literal()
        try:
            return RangeDomain(lo, hi)
        except ValueError as exc:
            raise self.fail(str(exc)) from None

    def int_literal(self) -> int:
        negative = False
        if self.peek().kind == "-":
            self.advance()
            negative = True
        tok = self.expect("INT")
        return -int(tok.text) if negative else int(tok.text)

    def value(self) -> Value:
        tok = self.peek()
        if tok.kind in ("INT", "-"):
            return self.int_literal()
        return self.expect_ident().text

    def action_decl(self) -> Node:
        self.advance()  # action
        ident = self.expect_ident()
        name = self.expect("STRING").text
        assignments: list[tuple[str, Expr]] = []
        if self.peek().kind == "{":
            self.advance()
            while self.peek().kind != "}":
                target = self.expect_ident().text
                self.expect(":=")
                expr = self.expr()
                self.expect(";")
                assignments.append((target, expr))
            self.expect("}")
        self.expect(";")
        return Node(ident.text, "action", name, tuple(assignments))

    def edge_decl(self) -> tuple[_Token, _Token, Expr]:
        self.advance()  # edge
        src = self.expect_ident()
        self.expect("->")
        tgt = self.expect_ident()
        guard: Expr = TRUE
        if self.peek().kind == "[":
            self.advance()
            guard = self.expr()
            self.expect("]")
        self.expect(";")
        return (src, tgt, guard)

    # Precedence, loosest first: | then & then ! then comparisons then + -.
    def expr(self) -> Expr:
        left = self.and_expr()
        while self.peek().kind == "|":
            self.advance()
            left = Or(left, self.and_expr())
        return left

    def and_expr(self) -> Expr:
        left = self.not_expr()
        while self.peek().kind == "&":
            self.advance()
            left = And(left, self.not_expr())
        return left

    def not_expr(self) -> Expr:
        if self.peek().kind == "!":
            self.advance()
            return Not(self.not_expr())
        return self.cmp_expr()

    def cmp_expr(self) -> Expr:
        left = self.sum_expr()
        tok = self.peek()
        if tok.kind in ("=", "!=", "<", "<=", ">", ">="):
            self.advance()
            return Cmp(tok.kind, left, self.sum_expr())
        return left

    def sum_expr(self) -> Expr:
        left = self.atom()
        while self.peek().kind in ("+", "-"):
            op = self.advance().kind
            left = Arith(op, left, self.atom())
        return left

    def atom(self) -> Expr:
        tok = self.peek()
        if tok.kind == "INT":
            self.advance()
            return IntConst(int(tok.text))
        if tok.kind == "-":
            self.advance()
            inner = self.expect("INT")
            return IntConst(-int(inner.text))
        if tok.kind == "(":
            self.advance()
            inner = self.expr()
            self.expect(")")
            return inner
        if tok.kind == "IDENT":
            if tok.text == "true":
                self.advance()
                return BoolConst(True)
            if tok.text == "false":
                self.advance()
                return BoolConst(False)
            if tok.text in KEYWORDS:
                raise self.fail(f"keyword {tok.text!r} used in an expression")
            self.advance()
            return Var(tok.text)
        raise self.fail(f"expected an expression, found {tok.text or tok.kind!r}")

    # -- assembly ---------------------------------------------------------

    def assemble(
        self,
        name: str,
        vars_: list[VariableDecl],
        nodes: list[Node],
        edges: list[tuple[_Token, _Token, Expr]],
    ) -> ActivityDiagram:
        node_ids: set[str] = set()
        for n in nodes:
            node_ids.add(n.id)
        var_names = {v.name for v in vars_}
        transitions: list[Transition] = []
        for src_tok, tgt_tok, guard in edges:
            for tok in (src_tok, tgt_tok):
                if tok.text not in node_ids:
                    self.errors.append(ParseError(f"unknown node {tok.text!r}", tok.span))
            transitions.append(
                Transition(src_tok.text, tgt_tok.text, _resolve_names(guard, var_names))
            )
        resolved_nodes = [
            Node(
                n.id,
                n.kind,
                n.action_name,
                tuple((t, _resolve_names(e, var_names)) for t, e in n.assignments),
            )
            for n in nodes
        ]
        self._report_duplicates(vars_, nodes)
        if self.errors:
            raise AdSyntaxError(self.errors)
        return ActivityDiagram(name, tuple(vars_), tuple(resolved_nodes), tuple(transitions))

    def _report_duplicates(self, vars_: list[VariableDecl], nodes: list[Node]) -> None:
        top = self.tokens[0].span
        seen: set[str] = set()
        for v in vars_:
            if v.name in seen:
                self.errors.append(ParseError(f"variable {v.name!r} declared twice", top))
            seen.add(v.name)
        seen = set()
        for n in nodes:
            if n.id in seen:
                self.errors.append(ParseError(f"node {n.id!r} declared twice", top))
            seen.add(n.id)


def _resolve_names(e: Expr, var_names: set[str]) -> Expr:
    """Rewrite identifiers that are not declared variables as symbols."""
    if isinstance(e, Var):
        return e if e.name in var_names else SymConst(e.name)
    if isinstance(e, Not):
        return Not(_resolve_names(e.operand, var_names))
    if isinstance(e, And):
        return And(_resolve_names(e.left, var_names), _resolve_names(e.right, var_names))
    if isinstance(e, Or):
        return Or(_resolve_names(e.left, var_names), _resolve_names(e.right, var_names))
    if isinstance(e, Cmp):
        return Cmp(e.op, _resolve_names(e.left, var_names), _resolve_names(e.right, var_names))
    if isinstance(e, Arith):
        return Arith(e.op, _resolve_names(e.left, var_names), _resolve_names(e.right, var_names))
    return e


def parse_ad(text: str) -> ActivityDiagram:
    """Parse activity-diagram source text.

    Raises AdSyntaxError carrying one ParseError per problem; every error
    points at a span inside the input.
    """
    return _Parser(_lex(text)).activity()


# ---------------------------------------------------------------------------
# Printing


def print_ad(ad: ActivityDiagram) -> str:
    """Render a diagram back to source; parse_ad inverts this exactly."""
    lines = [f"activity {ad.name} {{"]
    for v in ad.vars:
        init = f" init {v.init}" if v.init is not None else ""
        lines.append(f"  {v.kind} {v.name} : {_print_domain(v.domain)}{init} ;")
    for n in ad.nodes:
        if n.kind == "action":
            suffix = ""
            if n.assignments:
                body = " ".join(f"{t} := {print_expr(e)} ;" for t, e in n.assignments)
                suffix = f" {{ {body} }}"
            lines.append(f'  action {n.id} "{n.action_name}"{suffix} ;')
        else:
            lines.append(f"  {n.kind} {n.id} ;")
    for t in ad.transitions:
        guard = "" if t.guard == TRUE else f" [ {print_expr(t.guard)} ]"
        lines.append(f"  edge {t.src} -> {t.tgt}{guard} ;")
    lines.append("}")
    return "\n".join(lines) + "\n"


def _print_domain(domain) -> str:
    if isinstance(domain, EnumDomain):
        return "{" + ", ".join(domain.members) + "}"
    return f"{domain.lo} .. {domain.hi}"


_PRECEDENCE = {"or": 1, "and": 2, "not": 3, "cmp": 4, "sum": 5, "atom": 6}


def print_expr(e: Expr) -> str:
    """Render a guard or assignment expression with minimal parentheses."""
    return _print_expr(e, 0)


def _print_expr(e: Expr, parent_level: int) -> str:
    if isinstance(e, Var):
        return e.name
    if isinstance(e, SymConst):
        return e.name
    if isinstance(e, IntConst):
        return str(e.value)
    if isinstance(e, BoolConst):
        return "true" if e.value else "false"
    if isinstance(e, Or):
        text = f"{_print_expr(e.left, 1)} | {_print_expr(e.right, 2)}"
        return f"({text})" if parent_level > 1 else text
    if isinstance(e, And):
        text = f"{_print_expr(e.left, 2)} & {_print_expr(e.right, 3)}"
        return f"({text})" if parent_level > 2 else text
    if isinstance(e, Not):
        return f"!{_print_expr(e.operand, _PRECEDENCE['atom'])}"
    if isinstance(e, Cmp):
        text = f"{_print_expr(e.left, 5)} {e.op} {_print_expr(e.right, 5)}"
        return f"({text})" if parent_level > 4 else text
    if isinstance(e, Arith):
        text = f"{_print_expr(e.left, 5)} {e.op} {_print_expr(e.right, 6)}"
        return f"({text})" if parent_level > 5 else text
    raise ValueError(f"unknown expression node {e!r}")
