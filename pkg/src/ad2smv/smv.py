"""SMV module representation for the generated state machines.

Covers exactly the subset the translation emits: VAR declarations over
boolean and enumerative types, INIT predicates, DEFINE shortcuts, TRANS
blocks, and `next()` over a variable or a single equality. Comes with a
printer, a parser for the same subset, and a normalizer that makes two
modules comparable independent of comments and enum literal order.
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace
from typing import Iterator, Union

# ---------------------------------------------------------------------------
# Expressions


@dataclass(frozen=True)
class SVar:
    name: str  # variable or DEFINE reference


@dataclass(frozen=True)
class SInt:
    value: int


@dataclass(frozen=True)
class SSym:
    name: str  # enumeration literal


@dataclass(frozen=True)
class SName:
    """Unresolved identifier, only present while parsing."""

    name: str


@dataclass(frozen=True)
class SNot:
    operand: "SmvExpr"


@dataclass(frozen=True)
class SAnd:
    items: tuple["SmvExpr", ...]


@dataclass(frozen=True)
class SOr:
    items: tuple["SmvExpr", ...]


@dataclass(frozen=True)
class SCmp:
    op: str  # = != < <= > >=
    left: "SmvExpr"
    right: "SmvExpr"


@dataclass(frozen=True)
class SArith:
    op: str  # + -
    left: "SmvExpr"
    right: "SmvExpr"


@dataclass(frozen=True)
class SImplies:
    left: "SmvExpr"
    right: "SmvExpr"


@dataclass(frozen=True)
class SIff:
    left: "SmvExpr"
    right: "SmvExpr"


@dataclass(frozen=True)
class SNext:
    inner: "SmvExpr"  # a variable or one equality over a variable


@dataclass(frozen=True)
class Commented:
    """Attaches `--` comment lines to the expression that follows them."""

    comments: tuple[str, ...]
    expr: "SmvExpr"


SmvExpr = Union[
    SVar, SInt, SSym, SName, SNot, SAnd, SOr, SCmp, SArith, SImplies, SIff, SNext, Commented
]


def sand(*items: SmvExpr) -> SmvExpr:
    """Conjunction; flattens nested conjunctions and unwraps singletons."""
    flat: list[SmvExpr] = []
    for item in items:
        if isinstance(item, SAnd):
            flat.extend(item.items)
        else:
            flat.append(item)
    if len(flat) == 1:
        return flat[0]
    return SAnd(tuple(flat))


def sor(*items: SmvExpr) -> SmvExpr:
    """Disjunction; flattens nested disjunctions and unwraps singletons."""
    flat: list[SmvExpr] = []
    for item in items:
        if isinstance(item, SOr):
            flat.extend(item.items)
        else:
            flat.append(item)
    if len(flat) == 1:
        return flat[0]
    return SOr(tuple(flat))


def seq(left: SmvExpr, right: SmvExpr) -> SCmp:
    return SCmp("=", left, right)


# ---------------------------------------------------------------------------
# Declarations and modules


@dataclass(frozen=True)
class SBoolType:
    pass


@dataclass(frozen=True)
class SEnumType:
    literals: tuple[Union[int, str], ...]


SmvType = Union[SBoolType, SEnumType]


@dataclass(frozen=True)
class SmvVarDecl:
    name: str
    type: SmvType
    comments: tuple[str, ...] = ()


@dataclass(frozen=True)
class SmvDefine:
    name: str
    expr: SmvExpr
    comments: tuple[str, ...] = ()


@dataclass(frozen=True)
class SmvTrans:
    expr: SmvExpr
    comments: tuple[str, ...] = ()


@dataclass(frozen=True)
class SmvModule:
    vars: tuple[SmvVarDecl, ...] = ()
    inits: tuple[SmvExpr, ...] = ()  # conjoined
    defines: tuple[SmvDefine, ...] = ()
    trans: tuple[SmvTrans, ...] = ()  # one entry per TRANS block
    name: str | None = None
    trailing_var_comments: tuple[str, ...] = ()

    def domain_of(self, var_name: str) -> tuple[Union[int, str], ...]:
        for decl in self.vars:
            if decl.name == var_name:
                if isinstance(decl.type, SBoolType):
                    return (0, 1)
                return decl.type.literals
        raise KeyError(f"undeclared variable {var_name!r}")


# ---------------------------------------------------------------------------
# Well-formedness


def module_issues(m: SmvModule) -> list[str]:
    """Collect well-formedness problems; an empty list means well formed."""
    issues: list[str] = []
    var_names = set()
    for decl in m.vars:
        if decl.name in var_names:
            issues.append(f"variable {decl.name!r} declared twice")
        var_names.add(decl.name)
        if isinstance(decl.type, SEnumType):
            if not decl.type.literals:
                issues.append(f"variable {decl.name!r} has an empty enumeration")
            if len(set(decl.type.literals)) != len(decl.type.literals):
                issues.append(f"variable {decl.name!r} repeats enumeration literals")
    define_names = set()
    for d in m.defines:
        if d.name in define_names or d.name in var_names:
            issues.append(f"define {d.name!r} clashes with an earlier declaration")
        define_names.add(d.name)
    declared = var_names | define_names

    def walk(e: SmvExpr, where: str, under_next: bool) -> None:
        if isinstance(e, (SInt, SSym)):
            return
        if isinstance(e, SName):
            issues.append(f"{where}: unresolved name {e.name!r}")
            return
        if isinstance(e, SVar):
            if e.name not in declared:
                issues.append(f"{where}: reference to undeclared {e.name!r}")
            return
        if isinstance(e, Commented):
            walk(e.expr, where, under_next)
            return
        if isinstance(e, SNext):
            if under_next:
                issues.append(f"{where}: nested next()")
            if not isinstance(e.inner, SVar) and not (
                isinstance(e.inner, SCmp) and e.inner.op == "=" and isinstance(e.inner.left, SVar)
            ):
                issues.append(f"{where}: next() applied to an unsupported expression")
            walk(e.inner, where, True)
            return
        if isinstance(e, SNot):
            walk(e.operand, where, under_next)
            return
        if isinstance(e, (SAnd, SOr)):
            for item in e.items:
                walk(item, where, under_next)
            return
        if isinstance(e, (SCmp, SArith, SImplies, SIff)):
            walk(e.left, where, under_next)
            walk(e.right, where, under_next)
            return
        issues.append(f"{where}: unknown expression node {e!r}")

    for i, init in enumerate(m.inits):
        walk(init, f"INIT[{i}]", False)
    for d in m.defines:
        walk(d.expr, f"DEFINE {d.name}", False)
    for i, t in enumerate(m.trans):
        walk(t.expr, f"TRANS[{i}]", False)

    _check_define_cycles(m, issues)
    return issues


def _check_define_cycles(m: SmvModule, issues: list[str]) -> None:
    body = {d.name: d.expr for d in m.defines}
    state: dict[str, int] = {}  # 1 visiting, 2 done

    def refs(e: SmvExpr) -> Iterator[str]:
        if isinstance(e, SVar) and e.name in body:
            yield e.name
        elif isinstance(e, Commented):
            yield from refs(e.expr)
        elif isinstance(e, (SNot, SNext)):
            yield from refs(e.operand if isinstance(e, SNot) else e.inner)
        elif isinstance(e, (SAnd, SOr)):
            for item in e.items:
                yield from refs(item)
        elif isinstance(e, (SCmp, SArith, SImplies, SIff)):
            yield from refs(e.left)
            yield from refs(e.right)

    def visit(name: str) -> None:
        if state.get(name) == 2:
            return
        if state.get(name) == 1:
            issues.append(f"define {name!r} is part of a reference cycle")
            return
        state[name] = 1
        for ref in refs(body[name]):
            visit(ref)
        state[name] = 2

    for name in body:
        visit(name)


# ---------------------------------------------------------------------------
# Normalization


def strip_comments(m: SmvModule) -> SmvModule:
    """Drop every comment while keeping structure and order intact."""
    return SmvModule(
        vars=tuple(replace(v, comments=()) for v in m.vars),
        inits=tuple(_strip(e) for e in m.inits),
        defines=tuple(SmvDefine(d.name, _strip(d.expr)) for d in m.defines),
        trans=tuple(SmvTrans(_strip(t.expr)) for t in m.trans),
        name=m.name,
        trailing_var_comments=(),
    )


def _strip(e: SmvExpr) -> SmvExpr:
    if isinstance(e, Commented):
        return _strip(e.expr)
    if isinstance(e, SNot):
        return SNot(_strip(e.operand))
    if isinstance(e, SNext):
        return SNext(_strip(e.inner))
    if isinstance(e, SAnd):
        return SAnd(tuple(_strip(i) for i in e.items))
    if isinstance(e, SOr):
        return SOr(tuple(_strip(i) for i in e.items))
    if isinstance(e, SCmp):
        return SCmp(e.op, _strip(e.left), _strip(e.right))
    if isinstance(e, SArith):
        return SArith(e.op, _strip(e.left), _strip(e.right))
    if isinstance(e, SImplies):
        return SImplies(_strip(e.left), _strip(e.right))
    if isinstance(e, SIff):
        return SIff(_strip(e.left), _strip(e.right))
    return e


def normalize(m: SmvModule) -> SmvModule:
    """Canonical form for comparisons: no comments, sorted enum literals.

    Declaration, conjunct, and block order are all preserved; only the
    order inside enumeration type literal lists is canonicalized (integers
    numerically first, then symbols lexicographically).
    """
    stripped = strip_comments(m)
    return replace(
        stripped,
        vars=tuple(
            replace(v, type=_sort_enum(v.type)) if isinstance(v.type, SEnumType) else v
            for v in stripped.vars
        ),
    )


def _sort_enum(t: SEnumType) -> SEnumType:
    ints = sorted(l for l in t.literals if isinstance(l, int))
    syms = sorted(l for l in t.literals if isinstance(l, str))
    return SEnumType(tuple(ints) + tuple(syms))


def normalized_text(m: SmvModule) -> str:
    return print_smv(normalize(m))


# ---------------------------------------------------------------------------
# Printing


def print_smv(m: SmvModule) -> str:
    lines: list[str] = []
    if m.name is not None:
        lines.append(f"MODULE {m.name}")
        lines.append("")
    if m.vars or m.trailing_var_comments:
        lines.append("VAR")
        for i, decl in enumerate(m.vars):
            if decl.comments and i > 0:
                lines.append("")
            for c in decl.comments:
                lines.append(f"  -- {c}")
            lines.append(f"  {decl.name} : {_print_type(decl.type)};")
        for c in m.trailing_var_comments:
            lines.append("")
            lines.append(f"  -- {c}")
        lines.append("")
    if m.inits:
        lines.append("INIT")
        for i, item in enumerate(m.inits):
            comments, expr = _split_comments(item)
            for c in comments:
                lines.append(f"  -- {c}")
            tail = " &" if i + 1 < len(m.inits) else ";"
            lines.append(f"  {_inline(expr, 0)}{tail}")
        lines.append("")
    for block in _define_blocks(m.defines):
        for d in block:
            for c in d.comments:
                lines.append(f"-- {c}")
        lines.append("DEFINE")
        for d in block:
            lines.extend(_print_define(d))
        lines.append("")
    for t in m.trans:
        lines.append("TRANS")
        for c in t.comments:
            lines.append(f"  -- {c}")
        lines.extend(_print_trans_expr(t.expr))
        lines.append("")
    while lines and lines[-1] == "":
        lines.pop()
    return "\n".join(lines) + "\n"


def _print_type(t: SmvType) -> str:
    if isinstance(t, SBoolType):
        return "boolean"
    return "{" + ", ".join(str(l) for l in t.literals) + "}"


def _split_comments(e: SmvExpr) -> tuple[tuple[str, ...], SmvExpr]:
    comments: tuple[str, ...] = ()
    while isinstance(e, Commented):
        comments = comments + e.comments
        e = e.expr
    return comments, e


def _define_blocks(defines: tuple[SmvDefine, ...]) -> Iterator[list[SmvDefine]]:
    """Group an `_enabled` define with the `_taken` define that follows it."""
    block: list[SmvDefine] = []
    for d in defines:
        if block and not (block[-1].name.endswith("_enabled") and d.name.endswith("_taken")):
            yield block
            block = []
        block.append(d)
    if block:
        yield block


def _print_define(d: SmvDefine) -> list[str]:
    comments, expr = _split_comments(d.expr)
    items = list(expr.items) if isinstance(expr, SAnd) else [expr]
    if len(items) > 1 and any(isinstance(i, Commented) for i in items):
        head_comments, head = _split_comments(items[0])
        lines = [f"  -- {c}" for c in comments + head_comments]
        lines.append(f"  {d.name} := {_inline(head, 0)} &")
        for k, item in enumerate(items[1:], start=1):
            item_comments, item_expr = _split_comments(item)
            for c in item_comments:
                lines.append(f"    -- {c}")
            tail = " &" if k + 1 < len(items) else ";"
            lines.append(f"    {_inline(item_expr, 0)}{tail}")
        return lines
    lines = [f"  -- {c}" for c in comments]
    lines.append(f"  {d.name} := {_inline(expr, 0)};")
    return lines


def _print_trans_expr(expr: SmvExpr) -> list[str]:
    comments, expr = _split_comments(expr)
    lines = [f"  -- {c}" for c in comments]
    items = list(expr.items) if isinstance(expr, SAnd) else [expr]
    for i, item in enumerate(items):
        item_comments, item_expr = _split_comments(item)
        for c in item_comments:
            lines.append(f"  -- {c}")
        tail = " &" if i + 1 < len(items) else ";"
        if isinstance(item_expr, SOr) and len(item_expr.items) > 1:
            disjuncts = item_expr.items
            first = _or_item(disjuncts[0])
            lines.append(f"  ( {first} |")
            for k, d in enumerate(disjuncts[1:], start=1):
                d_comments, d_expr = _split_comments(d)
                close = f" ){tail}" if k + 1 == len(disjuncts) else " |"
                lines.append(f"    {_or_item(d_expr)}{close}")
        else:
            lines.append(f"  {_inline(item_expr, 4)}{tail}")
    return lines


def _or_item(e: SmvExpr) -> str:
    _, e = _split_comments(e)
    text = _inline(e, 4)
    if isinstance(e, SCmp):
        text = f"({text})"
    return text


# Precedence levels, loosest first.
_L_IFF, _L_IMP, _L_OR, _L_AND, _L_NOT, _L_CMP, _L_SUM, _L_ATOM = range(8)


def _inline(e: SmvExpr, parent: int) -> str:
    if isinstance(e, Commented):
        return _inline(e.expr, parent)
    if isinstance(e, SVar):
        return e.name
    if isinstance(e, SSym):
        return e.name
    if isinstance(e, SName):
        return e.name
    if isinstance(e, SInt):
        return str(e.value)
    if isinstance(e, SNext):
        return f"next({_inline(e.inner, 0)})"
    if isinstance(e, SIff):
        text = f"{_inline(e.left, _L_IMP)} <-> {_inline(e.right, _L_IMP)}"
        return f"({text})" if parent > _L_IFF else text
    if isinstance(e, SImplies):
        text = f"{_inline(e.left, _L_OR)} -> {_inline(e.right, _L_IMP)}"
        return f"({text})" if parent > _L_IMP else text
    if isinstance(e, SOr):
        text = " | ".join(_wrap_cmp(i, _L_AND) for i in e.items)
        return f"({text})" if parent > _L_OR else text
    if isinstance(e, SAnd):
        text = " & ".join(_wrap_cmp(i, _L_NOT) for i in e.items)
        return f"({text})" if parent > _L_AND else text
    if isinstance(e, SNot):
        return f"!{_inline(e.operand, _L_ATOM)}"
    if isinstance(e, SCmp):
        text = f"{_inline(e.left, _L_SUM)} {e.op} {_inline(e.right, _L_SUM)}"
        return f"({text})" if parent > _L_CMP else text
    if isinstance(e, SArith):
        text = f"{_inline(e.left, _L_SUM)} {e.op} {_inline(e.right, _L_ATOM)}"
        return f"({text})" if parent > _L_SUM else text
    raise ValueError(f"unknown SMV expression node {e!r}")


def _wrap_cmp(e: SmvExpr, level: int) -> str:
    # The generated style keeps comparisons parenthesized under & and |.
    _, inner = _split_comments(e)
    text = _inline(inner, level)
    if isinstance(inner, SCmp):
        return f"({text})"
    return text


# ---------------------------------------------------------------------------
# Parsing


class SmvParseError(Exception):
    def __init__(self, message: str, line: int, column: int):
        super().__init__(f"{line}:{column}: {message}")
        self.message = message
        self.line = line
        self.column = column


_SECTIONS = ("MODULE", "VAR", "INIT", "DEFINE", "TRANS")

# Section keywords of the full language; anything here that is not in the
# supported subset is rejected with a position instead of being mistaken
# for a declaration.
_ALL_SECTION_KEYWORDS = frozenset(_SECTIONS) | {
    "ASSIGN",
    "IVAR",
    "FROZENVAR",
    "INVAR",
    "SPEC",
    "CTLSPEC",
    "LTLSPEC",
    "INVARSPEC",
    "PSLSPEC",
    "COMPUTE",
    "FAIRNESS",
    "JUSTICE",
    "COMPASSION",
    "CONSTANTS",
    "ISA",
}
_SMV_PUNCT = (":=", "<->", "->", "<=", ">=", "!=", "{", "}", "(", ")", ";",
              ":", ",", "=", "<", ">", "+", "-", "&", "|", "!")


@dataclass(frozen=True)
class _STok:
    kind: str
    text: str
    line: int
    column: int


def _smv_lex(text: str) -> list[_STok]:
    tokens: list[_STok] = []
    i, line, col = 0, 1, 1
    n = len(text)
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
        if text.startswith("--", i):
            while i < n and text[i] != "\n":
                i += 1
            continue
        if c.isdigit():
            j = i
            while j < n and text[j].isdigit():
                j += 1
            tokens.append(_STok("INT", text[i:j], line, col))
            col += j - i
            i = j
            continue
        if c.isalpha() or c == "_":
            j = i
            while j < n and (text[j].isalnum() or text[j] == "_"):
                j += 1
            tokens.append(_STok("IDENT", text[i:j], line, col))
            col += j - i
            i = j
            continue
        for p in _SMV_PUNCT:
            if text.startswith(p, i):
                tokens.append(_STok(p, p, line, col))
                i += len(p)
                col += len(p)
                break
        else:
            raise SmvParseError(f"unexpected character {c!r}", line, col)
    tokens.append(_STok("EOF", "", line, col))
    return tokens


class _SmvParser:
    def __init__(self, tokens: list[_STok]):
        self.tokens = tokens
        self.pos = 0

    def peek(self, offset: int = 0) -> _STok:
        return self.tokens[min(self.pos + offset, len(self.tokens) - 1)]

    def advance(self) -> _STok:
        tok = self.tokens[self.pos]
        if tok.kind != "EOF":
            self.pos += 1
        return tok

    def fail(self, message: str) -> SmvParseError:
        tok = self.peek()
        return SmvParseError(message, tok.line, tok.column)

    def expect(self, kind: str) -> _STok:
        tok = self.peek()
        if tok.kind != kind:
            raise self.fail(f"expected {kind!r}, found {tok.text or tok.kind!r}")
        return self.advance()

    def module(self) -> SmvModule:
        name: str | None = None
        vars_: list[SmvVarDecl] = []
        inits: list[SmvExpr] = []
        defines: list[SmvDefine] = []
        trans: list[SmvTrans] = []
        while self.peek().kind != "EOF":
            tok = self.peek()
            if tok.kind != "IDENT" or tok.text not in _SECTIONS:
                raise self.fail(
                    f"construct {tok.text or tok.kind!r} is outside the supported SMV subset"
                )
            self.advance()
            if tok.text == "MODULE":
                name_tok = self.expect("IDENT")
                if self.peek().kind == "(":
                    raise self.fail("modules with parameters are outside the supported subset")
                name = name_tok.text
            elif tok.text == "VAR":
                vars_.extend(self.var_decls())
            elif tok.text == "INIT":
                expr = self.expr()
                self.expect(";")
                items = expr.items if isinstance(expr, SAnd) else (expr,)
                inits.extend(items)
            elif tok.text == "DEFINE":
                defines.extend(self.define_items())
            else:  # TRANS
                expr = self.expr()
                self.expect(";")
                trans.append(SmvTrans(expr))
        module = SmvModule(
            vars=tuple(vars_),
            inits=tuple(inits),
            defines=tuple(defines),
            trans=tuple(trans),
            name=name,
        )
        return _resolve_module(module)

    def at_section(self) -> bool:
        tok = self.peek()
        return tok.kind == "EOF" or (tok.kind == "IDENT" and tok.text in _ALL_SECTION_KEYWORDS)

    def var_decls(self) -> list[SmvVarDecl]:
        decls: list[SmvVarDecl] = []
        while not self.at_section():
            name = self.expect("IDENT").text
            self.expect(":")
            tok = self.peek()
            if tok.kind == "IDENT" and tok.text == "boolean":
                self.advance()
                decls.append(SmvVarDecl(name, SBoolType()))
            elif tok.kind == "{":
                self.advance()
                literals: list[int | str] = [self.enum_literal()]
                while self.peek().kind == ",":
                    self.advance()
                    literals.append(self.enum_literal())
                self.expect("}")
                decls.append(SmvVarDecl(name, SEnumType(tuple(literals))))
            else:
                raise self.fail("expected 'boolean' or an enumeration type")
            self.expect(";")
        return decls

    def enum_literal(self) -> int | str:
        tok = self.peek()
        if tok.kind == "INT":
            self.advance()
            return int(tok.text)
        if tok.kind == "-":
            self.advance()
            return -int(self.expect("INT").text)
        return self.expect("IDENT").text

    def define_items(self) -> list[SmvDefine]:
        items: list[SmvDefine] = []
        while not self.at_section() and self.peek().kind == "IDENT" and self.peek(1).kind == ":=":
            name = self.advance().text
            self.advance()  # :=
            expr = self.expr()
            self.expect(";")
            items.append(SmvDefine(name, expr))
        if not self.at_section():
            raise self.fail("expected 'name := expression ;' inside DEFINE")
        return items

    def expr(self) -> SmvExpr:
        left = self.imp_expr()
        if self.peek().kind == "<->":
            self.advance()
            return SIff(left, self.imp_expr())
        return left

    def imp_expr(self) -> SmvExpr:
        left = self.or_expr()
        if self.peek().kind == "->":
            self.advance()
            return SImplies(left, self.imp_expr())
        return left

    def or_expr(self) -> SmvExpr:
        items = [self.and_expr()]
        while self.peek().kind == "|":
            self.advance()
            items.append(self.and_expr())
        return sor(*items)

    def and_expr(self) -> SmvExpr:
        items = [self.not_expr()]
        while self.peek().kind == "&":
            self.advance()
            items.append(self.not_expr())
        return sand(*items)

    def not_expr(self) -> SmvExpr:
        if self.peek().kind == "!":
            self.advance()
            return SNot(self.not_expr())
        return self.cmp_expr()

    def cmp_expr(self) -> SmvExpr:
        left = self.sum_expr()
        tok = self.peek()
        if tok.kind in ("=", "!=", "<", "<=", ">", ">="):
            self.advance()
            return SCmp(tok.kind, left, self.sum_expr())
        return left

    def sum_expr(self) -> SmvExpr:
        left = self.atom()
        while self.peek().kind in ("+", "-"):
            op = self.advance().kind
            left = SArith(op, left, self.atom())
        return left

    def atom(self) -> SmvExpr:
        tok = self.peek()
        if tok.kind == "INT":
            self.advance()
            return SInt(int(tok.text))
        if tok.kind == "-":
            self.advance()
            return SInt(-int(self.expect("INT").text))
        if tok.kind == "(":
            self.advance()
            inner = self.expr()
            self.expect(")")
            return inner
        if tok.kind == "IDENT":
            if tok.text == "next":
                self.advance()
                self.expect("(")
                inner = self.expr()
                self.expect(")")
                return SNext(inner)
            if tok.text in _SECTIONS:
                raise self.fail(f"keyword {tok.text!r} used in an expression")
            self.advance()
            return SName(tok.text)
        raise self.fail(f"expected an expression, found {tok.text or tok.kind!r}")


def _resolve_module(m: SmvModule) -> SmvModule:
    declared = {v.name for v in m.vars} | {d.name for d in m.defines}

    def resolve(e: SmvExpr) -> SmvExpr:
        if isinstance(e, SName):
            return SVar(e.name) if e.name in declared else SSym(e.name)
        if isinstance(e, Commented):
            return Commented(e.comments, resolve(e.expr))
        if isinstance(e, SNot):
            return SNot(resolve(e.operand))
        if isinstance(e, SNext):
            return SNext(resolve(e.inner))
        if isinstance(e, SAnd):
            return SAnd(tuple(resolve(i) for i in e.items))
        if isinstance(e, SOr):
            return SOr(tuple(resolve(i) for i in e.items))
        if isinstance(e, SCmp):
            return SCmp(e.op, resolve(e.left), resolve(e.right))
        if isinstance(e, SArith):
            return SArith(e.op, resolve(e.left), resolve(e.right))
        if isinstance(e, SImplies):
            return SImplies(resolve(e.left), resolve(e.right))
        if isinstance(e, SIff):
            return SIff(resolve(e.left), resolve(e.right))
        return e

    return SmvModule(
        vars=m.vars,
        inits=tuple(resolve(e) for e in m.inits),
        defines=tuple(SmvDefine(d.name, resolve(d.expr), d.comments) for d in m.defines),
        trans=tuple(SmvTrans(resolve(t.expr), t.comments) for t in m.trans),
        name=m.name,
        trailing_var_comments=m.trailing_var_comments,
    )


def parse_smv_subset(text: str) -> SmvModule:
    """Parse SMV text limited to VAR/INIT/DEFINE/TRANS and next().

    Anything outside the subset (ASSIGN, SPEC, parametrized modules, ...)
    is rejected with its position. Comments are discarded, so
    parse_smv_subset(print_smv(m)) equals m up to comments.
    """
    return _SmvParser(_smv_lex(text)).module()
