"""Activity diagram object model.

Nodes, guarded transitions, finite-domain variables, a small guard and
assignment expression language, and structural validation. Everything here
is immutable after construction and safe to share across threads.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Mapping, Union

Value = Union[int, str]

NODE_KINDS = ("initial", "final", "action", "decision", "merge", "fork", "join")
PSEUDO_KINDS = ("initial", "final", "decision", "merge", "fork", "join")


class StructureError(Exception):
    """A diagram is too malformed for the requested operation."""


class EvalError(Exception):
    """Expression evaluation hit a type inconsistency or missing variable."""


# ---------------------------------------------------------------------------
# Domains and values


@dataclass(frozen=True)
class EnumDomain:
    """Finite set of named symbols, in declaration order."""

    members: tuple[str, ...]

    def __post_init__(self) -> None:
        if not self.members:
            raise ValueError("enumeration domain needs at least one member")
        if len(set(self.members)) != len(self.members):
            raise ValueError(f"duplicate enumeration members: {self.members}")

    def contains(self, value: Value) -> bool:
        return isinstance(value, str) and value in self.members

    def values(self) -> tuple[Value, ...]:
        return self.members


@dataclass(frozen=True)
class RangeDomain:
    """Integer interval lo..hi, both ends inclusive."""

    lo: int
    hi: int

    def __post_init__(self) -> None:
        if self.lo > self.hi:
            raise ValueError(f"empty integer range {self.lo}..{self.hi}")

    def contains(self, value: Value) -> bool:
        return isinstance(value, int) and not isinstance(value, bool) and self.lo <= value <= self.hi

    def values(self) -> tuple[Value, ...]:
        return tuple(range(self.lo, self.hi + 1))


Domain = Union[EnumDomain, RangeDomain]


# ---------------------------------------------------------------------------
# Expressions

CMP_OPS = ("=", "!=", "<", "<=", ">", ">=")
ARITH_OPS = ("+", "-")


@dataclass(frozen=True)
class Var:
    name: str


@dataclass(frozen=True)
class IntConst:
    value: int


@dataclass(frozen=True)
class SymConst:
    name: str


@dataclass(frozen=True)
class BoolConst:
    value: bool


@dataclass(frozen=True)
class Not:
    operand: "Expr"


@dataclass(frozen=True)
class And:
    left: "Expr"
    right: "Expr"


@dataclass(frozen=True)
class Or:
    left: "Expr"
    right: "Expr"


@dataclass(frozen=True)
class Cmp:
    op: str  # one of CMP_OPS
    left: "Expr"
    right: "Expr"


@dataclass(frozen=True)
class Arith:
    op: str  # one of ARITH_OPS
    left: "Expr"
    right: "Expr"


Expr = Union[Var, IntConst, SymConst, BoolConst, Not, And, Or, Cmp, Arith]

TRUE = BoolConst(True)


def expr_vars(e: Expr) -> set[str]:
    """All variable names referenced by an expression."""
    if isinstance(e, Var):
        return {e.name}
    if isinstance(e, Not):
        return expr_vars(e.operand)
    if isinstance(e, (And, Or, Cmp, Arith)):
        return expr_vars(e.left) | expr_vars(e.right)
    return set()


def eval_expr(e: Expr, env: Mapping[str, Value]) -> Value | bool:
    """Evaluate an expression under a total environment.

    Booleans come back as bool, arithmetic as plain int (whether the result
    fits any domain is the caller's concern), symbols as str.
    """
    if isinstance(e, Var):
        try:
            return env[e.name]
        except KeyError:
            raise EvalError(f"variable {e.name!r} not in environment") from None
    if isinstance(e, IntConst):
        return e.value
    if isinstance(e, SymConst):
        return e.name
    if isinstance(e, BoolConst):
        return e.value
    if isinstance(e, Not):
        return not _as_bool(eval_expr(e.operand, env))
    if isinstance(e, And):
        return _as_bool(eval_expr(e.left, env)) and _as_bool(eval_expr(e.right, env))
    if isinstance(e, Or):
        return _as_bool(eval_expr(e.left, env)) or _as_bool(eval_expr(e.right, env))
    if isinstance(e, Cmp):
        left = eval_expr(e.left, env)
        right = eval_expr(e.right, env)
        return _compare(e.op, left, right)
    if isinstance(e, Arith):
        left = eval_expr(e.left, env)
        right = eval_expr(e.right, env)
        if not _is_int(left) or not _is_int(right):
            raise EvalError(f"arithmetic over non-integers: {left!r} {e.op} {right!r}")
        return left + right if e.op == "+" else left - right
    raise EvalError(f"unknown expression node {e!r}")


def _is_int(v: object) -> bool:
    return isinstance(v, int) and not isinstance(v, bool)


def _as_bool(v: object) -> bool:
    if isinstance(v, bool):
        return v
    raise EvalError(f"boolean operand expected, got {v!r}")


def _compare(op: str, left: Value | bool, right: Value | bool) -> bool:
    if _is_int(left) and _is_int(right):
        pass
    elif isinstance(left, str) and isinstance(right, str):
        if op not in ("=", "!="):
            raise EvalError(f"ordering comparison {op!r} over symbols")
    else:
        raise EvalError(f"comparison of mismatched kinds: {left!r} {op} {right!r}")
    if op == "=":
        return left == right
    if op == "!=":
        return left != right
    if op == "<":
        return left < right
    if op == "<=":
        return left <= right
    if op == ">":
        return left > right
    if op == ">=":
        return left >= right
    raise EvalError(f"unknown comparison operator {op!r}")


# ---------------------------------------------------------------------------
# Diagram structure


@dataclass(frozen=True)
class VariableDecl:
    name: str
    domain: Domain
    kind: str  # "input" or "local"
    init: Value | None = None


@dataclass(frozen=True)
class Node:
    id: str
    kind: str  # one of NODE_KINDS
    action_name: str | None = None
    assignments: tuple[tuple[str, Expr], ...] = ()


@dataclass(frozen=True)
class Transition:
    src: str
    tgt: str
    guard: Expr = TRUE


@dataclass(frozen=True)
class ActivityDiagram:
    name: str
    vars: tuple[VariableDecl, ...]
    nodes: tuple[Node, ...]
    transitions: tuple[Transition, ...]

    def node(self, node_id: str) -> Node:
        for n in self.nodes:
            if n.id == node_id:
                return n
        raise StructureError(f"unknown node id {node_id!r}")

    def incoming(self, node_id: str) -> tuple[Transition, ...]:
        return tuple(t for t in self.transitions if t.tgt == node_id)

    def outgoing(self, node_id: str) -> tuple[Transition, ...]:
        return tuple(t for t in self.transitions if t.src == node_id)

    def nodes_of_kind(self, *kinds: str) -> tuple[Node, ...]:
        return tuple(n for n in self.nodes if n.kind in kinds)

    def input_vars(self) -> tuple[VariableDecl, ...]:
        return tuple(v for v in self.vars if v.kind == "input")

    def local_vars(self) -> tuple[VariableDecl, ...]:
        return tuple(v for v in self.vars if v.kind == "local")

    def var(self, name: str) -> VariableDecl:
        for v in self.vars:
            if v.name == name:
                return v
        raise StructureError(f"unknown variable {name!r}")


@dataclass(frozen=True)
class Diagnostic:
    rule: str
    subject: str  # node id, transition "src->tgt", or variable name
    message: str

    def __str__(self) -> str:
        return f"[{self.rule}] {self.subject}: {self.message}"


# ---------------------------------------------------------------------------
# Effective endpoints (pseudo-node routing)


def effective_source(t: Transition, ad: ActivityDiagram) -> str:
    """The node whose occupancy enables and is cleared by taking `t`.

    Supported sources are action and initial nodes (themselves) and decision
    nodes (the single action or initial node feeding the decision). Fork,
    join, and merge sources have no single effective source and raise.
    """
    src = ad.node(t.src)
    if src.kind in ("action", "initial"):
        return src.id
    if src.kind == "decision":
        ins = ad.incoming(src.id)
        if len(ins) != 1:
            raise StructureError(f"decision {src.id!r} needs exactly one incoming transition")
        pred = ad.node(ins[0].src)
        if pred.kind in ("action", "initial"):
            return pred.id
        raise StructureError(
            f"decision {src.id!r} is fed by {pred.kind} node {pred.id!r}, not an action"
        )
    raise StructureError(f"{src.kind} node {src.id!r} has no single effective source")


def effective_target(t: Transition, ad: ActivityDiagram) -> str:
    """The node a token lands on when taking `t`, skipping merge chains."""
    tgt = ad.node(t.tgt)
    seen: set[str] = set()
    while tgt.kind == "merge":
        if tgt.id in seen:
            raise StructureError(f"merge cycle through {tgt.id!r} has no exit")
        seen.add(tgt.id)
        outs = ad.outgoing(tgt.id)
        if len(outs) != 1:
            raise StructureError(f"merge {tgt.id!r} needs exactly one outgoing transition")
        tgt = ad.node(outs[0].tgt)
    if seen and tgt.kind in ("decision", "fork", "join"):
        raise StructureError(f"merge chain resolves to {tgt.kind} node {tgt.id!r}")
    return tgt.id


def initial_local_values(ad: ActivityDiagram) -> dict[str, Value]:
    """Starting value of every local variable.

    A declared init wins; otherwise a constant assignment in the first
    action node (the initial node's successor) is used. A local with
    neither is an error.
    """
    first_action: Node | None = None
    initials = ad.nodes_of_kind("initial")
    if len(initials) == 1:
        outs = ad.outgoing(initials[0].id)
        if len(outs) == 1:
            tgt = ad.node(effective_target(outs[0], ad))
            if tgt.kind == "action":
                first_action = tgt
    values: dict[str, Value] = {}
    for decl in ad.local_vars():
        if decl.init is not None:
            values[decl.name] = decl.init
            continue
        assigned = None
        if first_action is not None:
            for target, expr in first_action.assignments:
                if target == decl.name and isinstance(expr, (IntConst, SymConst)):
                    assigned = expr.value if isinstance(expr, IntConst) else expr.name
        if assigned is None:
            raise StructureError(
                f"local variable {decl.name!r} has no declared init and no constant "
                "assignment in the first action node"
            )
        values[decl.name] = assigned
    return values


# ---------------------------------------------------------------------------
# Validation


def validate(ad: ActivityDiagram) -> list[Diagnostic]:
    """Check every structural and typing rule; empty list means valid."""
    out: list[Diagnostic] = []
    _check_declarations(ad, out)
    node_ids = {n.id for n in ad.nodes}
    bad_edges = _check_edge_endpoints(ad, node_ids, out)
    _check_node_fields(ad, out)
    _check_degrees(ad, bad_edges, out)
    _check_pseudo_adjacency(ad, bad_edges, out)
    _check_guards(ad, bad_edges, out)
    _check_assignments(ad, out)
    return out


def _edge_label(t: Transition) -> str:
    return f"{t.src}->{t.tgt}"


def _check_declarations(ad: ActivityDiagram, out: list[Diagnostic]) -> None:
    seen_nodes: set[str] = set()
    for n in ad.nodes:
        if n.id in seen_nodes:
            out.append(Diagnostic("duplicate-node", n.id, "node id declared twice"))
        seen_nodes.add(n.id)
        if n.kind not in NODE_KINDS:
            out.append(Diagnostic("node-kind", n.id, f"unknown node kind {n.kind!r}"))
    seen_vars: set[str] = set()
    for v in ad.vars:
        if v.name in seen_vars:
            out.append(Diagnostic("duplicate-variable", v.name, "variable declared twice"))
        seen_vars.add(v.name)
        if v.kind == "input" and v.init is not None:
            out.append(
                Diagnostic(
                    "input-init",
                    v.name,
                    "input variables take their value from the environment and have no init",
                )
            )
        if v.init is not None and not v.domain.contains(v.init):
            out.append(
                Diagnostic("init-domain", v.name, f"init value {v.init!r} is outside the domain")
            )


def _check_edge_endpoints(
    ad: ActivityDiagram, node_ids: set[str], out: list[Diagnostic]
) -> set[int]:
    bad: set[int] = set()
    for i, t in enumerate(ad.transitions):
        for end in (t.src, t.tgt):
            if end not in node_ids:
                out.append(Diagnostic("edge-endpoints", _edge_label(t), f"unknown node {end!r}"))
                bad.add(i)
    return bad


def _check_node_fields(ad: ActivityDiagram, out: list[Diagnostic]) -> None:
    for n in ad.nodes:
        if n.kind == "action":
            if not n.action_name:
                out.append(Diagnostic("node-fields", n.id, "action node without an action name"))
        elif n.action_name is not None or n.assignments:
            out.append(
                Diagnostic(
                    "node-fields", n.id, f"{n.kind} node carries an action name or assignments"
                )
            )


def _check_degrees(ad: ActivityDiagram, bad_edges: set[int], out: list[Diagnostic]) -> None:
    initials = ad.nodes_of_kind("initial")
    if len(initials) != 1:
        out.append(
            Diagnostic(
                "initial-count",
                ad.name,
                f"diagram needs exactly one initial node, found {len(initials)}",
            )
        )
    if not ad.nodes_of_kind("final"):
        out.append(Diagnostic("final-count", ad.name, "diagram needs at least one final node"))
    for n in ad.nodes:
        n_in = len(ad.incoming(n.id))
        n_out = len(ad.outgoing(n.id))
        if n.kind == "initial":
            if n_in != 0 or n_out != 1:
                out.append(
                    Diagnostic(
                        "initial-degree",
                        n.id,
                        "initial node must have no incoming and exactly one outgoing transition",
                    )
                )
        elif n.kind == "final":
            if n_out != 0:
                out.append(
                    Diagnostic("final-degree", n.id, "final node must have no outgoing transitions")
                )
        elif n.kind == "action":
            if n_in < 1 or n_out < 1:
                out.append(
                    Diagnostic(
                        "action-degree",
                        n.id,
                        "action node must have at least one incoming and one outgoing transition",
                    )
                )
        elif n.kind == "decision":
            if n_in != 1 or n_out < 1:
                out.append(
                    Diagnostic(
                        "decision-degree",
                        n.id,
                        "decision node must have exactly one incoming and at least one "
                        "outgoing transition",
                    )
                )
        elif n.kind == "merge":
            if n_in < 1 or n_out != 1:
                out.append(
                    Diagnostic(
                        "merge-degree",
                        n.id,
                        "merge node must have incoming transitions and exactly one outgoing",
                    )
                )
        elif n.kind == "fork":
            if n_in != 1 or n_out < 2:
                out.append(
                    Diagnostic(
                        "fork-degree",
                        n.id,
                        "fork node must have exactly one incoming and at least two "
                        "outgoing transitions",
                    )
                )
        elif n.kind == "join":
            if n_in < 2 or n_out != 1:
                out.append(
                    Diagnostic(
                        "join-degree",
                        n.id,
                        "join node must have at least two incoming and exactly one "
                        "outgoing transition",
                    )
                )


def _check_pseudo_adjacency(ad: ActivityDiagram, bad_edges: set[int], out: list[Diagnostic]) -> None:
    # Directly connected pseudo nodes defeat the predecessor/successor lookups
    # of the routing rules; a decision looping back into a merge is the one
    # shape that stays resolvable and is allowed.
    for i, t in enumerate(ad.transitions):
        if i in bad_edges:
            continue
        src = ad.node(t.src)
        tgt = ad.node(t.tgt)
        if src.kind in PSEUDO_KINDS and tgt.kind in PSEUDO_KINDS:
            if src.kind == "decision" and tgt.kind == "merge":
                continue
            out.append(
                Diagnostic(
                    "pseudo-adjacency",
                    _edge_label(t),
                    f"{src.kind} node connected directly to {tgt.kind} node",
                )
            )


def _check_guards(ad: ActivityDiagram, bad_edges: set[int], out: list[Diagnostic]) -> None:
    var_map = {v.name: v for v in ad.vars}
    for i, t in enumerate(ad.transitions):
        label = _edge_label(t)
        if i not in bad_edges and ad.node(t.src).kind != "decision" and t.guard != TRUE:
            out.append(
                Diagnostic(
                    "guard-nondecision",
                    label,
                    "only transitions leaving a decision node may carry a guard",
                )
            )
        if t.guard != TRUE:
            kind, problems = _expr_kind(t.guard, var_map)
            for msg in problems:
                out.append(Diagnostic("guard-type", label, msg))
            if not problems and kind != "bool":
                out.append(Diagnostic("guard-type", label, f"guard has {kind} type, not boolean"))


def _check_assignments(ad: ActivityDiagram, out: list[Diagnostic]) -> None:
    var_map = {v.name: v for v in ad.vars}
    for n in ad.nodes:
        for target, expr in n.assignments:
            decl = var_map.get(target)
            if decl is None or decl.kind != "local":
                out.append(
                    Diagnostic(
                        "assign-target", n.id, f"assignment target {target!r} is not a local variable"
                    )
                )
                continue
            if isinstance(decl.domain, RangeDomain):
                kind, problems = _expr_kind(expr, var_map)
                for msg in problems:
                    out.append(Diagnostic("assign-type", n.id, msg))
                if not problems and kind != "int":
                    out.append(
                        Diagnostic(
                            "assign-type",
                            n.id,
                            f"assignment to integer variable {target!r} has {kind} type",
                        )
                    )
            else:
                # Enumeration targets take direct copies only: another
                # variable or an in-domain symbol.
                if isinstance(expr, SymConst):
                    if not decl.domain.contains(expr.name):
                        out.append(
                            Diagnostic(
                                "assign-type",
                                n.id,
                                f"symbol {expr.name!r} is outside the domain of {target!r}",
                            )
                        )
                elif isinstance(expr, Var):
                    src = var_map.get(expr.name)
                    if src is None:
                        out.append(
                            Diagnostic("assign-type", n.id, f"unknown variable {expr.name!r}")
                        )
                    elif not isinstance(src.domain, EnumDomain):
                        out.append(
                            Diagnostic(
                                "assign-type",
                                n.id,
                                f"enumeration variable {target!r} assigned from integer "
                                f"variable {expr.name!r}",
                            )
                        )
                else:
                    out.append(
                        Diagnostic(
                            "assign-type",
                            n.id,
                            f"enumeration variable {target!r} takes a variable or symbol, "
                            "not a computed expression",
                        )
                    )


def _expr_kind(e: Expr, var_map: Mapping[str, VariableDecl]) -> tuple[str, list[str]]:
    """Infer an expression's kind ("bool", "int", "sym") and collect problems."""
    problems: list[str] = []

    def walk(e: Expr) -> str:
        if isinstance(e, Var):
            decl = var_map.get(e.name)
            if decl is None:
                problems.append(f"unknown variable {e.name!r}")
                return "int"
            return "int" if isinstance(decl.domain, RangeDomain) else "sym"
        if isinstance(e, IntConst):
            return "int"
        if isinstance(e, SymConst):
            return "sym"
        if isinstance(e, BoolConst):
            return "bool"
        if isinstance(e, Not):
            if walk(e.operand) != "bool":
                problems.append("negation of a non-boolean expression")
            return "bool"
        if isinstance(e, (And, Or)):
            for side in (e.left, e.right):
                if walk(side) != "bool":
                    problems.append("boolean connective over a non-boolean operand")
            return "bool"
        if isinstance(e, Cmp):
            lk, rk = walk(e.left), walk(e.right)
            if lk != rk:
                problems.append(f"comparison relates {lk} and {rk} operands")
            elif lk == "sym":
                if e.op not in ("=", "!="):
                    problems.append(f"ordering comparison {e.op!r} over enumeration values")
                else:
                    _check_symbol_domain(e, problems)
            elif lk == "bool":
                problems.append("comparison over boolean operands")
            return "bool"
        if isinstance(e, Arith):
            for side in (e.left, e.right):
                if walk(side) != "int":
                    problems.append("arithmetic over a non-integer operand")
            return "int"
        problems.append(f"unknown expression node {e!r}")
        return "bool"

    def _check_symbol_domain(cmp: Cmp, problems: list[str]) -> None:
        sides = (cmp.left, cmp.right)
        for lit, other in (sides, sides[::-1]):
            if isinstance(lit, SymConst) and isinstance(other, Var):
                decl = var_map.get(other.name)
                if decl is not None and isinstance(decl.domain, EnumDomain):
                    if not decl.domain.contains(lit.name):
                        problems.append(
                            f"symbol {lit.name!r} is outside the domain of {other.name!r}"
                        )

    kind = walk(e)
    return kind, problems


# ---------------------------------------------------------------------------
# Naming helpers shared by the printers and the translation


def sanitize_action_name(name: str) -> str:
    """Turn an action label into an identifier (spaces and odd chars to _)."""
    cleaned = "".join(c if c.isalnum() or c == "_" else "_" for c in name)
    if not cleaned or not (cleaned[0].isalpha() or cleaned[0] == "_"):
        cleaned = "a_" + cleaned
    return cleaned
