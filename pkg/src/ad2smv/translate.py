"""Translation of activity diagrams into SMV state-machine modules.

One boolean per node tracks occupancy, plus one boolean per fork branch
and per join input; `acnode` holds the current node and `ac` the
observable action of each step. Every diagram edge becomes an
`_enabled`/`_taken` DEFINE pair, and five TRANS blocks supply the frame
conditions, the one-step obligation, input constancy, local-variable
frames, and the action naming.
"""

from __future__ import annotations

from dataclasses import dataclass

from .model import (
    ActivityDiagram,
    And,
    Arith,
    BoolConst,
    Cmp,
    Diagnostic,
    EnumDomain,
    Expr,
    IntConst,
    Node,
    Not,
    Or,
    StructureError,
    SymConst,
    TRUE,
    Value,
    Var,
    effective_source,
    effective_target,
    initial_local_values,
    sanitize_action_name,
    validate,
)
from .smv import (
    Commented,
    SArith,
    SBoolType,
    SCmp,
    SEnumType,
    SIff,
    SImplies,
    SInt,
    SNext,
    SNot,
    SSym,
    SVar,
    SmvDefine,
    SmvExpr,
    SmvModule,
    SmvTrans,
    SmvVarDecl,
    sand,
    seq,
    sor,
)

ACNODE = "acnode"
AC = "ac"
NOP = "nop"

ALL_TRANS_RULES = frozenset({5, 6, 7, 8, 9})


class TranslationError(Exception):
    """Raised when a diagram cannot be translated; carries diagnostics."""

    def __init__(self, diagnostics: list[Diagnostic]):
        super().__init__("; ".join(str(d) for d in diagnostics))
        self.diagnostics = diagnostics


def _incoming_indices(ad: ActivityDiagram, node_id: str) -> list[int]:
    return [i for i, t in enumerate(ad.transitions) if t.tgt == node_id]


def _outgoing_indices(ad: ActivityDiagram, node_id: str) -> list[int]:
    return [i for i, t in enumerate(ad.transitions) if t.src == node_id]


@dataclass(frozen=True)
class CanonicalNames:
    """Deterministic naming derived from declaration order.

    The k-th initial/action/final node becomes n<k> (with an _initial or
    _final suffix), fork branches and join inputs get in_F/in_J booleans
    named after the branch target and the arriving node, and each
    translatable edge gets a define base name built from its effective
    source and target tokens.
    """

    node_id: dict[str, str]  # source node id -> canonical id
    fork_var: dict[int, str]  # fork out-edge index -> in_F... variable
    join_var: dict[int, str]  # join in-edge index -> in_J... variable
    edge_name: dict[int, str]  # translatable edge index -> define base name
    control_vars: tuple[str, ...]  # node booleans, then fork, then join vars
    acnode_literals: tuple[str, ...]  # canonical node ids plus nop
    ac_literals: tuple[str, ...]  # sanitized action names plus nop
    action_of: dict[str, str]  # canonical node id -> sanitized action or nop


def canonical_names(ad: ActivityDiagram) -> CanonicalNames:
    node_id: dict[str, str] = {}
    counter = 0
    for n in ad.nodes:
        if n.kind in ("action", "initial", "final"):
            suffix = {"initial": "_initial", "final": "_final"}.get(n.kind, "")
            node_id[n.id] = f"n{counter}{suffix}"
            counter += 1

    fork_var: dict[int, str] = {}
    join_var: dict[int, str] = {}
    for n in ad.nodes:
        if n.kind == "fork":
            for i in _outgoing_indices(ad, n.id):
                branch = ad.transitions[i]
                fork_var[i] = f"in_F{node_id[effective_target(branch, ad)]}"
        elif n.kind == "join":
            for i in _incoming_indices(ad, n.id):
                join_var[i] = f"in_J{node_id[ad.transitions[i].src]}"

    edge_name: dict[int, str] = {}
    for i, t in enumerate(ad.transitions):
        src = ad.node(t.src)
        if src.kind in ("action", "initial", "decision"):
            tgt_kind = ad.node(t.tgt).kind
            if src.kind != "decision" and tgt_kind in ("decision", "fork", "join"):
                continue  # absorbed into the pseudo node's own edges
            src_token = node_id[effective_source(t, ad)]
        elif src.kind == "fork":
            src_token = f"F{node_id[effective_target(t, ad)]}"
        elif src.kind == "join":
            src_token = "".join(
                f"J{node_id[ad.transitions[k].src]}" for k in _incoming_indices(ad, src.id)
            )
        else:
            continue  # merge out-edges are folded into their incoming edges
        edge_name[i] = f"e{src_token}{node_id[effective_target(t, ad)]}"

    node_vars = tuple(
        f"in_{node_id[n.id]}" for n in ad.nodes if n.kind in ("action", "initial", "final")
    )
    control_vars = (
        node_vars
        + tuple(fork_var[i] for i in sorted(fork_var))
        + tuple(join_var[i] for i in sorted(join_var))
    )
    acnode_literals = tuple(node_id[n.id] for n in ad.nodes if n.id in node_id) + (NOP,)
    action_names = sorted({sanitize_action_name(n.action_name) for n in ad.nodes_of_kind("action")})
    ac_literals = tuple(action_names) + (NOP,)
    action_of = {
        node_id[n.id]: sanitize_action_name(n.action_name) if n.kind == "action" else NOP
        for n in ad.nodes
        if n.id in node_id
    }

    _check_collisions(ad, control_vars, edge_name, acnode_literals, ac_literals)
    return CanonicalNames(
        node_id=node_id,
        fork_var=fork_var,
        join_var=join_var,
        edge_name=edge_name,
        control_vars=control_vars,
        acnode_literals=acnode_literals,
        ac_literals=ac_literals,
        action_of=action_of,
    )


def _check_collisions(
    ad: ActivityDiagram,
    control_vars: tuple[str, ...],
    edge_name: dict[int, str],
    acnode_literals: tuple[str, ...],
    ac_literals: tuple[str, ...],
) -> None:
    names: list[str] = list(control_vars) + [ACNODE, AC]
    names += [v.name for v in ad.vars]
    for i in sorted(edge_name):
        names += [f"{edge_name[i]}_enabled", f"{edge_name[i]}_taken"]
    literals = set(acnode_literals) | set(ac_literals)
    for v in ad.vars:
        if isinstance(v.domain, EnumDomain):
            literals |= set(v.domain.members)
    problems: list[Diagnostic] = []
    seen: set[str] = set()
    for name in names:
        if name in seen:
            problems.append(Diagnostic("name-collision", name, "generated name used twice"))
        seen.add(name)
    for clash in sorted(seen & literals):
        problems.append(
            Diagnostic("name-collision", clash, "name collides with an enumeration literal")
        )
    if NOP in ac_literals[:-1]:
        problems.append(Diagnostic("name-collision", NOP, "an action sanitizes to the nop marker"))
    if problems:
        raise TranslationError(problems)


# ---------------------------------------------------------------------------
# Guard and assignment expressions


def expr_to_smv(e: Expr) -> SmvExpr:
    if isinstance(e, Var):
        return SVar(e.name)
    if isinstance(e, IntConst):
        return SInt(e.value)
    if isinstance(e, SymConst):
        return SSym(e.name)
    if isinstance(e, BoolConst):
        return SInt(1 if e.value else 0)
    if isinstance(e, Not):
        return SNot(expr_to_smv(e.operand))
    if isinstance(e, And):
        return sand(expr_to_smv(e.left), expr_to_smv(e.right))
    if isinstance(e, Or):
        return sor(expr_to_smv(e.left), expr_to_smv(e.right))
    if isinstance(e, Cmp):
        return SCmp(e.op, expr_to_smv(e.left), expr_to_smv(e.right))
    if isinstance(e, Arith):
        return SArith(e.op, expr_to_smv(e.left), expr_to_smv(e.right))
    raise StructureError(f"untranslatable expression {e!r}")


# ---------------------------------------------------------------------------
# Edge plans: what taking each translatable edge does


@dataclass(frozen=True)
class _EdgePlan:
    index: int
    base: str
    enabled: SmvExpr
    clears: tuple[str, ...]  # control vars forced false in the next state
    arrive: str  # occupancy var of the landing node
    hidden: tuple[str, ...]  # fork/join bookkeeping vars forced true
    assigns: tuple[tuple[str, SmvExpr], ...]
    target: str  # canonical id the step moves acnode to


def _hidden_vars(ad: ActivityDiagram, names: CanonicalNames, landing: Node) -> tuple[str, ...]:
    hidden: list[str] = []
    for i in _outgoing_indices(ad, landing.id):
        tgt = ad.node(ad.transitions[i].tgt)
        if tgt.kind == "fork":
            for k in _outgoing_indices(ad, tgt.id):
                hidden.append(names.fork_var[k])
        elif tgt.kind == "join":
            hidden.append(names.join_var[i])
    return tuple(hidden)


def _edge_plans(ad: ActivityDiagram, names: CanonicalNames) -> list[_EdgePlan]:
    plans: list[_EdgePlan] = []
    for i, t in enumerate(ad.transitions):
        if i not in names.edge_name:
            continue
        src = ad.node(t.src)
        landing = ad.node(effective_target(t, ad))
        target = names.node_id[landing.id]
        if src.kind in ("action", "initial", "decision"):
            eff_src = names.node_id[effective_source(t, ad)]
            enabled: SmvExpr = SVar(f"in_{eff_src}")
            if src.kind == "decision" and t.guard != TRUE:
                enabled = sand(enabled, expr_to_smv(t.guard))
            clears: tuple[str, ...] = (f"in_{eff_src}",)
        elif src.kind == "fork":
            pre_fork = names.node_id[ad.transitions[_incoming_indices(ad, src.id)[0]].src]
            enabled = SVar(names.fork_var[i])
            clears = (names.fork_var[i], f"in_{pre_fork}")
        else:  # join
            in_indices = _incoming_indices(ad, src.id)
            enabled = sand(*[SVar(names.join_var[k]) for k in in_indices])
            clears = tuple(
                v
                for k in in_indices
                for v in (names.join_var[k], f"in_{names.node_id[ad.transitions[k].src]}")
            )
        assigns = tuple(
            (target_var, expr_to_smv(expr))
            for target_var, expr in (landing.assignments if landing.kind == "action" else ())
        )
        plans.append(
            _EdgePlan(
                index=i,
                base=names.edge_name[i],
                enabled=enabled,
                clears=clears,
                arrive=f"in_{target}",
                hidden=_hidden_vars(ad, names, landing),
                assigns=assigns,
                target=target,
            )
        )
    return plans


# ---------------------------------------------------------------------------
# Emission


def _smv_type(domain) -> SEnumType:
    if isinstance(domain, EnumDomain):
        return SEnumType(domain.members)
    return SEnumType(tuple(range(domain.lo, domain.hi + 1)))


def emit_vars(ad: ActivityDiagram, names: CanonicalNames) -> list[SmvVarDecl]:
    decls: list[SmvVarDecl] = []
    comment = ("nodes and pseudo-nodes of ad",)
    for v in names.control_vars:
        decls.append(SmvVarDecl(v, SBoolType(), comment))
        comment = ()
    decls.append(SmvVarDecl(ACNODE, SEnumType(names.acnode_literals), ("visitable nodes",)))
    decls.append(SmvVarDecl(AC, SEnumType(names.ac_literals), ("the visible action of a step",)))
    comment = ("input variables",)
    for v in ad.input_vars():
        decls.append(SmvVarDecl(v.name, _smv_type(v.domain), comment))
        comment = ()
    comment = comment + ("control variables",)
    for v in ad.local_vars():
        decls.append(SmvVarDecl(v.name, _smv_type(v.domain), comment))
        comment = ()
    return decls


def _value_literal(value: Value) -> SmvExpr:
    return SInt(value) if isinstance(value, int) else SSym(value)


def emit_init(ad: ActivityDiagram, names: CanonicalNames) -> list[SmvExpr]:
    initial = ad.nodes_of_kind("initial")[0]
    initial_var = f"in_{names.node_id[initial.id]}"
    items: list[SmvExpr] = []
    pending: tuple[str, ...] = ("init all nodes",)

    def add(expr: SmvExpr, comment: str | None = None) -> None:
        nonlocal pending
        if comment is not None:
            pending = pending + (comment,)
        items.append(Commented(pending, expr) if pending else expr)
        pending = ()

    for v in names.control_vars:
        add(seq(SVar(v), SInt(1 if v == initial_var else 0)))
    try:
        locals_init = initial_local_values(ad)
    except StructureError as exc:
        raise TranslationError([Diagnostic("init-underivable", ad.name, str(exc))]) from None
    pending = pending + ("init control variables as assigned in first node",)
    for decl in ad.local_vars():
        add(seq(SVar(decl.name), _value_literal(locals_init[decl.name])))
    add(
        seq(SVar(ACNODE), SSym(names.node_id[initial.id])),
        "set initial action node and visible action",
    )
    add(seq(SVar(AC), SSym(NOP)))
    return items


def _taken_body(plan: _EdgePlan) -> SmvExpr:
    conjuncts: list[SmvExpr] = [SVar(f"{plan.base}_enabled")]
    pending: list[str] = []

    def add(comment: str, exprs: list[SmvExpr]) -> None:
        pending.append(comment)
        for e in exprs:
            conjuncts.append(Commented(tuple(pending), e))
            pending.clear()

    add("not in previous nodes anymore", [SNot(SNext(SVar(v))) for v in plan.clears])
    add("arrive in target node", [SNext(SVar(plan.arrive))])
    add("possibly taking hidden edges", [SNext(SVar(v)) for v in plan.hidden])
    add("doing assignments", [seq(SNext(SVar(v)), e) for v, e in plan.assigns])
    add("set next node", [SNext(seq(SVar(ACNODE), SSym(plan.target)))])
    return sand(*conjuncts)


def emit_taken_defines(ad: ActivityDiagram, names: CanonicalNames) -> list[SmvDefine]:
    defines: list[SmvDefine] = []
    comment = ("shortcut to what happens when an edge is taken",)
    for plan in _edge_plans(ad, names):
        defines.append(SmvDefine(f"{plan.base}_enabled", plan.enabled, comment))
        defines.append(SmvDefine(f"{plan.base}_taken", _taken_body(plan)))
        comment = ()
    return defines


def emit_frame_control(ad: ActivityDiagram, names: CanonicalNames) -> SmvExpr:
    plans = _edge_plans(ad, names)
    clauses: list[SmvExpr] = []
    for v in names.control_vars:
        setters = [p for p in plans if v == p.arrive or v in p.hidden]
        clearers = [p for p in plans if v in p.clears]
        clauses.append(
            sor(
                seq(SVar(v), SNext(SVar(v))),
                *[SVar(f"{p.base}_taken") for p in setters + clearers],
            )
        )
    return sand(*clauses)


def emit_step_obligation(ad: ActivityDiagram, names: CanonicalNames) -> SmvExpr:
    finals = sor(*[SVar(f"in_{names.node_id[n.id]}") for n in ad.nodes_of_kind("final")])
    plans = _edge_plans(ad, names)
    reach_final = SIff(SNext(seq(SVar(ACNODE), SSym(NOP))), finals)
    obligation = sor(finals, *[SVar(f"{p.base}_taken") for p in plans])
    return sand(reach_final, obligation)


def emit_input_frame(ad: ActivityDiagram) -> SmvExpr | None:
    inputs = ad.input_vars()
    if not inputs:
        return None
    return sand(*[seq(SVar(v.name), SNext(SVar(v.name))) for v in inputs])


def emit_local_frame(ad: ActivityDiagram, names: CanonicalNames) -> SmvExpr | None:
    locals_ = ad.local_vars()
    if not locals_:
        return None
    clauses: list[SmvExpr] = []
    for decl in locals_:
        assigners = [
            names.node_id[n.id]
            for n in ad.nodes
            if n.kind == "action" and any(target == decl.name for target, _ in n.assignments)
        ]
        clauses.append(
            sor(
                seq(SVar(decl.name), SNext(SVar(decl.name))),
                *[seq(SNext(SVar(ACNODE)), SSym(a)) for a in assigners],
            )
        )
    return sand(*clauses)


def emit_action_naming(ad: ActivityDiagram, names: CanonicalNames) -> SmvExpr:
    implications = [
        SImplies(
            seq(SNext(SVar(ACNODE)), SSym(lit)),
            seq(SNext(SVar(AC)), SSym(names.action_of.get(lit, NOP))),
        )
        for lit in names.acnode_literals
    ]
    return sand(*implications)


def translate(ad: ActivityDiagram, omit_rules: frozenset[int] = frozenset()) -> SmvModule:
    """Build the full SMV module for a valid diagram.

    `omit_rules` drops individual TRANS blocks (5 through 9); it exists so
    tests can show each block is load-bearing and has no other use.
    """
    diagnostics = validate(ad)
    if diagnostics:
        raise TranslationError(diagnostics)
    names = canonical_names(ad)
    decls = emit_vars(ad, names)
    trailing: tuple[str, ...] = ()
    if not ad.input_vars() and not ad.local_vars():
        trailing = ("input variables", "control variables")
    elif not ad.local_vars():
        trailing = ("control variables",)
    trans: list[SmvTrans] = []
    if 5 not in omit_rules:
        trans.append(SmvTrans(emit_frame_control(ad, names)))
    if 6 not in omit_rules:
        trans.append(SmvTrans(emit_step_obligation(ad, names)))
    if 7 not in omit_rules:
        input_frame = emit_input_frame(ad)
        if input_frame is not None:
            trans.append(SmvTrans(input_frame, ("input variables do not change",)))
    if 8 not in omit_rules:
        local_frame = emit_local_frame(ad, names)
        if local_frame is not None:
            trans.append(SmvTrans(local_frame, ("local variables change only on assignments",)))
    if 9 not in omit_rules:
        trans.append(SmvTrans(emit_action_naming(ad, names)))
    return SmvModule(
        vars=tuple(decls),
        inits=tuple(emit_init(ad, names)),
        defines=tuple(emit_taken_defines(ad, names)),
        trans=tuple(trans),
        trailing_var_comments=trailing,
    )
