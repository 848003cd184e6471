"""Direct token-game interpreter for activity diagrams.

Runs a diagram without going through the generated state machine: tokens
occupy nodes, fork branches wait in per-branch slots, join inputs collect
in per-edge slots, and one action fires per step. This is deliberately a
second, independent reading of the same rules, so comparing its traces
against the state-machine evaluator is a genuine cross-check.
"""

from __future__ import annotations

from dataclasses import dataclass, replace
from functools import lru_cache
from typing import Sequence, Union

from .fsmexec import ActionTrace
from .model import (
    ActivityDiagram,
    EvalError,
    Expr,
    StructureError,
    TRUE,
    Value,
    effective_source,
    effective_target,
    eval_expr,
    initial_local_values,
    sanitize_action_name,
)

NOP = "nop"

# A place is somewhere a token can rest: on a node, in a fork branch
# slot, or in a join wait slot (slots are keyed by transition index).
Place = Union[tuple[str, str], tuple[str, int]]


def at(node_id: str) -> Place:
    return ("at", node_id)


def fork_slot(edge_index: int) -> Place:
    return ("fork", edge_index)


def join_slot(edge_index: int) -> Place:
    return ("join", edge_index)


@dataclass(frozen=True)
class AdConfig:
    """Marking plus variable valuation, with the action that produced it."""

    occupied: frozenset[Place]
    valuation: tuple[tuple[str, Value], ...]  # declaration order
    last_action: str
    terminated: bool

    def values(self) -> dict[str, Value]:
        return dict(self.valuation)

    def describe(self) -> str:
        places = ",".join(sorted(f"{kind}:{key}" for kind, key in self.occupied))
        vals = " ".join(f"{n}={v}" for n, v in self.valuation)
        return f"[{places}] {vals} last={self.last_action}"


@dataclass(frozen=True)
class _FireRule:
    """One translatable edge, read as a token move."""

    index: int
    requires: tuple[Place, ...]
    guard: Expr | None
    clears: tuple[Place, ...]
    arrives: tuple[Place, ...]
    assigns: tuple[tuple[str, Expr], ...]
    emits: str  # action name, or nop when landing on a final node


def _incoming_indices(ad: ActivityDiagram, node_id: str) -> list[int]:
    return [i for i, t in enumerate(ad.transitions) if t.tgt == node_id]


def _outgoing_indices(ad: ActivityDiagram, node_id: str) -> list[int]:
    return [i for i, t in enumerate(ad.transitions) if t.src == node_id]


def _arrival_places(ad: ActivityDiagram, landing_id: str) -> tuple[Place, ...]:
    places: list[Place] = [at(landing_id)]
    for i in _outgoing_indices(ad, landing_id):
        tgt = ad.node(ad.transitions[i].tgt)
        if tgt.kind == "fork":
            places.extend(fork_slot(k) for k in _outgoing_indices(ad, tgt.id))
        elif tgt.kind == "join":
            places.append(join_slot(i))
    return tuple(places)


@lru_cache(maxsize=64)
def _fire_rules(ad: ActivityDiagram) -> tuple[_FireRule, ...]:
    rules: list[_FireRule] = []
    for i, t in enumerate(ad.transitions):
        src = ad.node(t.src)
        if src.kind in ("final", "merge"):
            continue
        if src.kind in ("action", "initial") and ad.node(t.tgt).kind in (
            "decision",
            "fork",
            "join",
        ):
            continue  # the pseudo node's own edges carry the move
        if src.kind in ("action", "initial", "decision"):
            source = effective_source(t, ad)
            requires: tuple[Place, ...] = (at(source),)
            clears: tuple[Place, ...] = (at(source),)
            guard = t.guard if src.kind == "decision" and t.guard != TRUE else None
        elif src.kind == "fork":
            pre_fork = ad.transitions[_incoming_indices(ad, src.id)[0]].src
            requires = (fork_slot(i),)
            clears = (fork_slot(i), at(pre_fork))
            guard = None
        else:  # join
            in_indices = _incoming_indices(ad, src.id)
            requires = tuple(join_slot(k) for k in in_indices)
            clears = tuple(
                p for k in in_indices for p in (join_slot(k), at(ad.transitions[k].src))
            )
            guard = None
        landing = ad.node(effective_target(t, ad))
        rules.append(
            _FireRule(
                index=i,
                requires=requires,
                guard=guard,
                clears=clears,
                arrives=_arrival_places(ad, landing.id),
                assigns=landing.assignments if landing.kind == "action" else (),
                emits=sanitize_action_name(landing.action_name)
                if landing.kind == "action"
                else NOP,
            )
        )
    return tuple(rules)


def _final_occupied(ad: ActivityDiagram, occupied: frozenset[Place]) -> bool:
    return any(at(n.id) in occupied for n in ad.nodes_of_kind("final"))


def ad_initial_configs(ad: ActivityDiagram) -> list[AdConfig]:
    """One starting configuration per input valuation."""
    initial = ad.nodes_of_kind("initial")[0]
    locals_init = initial_local_values(ad)
    inputs = ad.input_vars()

    def build(choice: dict[str, Value]) -> AdConfig:
        valuation = tuple(
            (v.name, choice[v.name] if v.kind == "input" else locals_init[v.name])
            for v in ad.vars
        )
        return AdConfig(
            occupied=frozenset({at(initial.id)}),
            valuation=valuation,
            last_action=NOP,
            terminated=False,
        )

    configs: list[AdConfig] = []

    def expand(idx: int, choice: dict[str, Value]) -> None:
        if idx == len(inputs):
            configs.append(build(choice))
            return
        for value in inputs[idx].domain.values():
            choice[inputs[idx].name] = value
            expand(idx + 1, choice)

    expand(0, {})
    return configs


def ad_step(ad: ActivityDiagram, config: AdConfig) -> list[AdConfig]:
    """All configurations one fired edge away.

    A configuration with a final node occupied is frozen: its unique
    successor is itself, observing nop. An empty result is a deadlock.
    """
    if _final_occupied(ad, config.occupied):
        return [replace(config, last_action=NOP, terminated=True)]
    env = config.values()
    out: list[AdConfig] = []
    seen: set[AdConfig] = set()
    for rule in _fire_rules(ad):
        successor = _fire(ad, config, rule, env)
        if successor is not None and successor not in seen:
            seen.add(successor)
            out.append(successor)
    return out


def _fire(
    ad: ActivityDiagram, config: AdConfig, rule: _FireRule, env: dict[str, Value]
) -> AdConfig | None:
    if not all(p in config.occupied for p in rule.requires):
        return None
    if rule.guard is not None:
        try:
            if not eval_expr(rule.guard, env):
                return None
        except EvalError:
            return None
    # A place both cleared and arrived at would need its occupancy flag to
    # be 0 and 1 at once in the machine reading; such an edge never fires.
    if set(rule.clears) & set(rule.arrives):
        return None
    updates: dict[str, Value] = {}
    for target, expr in rule.assigns:
        value = eval_expr(expr, env)
        if isinstance(value, bool):
            return None
        if target in updates and updates[target] != value:
            return None  # contradictory simultaneous assignment
        if not ad.var(target).domain.contains(value):
            return None  # out-of-domain result blocks the step
        updates[target] = value
    occupied = (config.occupied - set(rule.clears)) | set(rule.arrives)
    valuation = tuple((n, updates.get(n, v)) for n, v in config.valuation)
    return AdConfig(
        occupied=occupied,
        valuation=valuation,
        last_action=rule.emits,
        terminated=_final_occupied(ad, occupied),
    )


def ad_action_traces(ad: ActivityDiagram, depth: int) -> set[ActionTrace]:
    """All distinct action sequences of at most `depth` steps."""
    out: set[ActionTrace] = set()
    for traces in ad_action_traces_by_input(ad, depth).values():
        out |= traces
    return out


def ad_action_traces_by_input(
    ad: ActivityDiagram, depth: int
) -> dict[tuple[tuple[str, Value], ...], frozenset[ActionTrace]]:
    """Action traces grouped by input valuation, matching the machine side."""
    if depth < 1:
        raise ValueError("depth must be at least 1")
    input_names = [v.name for v in ad.input_vars()]
    memo: dict[tuple[frozenset[Place], tuple, int], frozenset[ActionTrace]] = {}

    def traces_from(config: AdConfig, left: int) -> frozenset[ActionTrace]:
        key = (config.occupied, config.valuation, left)
        if key in memo:
            return memo[key]
        if left == 0:
            result = frozenset({ActionTrace((), False)})
        else:
            collected: set[ActionTrace] = set()
            followers = ad_step(ad, config)
            if not followers:
                collected.add(ActionTrace((), False))
            for succ in followers:
                if succ.last_action == NOP:
                    collected.add(ActionTrace((), True))
                else:
                    for suffix in traces_from(succ, left - 1):
                        collected.add(
                            ActionTrace((succ.last_action,) + suffix.actions, suffix.terminated)
                        )
            result = frozenset(collected)
        memo[key] = result
        return result

    groups: dict[tuple[tuple[str, Value], ...], frozenset[ActionTrace]] = {}
    for config in ad_initial_configs(ad):
        env = config.values()
        key = tuple((n, env[n]) for n in input_names)
        groups[key] = traces_from(config, depth)
    return groups
