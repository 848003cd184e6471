"""Explicit-state execution of generated SMV modules.

Enumerates initial states and successors, walks bounded action traces,
finds deadlocks, and checks the one-edge-per-step property. Successor
search assigns next-state variables in declaration order and checks each
transition conjunct as soon as its next-variables are all assigned; the
result provably equals the naive full-product enumeration, which is also
provided as the independent reference.
"""

from __future__ import annotations

import itertools
from collections import deque
from dataclasses import dataclass
from functools import lru_cache
from typing import Iterator, Mapping, Sequence, Union

from .smv import (
    Commented,
    SArith,
    SCmp,
    SIff,
    SImplies,
    SInt,
    SNext,
    SNot,
    SAnd,
    SOr,
    SSym,
    SVar,
    SmvExpr,
    SmvModule,
    strip_comments,
)

Value = Union[int, str]

AC = "ac"
ACNODE = "acnode"
NOP = "nop"

DEFAULT_MAX_STATES = 10**6
DEFAULT_DEPTH = 12


class ResourceBoundError(Exception):
    """State-space or frontier exploration exceeded the configured bound."""


class SmvEvalError(Exception):
    """A module expression could not be evaluated over the given states."""


@dataclass(frozen=True)
class State:
    """Total valuation of a module's variables, in declaration order."""

    names: tuple[str, ...]
    values: tuple[Value, ...]

    def __getitem__(self, name: str) -> Value:
        try:
            return self.values[self.names.index(name)]
        except ValueError:
            raise KeyError(name) from None

    def as_dict(self) -> dict[str, Value]:
        return dict(zip(self.names, self.values))

    def describe(self) -> str:
        return " ".join(f"{n}={v}" for n, v in zip(self.names, self.values))


@dataclass(frozen=True)
class StepWitness:
    pre: State
    post: State
    taken_defines: frozenset[str]


@dataclass(frozen=True)
class ActionTrace:
    """Observable action names of one run, with trailing nops compressed."""

    actions: tuple[str, ...]
    terminated: bool

    def render(self) -> str:
        suffix = "terminated" if self.terminated else "cut"
        return ("·".join(self.actions) if self.actions else "ε") + "|" + suffix


@dataclass(frozen=True)
class DeadlockWitness:
    state: State
    path: tuple[str, ...]  # shortest action sequence reaching the state


# ---------------------------------------------------------------------------
# Evaluation


def _truth(v: object) -> bool:
    if isinstance(v, bool):
        return v
    if v == 0 or v == 1:
        return bool(v)
    raise SmvEvalError(f"boolean value expected, got {v!r}")


def _eval(
    e: SmvExpr,
    cur: Mapping[str, Value],
    nxt: Mapping[str, Value] | None,
    defines: Mapping[str, SmvExpr],
) -> Value | bool:
    if isinstance(e, Commented):
        return _eval(e.expr, cur, nxt, defines)
    if isinstance(e, SVar):
        if e.name in cur:
            return cur[e.name]
        body = defines.get(e.name)
        if body is None:
            raise SmvEvalError(f"undeclared name {e.name!r}")
        return _eval(body, cur, nxt, defines)
    if isinstance(e, SInt):
        return e.value
    if isinstance(e, SSym):
        return e.name
    if isinstance(e, SNext):
        if nxt is None:
            raise SmvEvalError("next() used outside a transition context")
        return _eval(e.inner, nxt, None, defines)
    if isinstance(e, SNot):
        return not _truth(_eval(e.operand, cur, nxt, defines))
    if isinstance(e, SAnd):
        return all(_truth(_eval(i, cur, nxt, defines)) for i in e.items)
    if isinstance(e, SOr):
        return any(_truth(_eval(i, cur, nxt, defines)) for i in e.items)
    if isinstance(e, SImplies):
        return not _truth(_eval(e.left, cur, nxt, defines)) or _truth(
            _eval(e.right, cur, nxt, defines)
        )
    if isinstance(e, SIff):
        return _truth(_eval(e.left, cur, nxt, defines)) == _truth(
            _eval(e.right, cur, nxt, defines)
        )
    if isinstance(e, SCmp):
        left = _eval(e.left, cur, nxt, defines)
        right = _eval(e.right, cur, nxt, defines)
        return _compare(e.op, left, right)
    if isinstance(e, SArith):
        left = _eval(e.left, cur, nxt, defines)
        right = _eval(e.right, cur, nxt, defines)
        if isinstance(left, bool) or isinstance(right, bool):
            raise SmvEvalError("arithmetic over boolean operands")
        if not isinstance(left, int) or not isinstance(right, int):
            raise SmvEvalError(f"arithmetic over non-integers: {left!r} {e.op} {right!r}")
        return left + right if e.op == "+" else left - right
    raise SmvEvalError(f"unknown expression node {e!r}")


def _compare(op: str, left: object, right: object) -> bool:
    left = int(left) if isinstance(left, bool) else left
    right = int(right) if isinstance(right, bool) else right
    if isinstance(left, int) and isinstance(right, int):
        pass
    elif isinstance(left, str) and isinstance(right, str):
        if op not in ("=", "!="):
            raise SmvEvalError(f"ordering comparison {op!r} over symbols")
    else:
        raise SmvEvalError(f"comparison of mismatched kinds: {left!r} {op} {right!r}")
    return {
        "=": left == right,
        "!=": left != right,
        "<": left < right,
        "<=": left <= right,
        ">": left > right,
        ">=": left >= right,
    }[op]


# ---------------------------------------------------------------------------
# Machine preparation


def _conjuncts(e: SmvExpr) -> Iterator[SmvExpr]:
    if isinstance(e, Commented):
        yield from _conjuncts(e.expr)
    elif isinstance(e, SAnd):
        for item in e.items:
            yield from _conjuncts(item)
    else:
        yield e


class _UnknownType:
    __slots__ = ()

    def __repr__(self) -> str:
        return "UNKNOWN"


UNKNOWN = _UnknownType()


class _Machine:
    """Prepared form of a module: domains, defines, split conjuncts."""

    def __init__(self, module: SmvModule):
        stripped = strip_comments(module)
        self.module = stripped
        self.var_names = tuple(d.name for d in stripped.vars)
        self.var_set = frozenset(self.var_names)
        self.domains = tuple(stripped.domain_of(name) for name in self.var_names)
        self.defines = {d.name: d.expr for d in stripped.defines}
        self.taken_names = tuple(
            d.name for d in stripped.defines if d.name.endswith("_taken")
        )
        self.final_vars = tuple(
            n for n in self.var_names if n.startswith("in_") and n.endswith("_final")
        )

        self.init_conjuncts = [c for item in stripped.inits for c in _conjuncts(item)]
        self.trans_conjuncts = [c for t in stripped.trans for c in _conjuncts(t.expr)]

        self.state_space = 1
        for domain in self.domains:
            self.state_space *= len(domain)

        # Modules and states are immutable, so successor sets can be
        # shared between all walks over the same module.
        self.succ_cache: dict[State, list[StepWitness]] = {}

    def state(self, values: Mapping[str, Value]) -> State:
        return State(self.var_names, tuple(values[n] for n in self.var_names))

    def check_bound(self, max_states: int) -> None:
        if self.state_space > max_states:
            raise ResourceBoundError(
                f"domain product {self.state_space} exceeds the bound of {max_states} states"
            )

    # Three-valued evaluation over a partially assigned state: a missing
    # variable yields UNKNOWN, which propagates unless a connective is
    # already decided. False means falsified under every completion.
    def peval(self, e: SmvExpr, cur: Mapping[str, Value], nxt: Mapping[str, Value] | None):
        if isinstance(e, SVar):
            if e.name in self.var_set:
                return cur.get(e.name, UNKNOWN)
            body = self.defines.get(e.name)
            if body is None:
                raise SmvEvalError(f"undeclared name {e.name!r}")
            return self.peval(body, cur, nxt)
        if isinstance(e, SInt):
            return e.value
        if isinstance(e, SSym):
            return e.name
        if isinstance(e, SNext):
            if nxt is None:
                raise SmvEvalError("next() used outside a transition context")
            return self.peval(e.inner, nxt, None)
        if isinstance(e, SNot):
            v = self.peval(e.operand, cur, nxt)
            return UNKNOWN if v is UNKNOWN else not _truth(v)
        if isinstance(e, SAnd):
            unknown = False
            for item in e.items:
                v = self.peval(item, cur, nxt)
                if v is UNKNOWN:
                    unknown = True
                elif not _truth(v):
                    return False
            return UNKNOWN if unknown else True
        if isinstance(e, SOr):
            unknown = False
            for item in e.items:
                v = self.peval(item, cur, nxt)
                if v is UNKNOWN:
                    unknown = True
                elif _truth(v):
                    return True
            return UNKNOWN if unknown else False
        if isinstance(e, SImplies):
            left = self.peval(e.left, cur, nxt)
            if left is not UNKNOWN and not _truth(left):
                return True
            right = self.peval(e.right, cur, nxt)
            if right is not UNKNOWN and _truth(right):
                return True
            if left is UNKNOWN or right is UNKNOWN:
                return UNKNOWN
            return _truth(right)
        if isinstance(e, SIff):
            left = self.peval(e.left, cur, nxt)
            right = self.peval(e.right, cur, nxt)
            if left is UNKNOWN or right is UNKNOWN:
                return UNKNOWN
            return _truth(left) == _truth(right)
        if isinstance(e, SCmp):
            left = self.peval(e.left, cur, nxt)
            right = self.peval(e.right, cur, nxt)
            if left is UNKNOWN or right is UNKNOWN:
                return UNKNOWN
            return _compare(e.op, left, right)
        if isinstance(e, SArith):
            left = self.peval(e.left, cur, nxt)
            right = self.peval(e.right, cur, nxt)
            if left is UNKNOWN or right is UNKNOWN:
                return UNKNOWN
            if not isinstance(left, int) or not isinstance(right, int):
                raise SmvEvalError(f"arithmetic over non-integers: {left!r} {e.op} {right!r}")
            return left + right if e.op == "+" else left - right
        if isinstance(e, Commented):
            return self.peval(e.expr, cur, nxt)
        raise SmvEvalError(f"unknown expression node {e!r}")


@lru_cache(maxsize=32)
def _machine(module: SmvModule) -> _Machine:
    return _Machine(module)


# ---------------------------------------------------------------------------
# State enumeration


def initial_states(module: SmvModule, max_states: int = DEFAULT_MAX_STATES) -> list[State]:
    """All total valuations satisfying the INIT constraints.

    Variables the constraints leave open (the inputs) range over their
    whole domain. Enumeration follows declaration order, so the result
    order is deterministic.
    """
    m = _machine(module)
    m.check_bound(max_states)
    found: list[State] = []
    env: dict[str, Value] = {}

    def search(k: int, pending: list[SmvExpr]) -> None:
        if k == len(m.var_names):
            if not pending:
                found.append(m.state(env))
            return
        name = m.var_names[k]
        for value in m.domains[k]:
            env[name] = value
            remaining = _filter_pending(m, pending, env, None)
            if remaining is not None:
                search(k + 1, remaining)
        del env[name]

    start = _filter_pending(m, m.init_conjuncts, env, None)
    if start is not None:
        search(0, start)
    return found


def successors(
    module: SmvModule, state: State, max_states: int = DEFAULT_MAX_STATES
) -> list[StepWitness]:
    """All next states related to `state` by every TRANS constraint."""
    m = _machine(module)
    m.check_bound(max_states)
    cached = m.succ_cache.get(state)
    if cached is not None:
        return list(cached)
    pre = state.as_dict()
    found: list[StepWitness] = []
    nxt: dict[str, Value] = {}

    def search(k: int, pending: list[SmvExpr]) -> None:
        if k == len(m.var_names):
            if not pending:
                found.append(_witness(m, state, pre, nxt))
            return
        name = m.var_names[k]
        for value in m.domains[k]:
            nxt[name] = value
            remaining = _filter_pending(m, pending, pre, nxt)
            if remaining is not None:
                search(k + 1, remaining)
        del nxt[name]

    start = _filter_pending(m, m.trans_conjuncts, pre, nxt)
    if start is not None:
        search(0, start)
    if len(m.succ_cache) <= max_states:
        m.succ_cache[state] = found
    return list(found)


def _filter_pending(
    m: _Machine,
    pending: list[SmvExpr],
    cur: Mapping[str, Value],
    nxt: Mapping[str, Value] | None,
) -> list[SmvExpr] | None:
    """Drop satisfied constraints, keep undecided ones, None on a falsified one."""
    remaining: list[SmvExpr] = []
    for c in pending:
        v = m.peval(c, cur, nxt)
        if v is UNKNOWN:
            remaining.append(c)
        elif not _truth(v):
            return None
    return remaining


def successors_naive(
    module: SmvModule, state: State, max_states: int = DEFAULT_MAX_STATES
) -> list[StepWitness]:
    """Reference enumeration over the full next-state product."""
    m = _machine(module)
    m.check_bound(max_states)
    pre = state.as_dict()
    found: list[StepWitness] = []
    for combo in itertools.product(*m.domains):
        nxt = dict(zip(m.var_names, combo))
        if all(_truth(_eval(c, pre, nxt, m.defines)) for c in m.trans_conjuncts):
            found.append(_witness(m, state, pre, nxt))
    return found


def _witness(
    m: _Machine, pre_state: State, pre: dict[str, Value], nxt: dict[str, Value]
) -> StepWitness:
    taken = frozenset(
        name for name in m.taken_names if _truth(_eval(SVar(name), pre, nxt, m.defines))
    )
    return StepWitness(pre_state, m.state(nxt), taken)


# ---------------------------------------------------------------------------
# Reachability walks


def iter_reachable_steps(
    module: SmvModule,
    depth: int,
    max_states: int = DEFAULT_MAX_STATES,
) -> Iterator[tuple[StepWitness, bool]]:
    """Every step between reachable states within `depth` rounds.

    Yields (witness, pre_state_is_initial) pairs; each distinct pre state
    is expanded once, in breadth-first discovery order.
    """
    if depth < 1:
        raise ValueError("depth must be at least 1")
    initials = initial_states(module, max_states)
    seen: set[State] = set(initials)
    frontier: deque[tuple[State, int, bool]] = deque((s, 0, True) for s in initials)
    while frontier:
        state, dist, is_initial = frontier.popleft()
        if dist >= depth:
            continue
        for w in successors(module, state, max_states):
            yield w, is_initial
            if w.post not in seen:
                seen.add(w.post)
                if len(seen) > max_states:
                    raise ResourceBoundError(f"more than {max_states} reachable states")
                frontier.append((w.post, dist + 1, False))


def check_unique_taken(
    module: SmvModule,
    depth: int,
    final_vars: Sequence[str] | None = None,
    max_states: int = DEFAULT_MAX_STATES,
) -> StepWitness | None:
    """Verify each reachable non-final step takes exactly one edge.

    Returns None on success or the first offending witness. Final states
    (any of `final_vars` true, defaulting to the in_*_final booleans) are
    exempt: their only step is the frozen nop self-loop with no edges.
    """
    finals = tuple(final_vars) if final_vars is not None else _machine(module).final_vars
    for w, _ in iter_reachable_steps(module, depth, max_states):
        if any(_truth(w.pre[v]) for v in finals):
            continue
        if len(w.taken_defines) != 1:
            return w
    return None


def check_input_constancy(
    module: SmvModule,
    input_vars: Sequence[str],
    depth: int,
    max_states: int = DEFAULT_MAX_STATES,
) -> StepWitness | None:
    """Verify no reachable step changes an input variable."""
    for w, _ in iter_reachable_steps(module, depth, max_states):
        for v in input_vars:
            if w.pre[v] != w.post[v]:
                return w
    return None


def check_nop_absorption(
    module: SmvModule,
    depth: int,
    max_states: int = DEFAULT_MAX_STATES,
) -> StepWitness | None:
    """Verify that once a step observes nop, the machine is frozen.

    The initial state also carries ac = nop before anything ran; it is
    exempt. From any other nop state the unique step must keep every
    variable unchanged except acnode, which stays at (or moves to) nop.
    """
    for w, pre_is_initial in iter_reachable_steps(module, depth, max_states):
        if pre_is_initial or w.pre[AC] != NOP:
            continue
        if w.post[AC] != NOP or w.post[ACNODE] != NOP:
            return w
        for name in w.pre.names:
            if name in (AC, ACNODE):
                continue
            if w.pre[name] != w.post[name]:
                return w
    return None


def find_deadlocks(
    module: SmvModule,
    depth: int,
    max_states: int = DEFAULT_MAX_STATES,
) -> list[DeadlockWitness]:
    """Reachable states within `depth` that admit no step at all.

    Breadth-first search, so each witness path is a shortest one. In a
    correctly generated module only a state with no enabled edge and no
    final occupancy can deadlock.
    """
    if depth < 1:
        raise ValueError("depth must be at least 1")
    out: list[DeadlockWitness] = []
    initials = initial_states(module, max_states)
    seen: set[State] = set(initials)
    frontier: deque[tuple[State, tuple[str, ...], int]] = deque((s, (), 0) for s in initials)
    while frontier:
        state, path, dist = frontier.popleft()
        succs = successors(module, state, max_states)
        if not succs:
            out.append(DeadlockWitness(state, path))
        if dist >= depth:
            continue
        for w in succs:
            if w.post not in seen:
                seen.add(w.post)
                if len(seen) > max_states:
                    raise ResourceBoundError(f"more than {max_states} reachable states")
                frontier.append((w.post, path + (str(w.post[AC]),), dist + 1))
    return out


# ---------------------------------------------------------------------------
# Bounded action traces


def action_traces(
    module: SmvModule,
    depth: int,
    max_states: int = DEFAULT_MAX_STATES,
) -> set[ActionTrace]:
    """All distinct action sequences of at most `depth` steps.

    A run that reaches the nop absorption is reported once, terminated,
    without the trailing nops; a run cut by the bound (or stuck in a
    deadlock) is reported with its prefix and terminated=False.
    """
    groups = action_traces_by_input(module, depth, (), max_states=max_states)
    out: set[ActionTrace] = set()
    for traces in groups.values():
        out |= traces
    return out


def action_traces_by_input(
    module: SmvModule,
    depth: int,
    input_vars: Sequence[str],
    max_states: int = DEFAULT_MAX_STATES,
) -> dict[tuple[tuple[str, Value], ...], frozenset[ActionTrace]]:
    """Action traces grouped by the initial values of `input_vars`.

    With no input variables there is a single group under the empty key.
    """
    if depth < 1:
        raise ValueError("depth must be at least 1")
    memo: dict[tuple[State, int], frozenset[ActionTrace]] = {}
    succ_cache: dict[State, list[StepWitness]] = {}

    def succs(state: State) -> list[StepWitness]:
        if state not in succ_cache:
            succ_cache[state] = successors(module, state, max_states)
            if len(succ_cache) > max_states:
                raise ResourceBoundError(f"more than {max_states} states explored")
        return succ_cache[state]

    def traces_from(state: State, left: int) -> frozenset[ActionTrace]:
        key = (state, left)
        if key in memo:
            return memo[key]
        if left == 0:
            result = frozenset({ActionTrace((), False)})
        else:
            collected: set[ActionTrace] = set()
            followers = succs(state)
            if not followers:
                collected.add(ActionTrace((), False))
            for w in followers:
                action = w.post[AC]
                if action == NOP:
                    collected.add(ActionTrace((), True))
                else:
                    for suffix in traces_from(w.post, left - 1):
                        collected.add(
                            ActionTrace((str(action),) + suffix.actions, suffix.terminated)
                        )
            result = frozenset(collected)
        memo[key] = result
        return result

    groups: dict[tuple[tuple[str, Value], ...], set[ActionTrace]] = {}
    for state in initial_states(module, max_states):
        key = tuple((v, state[v]) for v in input_vars)
        groups.setdefault(key, set()).update(traces_from(state, depth))
    return {key: frozenset(traces) for key, traces in groups.items()}
