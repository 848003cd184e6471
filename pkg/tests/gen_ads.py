"""Seeded generator of small well-synchronized activity diagrams.

Diagrams are built from sequential blocks between the initial and final
node: plain action chains, exhaustive two-way decisions over an input,
bounded counter loops, and fork/join sections whose branches reconnect
only at their own join. That is exactly the fragment where one fired edge
per step is guaranteed, so the two semantics must agree on traces.
"""

from __future__ import annotations

import random

MAX_LOOP = 2


class _Builder:
    def __init__(self, rng: random.Random):
        self.rng = rng
        self.lines: list[str] = []
        self.edges: list[str] = []
        self.counter = 0

    def fresh(self, prefix: str) -> str:
        self.counter += 1
        return f"{prefix}{self.counter}"

    def action(self) -> str:
        node = self.fresh("a")
        self.lines.append(f'  action {node} "task {self.counter}" ;')
        return node

    def action_with(self, body: str) -> str:
        node = self.fresh("a")
        self.lines.append(f'  action {node} "task {self.counter}" {{ {body} }} ;')
        return node

    def edge(self, src: str, tgt: str, guard: str | None = None) -> None:
        suffix = f" [ {guard} ]" if guard else ""
        self.edges.append(f"  edge {src} -> {tgt}{suffix} ;")

    def chain(self, tail: str, length: int) -> str:
        for _ in range(length):
            node = self.action()
            self.edge(tail, node)
            tail = node
        return tail


def _branch_block(b: _Builder, tail: str, input_var: str, members: tuple[str, str]) -> str:
    decision = b.fresh("d")
    merge = b.fresh("m")
    b.lines.append(f"  decision {decision} ;")
    b.lines.append(f"  merge {merge} ;")
    b.edge(tail, decision)
    for member in members:
        first = b.action()
        b.edge(decision, first, f"{input_var} = {member}")
        last = b.chain(first, b.rng.randint(0, 1))
        b.edge(last, merge)
    after = b.action()
    b.edge(merge, after)
    return after


def _loop_block(b: _Builder, tail: str, counter_var: str) -> str:
    merge = b.fresh("m")
    decision = b.fresh("d")
    b.lines.append(f"  merge {merge} ;")
    b.lines.append(f"  decision {decision} ;")
    b.edge(tail, merge)
    body_first = b.action_with(f"{counter_var} := {counter_var} + 1 ;")
    b.edge(merge, body_first)
    body_last = b.chain(body_first, b.rng.randint(0, 1))
    b.edge(body_last, decision)
    bound = b.rng.randint(1, MAX_LOOP)
    b.edge(decision, merge, f"{counter_var} < {bound}")
    after = b.action()
    b.edge(decision, after, f"{counter_var} >= {bound}")
    return after


def _fork_block(b: _Builder, tail: str) -> str:
    fork = b.fresh("fk")
    join = b.fresh("jn")
    b.lines.append(f"  fork {fork} ;")
    b.lines.append(f"  join {join} ;")
    b.edge(tail, fork)
    branch_tails = []
    for _ in range(2):
        first = b.action()
        b.edge(fork, first)
        branch_tails.append(b.chain(first, b.rng.randint(0, 1)))
    for branch_tail in branch_tails:
        b.edge(branch_tail, join)
    after = b.action()
    b.edge(join, after)
    return after


def generate_ad_source(seed: int, allow_fork: bool = True) -> str:
    """Deterministic small diagram source for the given seed."""
    rng = random.Random(seed)
    b = _Builder(rng)
    kinds = ["chain", "branch", "loop"] + (["fork"] if allow_fork else [])
    blocks = [rng.choice(kinds) for _ in range(rng.randint(1, 2))]

    header: list[str] = []
    input_members = ("one", "two", "three")[: rng.randint(2, 3)]
    if "branch" in blocks:
        header.append(f"  input sel : {{{', '.join(input_members)}}} ;")
    if "loop" in blocks:
        header.append(f"  local cnt : 0 .. {MAX_LOOP + 1} init 0 ;")

    b.lines.append("  initial start ;")
    first = b.action()
    b.edge("start", first)
    tail = first
    for kind in blocks:
        if kind == "chain":
            tail = b.chain(tail, rng.randint(1, 2))
        elif kind == "branch":
            tail = _branch_block(b, tail, "sel", input_members[:2])
        elif kind == "loop":
            tail = _loop_block(b, tail, "cnt")
        else:
            tail = _fork_block(b, tail)
    b.lines.append("  final stop ;")
    b.edge(tail, "stop")

    body = "\n".join(header + b.lines + b.edges)
    return f"activity gen{seed} {{\n{body}\n}}\n"
