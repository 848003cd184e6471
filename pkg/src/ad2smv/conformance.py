"""Bounded trace equivalence between the two executable semantics.

The observable of a run is its action-name sequence. Traces are compared
per input valuation: inputs are constant along a run, so each initial
valuation induces its own trace set, and comparing group by group catches
translation bugs (like a dropped input frame) that a pooled comparison
would mask.
"""

from __future__ import annotations

import json
from dataclasses import dataclass

from .adexec import ad_action_traces_by_input
from .fsmexec import (
    DEFAULT_MAX_STATES,
    ActionTrace,
    Value,
    action_traces_by_input,
)
from .model import ActivityDiagram, validate
from .smv import SmvModule
from .translate import TranslationError, translate

GroupKey = tuple[tuple[str, Value], ...]


@dataclass(frozen=True)
class EquivStats:
    fsm_traces: int
    ad_traces: int
    fsm_terminated: int
    ad_terminated: int
    groups: int


@dataclass(frozen=True)
class EquivReport:
    verdict: str  # "equal" or "differ"
    depth: int
    only_in_fsm: tuple[tuple[GroupKey, ActionTrace], ...]
    only_in_ad: tuple[tuple[GroupKey, ActionTrace], ...]
    stats: EquivStats

    def to_json(self) -> str:
        def trace_entry(group: GroupKey, trace: ActionTrace) -> dict:
            return {
                "inputs": {name: value for name, value in group},
                "actions": list(trace.actions),
                "terminated": trace.terminated,
            }

        payload = {
            "verdict": self.verdict,
            "depth": self.depth,
            "only_in_fsm": [trace_entry(g, t) for g, t in self.only_in_fsm],
            "only_in_ad": [trace_entry(g, t) for g, t in self.only_in_ad],
            "stats": {
                "fsm_traces": self.stats.fsm_traces,
                "ad_traces": self.stats.ad_traces,
                "fsm_terminated": self.stats.fsm_terminated,
                "ad_terminated": self.stats.ad_terminated,
                "groups": self.stats.groups,
            },
        }
        return json.dumps(payload, indent=2, sort_keys=True)


def _sorted_diff(
    groups: dict[GroupKey, frozenset[ActionTrace]],
    others: dict[GroupKey, frozenset[ActionTrace]],
) -> tuple[tuple[GroupKey, ActionTrace], ...]:
    out: list[tuple[GroupKey, ActionTrace]] = []
    for key in groups:
        extra = groups[key] - others.get(key, frozenset())
        out.extend((key, t) for t in extra)
    out.sort(key=lambda item: (item[0], len(item[1].actions), item[1].actions))
    return tuple(out)


def check_equivalence(
    ad: ActivityDiagram,
    depth: int,
    module: SmvModule | None = None,
    max_states: int = DEFAULT_MAX_STATES,
) -> EquivReport:
    """Compare machine traces against token-game traces, per input group.

    `module` overrides the translation result; tests use that to show the
    check catches deliberately broken translations.
    """
    diagnostics = validate(ad)
    if diagnostics:
        raise TranslationError(diagnostics)
    if module is None:
        module = translate(ad)
    input_names = [v.name for v in ad.input_vars()]
    fsm_groups = action_traces_by_input(module, depth, input_names, max_states=max_states)
    ad_groups = ad_action_traces_by_input(ad, depth)
    all_keys = set(fsm_groups) | set(ad_groups)
    fsm_full = {k: fsm_groups.get(k, frozenset()) for k in all_keys}
    ad_full = {k: ad_groups.get(k, frozenset()) for k in all_keys}
    only_in_fsm = _sorted_diff(fsm_full, ad_full)
    only_in_ad = _sorted_diff(ad_full, fsm_full)
    stats = EquivStats(
        fsm_traces=sum(len(v) for v in fsm_full.values()),
        ad_traces=sum(len(v) for v in ad_full.values()),
        fsm_terminated=sum(1 for v in fsm_full.values() for t in v if t.terminated),
        ad_terminated=sum(1 for v in ad_full.values() for t in v if t.terminated),
        groups=len(all_keys),
    )
    verdict = "equal" if not only_in_fsm and not only_in_ad else "differ"
    return EquivReport(verdict, depth, only_in_fsm, only_in_ad, stats)
