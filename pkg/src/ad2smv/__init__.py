"""Activity diagrams to SMV, with two cross-checked executable semantics."""

from .adexec import AdConfig, ad_action_traces, ad_initial_configs, ad_step
from .adtext import AdSyntaxError, ParseError, SourceSpan, parse_ad, print_ad
from .conformance import EquivReport, check_equivalence
from .fsmexec import (
    ActionTrace,
    DeadlockWitness,
    ResourceBoundError,
    State,
    StepWitness,
    action_traces,
    check_unique_taken,
    find_deadlocks,
    initial_states,
    successors,
    successors_naive,
)
from .model import (
    ActivityDiagram,
    Diagnostic,
    EnumDomain,
    Node,
    RangeDomain,
    Transition,
    VariableDecl,
    effective_source,
    effective_target,
    eval_expr,
    validate,
)
from .smv import SmvModule, normalize, parse_smv_subset, print_smv
from .translate import CanonicalNames, TranslationError, canonical_names, translate

__version__ = "0.1.0"

__all__ = [
    "ActionTrace",
    "ActivityDiagram",
    "AdConfig",
    "AdSyntaxError",
    "CanonicalNames",
    "DeadlockWitness",
    "Diagnostic",
    "EnumDomain",
    "EquivReport",
    "Node",
    "ParseError",
    "RangeDomain",
    "ResourceBoundError",
    "SmvModule",
    "SourceSpan",
    "State",
    "StepWitness",
    "Transition",
    "TranslationError",
    "VariableDecl",
    "action_traces",
    "ad_action_traces",
    "ad_initial_configs",
    "ad_step",
    "canonical_names",
    "check_equivalence",
    "check_unique_taken",
    "effective_source",
    "effective_target",
    "eval_expr",
    "find_deadlocks",
    "initial_states",
    "normalize",
    "parse_ad",
    "parse_smv_subset",
    "print_ad",
    "print_smv",
    "successors",
    "successors_naive",
    "translate",
    "validate",
]
