from __future__ import annotations

import pytest

from ad2smv.adtext import parse_ad, print_ad
from ad2smv.conformance import check_equivalence
from ad2smv.fsmexec import (
    check_input_constancy,
    check_nop_absorption,
    check_unique_taken,
    initial_states,
    successors,
    successors_naive,
)
from ad2smv.model import validate
from ad2smv.smv import module_issues, parse_smv_subset, print_smv, strip_comments
from ad2smv.translate import translate

from gen_ads import generate_ad_source

BOUND = 10**9  # generated fork pairs blow past the desk-scale default product


@pytest.mark.parametrize("seed", range(20))
def test_generated_diagram_pipeline(seed):
    source = generate_ad_source(seed)
    ad = parse_ad(source)
    assert validate(ad) == []
    assert parse_ad(print_ad(ad)) == ad

    module = translate(ad)
    assert module_issues(module) == []
    assert strip_comments(parse_smv_subset(print_smv(module))) == strip_comments(module)

    report = check_equivalence(ad, 5, max_states=BOUND)
    assert report.verdict == "equal", report.to_json()


@pytest.mark.parametrize("seed", range(6))
def test_generated_diagram_deeper_equivalence(seed):
    ad = parse_ad(generate_ad_source(seed, allow_fork=False))
    report = check_equivalence(ad, 8, max_states=BOUND)
    assert report.verdict == "equal", report.to_json()


@pytest.mark.parametrize("seed", (1, 2, 3, 6))
def test_generated_diagram_guided_equals_naive(seed):
    # Fork-free diagrams with a small domain product, so the naive
    # reference enumeration stays quick.
    ad = parse_ad(generate_ad_source(seed, allow_fork=False))
    module = translate(ad)
    state = initial_states(module, max_states=BOUND)[0]
    for _ in range(3):
        guided = successors(module, state, max_states=BOUND)
        assert guided == successors_naive(module, state, max_states=BOUND)
        if not guided:
            break
        state = guided[0].post


@pytest.mark.parametrize("seed", range(6))
def test_generated_diagram_step_properties(seed):
    ad = parse_ad(generate_ad_source(seed))
    module = translate(ad)
    inputs = [v.name for v in ad.input_vars()]
    assert check_unique_taken(module, 6, max_states=BOUND) is None
    assert check_input_constancy(module, inputs, 6, max_states=BOUND) is None
    assert check_nop_absorption(module, 6, max_states=BOUND) is None
