"""Random access engines against the expansion oracle."""

from __future__ import annotations

import math

import numpy as np
import pytest

from slp_access.access_engine import (
    NO_NODE,
    TraceStep,
    access,
    access_with_trace,
    build_engine,
    build_reference_engine,
    query_cost,
    right_offset_closed_form,
)
from slp_access.config import TELESCOPE_C
from slp_access.errors import ErrorCode, SlpError
from slp_access.slp.core import Pair, Slp, Terminal, expand, make_slp
from slp_access.slp.generators import random_slp
from slp_access.slp.repair import build_grammar
from slp_access.types import EngineMode, StepCase

SETUPS = [("baseline", 0), ("linear", 0), ("biased", 0), ("biased", 1), ("biased", 2)]

GRAMMARS = [
    pytest.param(random_slp(41, 16, "ab", "random"), id="random"),
    pytest.param(random_slp(42, 40, "abc", "balanced"), id="balanced"),
    pytest.param(random_slp(43, 50, "ab", "chain"), id="chain"),
    pytest.param(random_slp(44, 16, "ab", "doubling"), id="doubling"),
    pytest.param(build_grammar("it was the best of times, it was the worst of times"), id="repair"),
]


def _doubling(levels: int) -> Slp:
    return make_slp([Terminal("x")] + [Pair(v, v) for v in range(levels)])


def _positions(n: int) -> list[int]:
    if n <= 600:
        return list(range(n))
    step = n // 500
    return sorted(set(range(0, n, step)) | {n - 1})


def test_example_access(example_slp, example_text) -> None:
    for mode, levels in SETUPS:
        e = build_engine(example_slp, mode, levels)
        assert [e.access(i) for i in range(8)] == list(example_text)
        assert access(e, 1) == "b"


def test_example_trace(example_slp) -> None:
    want = [
        TraceStep(head=5, case=StepCase.DESCEND_RIGHT, entered=3, position=1, exit=5, step=0, origin=0),
        TraceStep(head=3, case=StepCase.HIT_Z, entered=NO_NODE, position=1, exit=0, step=2, origin=5),
    ]
    for mode, levels in SETUPS:
        ch, trace = access_with_trace(build_engine(example_slp, mode, levels), 5)
        assert ch == "a"
        assert trace.steps == want
        assert trace.light_edges == 1


def test_hit_z_at_root(example_slp) -> None:
    e = build_engine(example_slp, "biased", 1)
    _, trace = e.access_with_trace(0)
    assert trace.steps == [TraceStep(5, StepCase.HIT_Z, NO_NODE, 1, 0, 4, 0)]
    cost = query_cost(e, 0)
    assert cost.rule_visits == 1
    assert cost.path_switches == 0


def test_access_from_node(example_slp) -> None:
    e = build_engine(example_slp, "biased", 1)
    assert "".join(e.access_from(4, i) for i in range(5)) == "abaab"
    _, trace = e.trace_from(4, 4)
    assert trace.steps[0].origin == 0
    assert trace.steps[-1].case is StepCase.HIT_Z


def test_right_offset_closed_form(example_slp) -> None:
    e = build_engine(example_slp, "biased", 0)
    assert right_offset_closed_form(e, 5, 5) == 5
    assert right_offset_closed_form(e, 5, 4) == 3
    with pytest.raises(SlpError) as exc:
        right_offset_closed_form(e, 5, 0)
    assert exc.value.code == ErrorCode.NOT_A_PAIR


@pytest.mark.parametrize("slp", GRAMMARS)
def test_engines_match_oracle_and_baseline_trace(slp) -> None:
    text = expand(slp)
    engines = {f"{m}/{lv}": build_engine(slp, m, lv) for m, lv in SETUPS}
    reference = engines["baseline/0"]
    bound = slp.length.bit_length()
    for i in _positions(slp.length):
        want, want_trace = reference.access_with_trace(i)
        assert want == text[i]
        assert want_trace.light_edges <= bound
        for name, e in engines.items():
            got, trace = e.access_with_trace(i)
            assert got == want, name
            assert trace.steps == want_trace.steps, name


@pytest.mark.parametrize("slp", GRAMMARS)
def test_costs_are_per_query(slp) -> None:
    e = build_engine(slp, "biased", 1)
    first = e.query_cost(slp.length - 1)
    again = e.query_cost(slp.length - 1)
    assert first == again
    assert first.rule_visits == first.path_switches + 1


@pytest.mark.parametrize(
    "slp",
    [
        pytest.param(build_grammar("abaababa"), id="fib"),
        pytest.param(random_slp(51, 300, "ab", "chain"), id="chain"),
        pytest.param(_doubling(40), id="doubling"),
    ],
)
def test_predecessor_visits_telescope_on_single_path_grammars(slp) -> None:
    n = slp.length
    budget = TELESCOPE_C * (2 + math.log2(n))
    for levels in (0, 1, 2):
        e = build_engine(slp, "biased", levels)
        for i in _positions(n):
            assert e.query_cost(i).predecessor_visits <= budget


@pytest.mark.parametrize("mode", ["random", "balanced", "chain"])
@pytest.mark.parametrize("seed", [61, 62, 63, 64])
def test_predecessor_visits_telescope_on_generated_grammars(mode: str, seed: int) -> None:
    slp = random_slp(seed, 400, "abcd", mode)
    n = slp.length
    budget = TELESCOPE_C * (2 + math.log2(n))
    rng = np.random.default_rng(seed)
    positions = [int(x) for x in rng.integers(0, n, size=200, dtype=np.uint64)]
    for levels in (0, 1, 2):
        e = build_engine(slp, "biased", levels)
        for i in positions:
            assert e.query_cost(i).predecessor_visits <= budget, (levels, i)


def _thue_morse(levels: int) -> Slp:
    # A_{k+1} = A_k B_k and B_{k+1} = B_k A_k; the root is B_levels.
    rules = [Terminal("a"), Terminal("b")]
    a, b = 0, 1
    for _ in range(levels):
        rules += [Pair(a, b), Pair(b, a)]
        a, b = len(rules) - 2, len(rules) - 1
    return make_slp(rules)


def test_huge_grammar_engines_agree() -> None:
    slp = _thue_morse(40)
    assert slp.length == 1 << 40
    engines = [build_engine(slp, mode, levels) for mode, levels in SETUPS]
    rng = np.random.default_rng(40)
    for i in rng.integers(0, slp.length, size=10_000, dtype=np.uint64):
        i = int(i)
        want = "b" if bin(i).count("1") % 2 == 0 else "a"
        assert [e.access(i) for e in engines] == [want] * len(engines), i


def test_huge_doubling_grammar() -> None:
    slp = _doubling(62)
    e = build_engine(slp, "biased", 2)
    assert e.length == 1 << 62
    assert e.access((1 << 62) - 1) == "x"
    assert e.query_cost((1 << 61) + 12345).path_switches <= 62


def test_reference_engine_example(example_slp, example_text) -> None:
    for biased in (True, False):
        ref = build_reference_engine(example_slp, biased)
        assert "".join(ref.access(i) for i in range(8)) == example_text
    ref = build_reference_engine(example_slp)
    # one table entry per node of every heavy path suffix: depth + 1 summed
    assert ref.items == sum(d + 1 for d in ref.forest.depth) == 16
    assert ref.tables[5].seqs[1].values == (1, 4, 6, 7, 8)
    assert ref.tables[5].trees[0] is None
    assert ref.tables[0].trees == (None, None)


@pytest.mark.parametrize("slp", GRAMMARS)
def test_reference_engine_matches_traces(slp) -> None:
    baseline = build_engine(slp, "baseline")
    biased = build_engine(slp, "biased", 1)
    for flag in (True, False):
        ref = build_reference_engine(slp, flag)
        for i in _positions(slp.length):
            want, want_trace = baseline.access_with_trace(i)
            got, trace = ref.trace_from(slp.root, i)
            assert got == want
            assert trace.steps == want_trace.steps
            assert biased.access(i) == got


def test_reference_engine_rejects_out_of_range(example_slp) -> None:
    ref = build_reference_engine(example_slp)
    with pytest.raises(SlpError) as exc:
        ref.access(8)
    assert exc.value.code == ErrorCode.INDEX_OUT_OF_RANGE


def test_biased_beats_baseline_on_deep_chains() -> None:
    slp = random_slp(52, 400, "ab", "chain")
    baseline = build_engine(slp, "baseline")
    biased = build_engine(slp, "biased", 1)
    i = slp.length // 2
    assert biased.query_cost(i).rule_visits < baseline.query_cost(i).rule_visits


def test_build_engine_rejects_bad_params(example_slp) -> None:
    with pytest.raises(SlpError) as exc:
        build_engine(example_slp, "fast")
    assert exc.value.code == ErrorCode.INVALID_PARAMS
    with pytest.raises(SlpError) as exc:
        build_engine(example_slp, EngineMode.BIASED, 3)
    assert exc.value.code == ErrorCode.INVALID_PARAMS


def test_out_of_range(example_slp) -> None:
    e = build_engine(example_slp, "biased", 1)
    for call in (lambda: e.access(8), lambda: e.access(-1), lambda: e.access_from(6, 0), lambda: e.trace_from(3, 3)):
        with pytest.raises(SlpError) as exc:
            call()
        assert exc.value.code == ErrorCode.INDEX_OUT_OF_RANGE


def test_baseline_has_no_index(example_slp) -> None:
    e = build_engine(example_slp, "baseline")
    assert e.wa is None
    assert e.build_work == 0
    assert e.mode is EngineMode.BASELINE
    assert build_engine(example_slp, "biased", 1).build_work > 0


@pytest.mark.parametrize("mode", ["random", "chain", "balanced"])
def test_build_work_scales_linearly(mode: str) -> None:
    small = build_engine(random_slp(71, 10_000, "abcd", mode), "biased", 1).build_work
    large = build_engine(random_slp(71, 20_000, "abcd", mode), "biased", 1).build_work
    assert 0 < large <= 2.5 * small
