"""Re-Pair ingestion and seeded grammar generators."""

from __future__ import annotations

import pytest

from slp_access.errors import ErrorCode, SlpError
from slp_access.slp.core import Pair, Terminal, compute_sizes, expand, height
from slp_access.slp.generators import MODES, random_slp
from slp_access.slp.repair import build_grammar


@pytest.mark.parametrize(
    "text",
    ["a", "ab", "abaababa", "aaaaaaaaaaaaaaaa", "mississippi", "the quick brown fox jumps over the lazy dog"],
)
def test_build_grammar_expands_to_input(text: str) -> None:
    slp = build_grammar(text)
    assert expand(slp) == text
    assert slp.root == slp.n - 1


def test_build_grammar_terminals_in_codepoint_order() -> None:
    slp = build_grammar("cab")
    assert slp.rules[:3] == (Terminal("a"), Terminal("b"), Terminal("c"))


def test_build_grammar_compresses_repetition() -> None:
    slp = build_grammar("ab" * 64)
    assert slp.length == 128
    assert slp.n < 20


def test_build_grammar_rule_cap() -> None:
    text = "abcabcabcabcxyzxyz"
    capped = build_grammar(text, max_rules=7)
    assert expand(capped) == text
    # One replacement fills the cap; everything after it is a left fold.
    assert isinstance(capped.rules[6], Pair)
    for v in range(8, capped.n):
        assert capped.rules[v].left == v - 1


@pytest.mark.parametrize("text,max_rules,code", [("", None, ErrorCode.EMPTY_INPUT), ("ab", 0, ErrorCode.INVALID_PARAMS)])
def test_build_grammar_rejects(text, max_rules, code) -> None:
    with pytest.raises(SlpError) as exc:
        build_grammar(text, max_rules)
    assert exc.value.code == code


@pytest.mark.parametrize("mode", MODES)
def test_random_slp_is_seeded(mode: str) -> None:
    a = random_slp(7, 14, "abc", mode)
    b = random_slp(7, 14, "abc", mode)
    assert a == b
    assert a.n == 14
    assert list(a.sizes) == compute_sizes(a.rules)


def test_random_slp_chain_height() -> None:
    slp = random_slp(3, 30, "ab", "chain")
    assert height(slp) == 28


def test_random_slp_balanced_children() -> None:
    slp = random_slp(5, 60, "ab", "balanced")
    heights = []
    for rule in slp.rules:
        if isinstance(rule, Terminal):
            heights.append(0)
        else:
            assert abs(heights[rule.left] - heights[rule.right]) <= 1
            heights.append(1 + max(heights[rule.left], heights[rule.right]))


def test_random_slp_doubling_grows() -> None:
    slp = random_slp(1, 20, "ab", "doubling")
    pairs = [v for v in range(slp.n) if slp.is_pair(v)]
    for v in pairs[1:]:
        assert slp.sizes[v] > slp.sizes[v - 1]


@pytest.mark.parametrize(
    "kwargs",
    [
        {"seed": 0, "n_rules": 5, "alphabet": "ab", "mode": "zigzag"},
        {"seed": 0, "n_rules": 5, "alphabet": "", "mode": "random"},
        {"seed": 0, "n_rules": 5, "alphabet": "aa", "mode": "random"},
        {"seed": 0, "n_rules": 2, "alphabet": "abc", "mode": "random"},
    ],
)
def test_random_slp_rejects(kwargs) -> None:
    with pytest.raises(SlpError) as exc:
        random_slp(**kwargs)
    assert exc.value.code == ErrorCode.INVALID_PARAMS
