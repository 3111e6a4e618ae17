"""Grammar model and SLPv1 text format."""

from __future__ import annotations

import pytest

from slp_access.errors import ErrorCode, SlpError
from slp_access.slp.core import (
    ExpansionOracle,
    Pair,
    Terminal,
    decode,
    expand,
    expand_node,
    height,
    make_slp,
    naive_access,
    naive_walk,
    reachable,
)
from slp_access.slp.text_format import parse_slp, read_slp, serialize_slp, write_slp


def test_example_sizes_and_expansion(example_slp, example_text) -> None:
    assert example_slp.n == 6
    assert example_slp.root == 5
    assert example_slp.sizes == (1, 1, 2, 3, 5, 8)
    assert example_slp.length == 8
    assert expand(example_slp) == example_text
    assert expand_node(example_slp, 3) == "aba"
    assert expand_node(example_slp, 4) == "abaab"
    assert decode(example_slp, (3, 2)) == "abaab"


def test_naive_walk_counts_rules(example_slp, example_text) -> None:
    assert naive_walk(example_slp, 5) == ("a", 4)
    assert [naive_access(example_slp, i) for i in range(8)] == list(example_text)


def test_height_and_reachable(example_slp) -> None:
    assert height(example_slp) == 4
    slp = make_slp([Terminal("a"), Terminal("b"), Pair(0, 0), Pair(0, 1)])
    assert reachable(slp) == [0, 1, 3]
    assert reachable(example_slp) == [0, 1, 2, 3, 4, 5]


def test_expansion_oracle(example_slp) -> None:
    oracle = ExpansionOracle.from_slp(example_slp)
    assert len(oracle) == 8
    assert oracle[1] == "b"
    assert oracle.slice(2, 5) == "aab"


@pytest.mark.parametrize(
    "rules,root,code",
    [
        ([], None, ErrorCode.EMPTY_INPUT),
        ([Terminal("a"), Pair(0, 1)], None, ErrorCode.FORWARD_REFERENCE),
        ([Terminal("a"), Pair(0, 0)], 0, ErrorCode.MISSING_ROOT),
        ([Terminal("\ud800")], None, ErrorCode.INVALID_CODEPOINT),
        ([Terminal("ab")], None, ErrorCode.INVALID_CODEPOINT),
    ],
)
def test_make_slp_rejects(rules, root, code) -> None:
    with pytest.raises(SlpError) as exc:
        make_slp(rules, root)
    assert exc.value.code == code


def test_sizes_overflow_u64() -> None:
    rules = [Terminal("a")] + [Pair(v, v) for v in range(64)]
    with pytest.raises(SlpError) as exc:
        make_slp(rules)
    assert exc.value.code == ErrorCode.OVERFLOW


def test_sizes_fit_u64_just_below_limit() -> None:
    slp = make_slp([Terminal("a")] + [Pair(v, v) for v in range(63)])
    assert slp.length == 1 << 63
    assert naive_access(slp, (1 << 63) - 1) == "a"


def test_expand_respects_cap(example_slp) -> None:
    with pytest.raises(SlpError) as exc:
        expand(example_slp, cap=4)
    assert exc.value.code == ErrorCode.CAP_EXCEEDED
    assert expand_node(example_slp, 4, cap=5) == "abaab"


def test_out_of_range(example_slp) -> None:
    for call in (lambda: naive_walk(example_slp, 8), lambda: naive_walk(example_slp, -1), lambda: expand_node(example_slp, 6)):
        with pytest.raises(SlpError) as exc:
            call()
        assert exc.value.code == ErrorCode.INDEX_OUT_OF_RANGE


# -- text format --------------------------------------------------------------


def test_serialize_is_canonical(example_slp, example_doc) -> None:
    assert serialize_slp(example_slp) == example_doc
    assert parse_slp(serialize_slp(example_slp)) == example_slp


def test_parse_skips_comments_and_blank_lines() -> None:
    doc = "# two rules\n\nSLPv1 3 2   # header\n0 T 120\n1 T 121\n\n2 P 1 0 # yx\n"
    slp = parse_slp(doc)
    assert expand(slp) == "yx"


def test_parse_non_ascii_codepoints() -> None:
    slp = parse_slp("SLPv1 3 2\n0 T 955\n1 T 128512\n2 P 0 1\n")
    assert expand(slp) == "λ\U0001F600"


def test_read_write_file(tmp_path, example_slp) -> None:
    path = tmp_path / "g.slp"
    write_slp(path, example_slp)
    assert read_slp(path) == example_slp


@pytest.mark.parametrize(
    "doc,code",
    [
        ("", ErrorCode.INVALID_FORMAT),
        ("SLP 1 0\n0 T 97\n", ErrorCode.INVALID_FORMAT),
        ("SLPv1 1\n0 T 97\n", ErrorCode.INVALID_FORMAT),
        ("SLPv1 2 1\n0 T 97\n0 T 98\n", ErrorCode.DUPLICATE_ID),
        ("SLPv1 2 1\n0 T 97\n2 T 98\n", ErrorCode.INVALID_FORMAT),
        ("SLPv1 2 1\n0 T 97\n1 P 0 1\n", ErrorCode.FORWARD_REFERENCE),
        ("SLPv1 2 1\n0 T 97\n1 P 0 5\n", ErrorCode.FORWARD_REFERENCE),
        ("SLPv1 1 0\n0 T 55296\n", ErrorCode.INVALID_CODEPOINT),
        ("SLPv1 1 0\n0 T 1114112\n", ErrorCode.INVALID_CODEPOINT),
        ("SLPv1 1 0\n0 T x\n", ErrorCode.INVALID_FORMAT),
        ("SLPv1 1 0\n0 T -1\n", ErrorCode.INVALID_FORMAT),
        ("SLPv1 1 0\n0 Q 97\n", ErrorCode.INVALID_FORMAT),
        ("SLPv1 1 0\n0\n", ErrorCode.INVALID_FORMAT),
        ("SLPv1 1 0\n0 T 97\n1 T 98\n", ErrorCode.INVALID_FORMAT),
        ("SLPv1 3 2\n0 T 97\n1 T 98\n", ErrorCode.MISSING_ROOT),
        ("SLPv1 3 1\n0 T 97\n1 T 98\n2 P 0 1\n", ErrorCode.MISSING_ROOT),
    ],
)
def test_parse_errors(doc: str, code: ErrorCode) -> None:
    with pytest.raises(SlpError) as exc:
        parse_slp(doc)
    assert exc.value.code == code


def test_error_str_names_code() -> None:
    err = SlpError(ErrorCode.DUPLICATE_ID, "rule 0 defined twice")
    assert str(err) == "DUPLICATE_ID(0x0102): rule 0 defined twice"
    assert ErrorCode.DUPLICATE_ID.category.name == "FORMAT"
