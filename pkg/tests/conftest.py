"""Pytest hooks to collect vectors and shared grammar fixtures."""

from __future__ import annotations

import json
from pathlib import Path
from typing import Any, Callable

import pytest

from slp_access.slp.core import Pair, Slp, Terminal, make_slp
from slp_access.slp.text_format import parse_slp

# Fibonacci-style grammar for "abaababa":
#   2 -> ab, 3 -> aba, 4 -> abaab, 5 -> abaababa
EXAMPLE_DOC = """\
SLPv1 6 5
0 T 97
1 T 98
2 P 0 1
3 P 2 0
4 P 3 2
5 P 4 3
"""
EXAMPLE_TEXT = "abaababa"

_VECTOR_CASES: dict[str, list[dict[str, Any]]] = {}


def pytest_addoption(parser: pytest.Parser) -> None:
    parser.addoption(
        "--output",
        action="store",
        default=None,
        help="Output directory for generated fixtures",
    )


@pytest.fixture
def example_doc() -> str:
    return EXAMPLE_DOC


@pytest.fixture
def example_text() -> str:
    return EXAMPLE_TEXT


@pytest.fixture
def example_slp() -> Slp:
    return parse_slp(EXAMPLE_DOC)


@pytest.fixture
def huge_slp() -> Slp:
    """Doubling chain with one extra character: N = 2**63 + 1."""
    rules = [Terminal("a"), Terminal("b"), Pair(0, 0)] + [Pair(v, v) for v in range(2, 64)] + [Pair(64, 1)]
    return make_slp(rules)


@pytest.fixture
def vector_test_group() -> Callable[[str, dict[str, Any]], None]:
    """Collect pre-built test_vectors under a specific fixture path."""

    def _vector_test_group(rel_path: str, vector: dict[str, Any]) -> None:
        _VECTOR_CASES.setdefault(rel_path, []).append(vector)

    return _vector_test_group


def pytest_sessionfinish(session: pytest.Session, exitstatus: int) -> None:
    output_dir = session.config.getoption("--output")
    if not output_dir:
        return

    out = Path(output_dir)
    out.mkdir(parents=True, exist_ok=True)

    for rel_path, vectors in _VECTOR_CASES.items():
        if not vectors:
            continue
        target = out / rel_path
        target.parent.mkdir(parents=True, exist_ok=True)
        target.write_text(json.dumps({"test_vectors": vectors}, indent=2))
