"""Replay fixtures against the library and report mismatches."""

from __future__ import annotations

import json
import sys
from pathlib import Path
from typing import Any, Callable

ROOT = Path(__file__).resolve().parent.parent
sys.path.insert(0, str(ROOT / "src"))

from slp_access.access_engine import build_engine  # noqa: E402
from slp_access.approx_match import search  # noqa: E402
from slp_access.biased_search import ibst_build, ibst_predecessor  # noqa: E402
from slp_access.digest import grammar_digest  # noqa: E402
from slp_access.errors import SlpError  # noqa: E402
from slp_access.slp.text_format import parse_slp  # noqa: E402
from slp_access.substring import extract  # noqa: E402


def _engine(inp: dict[str, Any]):
    return build_engine(parse_slp(inp["grammar"]), inp.get("engine", "biased"), inp.get("levels", 1))


def _access(inp: dict[str, Any]) -> dict[str, Any]:
    return {"char": _engine(inp).access(inp["i"])}


def _extract(inp: dict[str, Any]) -> dict[str, Any]:
    return {"text": extract(_engine(inp), inp["i"], inp["j"])}


def _search(inp: dict[str, Any]) -> dict[str, Any]:
    return {"ends": search(_engine(inp), inp["pattern"], inp["k"])}


def _predecessor(inp: dict[str, Any]) -> dict[str, Any]:
    index, value = ibst_predecessor(ibst_build(inp["boundaries"]), inp["p"])
    return {"index": index, "value": value}


def _digest(inp: dict[str, Any]) -> dict[str, Any]:
    return {"digest": grammar_digest(parse_slp(inp["grammar"]))}


def _parse(inp: dict[str, Any]) -> dict[str, Any]:
    slp = parse_slp(inp["grammar"])
    return {"rules": slp.n, "length": slp.length}


KINDS: dict[str, Callable[[dict[str, Any]], dict[str, Any]]] = {
    "access": _access,
    "extract": _extract,
    "search": _search,
    "ibst_predecessor": _predecessor,
    "digest": _digest,
    "parse": _parse,
}


def _check_vector(vec: dict[str, Any]) -> str | None:
    inp = vec.get("input") or {}
    expected = vec.get("expected") or {}
    run = KINDS.get(inp.get("kind", ""))
    if run is None or vec.get("runnable") is False:
        return None
    try:
        actual = run(inp)
    except SlpError as exc:
        if expected.get("error") != exc.code.name:
            return f"{vec.get('name')}: error_mismatch ({exc.code.name})"
        return None
    if "error" in expected:
        return f"{vec.get('name')}: expected {expected['error']}"
    for key, value in actual.items():
        if key in expected and expected[key] != value:
            return f"{vec.get('name')}: {key}_mismatch"
    return None


def main() -> None:
    fixtures = ROOT / "fixtures"
    failures: list[str] = []
    checked = 0
    for path in sorted(fixtures.rglob("*.json")):
        data = json.loads(path.read_text())
        for vec in data.get("test_vectors", []):
            checked += 1
            failure = _check_vector(vec)
            if failure:
                failures.append(f"{path.relative_to(fixtures)}: {failure}")

    if failures:
        for f in failures:
            print("FAIL", f)
        raise SystemExit(1)

    print(f"All {checked} fixture vectors passed")


if __name__ == "__main__":
    main()
