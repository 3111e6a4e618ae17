#!/usr/bin/env python3
"""Mirror JSON fixtures as YAML vectors.

Every vector keeps its name, input and expected block. Error names are
resolved to numeric codes and grammar inputs gain their canonical digest,
so a consumer in another language can check both without this library.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path
from typing import Any

ROOT = Path(__file__).resolve().parent.parent
sys.path.insert(0, str(ROOT / "src"))
sys.path.insert(0, str(ROOT / "tools"))

from slp_access.digest import grammar_digest  # noqa: E402
from slp_access.errors import ErrorCode, SlpError  # noqa: E402
from slp_access.slp.text_format import parse_slp  # noqa: E402
from yaml_dump import write_yaml  # noqa: E402


def _map_error_code(name: str | None) -> int:
    if not name:
        return int(ErrorCode.SUCCESS)
    try:
        return int(ErrorCode[name])
    except KeyError:
        return int(ErrorCode.UNKNOWN)


def _annotate(vector: dict[str, Any]) -> dict[str, Any]:
    out = dict(vector)
    expected = dict(out.get("expected") or {})
    expected["error_code"] = _map_error_code(expected.get("error"))
    grammar = (out.get("input") or {}).get("grammar")
    if grammar and "error" not in expected:
        try:
            expected["grammar_digest"] = grammar_digest(parse_slp(grammar))
        except SlpError:
            expected["grammar_digest"] = ""
    out["expected"] = expected
    return out


def main() -> None:
    parser = argparse.ArgumentParser(description="Convert fixtures to vectors")
    parser.add_argument("--fixtures", default=str(ROOT / "fixtures"))
    parser.add_argument("--vectors", default=str(ROOT / "vectors"))
    args = parser.parse_args()

    fixtures = Path(args.fixtures).resolve()
    vectors = Path(args.vectors).resolve()
    if not fixtures.exists():
        raise SystemExit(f"fixtures dir not found: {fixtures}")

    count = 0
    for path in sorted(fixtures.rglob("*.json")):
        rel = path.relative_to(fixtures)
        data = json.loads(path.read_text())
        if not isinstance(data, dict) or not isinstance(data.get("test_vectors"), list):
            continue
        out = {"test_vectors": [_annotate(v) for v in data["test_vectors"] if isinstance(v, dict)]}
        write_yaml(vectors / rel.with_suffix(".yaml"), out)
        count += 1
    print(f"Wrote {count} vector files to {vectors}")


if __name__ == "__main__":
    main()
