"""SLPv1 text format.

    SLPv1 <n> <root-id>
    <id> T <codepoint-decimal>
    <id> P <left-id> <right-id>

One item per line, ids ascending from 0; `#` starts a comment.
"""

from __future__ import annotations

from pathlib import Path
from typing import List

from ..config import SLP_MAGIC
from ..errors import ErrorCode, SlpError
from .core import Pair, Rule, Slp, Terminal, make_slp

_MAX_CODEPOINT = 0x10FFFF


def _int(token: str, lineno: int) -> int:
    try:
        value = int(token, 10)
    except ValueError:
        raise SlpError(ErrorCode.INVALID_FORMAT, f"line {lineno}: {token!r} is not a decimal integer") from None
    if value < 0:
        raise SlpError(ErrorCode.INVALID_FORMAT, f"line {lineno}: negative value {value}")
    return value


def parse_slp(text: str) -> Slp:
    header = None
    rules: List[Rule] = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        tokens = line.split()
        if header is None:
            if len(tokens) != 3 or tokens[0] != SLP_MAGIC:
                raise SlpError(ErrorCode.INVALID_FORMAT, f"line {lineno}: expected '{SLP_MAGIC} <n> <root-id>'")
            header = (_int(tokens[1], lineno), _int(tokens[2], lineno))
            continue

        if len(tokens) < 2:
            raise SlpError(ErrorCode.INVALID_FORMAT, f"line {lineno}: truncated rule")
        rid = _int(tokens[0], lineno)
        if rid < len(rules):
            raise SlpError(ErrorCode.DUPLICATE_ID, f"line {lineno}: rule {rid} defined twice")
        if rid != len(rules):
            raise SlpError(ErrorCode.INVALID_FORMAT, f"line {lineno}: expected rule {len(rules)}, got {rid}")

        kind, args = tokens[1], tokens[2:]
        if kind == "T" and len(args) == 1:
            cp = _int(args[0], lineno)
            if cp > _MAX_CODEPOINT or 0xD800 <= cp <= 0xDFFF:
                raise SlpError(ErrorCode.INVALID_CODEPOINT, f"line {lineno}: {cp} is not a unicode scalar")
            rules.append(Terminal(chr(cp)))
        elif kind == "P" and len(args) == 2:
            left, right = _int(args[0], lineno), _int(args[1], lineno)
            if left >= rid or right >= rid:
                raise SlpError(
                    ErrorCode.FORWARD_REFERENCE,
                    f"line {lineno}: rule {rid} references {max(left, right)} (forward reference)",
                )
            rules.append(Pair(left, right))
        else:
            raise SlpError(ErrorCode.INVALID_FORMAT, f"line {lineno}: malformed rule {line!r}")

    if header is None:
        raise SlpError(ErrorCode.INVALID_FORMAT, "missing SLPv1 header")
    n, root = header
    if len(rules) > n:
        raise SlpError(ErrorCode.INVALID_FORMAT, f"header declares {n} rules, found {len(rules)}")
    if root >= len(rules):
        raise SlpError(ErrorCode.MISSING_ROOT, f"root rule {root} is not defined")
    if len(rules) < n:
        raise SlpError(ErrorCode.MISSING_ROOT, f"header declares {n} rules, found {len(rules)}")
    return make_slp(rules, root)


def serialize_slp(slp: Slp) -> str:
    lines = [f"{SLP_MAGIC} {slp.n} {slp.root}"]
    for v, rule in enumerate(slp.rules):
        if isinstance(rule, Terminal):
            lines.append(f"{v} T {ord(rule.ch)}")
        else:
            lines.append(f"{v} P {rule.left} {rule.right}")
    return "\n".join(lines) + "\n"


def read_slp(path: Path) -> Slp:
    return parse_slp(Path(path).read_text(encoding="utf-8"))


def write_slp(path: Path, slp: Slp) -> None:
    Path(path).write_text(serialize_slp(slp), encoding="ascii")
