"""Canonical grammar digest (v1)."""
from __future__ import annotations

from blake3 import blake3

from .config import SLP_MAGIC
from .slp.core import Slp, Terminal

TAG_TERMINAL = 0x00
TAG_PAIR = 0x01


def _u64_be(value: int) -> bytes:
    if value < 0:
        raise ValueError("u64 must be non-negative")
    return int(value).to_bytes(8, "big", signed=False)


def grammar_bytes(slp: Slp) -> bytes:
    """Magic, rule count and root, then a tag byte and u64 payloads per rule.

    Terminals carry their code point, pairs their two child ids.
    """
    buf = bytearray(SLP_MAGIC.encode("ascii"))
    buf += _u64_be(slp.n)
    buf += _u64_be(slp.root)
    for rule in slp.rules:
        if isinstance(rule, Terminal):
            buf.append(TAG_TERMINAL)
            buf += _u64_be(ord(rule.ch))
        else:
            buf.append(TAG_PAIR)
            buf += _u64_be(rule.left)
            buf += _u64_be(rule.right)
    return bytes(buf)


def grammar_digest(slp: Slp) -> str:
    """BLAKE3-256 hex digest of `grammar_bytes`."""
    return blake3(grammar_bytes(slp)).hexdigest()
