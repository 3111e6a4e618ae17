"""Straight-line program model, sizes and the expansion oracle.

Rules are stored in topological order: a pair rule only refers to rules
with smaller ids, so the root is always the last rule.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, List, Optional, Sequence, Tuple, Union

from ..config import ORACLE_CAP, U64_MAX
from ..errors import ErrorCode, SlpError


@dataclass(frozen=True)
class Terminal:
    ch: str


@dataclass(frozen=True)
class Pair:
    left: int
    right: int


Rule = Union[Terminal, Pair]


@dataclass(frozen=True)
class Slp:
    rules: Tuple[Rule, ...]
    root: int
    sizes: Tuple[int, ...]

    @property
    def n(self) -> int:
        return len(self.rules)

    @property
    def length(self) -> int:
        return self.sizes[self.root]

    def is_pair(self, v: int) -> bool:
        return isinstance(self.rules[v], Pair)


def _is_scalar(ch: str) -> bool:
    if len(ch) != 1:
        return False
    cp = ord(ch)
    return not 0xD800 <= cp <= 0xDFFF


def compute_sizes(rules: Sequence[Rule]) -> List[int]:
    """Expansion length of every rule in one bottom-up pass."""
    sizes: List[int] = []
    for v, rule in enumerate(rules):
        if isinstance(rule, Terminal):
            sizes.append(1)
            continue
        if not (0 <= rule.left < v and 0 <= rule.right < v):
            raise SlpError(
                ErrorCode.FORWARD_REFERENCE,
                f"rule {v} references {rule.left},{rule.right} (children must precede)",
            )
        size = sizes[rule.left] + sizes[rule.right]
        if size > U64_MAX:
            raise SlpError(ErrorCode.OVERFLOW, f"rule {v} expands past 2^64-1 characters")
        sizes.append(size)
    return sizes


def make_slp(rules: Sequence[Rule], root: Optional[int] = None) -> Slp:
    """Validate rules and attach sizes. The root must be the last rule."""
    if not rules:
        raise SlpError(ErrorCode.EMPTY_INPUT, "grammar has no rules")
    last = len(rules) - 1
    if root is None:
        root = last
    if root != last:
        raise SlpError(ErrorCode.MISSING_ROOT, f"root {root} is not the last rule {last}")
    for v, rule in enumerate(rules):
        if isinstance(rule, Terminal):
            if not _is_scalar(rule.ch):
                raise SlpError(ErrorCode.INVALID_CODEPOINT, f"rule {v} is not a unicode scalar")
        elif not isinstance(rule, Pair):
            raise SlpError(ErrorCode.INVALID_FORMAT, f"rule {v} has unknown type {type(rule).__name__}")
    sizes = compute_sizes(rules)
    return Slp(rules=tuple(rules), root=root, sizes=tuple(sizes))


def decode(slp: Slp, roots: Iterable[int]) -> str:
    """Concatenated expansions of `roots`, left to right, with an explicit stack."""
    out: List[str] = []
    rules = slp.rules
    for top in roots:
        stack = [top]
        while stack:
            v = stack.pop()
            rule = rules[v]
            if isinstance(rule, Terminal):
                out.append(rule.ch)
            else:
                stack.append(rule.right)
                stack.append(rule.left)
    return "".join(out)


def expand_node(slp: Slp, v: int, cap: int = ORACLE_CAP) -> str:
    if not 0 <= v < slp.n:
        raise SlpError(ErrorCode.INDEX_OUT_OF_RANGE, f"rule {v} not in [0, {slp.n})")
    if slp.sizes[v] > cap:
        raise SlpError(
            ErrorCode.CAP_EXCEEDED,
            f"rule {v} expands to {slp.sizes[v]} characters (cap {cap})",
        )
    return decode(slp, (v,))


def expand(slp: Slp, cap: int = ORACLE_CAP) -> str:
    return expand_node(slp, slp.root, cap)


@dataclass(frozen=True)
class ExpansionOracle:
    """Fully expanded text; test-scale reference for every query."""

    text: str

    @classmethod
    def from_slp(cls, slp: Slp, cap: int = ORACLE_CAP) -> "ExpansionOracle":
        return cls(text=expand(slp, cap))

    def __len__(self) -> int:
        return len(self.text)

    def __getitem__(self, i: int) -> str:
        return self.text[i]

    def slice(self, i: int, j: int) -> str:
        return self.text[i:j]


def naive_walk(slp: Slp, i: int) -> Tuple[str, int]:
    """Top-down descent from the root; returns (S[i], rules visited)."""
    if not 0 <= i < slp.length:
        raise SlpError(ErrorCode.INDEX_OUT_OF_RANGE, f"index {i} not in [0, {slp.length})")
    rules, sizes = slp.rules, slp.sizes
    v = slp.root
    visits = 1
    while True:
        rule = rules[v]
        if isinstance(rule, Terminal):
            return rule.ch, visits
        left = sizes[rule.left]
        if i < left:
            v = rule.left
        else:
            i -= left
            v = rule.right
        visits += 1


def naive_access(slp: Slp, i: int) -> str:
    return naive_walk(slp, i)[0]


def height(slp: Slp) -> int:
    """Parse-tree height of the root (a terminal has height 0)."""
    heights: List[int] = []
    for rule in slp.rules:
        if isinstance(rule, Terminal):
            heights.append(0)
        else:
            heights.append(1 + max(heights[rule.left], heights[rule.right]))
    return heights[slp.root]


def reachable(slp: Slp) -> List[int]:
    """Rules reachable from the root, ascending."""
    seen = [False] * slp.n
    seen[slp.root] = True
    for v in range(slp.root, -1, -1):
        if not seen[v]:
            continue
        rule = slp.rules[v]
        if isinstance(rule, Pair):
            seen[rule.left] = True
            seen[rule.right] = True
    return [v for v in range(slp.n) if seen[v]]
