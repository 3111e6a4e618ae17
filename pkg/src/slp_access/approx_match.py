"""Approximate pattern matching on the compressed text.

Occurrences are reported as 0-based end positions of substrings within
edit distance k of the pattern. Every grammar node is processed once,
children first. A pair node v = (vl, vr) inherits the ends of vl as is and
those of vr shifted by |S(vl)|; the only new ends belong to matches that
cross the boundary, and such a match lies inside the last m+k characters
of S(vl) followed by the first m+k of S(vr). That window is extracted from
the grammar and handed to an uncompressed matcher.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Dict, List, Optional, Protocol, Sequence, Tuple

from .access_engine import Engine
from .errors import ErrorCode, SlpError
from .slp.core import Pair, Terminal, reachable
from .substring import SpanPlanner


class MatcherContract(Protocol):
    """Strictly increasing 0-based ends e such that some substring of `text`
    ending at e is within edit distance k of `pattern`."""

    def __call__(self, pattern: str, text: str, k: int) -> List[int]: ...


def _check_params(pattern: str, k: int) -> None:
    if not pattern:
        raise SlpError(ErrorCode.INVALID_PARAMS, "pattern must be nonempty")
    if not 0 <= k < len(pattern):
        raise SlpError(ErrorCode.INVALID_PARAMS, f"k must be in [0, {len(pattern)}), got {k}")


def sellers_match(pattern: str, text: str, k: int) -> List[int]:
    """Column-wise edit distance DP with a free start in the text."""
    _check_params(pattern, k)
    m = len(pattern)
    col = list(range(m + 1))
    out: List[int] = []
    for j, c in enumerate(text):
        diag = col[0]
        for i in range(1, m + 1):
            up = col[i]
            col[i] = min(up + 1, col[i - 1] + 1, diag + (pattern[i - 1] != c))
            diag = up
        if col[m] <= k:
            out.append(j)
    return out


def edit_distance(a: str, b: str) -> int:
    prev = list(range(len(a) + 1))
    for j in range(1, len(b) + 1):
        cur = [j] + [0] * len(a)
        for i in range(1, len(a) + 1):
            cur[i] = min(prev[i] + 1, cur[i - 1] + 1, prev[i - 1] + (a[i - 1] != b[j - 1]))
        prev = cur
    return prev[len(a)]


def exhaustive_match(pattern: str, text: str, k: int) -> List[int]:
    """Tries every substring of length m-k .. m+k; slow, obviously right."""
    _check_params(pattern, k)
    m = len(pattern)
    out: List[int] = []
    for end in range(len(text)):
        for length in range(max(1, m - k), m + k + 1):
            start = end + 1 - length
            if start < 0:
                break
            if edit_distance(pattern, text[start:end + 1]) <= k:
                out.append(end)
                break
    return out


def _check_sorted(ends: Sequence[int], where: str) -> None:
    for a, b in zip(ends, ends[1:]):
        if b <= a:
            raise SlpError(ErrorCode.MATCHER_CONTRACT, f"{where}: ends not strictly increasing ({a} then {b})")


def boundary_window(
    e: Engine, v: int, m: int, k: int, planner: Optional[SpanPlanner] = None
) -> Tuple[str, int]:
    """(window text, window start inside S(v)) around the split of pair rule v."""
    rule = e.slp.rules[v]
    if not isinstance(rule, Pair):
        raise SlpError(ErrorCode.NOT_A_PAIR, f"rule {v} is a terminal")
    sizes = e.slp.sizes
    split = sizes[rule.left]
    before = min(sizes[rule.left], m + k)
    after = min(sizes[rule.right], m + k)
    planner = planner if planner is not None else SpanPlanner(e)
    text = planner.extract(split - before, split + after, node=v)[0]
    return text, split - before


@dataclass
class NodeOccurrences:
    """Ends of S(v): ends of the left child, then the right child's merged
    with `extra`, shifted by `split`."""

    split: int
    count: int
    extra: Tuple[int, ...]  # crossing ends relative to the right child, not among its own
    head: Tuple[int, ...]  # all ends below the head limit


@dataclass
class SearchReport:
    ends: List[int]
    nodes: int = 0
    max_window: int = 0
    materialized: int = 0
    windows: int = 0
    per_node: Dict[int, NodeOccurrences] = field(default_factory=dict, repr=False)

    def as_dict(self) -> Dict[str, int]:
        return {
            "occ": len(self.ends),
            "nodes": self.nodes,
            "max_window": self.max_window,
            "materialized": self.materialized,
            "windows": self.windows,
        }


def _merge(a: Sequence[int], b: Sequence[int]) -> List[int]:
    out: List[int] = []
    i = j = 0
    while i < len(a) and j < len(b):
        if a[i] < b[j]:
            out.append(a[i])
            i += 1
        else:
            out.append(b[j])
            j += 1
    out.extend(a[i:])
    out.extend(b[j:])
    return out


def _flatten(e: Engine, occ: Dict[int, NodeOccurrences], root: int, limit: int) -> List[int]:
    """Ends of S(root) in increasing order.

    Frames carry a floor: ends below it were already emitted by the head
    list of an enclosing node.
    """
    rules, sizes = e.slp.rules, e.slp.sizes
    out: List[int] = []
    stack: List[Tuple[bool, int, int, int]] = [(False, root, 0, 0)]
    while stack:
        is_list, v, offset, floor = stack.pop()
        rule = rules[v]
        node = occ[v]
        if is_list:
            merged = _merge(occ[rule.right].head, node.extra)
            out.extend(offset + x for x in merged if x >= floor)
            continue
        if node.count == 0 or floor >= sizes[v]:
            continue
        if isinstance(rule, Terminal):
            out.append(offset)
            continue
        split = node.split
        stack.append((False, rule.right, offset + split, max(limit, floor - split)))
        stack.append((True, v, offset + split, max(0, floor - split)))
        stack.append((False, rule.left, offset, floor))
    return out


class CompressedMatcher:
    """One search: per-node records are private to the call."""

    def __init__(self, engine: Engine, pattern: str, k: int, matcher: MatcherContract = sellers_match):
        _check_params(pattern, k)
        self.engine = engine
        self.pattern = pattern
        self.k = k
        self.matcher = matcher
        self.limit = len(pattern) + k
        self.planner = SpanPlanner(engine)

    def _match(self, text: str, where: str) -> List[int]:
        ends = list(self.matcher(self.pattern, text, self.k))
        _check_sorted(ends, where)
        return ends

    def run(self, windows: bool = True) -> SearchReport:
        e = self.engine
        rules, sizes = e.slp.rules, e.slp.sizes
        limit = self.limit
        report = SearchReport(ends=[])
        occ: Dict[int, NodeOccurrences] = {}
        for v in reachable(e.slp):
            rule = rules[v]
            report.nodes += 1
            if isinstance(rule, Terminal):
                ends = self._match(rule.ch, f"rule {v}")
                node = NodeOccurrences(split=0, count=len(ends), extra=(), head=tuple(x for x in ends if x < limit))
            else:
                left, right = occ[rule.left], occ[rule.right]
                split = sizes[rule.left]
                extra: List[int] = []
                if windows:
                    text, start = boundary_window(e, v, len(self.pattern), self.k, self.planner)
                    report.windows += 1
                    report.max_window = max(report.max_window, len(text))
                    own = set(right.head)
                    cut = split - start
                    for x in self._match(text, f"window of rule {v}"):
                        if x >= cut and x - cut not in own:
                            extra.append(x - cut)
                merged_right = _merge(right.head, extra)
                head = list(left.head) + [split + x for x in merged_right if split + x < limit]
                node = NodeOccurrences(
                    split=split,
                    count=left.count + right.count + len(extra),
                    extra=tuple(extra),
                    head=tuple(head),
                )
            report.materialized += len(node.extra) + len(node.head)
            occ[v] = node
        report.per_node = occ
        report.ends = _flatten(e, occ, e.slp.root, limit)
        _check_sorted(report.ends, "merged occurrences")
        if len(report.ends) != occ[e.slp.root].count:
            raise SlpError(
                ErrorCode.INTERNAL_ERROR,
                f"flattened {len(report.ends)} ends, counted {occ[e.slp.root].count}",
            )
        return report


def search(
    e: Engine,
    pattern: str,
    k: int,
    matcher: MatcherContract = sellers_match,
    windows: bool = True,
) -> List[int]:
    return CompressedMatcher(e, pattern, k, matcher).run(windows).ends


def search_report(
    e: Engine,
    pattern: str,
    k: int,
    matcher: MatcherContract = sellers_match,
    windows: bool = True,
) -> SearchReport:
    return CompressedMatcher(e, pattern, k, matcher).run(windows)
