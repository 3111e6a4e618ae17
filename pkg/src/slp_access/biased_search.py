"""Interval-biased search trees.

A predecessor structure over boundaries l_0 < l_1 < ... < l_t. Node i
stores the half-open interval [l_i, l_{i+1}); the interval holding more
than half of the extent becomes the root, otherwise the split point is the
last boundary at or below the midpoint. A query whose answer interval has
length x visits at most floor(log2(extent / x)) + 1 nodes.
"""

from __future__ import annotations

import bisect
from dataclasses import dataclass
from typing import List, Sequence, Tuple

import numpy as np

from .errors import ErrorCode, SlpError

NO_NODE = -1


class Rmq:
    """Sparse-table range maximum over interval lengths; ties go to the lowest index."""

    def __init__(self, lengths: Sequence[int]):
        n = len(lengths)
        if n == 0:
            raise SlpError(ErrorCode.EMPTY_INPUT, "range maximum over an empty array")
        self.n = n
        self.lengths = np.asarray(lengths, dtype=np.uint64)
        self.table: List[np.ndarray] = [np.arange(n, dtype=np.int64)]
        j = 1
        while (1 << j) <= n:
            prev = self.table[-1]
            half = 1 << (j - 1)
            width = n - (1 << j) + 1
            a = prev[:width]
            b = prev[half:half + width]
            self.table.append(np.where(self.lengths[b] > self.lengths[a], b, a))
            j += 1

    def query(self, i: int, j: int) -> int:
        if not 0 <= i <= j < self.n:
            raise SlpError(ErrorCode.INDEX_OUT_OF_RANGE, f"range [{i}, {j}] not within [0, {self.n})")
        k = (j - i + 1).bit_length() - 1
        a = int(self.table[k][i])
        b = int(self.table[k][j - (1 << k) + 1])
        return b if self.lengths[b] > self.lengths[a] else a


def rmq_build(lengths: Sequence[int]) -> Rmq:
    return Rmq(lengths)


@dataclass(frozen=True)
class IntervalHit:
    index: int
    value: int
    visits: int
    fell_back: bool = False


class IntervalBiasedTree:
    def __init__(self, boundaries: Sequence[int]):
        bounds = [int(x) for x in boundaries]
        if len(bounds) < 2:
            raise SlpError(ErrorCode.INVALID_PARAMS, "need at least two boundaries")
        for a, b in zip(bounds, bounds[1:]):
            if b <= a:
                raise SlpError(ErrorCode.NON_MONOTONE, f"boundaries must increase strictly ({a} then {b})")
        self.bounds = bounds
        self.size = len(bounds) - 1
        self.last = self.size - 1
        self.left = [NO_NODE] * self.size
        self.right = [NO_NODE] * self.size
        self.depth = [0] * self.size
        self.build_steps = 0
        self._rmq = Rmq([b - a for a, b in zip(bounds, bounds[1:])])
        self.root = self._build()
        self.lca_with_last = self._lca_with_last()

    @property
    def nhat(self) -> int:
        return self.bounds[-1] - self.bounds[0]

    def length(self, i: int) -> int:
        return self.bounds[i + 1] - self.bounds[i]

    # -- construction -------------------------------------------------------

    def _split(self, j: int, k: int) -> int:
        b = self.bounds
        extent = b[k + 1] - b[j]
        r = self._rmq.query(j, k)
        if 2 * (b[r + 1] - b[r]) > extent or j == k:
            return r

        # Largest r in [j, k] with b[r] <= midpoint: double from both ends
        # until one side brackets it, then binary search the bracket.
        half = (b[j] + b[k + 1]) // 2
        s = 1
        while True:
            self.build_steps += 1
            at = j + s
            if at > k or b[at] > half:
                lo, hi = j + s // 2, min(j + s - 1, k)
                break
            at = k - s + 1
            if at >= j and b[at] <= half:
                lo, hi = at, k - s // 2
                break
            s *= 2
        self.build_steps += (hi - lo).bit_length()
        return bisect.bisect_right(b, half, lo, hi + 1) - 1

    def _build(self) -> int:
        root = NO_NODE
        stack: List[Tuple[int, int, int, bool, int]] = [(0, self.size - 1, NO_NODE, False, 1)]
        while stack:
            j, k, parent, is_left, d = stack.pop()
            r = self._split(j, k)
            self.depth[r] = d
            if parent == NO_NODE:
                root = r
            elif is_left:
                self.left[parent] = r
            else:
                self.right[parent] = r
            if r < k:
                stack.append((r + 1, k, r, False, d + 1))
            if j < r:
                stack.append((j, r - 1, r, True, d + 1))
        return root

    def _lca_with_last(self) -> List[int]:
        # The last interval sits on the right spine; a node's LCA with it is
        # the deepest spine node above it.
        lca = [NO_NODE] * self.size
        stack = [(self.root, self.root, True)]
        while stack:
            v, anchor, on_spine = stack.pop()
            lca[v] = v if on_spine else anchor
            if self.right[v] != NO_NODE:
                r = self.right[v]
                stack.append((r, r if on_spine else anchor, on_spine))
            if self.left[v] != NO_NODE:
                stack.append((self.left[v], v if on_spine else anchor, False))
        return lca

    # -- queries ------------------------------------------------------------

    def _descend(self, start: int, p: int, fell_back: bool) -> IntervalHit:
        b = self.bounds
        v = start
        visits = 0
        while True:
            visits += 1
            if p < b[v]:
                v = self.left[v]
            elif p >= b[v + 1] and v != self.last:
                v = self.right[v]
            else:
                return IntervalHit(index=v, value=b[v], visits=visits, fell_back=fell_back)

    def predecessor(self, p: int) -> IntervalHit:
        """Interval i with l_i <= p < l_{i+1}; p = l_last lands in the last interval."""
        if not self.bounds[0] <= p <= self.bounds[-1]:
            raise SlpError(
                ErrorCode.INDEX_OUT_OF_RANGE,
                f"{p} outside [{self.bounds[0]}, {self.bounds[-1]}]",
            )
        return self._descend(self.root, p, False)

    def predecessor_from(self, k: int, p: int) -> IntervalHit:
        """Same answer as `predecessor`, searching from LCA(k, last) when p >= l_k."""
        if not 0 <= k < self.size:
            raise SlpError(ErrorCode.INDEX_OUT_OF_RANGE, f"interval {k} not in [0, {self.size})")
        if p < self.bounds[k] or p > self.bounds[-1]:
            hit = self.predecessor(p)
            return IntervalHit(index=hit.index, value=hit.value, visits=hit.visits, fell_back=True)
        return self._descend(self.lca_with_last[k], p, False)

    # -- audits -------------------------------------------------------------

    @property
    def max_depth(self) -> int:
        return max(self.depth)

    def depth_bound(self, i: int) -> int:
        return (self.nhat // self.length(i)).bit_length()

    def depth_violations(self) -> List[int]:
        return [i for i in range(self.size) if self.depth[i] > self.depth_bound(i)]

    def in_order(self) -> List[int]:
        out: List[int] = []
        stack: List[int] = []
        v = self.root
        while stack or v != NO_NODE:
            while v != NO_NODE:
                stack.append(v)
                v = self.left[v]
            v = stack.pop()
            out.append(v)
            v = self.right[v]
        return out

    def to_dot(self, name: str = "ibst") -> str:
        lines = [f"digraph {name} {{", "  node [shape=box];"]
        for i in range(self.size):
            lines.append(f'  n{i} [label="[{self.bounds[i]}, {self.bounds[i + 1]})\\nd={self.depth[i]}"];')
        for i in range(self.size):
            for child, tag in ((self.left[i], "L"), (self.right[i], "R")):
                if child != NO_NODE:
                    lines.append(f'  n{i} -> n{child} [label="{tag}"];')
        lines.append("}")
        return "\n".join(lines) + "\n"


def ibst_build(boundaries: Sequence[int]) -> IntervalBiasedTree:
    return IntervalBiasedTree(boundaries)


def ibst_predecessor(tree: IntervalBiasedTree, p: int) -> Tuple[int, int]:
    hit = tree.predecessor(p)
    return hit.index, hit.value


def ibst_predecessor_from(tree: IntervalBiasedTree, k: int, p: int) -> Tuple[int, int]:
    hit = tree.predecessor_from(k, p)
    return hit.index, hit.value
