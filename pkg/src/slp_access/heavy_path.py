"""Heavy path decomposition of a grammar and its heavy path suffix forest H.

Every pair rule has one heavy child (the larger expansion, ties go left).
In H the parent of a rule is its heavy child, so terminals are the roots
and walking up H follows a heavy path suffix down the parse tree. Each
H-edge carries the size of the light sibling on the side it hangs.
"""

from __future__ import annotations

import bisect
from dataclasses import dataclass
from typing import List, Optional, Sequence, Tuple

from .slp.core import Pair, Slp, Terminal
from .types import Side

NO_NODE = -1


@dataclass(frozen=True)
class HeavyInfo:
    heavy: Tuple[int, ...]  # heavy child id, NO_NODE for terminals
    heavy_left: Tuple[Optional[bool], ...]  # None for terminals


@dataclass(frozen=True)
class HForest:
    slp: Slp
    info: HeavyInfo
    parent: Tuple[int, ...]  # = heavy child, NO_NODE for roots
    left_weight: Tuple[int, ...]
    right_weight: Tuple[int, ...]
    depth: Tuple[int, ...]  # edges to the H-root
    roots: Tuple[int, ...]

    @property
    def n(self) -> int:
        return len(self.parent)

    def weight(self, v: int, side: Side) -> int:
        return self.left_weight[v] if side is Side.LEFT else self.right_weight[v]

    def light_child(self, v: int) -> int:
        """The light child of pair rule `v`."""
        rule = self.slp.rules[v]
        return rule.right if self.info.heavy_left[v] else rule.left

    def light_side(self, v: int) -> Optional[Side]:
        """Side the light child of `v` hangs on; None for terminals."""
        heavy_left = self.info.heavy_left[v]
        if heavy_left is None:
            return None
        return Side.RIGHT if heavy_left else Side.LEFT

    def suffix(self, v: int) -> List[int]:
        """Heavy path suffix of `v`, read from its head down to the terminal."""
        path = [v]
        while self.parent[path[-1]] != NO_NODE:
            path.append(self.parent[path[-1]])
        return path


@dataclass(frozen=True)
class SuffixMeta:
    z: Tuple[int, ...]  # 1-based index of the suffix terminal inside S(v)
    ch: Tuple[str, ...]
    left_mass: Tuple[int, ...]  # characters of S(v) before position z
    right_mass: Tuple[int, ...]  # characters of S(v) after position z

    def mass(self, v: int, side: Side) -> int:
        return self.left_mass[v] if side is Side.LEFT else self.right_mass[v]


@dataclass(frozen=True)
class SizeSeq:
    """Collapsed size sequence of a heavy path suffix.

    `raw` is the nondecreasing sequence 1 + (light sizes of the first i
    nodes); `values` drops repeats and `idx_map` keeps, for each value, the
    largest raw position that attains it.
    """

    raw: Tuple[int, ...]
    values: Tuple[int, ...]
    idx_map: Tuple[int, ...]

    def predecessor(self, p: int) -> Tuple[int, int]:
        """(raw index, value) of the largest value <= p."""
        pos = bisect.bisect_right(self.values, p) - 1
        if pos < 0:
            raise ValueError(f"{p} precedes the first value {self.values[0]}")
        return self.idx_map[pos], self.values[pos]


def decompose(slp: Slp, sizes: Optional[Sequence[int]] = None) -> HeavyInfo:
    sizes = slp.sizes if sizes is None else sizes
    heavy: List[int] = []
    heavy_left: List[Optional[bool]] = []
    for rule in slp.rules:
        if isinstance(rule, Terminal):
            heavy.append(NO_NODE)
            heavy_left.append(None)
            continue
        left_is_heavy = sizes[rule.left] >= sizes[rule.right]
        heavy.append(rule.left if left_is_heavy else rule.right)
        heavy_left.append(left_is_heavy)
    return HeavyInfo(heavy=tuple(heavy), heavy_left=tuple(heavy_left))


def build_forest(slp: Slp, info: HeavyInfo) -> HForest:
    sizes = slp.sizes
    lw: List[int] = []
    rw: List[int] = []
    depth: List[int] = []
    roots: List[int] = []
    for v, rule in enumerate(slp.rules):
        if isinstance(rule, Pair):
            if info.heavy_left[v]:
                lw.append(0)
                rw.append(sizes[rule.right])
            else:
                lw.append(sizes[rule.left])
                rw.append(0)
            depth.append(depth[info.heavy[v]] + 1)
        else:
            lw.append(0)
            rw.append(0)
            depth.append(0)
            roots.append(v)
    return HForest(
        slp=slp,
        info=info,
        parent=info.heavy,
        left_weight=tuple(lw),
        right_weight=tuple(rw),
        depth=tuple(depth),
        roots=tuple(roots),
    )


def suffix_meta(forest: HForest) -> SuffixMeta:
    """z, terminal and side masses of every node, accumulated from the H-roots."""
    z: List[int] = []
    ch: List[str] = []
    lm: List[int] = []
    rm: List[int] = []
    for v, rule in enumerate(forest.slp.rules):
        h = forest.parent[v]
        if h == NO_NODE:
            z.append(1)
            ch.append(rule.ch)
            lm.append(0)
            rm.append(0)
            continue
        lm.append(lm[h] + forest.left_weight[v])
        rm.append(rm[h] + forest.right_weight[v])
        z.append(lm[-1] + 1)
        ch.append(ch[h])
    return SuffixMeta(z=tuple(z), ch=tuple(ch), left_mass=tuple(lm), right_mass=tuple(rm))


def _collapse(raw: Sequence[int]) -> SizeSeq:
    values: List[int] = []
    idx_map: List[int] = []
    for i, value in enumerate(raw):
        if values and values[-1] == value:
            idx_map[-1] = i
        else:
            values.append(value)
            idx_map.append(i)
    return SizeSeq(raw=tuple(raw), values=tuple(values), idx_map=tuple(idx_map))


def size_sequences(forest: HForest, path: Sequence[int]) -> Tuple[SizeSeq, SizeSeq]:
    """Left and right size sequences of a heavy path suffix given head first."""
    left = [1]
    right = [1]
    for v in path[:-1]:
        left.append(left[-1] + forest.left_weight[v])
        right.append(right[-1] + forest.right_weight[v])
    return _collapse(left), _collapse(right)


def light_edge_histogram(forest: HForest) -> List[int]:
    """Count of rules by number of light edges above them on a heavy path walk from the root."""
    slp = forest.slp
    light_depth = [0] * slp.n
    seen = [False] * slp.n
    seen[slp.root] = True
    for v in range(slp.root, -1, -1):
        if not seen[v] or not slp.is_pair(v):
            continue
        h, light = forest.parent[v], forest.light_child(v)
        for child, extra in ((h, 0), (light, 1)):
            d = light_depth[v] + extra
            if not seen[child] or d > light_depth[child]:
                light_depth[child] = d
            seen[child] = True
    hist: List[int] = []
    for v in range(slp.n):
        if seen[v]:
            d = light_depth[v]
            hist.extend([0] * (d + 1 - len(hist)))
            hist[d] += 1
    return hist
