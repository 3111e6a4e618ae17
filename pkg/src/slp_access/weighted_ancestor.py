"""Weighted ancestor queries on the heavy path suffix forest.

Every H-node x gets, per side, a key kappa(x): the side mass of its
H-parent (0 for terminals). Keys never decrease away from the roots, and
the interval [kappa(x), mass(x)) is exactly the range of side offsets
owned by the light child of x. A query therefore asks for the lowest
ancestor-or-self x of u with kappa(x) <= T.

The same question is answered on three kinds of keyed forest: H itself,
its light representation L (one vertex per heavy path of H), and the
branching representation B of every bottom tree of L. `PathIndex` handles
one forest: heavy paths searched with interval-biased trees, then the
light representation through `LightIndex`, which recurses into B for
`levels` > 0.
"""

from __future__ import annotations

import bisect
import math
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Sequence, Tuple

from .biased_search import IntervalBiasedTree
from .errors import ErrorCode, SlpError
from .heavy_path import NO_NODE, HForest, SuffixMeta
from .types import QueryCost, Side

SIDES = (Side.LEFT, Side.RIGHT)


@dataclass(frozen=True)
class KeyedForest:
    """Forest with parent[x] < x and one key array per side."""

    parent: Tuple[int, ...]
    keys: Tuple[Tuple[int, ...], Tuple[int, ...]]

    @property
    def n(self) -> int:
        return len(self.parent)

    def children(self) -> List[List[int]]:
        out: List[List[int]] = [[] for _ in range(self.n)]
        for x, p in enumerate(self.parent):
            if p != NO_NODE:
                out[p].append(x)
        return out


@dataclass
class BuildWork:
    """Preprocessing counters shared by one index build."""

    ladders: int = 0
    ladder_items: int = 0
    ibst_nodes: int = 0
    ibst_steps: int = 0

    @property
    def total(self) -> int:
        return self.ladder_items + self.ibst_nodes + self.ibst_steps


class _LadderSide:
    __slots__ = ("kappa", "beta", "raw_of", "collapsed_of", "tree")

    def __init__(self, kappa: Sequence[int], work: BuildWork, biased: bool = True):
        self.kappa = tuple(kappa)
        k0 = self.kappa[0]
        # beta_t = kappa_0 - kappa_{t-1}: item t owns [beta_t, beta_{t+1})
        beta = [0] + [k0 - k for k in self.kappa]
        self.beta = beta
        values: List[int] = []
        raw_of: List[int] = []
        collapsed_of: List[int] = []
        for t, b in enumerate(beta):
            if values and values[-1] == b:
                raw_of[-1] = t
            else:
                values.append(b)
                raw_of.append(t)
            collapsed_of.append(len(values) - 1)
        self.raw_of = raw_of
        self.collapsed_of = collapsed_of
        self.tree: Optional[IntervalBiasedTree] = None
        if biased and len(values) >= 2:
            self.tree = IntervalBiasedTree(values)
            work.ibst_nodes += self.tree.size
            work.ibst_steps += self.tree.build_steps


class Ladder:
    """Items listed bottom-up with nonincreasing keys.

    `locate(k, T)` returns the smallest t >= k with key(item t) <= T, given
    that item k-1 already failed (T < key(item k-1)). With `biased=False`
    no interval-biased trees are built and `locate` binary-searches.
    """

    def __init__(
        self, items: Sequence[int], keys: Sequence[Sequence[int]], work: BuildWork, biased: bool = True
    ):
        self.items = tuple(items)
        self.sides: Tuple[Optional[_LadderSide], ...] = (None, None)
        work.ladders += 1
        work.ladder_items += len(self.items)
        if len(self.items) > 1:
            self.sides = tuple(_LadderSide([key[x] for x in self.items], work, biased) for key in keys)

    def __len__(self) -> int:
        return len(self.items)

    @property
    def top(self) -> int:
        return self.items[-1]

    def side(self, side: Side) -> _LadderSide:
        lane = self.sides[side]
        if lane is None:
            raise SlpError(ErrorCode.INTERNAL_ERROR, "ladder of one item has no search structure")
        return lane

    def locate(self, k: int, target: int, side: Side, cost: QueryCost, biased: bool) -> Optional[int]:
        m = len(self.items) - 1
        if k > m:
            return None
        lane = self.side(side)
        if target < lane.kappa[m]:
            return None
        y = lane.kappa[0] - 1 - target
        if biased and lane.tree is not None:
            hit = lane.tree.predecessor_from(lane.collapsed_of[k], y)
            cost.predecessor_visits += hit.visits
            if hit.fell_back:
                cost.fallbacks += 1
            return lane.raw_of[hit.index]
        cost.predecessor_visits += (m + 2 - k).bit_length()
        return bisect.bisect_right(lane.beta, y, k, m + 2) - 1


class _RootLadders:
    """One ladder per leaf of a (sub)forest, from the leaf to its root."""

    def __init__(self, forest: KeyedForest, members: Sequence[bool], work: BuildWork):
        n = forest.n
        parent = forest.parent
        has_member_child = [False] * n
        for x in range(n):
            p = parent[x]
            if members[x] and p != NO_NODE and members[p]:
                has_member_child[p] = True
        rep = list(range(n))
        for x in range(n - 1, -1, -1):
            p = parent[x]
            if members[x] and p != NO_NODE and members[p] and rep[p] == p:
                rep[p] = rep[x]
        self.ladder_of: Dict[int, int] = {}
        self.index_in: Dict[int, int] = {}
        self.ladders: List[Ladder] = []
        for leaf in range(n):
            if not members[leaf] or has_member_child[leaf]:
                continue
            items = [leaf]
            while parent[items[-1]] != NO_NODE and members[parent[items[-1]]]:
                items.append(parent[items[-1]])
            lid = len(self.ladders)
            self.ladders.append(Ladder(items, forest.keys, work))
            for t, x in enumerate(items):
                if rep[x] == leaf:
                    self.ladder_of[x] = lid
                    self.index_in[x] = t
        self.height = max((len(lad) for lad in self.ladders), default=0)

    def find_strict(
        self, x: int, target: int, side: Side, cost: QueryCost, biased: bool
    ) -> Optional[Tuple[int, int]]:
        """Lowest strict ancestor of x within the members with key <= target."""
        ladder = self.ladders[self.ladder_of[x]]
        t = ladder.locate(self.index_in[x] + 1, target, side, cost, biased)
        if t is None:
            return None
        return ladder.items[t], ladder.items[t - 1]


class LightIndex:
    """Strict weighted-ancestor search over a light representation."""

    def __init__(self, forest: KeyedForest, levels: int, work: BuildWork):
        self.forest = forest
        self.levels = levels
        n = forest.n
        children = forest.children()
        leaves = [0] * n
        for x in range(n - 1, -1, -1):
            leaves[x] = 1 if not children[x] else sum(leaves[c] for c in children[x])
        self.leaves = leaves

        if levels == 0:
            self.threshold = 0
            self.in_top = [True] * n
            self.top = _RootLadders(forest, self.in_top, work)
            self.bottom_root: List[int] = [NO_NODE] * n
            return

        self.threshold = max(1, math.ceil(math.log2(n))) if n > 1 else 1
        lam = self.threshold
        self.in_top = [leaves[x] > lam for x in range(n)]
        self.top = _RootLadders(forest, self.in_top, work)

        # Bottom trees: maximal subtrees with at most `lam` leaves.
        self.bottom_root = [NO_NODE] * n
        self.depth_in_bottom: Tuple[List[int], List[int]] = ([0] * n, [0] * n)
        for x in range(n):
            if self.in_top[x]:
                continue
            p = forest.parent[x]
            root = x if p == NO_NODE or self.in_top[p] else self.bottom_root[p]
            self.bottom_root[x] = root
            for side in SIDES:
                key = forest.keys[side]
                self.depth_in_bottom[side][x] = key[x] - key[root]

        # Branching representation: contract unary paths of every bottom tree.
        self.bnode_of = [NO_NODE] * n
        self.bpos = [0] * n
        b_items: List[List[int]] = []
        b_parent: List[int] = []
        for x in range(n):
            if self.in_top[x]:
                continue
            p = forest.parent[x]
            if self.bottom_root[x] == x or len(children[p]) != 1:
                chain = [x]
                while len(children[chain[-1]]) == 1:
                    chain.append(children[chain[-1]][0])
                bid = len(b_items)
                b_items.append(chain[::-1])
                b_parent.append(NO_NODE if self.bottom_root[x] == x else self.bnode_of[p])
                for t, y in enumerate(chain[::-1]):
                    self.bnode_of[y] = bid
                    self.bpos[y] = t
        self.b_ladders = [Ladder(items, forest.keys, work) for items in b_items]
        b_keys = tuple(
            tuple(forest.keys[side][items[-1]] for items in b_items) for side in SIDES
        )
        self.branching = KeyedForest(parent=tuple(b_parent), keys=b_keys)
        self.b_index = PathIndex(self.branching, levels - 1, work) if b_items else None

    # -- queries ------------------------------------------------------------

    def find_strict(
        self, x: int, target: int, side: Side, cost: QueryCost
    ) -> Optional[Tuple[int, int]]:
        """Lowest strict ancestor X of x with key(X) <= target, with X's child toward x.

        Requires target < key(x).
        """
        if self.in_top[x]:
            cost.route.append("top")
            return self.top.find_strict(x, target, side, cost, True)

        root = self.bottom_root[x]
        key = self.forest.keys[side]
        cost.route.append("d-check")
        if target >= key[x] - self.depth_in_bottom[side][x]:
            cost.route.append("branching")
            return self._find_in_bottom(x, target, side, cost)

        above = self.forest.parent[root]
        if above == NO_NODE:
            return None
        if key[above] <= target:
            return above, root
        cost.route.append("top")
        return self.top.find_strict(above, target, side, cost, True)

    def _find_in_bottom(self, x: int, target: int, side: Side, cost: QueryCost) -> Tuple[int, int]:
        key = self.forest.keys[side]
        bid = self.bnode_of[x]
        ladder = self.b_ladders[bid]
        t = ladder.locate(self.bpos[x] + 1, target, side, cost, True)
        if t is not None:
            return ladder.items[t], ladder.items[t - 1]
        start = self.branching.parent[bid]
        if start == NO_NODE or self.b_index is None:
            raise SlpError(ErrorCode.INTERNAL_ERROR, "bottom-tree search escaped its root")
        found = self.b_index.find(start, target, side, cost)
        if found is None:
            raise SlpError(ErrorCode.INTERNAL_ERROR, "branching search found no ancestor")
        gamma, below = found
        below = bid if below is None else below
        entry = self.b_ladders[gamma]
        bottom = entry.items[0]
        if key[bottom] <= target:
            return bottom, self.b_ladders[below].top
        t = entry.locate(1, target, side, cost, True)
        if t is None:
            raise SlpError(ErrorCode.INTERNAL_ERROR, "branching node lost its answer")
        return entry.items[t], entry.items[t - 1]

    # -- stats --------------------------------------------------------------

    def stats(self) -> Dict[str, int]:
        out = {
            "nodes": self.forest.n,
            "threshold": self.threshold,
            "top_nodes": sum(self.in_top),
            "top_leaves": len(self.top.ladders),
            "top_height": self.top.height,
        }
        if self.levels > 0:
            out["bottom_trees"] = sum(1 for x in range(self.forest.n) if self.bottom_root[x] == x)
            out["branching_nodes"] = self.branching.n
        return out


class PathIndex:
    """Weighted ancestor index over one keyed forest.

    `biased=False` searches heavy paths by binary search and climbs the
    light representation one path at a time.
    """

    def __init__(self, forest: KeyedForest, levels: int, work: Optional[BuildWork] = None, biased: bool = True):
        if not 0 <= levels:
            raise SlpError(ErrorCode.INVALID_PARAMS, f"levels must be >= 0, got {levels}")
        self.forest = forest
        self.levels = levels
        self.biased = biased
        self.work = work if work is not None else BuildWork()
        n = forest.n
        children = forest.children()
        size = [1] * n
        for x in range(n - 1, -1, -1):
            p = forest.parent[x]
            if p != NO_NODE:
                size[p] += size[x]
        self.subtree_size = size

        heavy = [NO_NODE] * n
        for x in range(n):
            best = NO_NODE
            for c in children[x]:
                if best == NO_NODE or size[c] > size[best]:
                    best = c
            heavy[x] = best

        self.chain_of = [NO_NODE] * n
        self.pos = [0] * n
        self.chains: List[Ladder] = []
        for x in range(n):
            p = forest.parent[x]
            if p != NO_NODE and heavy[p] == x:
                continue
            down = [x]
            while heavy[down[-1]] != NO_NODE:
                down.append(heavy[down[-1]])
            items = down[::-1]
            cid = len(self.chains)
            self.chains.append(Ladder(items, forest.keys, self.work, biased))
            for t, y in enumerate(items):
                self.chain_of[y] = cid
                self.pos[y] = t

        light_parent = tuple(
            NO_NODE if forest.parent[ch.top] == NO_NODE else self.chain_of[forest.parent[ch.top]]
            for ch in self.chains
        )
        light_keys = tuple(tuple(forest.keys[side][ch.top] for ch in self.chains) for side in SIDES)
        self.light = KeyedForest(parent=light_parent, keys=light_keys)
        self.light_index = LightIndex(self.light, levels, self.work) if biased else None

    def find(self, u: int, target: int, side: Side, cost: QueryCost) -> Optional[Tuple[int, Optional[int]]]:
        """Lowest ancestor-or-self x of u with key(x) <= target.

        Returns (x, child of x toward u) with child None when x = u, or None
        when target is below every key on the root path.
        """
        key = self.forest.keys[side]
        x, child = u, None
        while True:
            if key[x] <= target:
                return x, child
            chain = self.chains[self.chain_of[x]]
            cost.route.append("path")
            t = chain.locate(self.pos[x] + 1, target, side, cost, self.biased)
            if t is not None:
                return chain.items[t], chain.items[t - 1]
            top = chain.top
            if self.light_index is not None:
                return self._via_light(self.chain_of[x], target, side, cost)
            x, child = self.forest.parent[top], top
            if x == NO_NODE:
                return None

    def _via_light(self, cid: int, target: int, side: Side, cost: QueryCost) -> Optional[Tuple[int, int]]:
        found = self.light_index.find_strict(cid, target, side, cost)
        if found is None:
            return None
        upper, lower = found
        entry = self.forest.parent[self.chains[lower].top]
        key = self.forest.keys[side]
        if key[entry] <= target:
            return entry, self.chains[lower].top
        chain = self.chains[upper]
        cost.route.append("path")
        t = chain.locate(self.pos[entry] + 1, target, side, cost, True)
        if t is None:
            raise SlpError(ErrorCode.INTERNAL_ERROR, "light representation pointed at the wrong path")
        return chain.items[t], chain.items[t - 1]

    def light_height(self) -> int:
        """Vertices on the longest root-to-leaf path of the light representation."""
        depth = [1] * self.light.n
        for x in range(self.light.n):
            p = self.light.parent[x]
            if p != NO_NODE:
                depth[x] = depth[p] + 1
        return max(depth, default=0)


# -- H-specific wrapper ------------------------------------------------------


@dataclass(frozen=True)
class AncestorHit:
    node: int  # the node whose light child holds the position
    cum: int  # l_i or r_i of that node in the queried suffix
    step: int  # H-edges between the query node and `node`


@dataclass(frozen=True)
class HPathRecord:
    nodes: Tuple[int, ...]  # bottom-up
    below: Tuple[Tuple[int, ...], Tuple[int, ...]]  # b(v) per side
    above: Tuple[Tuple[int, ...], Tuple[int, ...]]  # t(v) per side


@dataclass
class WaIndex:
    forest: HForest
    meta: SuffixMeta
    levels: int
    biased: bool
    index: PathIndex = field(repr=False)

    @property
    def work(self) -> BuildWork:
        return self.index.work

    def query(self, u: int, p: int, side: Side, cost: Optional[QueryCost] = None) -> Optional[AncestorHit]:
        """Node on u's heavy path suffix whose `side` light child holds side offset p.

        p counts from 1 at the outer end of S(u) on that side; None when p
        exceeds the side mass of u (the position is z or beyond).
        """
        if p < 1:
            raise SlpError(ErrorCode.PRECONDITION, f"weighted ancestor budget must be >= 1, got {p}")
        cost = cost if cost is not None else QueryCost()
        mass = self.meta.mass(u, side)
        target = mass - p
        if target < 0:
            return None
        found = self.index.find(u, target, side, cost)
        if found is None:
            raise SlpError(ErrorCode.INTERNAL_ERROR, f"no ancestor for node {u} at offset {p}")
        x = found[0]
        return AncestorHit(
            node=x,
            cum=1 + mass - self.meta.mass(x, side),
            step=self.forest.depth[u] - self.forest.depth[x],
        )

    def records(self) -> List[HPathRecord]:
        out: List[HPathRecord] = []
        for chain in self.index.chains:
            nodes = chain.items
            below = []
            above = []
            for side in SIDES:
                mass = [self.meta.mass(v, side) for v in nodes]
                below.append(tuple(mass[0] - g for g in mass))
                above.append(tuple(g - mass[-1] for g in mass))
            out.append(HPathRecord(nodes=nodes, below=tuple(below), above=tuple(above)))
        return out

    def stats(self) -> Dict[str, object]:
        out: Dict[str, object] = {
            "levels": self.levels,
            "paths": len(self.index.chains),
            "light_height": self.index.light_height(),
            "build_work": self.work.total,
        }
        per_level = []
        index: Optional[PathIndex] = self.index
        while index is not None and index.light_index is not None:
            per_level.append(index.light_index.stats())
            index = getattr(index.light_index, "b_index", None)
        out["per_level"] = per_level
        return out


def h_keys(forest: HForest, meta: SuffixMeta) -> KeyedForest:
    keys = []
    for side in SIDES:
        keys.append(
            tuple(0 if h == -1 else meta.mass(h, side) for h in forest.parent)
        )
    return KeyedForest(parent=forest.parent, keys=(keys[0], keys[1]))


def build_wa(forest: HForest, meta: SuffixMeta, levels: int, biased: bool = True) -> WaIndex:
    if levels < 0:
        raise SlpError(ErrorCode.INVALID_PARAMS, f"levels must be >= 0, got {levels}")
    index = PathIndex(h_keys(forest, meta), levels, BuildWork(), biased=biased)
    return WaIndex(forest=forest, meta=meta, levels=levels, biased=biased, index=index)


def wa_query(idx: WaIndex, u: int, p: int, side: Side) -> Optional[Tuple[int, int, int]]:
    hit = idx.query(u, p, side)
    if hit is None:
        return None
    return hit.node, hit.cum, hit.step


def linear_walk(forest: HForest, meta: SuffixMeta, u: int, p: int, side: Side) -> Optional[AncestorHit]:
    """Reference answer: walk up H summing side weights."""
    mass = meta.mass(u, side)
    if p < 1 or p > mass:
        return None
    x, dist = u, 0
    while True:
        w = forest.weight(x, side)
        if dist < p <= dist + w:
            return AncestorHit(node=x, cum=1 + dist, step=forest.depth[u] - forest.depth[x])
        dist += w
        x = forest.parent[x]
