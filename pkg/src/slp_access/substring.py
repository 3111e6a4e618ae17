"""Substring extraction with two searches and a linear decode.

The searches for i and j-1 share a prefix of heavy path segments and split
at their lowest common node w. Below w, the subtrees hanging right of the
path to i and left of the path to j-1 tile S[i, j) together with the two
boundary characters. Each heavy path node links to the nearest node further
down its suffix with a light child on a given side, so collecting those
subtrees never visits a node without one.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Dict, List, Optional, Tuple

from .access_engine import Engine, Trace, TraceStep
from .errors import ErrorCode, SlpError
from .heavy_path import NO_NODE, HForest
from .slp.core import decode
from .types import QueryCost, Side, StepCase


@dataclass(frozen=True)
class LightLinks:
    next_left: Tuple[int, ...]
    next_right: Tuple[int, ...]

    def next(self, side: Side) -> Tuple[int, ...]:
        return self.next_left if side is Side.LEFT else self.next_right


def build_light_links(forest: HForest) -> LightLinks:
    nl: List[int] = []
    nr: List[int] = []
    for h in forest.parent:
        if h == NO_NODE:
            nl.append(NO_NODE)
            nr.append(NO_NODE)
            continue
        side = forest.light_side(h)
        nl.append(h if side is Side.LEFT else nl[h])
        nr.append(h if side is Side.RIGHT else nr[h])
    return LightLinks(next_left=tuple(nl), next_right=tuple(nr))


def hangers(forest: HForest, links: LightLinks, v: int, side: Side) -> List[int]:
    """Nodes of v's heavy path suffix whose light child hangs on `side`, top-down."""
    nxt = links.next(side)
    u = v if forest.light_side(v) is side else nxt[v]
    out: List[int] = []
    while u != NO_NODE:
        out.append(u)
        u = nxt[u]
    return out


@dataclass(frozen=True)
class SpanPlan:
    lca: int
    origin: int  # offset of S(lca) inside the searched expansion
    start: int  # i relative to S(lca)
    stop: int  # j relative to S(lca)
    first_leaf: int
    last_leaf: int
    left_roots: Tuple[int, ...]  # hanging right of the path to i, in string order
    right_roots: Tuple[int, ...]  # hanging left of the path to j-1, in string order

    @property
    def collected(self) -> int:
        return len(self.left_roots) + len(self.right_roots)


@dataclass(frozen=True)
class _Segment:
    head: int
    exit: int
    entered: Optional[Side]


def _side_of(step: TraceStep) -> Optional[Side]:
    if step.case is StepCase.DESCEND_LEFT:
        return Side.LEFT
    if step.case is StepCase.DESCEND_RIGHT:
        return Side.RIGHT
    return None


def _same_descent(a: TraceStep, b: TraceStep) -> bool:
    return a.case is b.case and a.exit == b.exit and a.entered == b.entered


class SpanPlanner:
    """Plans and decodes spans over one engine."""

    def __init__(self, engine: Engine, links: Optional[LightLinks] = None, use_links: bool = True):
        self.engine = engine
        self.forest = engine.forest
        self.links = links if links is not None else build_light_links(engine.forest)
        self.use_links = use_links

    # -- collection ---------------------------------------------------------

    def _segment_hangers(self, seg: _Segment, side: Side) -> List[int]:
        """Light children hanging on `side` of one segment's path, top-down."""
        forest = self.forest
        depth = forest.depth
        floor = depth[seg.exit]
        out: List[int] = []
        if self.use_links:
            nxt = self.links.next(side)
            u = seg.head if forest.light_side(seg.head) is side else nxt[seg.head]
            while u != NO_NODE and depth[u] > floor:
                out.append(forest.light_child(u))
                u = nxt[u]
        else:
            u = seg.head
            while depth[u] > floor:
                if forest.light_side(u) is side:
                    out.append(forest.light_child(u))
                u = forest.parent[u]
        if seg.entered is side.other:
            out.append(forest.parent[seg.exit])
        return out

    def _collect(self, segments: List[_Segment], side: Side) -> List[int]:
        out: List[int] = []
        for seg in segments:
            out.extend(self._segment_hangers(seg, side))
        return out

    # -- planning -----------------------------------------------------------

    def plan(self, i: int, j: int, node: Optional[int] = None, cost: Optional[QueryCost] = None) -> SpanPlan:
        e = self.engine
        v = e.slp.root if node is None else node
        if not 0 <= v < e.slp.n:
            raise SlpError(ErrorCode.INDEX_OUT_OF_RANGE, f"rule {v} not in [0, {e.slp.n})")
        size = e.slp.sizes[v]
        if not 0 <= i < j <= size:
            raise SlpError(ErrorCode.INDEX_OUT_OF_RANGE, f"span [{i}, {j}) not inside [0, {size}) with i < j")
        cost = cost if cost is not None else QueryCost()
        _, ti = e.trace_from(v, i, cost)
        tj = ti if j - 1 == i else e.trace_from(v, j - 1, cost)[1]
        return self._plan_from(ti, tj, i, j)

    def _plan_from(self, ti: Trace, tj: Trace, i: int, j: int) -> SpanPlan:
        e = self.engine
        meta = e.meta
        k = 0
        while k < len(ti.steps) and k < len(tj.steps) and _same_descent(ti.steps[k], tj.steps[k]):
            if ti.steps[k].case is StepCase.HIT_Z:
                break
            k += 1
        si, sj = ti.steps[k], tj.steps[k]
        last_i, last_j = ti.steps[-1].exit, tj.steps[-1].exit
        head, head_origin = si.head, si.origin

        if ti is tj or (si.case is StepCase.HIT_Z and sj.case is StepCase.HIT_Z):
            w = si.exit
            origin = head_origin + meta.z[head] - meta.z[w]
            return SpanPlan(w, origin, i - origin, j - origin, last_i, last_j, (), ())

        w = si.exit if si.step <= sj.step else sj.exit
        origin = head_origin + meta.z[head] - meta.z[w]
        below = self.forest.parent[w]
        segs_i = [_Segment(s.head, s.exit, _side_of(s)) for s in ti.steps[k + 1:]]
        segs_j = [_Segment(s.head, s.exit, _side_of(s)) for s in tj.steps[k + 1:]]
        if w == si.exit:
            # i leaves through the light child of w; j continues down the heavy path.
            segs_j.insert(0, _Segment(below, sj.exit, _side_of(sj)))
        else:
            segs_i.insert(0, _Segment(below, si.exit, _side_of(si)))

        left_roots = self._collect(segs_i, Side.RIGHT)
        left_roots.reverse()
        right_roots = self._collect(segs_j, Side.LEFT)
        return SpanPlan(
            lca=w,
            origin=origin,
            start=i - origin,
            stop=j - origin,
            first_leaf=last_i,
            last_leaf=last_j,
            left_roots=tuple(left_roots),
            right_roots=tuple(right_roots),
        )

    # -- extraction ---------------------------------------------------------

    def extract(self, i: int, j: int, node: Optional[int] = None) -> Tuple[str, SpanPlan, Dict[str, int]]:
        cost = QueryCost()
        plan = self.plan(i, j, node, cost)
        slp = self.engine.slp
        first = slp.rules[plan.first_leaf].ch
        if j - i == 1:
            text = first
            accesses = 1
        else:
            last = slp.rules[plan.last_leaf].ch
            text = first + decode(slp, plan.left_roots) + decode(slp, plan.right_roots) + last
            accesses = 2
        if len(text) != j - i:
            raise SlpError(
                ErrorCode.INTERNAL_ERROR,
                f"span [{i}, {j}) decoded to {len(text)} characters",
            )
        counters = {
            "accesses": accesses,
            "decoded": len(text),
            "collected": plan.collected,
            "collected_size": sum(slp.sizes[r] for r in plan.left_roots + plan.right_roots),
            **cost.as_dict(),
        }
        return text, plan, counters


def lca_of_paths(e: Engine, i: int, j: int) -> Tuple[int, int, int]:
    plan = SpanPlanner(e).plan(i, j)
    return plan.lca, plan.start, plan.stop


def extract(e: Engine, i: int, j: int, node: Optional[int] = None, planner: Optional[SpanPlanner] = None) -> str:
    """S[i, j) of the root, or of S(node) when given."""
    size = e.slp.sizes[e.slp.root if node is None else node]
    if not 0 <= i <= j <= size:
        raise SlpError(ErrorCode.INDEX_OUT_OF_RANGE, f"span [{i}, {j}) not inside [0, {size}]")
    if i == j:
        return ""
    planner = planner if planner is not None else SpanPlanner(e)
    return planner.extract(i, j, node)[0]


def extract_report(e: Engine, i: int, j: int) -> Tuple[str, Dict[str, int]]:
    if i == j:
        extract(e, i, j)
        return "", {"accesses": 0, "decoded": 0, "collected": 0, "collected_size": 0}
    text, _, counters = SpanPlanner(e).extract(i, j)
    return text, counters
