"""Random access into the expansion of a grammar.

Three engines share one trace format:

* baseline walks the parse tree top-down one rule at a time;
* linear searches each heavy path suffix with binary search and climbs H
  one heavy path at a time;
* biased answers every heavy-path jump with one weighted ancestor query.

A query starts with p = i + 1 at the root. At node v the search compares p
with z(v): equal returns the suffix terminal, smaller jumps to the left
light child that holds p, larger to the right one.

`ReferenceEngine` stores both size sequences of every heavy path suffix
and serves as a quadratic-space cross-check for the three engines.
"""

from __future__ import annotations

import time
from dataclasses import dataclass, field
from typing import List, Optional, Tuple, Union

from .biased_search import IntervalBiasedTree
from .config import DEFAULT_LEVELS, MAX_LEVELS
from .errors import ErrorCode, SlpError
from .heavy_path import (
    NO_NODE,
    HForest,
    SizeSeq,
    SuffixMeta,
    build_forest,
    decompose,
    size_sequences,
    suffix_meta,
)
from .slp.core import Pair, Slp, Terminal
from .types import EngineMode, QueryCost, Side, StepCase
from .weighted_ancestor import WaIndex, build_wa


@dataclass(frozen=True)
class TraceStep:
    head: int  # first node of the heavy path suffix searched
    case: StepCase
    entered: int  # light child entered, NO_NODE on hit-z
    position: int  # rebased 1-based position inside `entered`
    exit: int  # node on the suffix whose light child was entered (terminal on hit-z)
    step: int  # heavy edges from head to exit
    origin: int  # global 0-based offset of S(head)


@dataclass
class Trace:
    steps: List[TraceStep] = field(default_factory=list)

    @property
    def descends(self) -> List[TraceStep]:
        return [s for s in self.steps if s.case is not StepCase.HIT_Z]

    @property
    def light_edges(self) -> int:
        return len(self.descends)


@dataclass
class Engine:
    slp: Slp
    forest: HForest
    meta: SuffixMeta
    mode: EngineMode
    levels: int
    wa: Optional[WaIndex]
    h_root: Tuple[int, ...]
    build_seconds: float = 0.0

    @property
    def length(self) -> int:
        return self.slp.length

    @property
    def build_work(self) -> int:
        return 0 if self.wa is None else self.wa.work.total

    def access(self, i: int) -> str:
        return self.access_from(self.slp.root, i)

    def access_from(self, v: int, i: int, cost: Optional[QueryCost] = None) -> str:
        """Character i (0-based) of S(v)."""
        if not 0 <= v < self.slp.n:
            raise SlpError(ErrorCode.INDEX_OUT_OF_RANGE, f"rule {v} not in [0, {self.slp.n})")
        size = self.slp.sizes[v]
        if not 0 <= i < size:
            raise SlpError(ErrorCode.INDEX_OUT_OF_RANGE, f"index {i} not in [0, {size})")
        return self._search(v, i + 1, cost if cost is not None else QueryCost(), None, 0)

    def access_with_trace(self, i: int, cost: Optional[QueryCost] = None) -> Tuple[str, Trace]:
        return self.trace_from(self.slp.root, i, cost)

    def trace_from(self, v: int, i: int, cost: Optional[QueryCost] = None) -> Tuple[str, Trace]:
        """Character i of S(v) with the heavy path segments crossed; origins are relative to S(v)."""
        if not 0 <= v < self.slp.n:
            raise SlpError(ErrorCode.INDEX_OUT_OF_RANGE, f"rule {v} not in [0, {self.slp.n})")
        size = self.slp.sizes[v]
        if not 0 <= i < size:
            raise SlpError(ErrorCode.INDEX_OUT_OF_RANGE, f"index {i} not in [0, {size})")
        trace = Trace()
        ch = self._search(v, i + 1, cost if cost is not None else QueryCost(), trace, 0)
        return ch, trace

    def query_cost(self, i: int) -> QueryCost:
        cost = QueryCost()
        self.access_from(self.slp.root, i, cost)
        return cost

    # -- search loops -------------------------------------------------------

    def _search(self, v: int, p: int, cost: QueryCost, trace: Optional[Trace], origin: int) -> str:
        if self.wa is None:
            return self._walk(v, p, cost, trace, origin)
        return self._jump(v, p, cost, trace, origin)

    def _walk(self, v: int, p: int, cost: QueryCost, trace: Optional[Trace], origin: int) -> str:
        rules, sizes = self.slp.rules, self.slp.sizes
        heavy_left = self.forest.info.heavy_left
        head, head_origin, steps = v, origin, 0
        while True:
            cost.rule_visits += 1
            rule = rules[v]
            if isinstance(rule, Terminal):
                if trace is not None:
                    trace.steps.append(TraceStep(head, StepCase.HIT_Z, NO_NODE, 1, v, steps, head_origin))
                return rule.ch
            left_size = sizes[rule.left]
            go_left = p <= left_size
            child, offset = (rule.left, 0) if go_left else (rule.right, left_size)
            p -= offset
            origin += offset
            if go_left == heavy_left[v]:
                steps += 1
            else:
                cost.path_switches += 1
                if trace is not None:
                    case = StepCase.DESCEND_LEFT if go_left else StepCase.DESCEND_RIGHT
                    trace.steps.append(TraceStep(head, case, child, p, v, steps, head_origin))
                head, head_origin, steps = child, origin, 0
            v = child

    def _jump(self, v: int, p: int, cost: QueryCost, trace: Optional[Trace], origin: int) -> str:
        rules, sizes = self.slp.rules, self.slp.sizes
        meta = self.meta
        while True:
            cost.rule_visits += 1
            z = meta.z[v]
            if p == z:
                if trace is not None:
                    trace.steps.append(
                        TraceStep(v, StepCase.HIT_Z, NO_NODE, 1, self.h_root[v], self.forest.depth[v], origin)
                    )
                return meta.ch[v]
            size = sizes[v]
            if p < z:
                side, q = Side.LEFT, p
            else:
                side, q = Side.RIGHT, size - p + 1
            hit = self.wa.query(v, q, side, cost)
            if hit is None:
                raise SlpError(ErrorCode.INTERNAL_ERROR, f"position {p} of rule {v} has no light child")
            rule = rules[hit.node]
            if side is Side.LEFT:
                child = rule.left
                offset = hit.cum - 1
            else:
                child = rule.right
                offset = size - (hit.cum - 1) - sizes[child]
                if trace is not None and offset != right_offset_closed_form(self, v, hit.node):
                    raise SlpError(ErrorCode.INTERNAL_ERROR, f"right offset mismatch at rule {v}")
            p -= offset
            if not 1 <= p <= sizes[child]:
                raise SlpError(ErrorCode.INTERNAL_ERROR, f"rebased position {p} outside rule {child}")
            cost.path_switches += 1
            if trace is not None:
                case = StepCase.DESCEND_LEFT if side is Side.LEFT else StepCase.DESCEND_RIGHT
                trace.steps.append(TraceStep(v, case, child, p, hit.node, hit.step, origin))
            origin += offset
            v = child


def right_offset_closed_form(e: Engine, v: int, x: int) -> int:
    """Characters of S(v) before the right light child of x, read from z.

    S(x) starts z(v) - z(x) characters into S(v) and its heavy left child
    precedes the light one.
    """
    rule = e.slp.rules[x]
    if not isinstance(rule, Pair):
        raise SlpError(ErrorCode.NOT_A_PAIR, f"rule {x} is a terminal")
    return e.meta.z[v] - e.meta.z[x] + e.slp.sizes[rule.left]


@dataclass(frozen=True)
class _SuffixTable:
    path: Tuple[int, ...]  # heavy path suffix, head first
    seqs: Tuple[SizeSeq, SizeSeq]
    trees: Tuple[Optional[IntervalBiasedTree], Optional[IntervalBiasedTree]]


class ReferenceEngine:
    """Quadratic-space reference: size sequences and trees for every node.

    Each node keeps the left and right size sequences of its own heavy path
    suffix, so a step is a single predecessor query with no weighted
    ancestor machinery. Only meant for cross-checking the other engines on
    small grammars. `biased=False` answers with `SizeSeq.predecessor`.
    """

    def __init__(self, slp: Slp, biased: bool = True):
        self.slp = slp
        self.biased = biased
        self.forest = build_forest(slp, decompose(slp))
        self.meta = suffix_meta(self.forest)
        self.tables: List[_SuffixTable] = []
        self.items = 0
        for v in range(slp.n):
            path = tuple(self.forest.suffix(v))
            seqs = size_sequences(self.forest, path)
            trees = tuple(
                IntervalBiasedTree(seq.values) if biased and len(seq.values) >= 2 else None for seq in seqs
            )
            self.items += len(path)
            self.tables.append(_SuffixTable(path=path, seqs=seqs, trees=trees))

    def _predecessor(self, table: _SuffixTable, side: Side, q: int, cost: QueryCost) -> Tuple[int, int]:
        seq, tree = table.seqs[side], table.trees[side]
        if tree is None:
            cost.predecessor_visits += len(seq.values).bit_length()
            return seq.predecessor(q)
        hit = tree.predecessor(q)
        cost.predecessor_visits += hit.visits
        return seq.idx_map[hit.index], hit.value

    def trace_from(self, v: int, i: int, cost: Optional[QueryCost] = None) -> Tuple[str, Trace]:
        sizes, rules = self.slp.sizes, self.slp.rules
        if not 0 <= i < sizes[v]:
            raise SlpError(ErrorCode.INDEX_OUT_OF_RANGE, f"index {i} not in [0, {sizes[v]})")
        cost = cost if cost is not None else QueryCost()
        trace = Trace()
        p, origin = i + 1, 0
        while True:
            cost.rule_visits += 1
            table = self.tables[v]
            z = self.meta.z[v]
            if p == z:
                trace.steps.append(
                    TraceStep(v, StepCase.HIT_Z, NO_NODE, 1, table.path[-1], len(table.path) - 1, origin)
                )
                return self.meta.ch[v], trace
            side = Side.LEFT if p < z else Side.RIGHT
            q = p if side is Side.LEFT else sizes[v] - p + 1
            raw, value = self._predecessor(table, side, q, cost)
            x = table.path[raw]
            rule = rules[x]
            if side is Side.LEFT:
                child, offset = rule.left, value - 1
            else:
                child = rule.right
                offset = sizes[v] - (value - 1) - sizes[child]
            p -= offset
            cost.path_switches += 1
            case = StepCase.DESCEND_LEFT if side is Side.LEFT else StepCase.DESCEND_RIGHT
            trace.steps.append(TraceStep(v, case, child, p, x, raw, origin))
            origin += offset
            v = child

    def access(self, i: int) -> str:
        return self.trace_from(self.slp.root, i)[0]


def build_reference_engine(slp: Slp, biased: bool = True) -> ReferenceEngine:
    return ReferenceEngine(slp, biased)


def _h_roots(forest: HForest) -> Tuple[int, ...]:
    roots: List[int] = []
    for v, h in enumerate(forest.parent):
        roots.append(v if h == NO_NODE else roots[h])
    return tuple(roots)


def build_engine(
    slp: Slp,
    mode: Union[EngineMode, str] = EngineMode.BIASED,
    levels: int = DEFAULT_LEVELS,
) -> Engine:
    try:
        mode = EngineMode(mode)
    except ValueError as exc:
        raise SlpError(ErrorCode.INVALID_PARAMS, f"unknown engine {mode!r}") from exc
    if not 0 <= levels <= MAX_LEVELS:
        raise SlpError(ErrorCode.INVALID_PARAMS, f"levels must be in [0, {MAX_LEVELS}], got {levels}")
    start = time.perf_counter()
    forest = build_forest(slp, decompose(slp))
    meta = suffix_meta(forest)
    wa = None
    if mode is not EngineMode.BASELINE:
        wa = build_wa(forest, meta, levels, biased=mode is EngineMode.BIASED)
    return Engine(
        slp=slp,
        forest=forest,
        meta=meta,
        mode=mode,
        levels=levels,
        wa=wa,
        h_root=_h_roots(forest),
        build_seconds=time.perf_counter() - start,
    )


def access(e: Engine, i: int) -> str:
    return e.access(i)


def access_with_trace(e: Engine, i: int) -> Tuple[str, Trace]:
    return e.access_with_trace(i)


def query_cost(e: Engine, i: int) -> QueryCost:
    return e.query_cost(i)
