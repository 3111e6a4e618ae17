"""Audit suites over one grammar.

Each suite returns pass, fail or skip with the number of checks made and,
on failure, the first violated property by name.
"""

from __future__ import annotations

import math
from dataclasses import asdict, dataclass, field
from typing import Callable, Dict, List, Optional

import numpy as np

from .access_engine import Engine, build_engine
from .approx_match import search, sellers_match
from .config import MAX_LEVELS
from .digest import grammar_digest
from .errors import SlpError
from .settings import Settings
from .slp.core import Slp, compute_sizes, expand
from .substring import SpanPlanner

PASS = "pass"
FAIL = "fail"
SKIP = "skip"

SPAN_SAMPLES = 200
MATCH_LIMIT = 10_000


@dataclass
class SuiteResult:
    name: str
    status: str = PASS
    checks: int = 0
    detail: str = ""

    def fail(self, detail: str) -> "SuiteResult":
        self.status = FAIL
        self.detail = detail
        return self

    def skip(self, detail: str) -> "SuiteResult":
        self.status = SKIP
        self.detail = detail
        return self

    def as_dict(self) -> Dict[str, object]:
        return asdict(self)


@dataclass
class VerifyReport:
    digest: str
    length: int
    rules: int
    suites: List[SuiteResult] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return all(s.status != FAIL for s in self.suites)


class _Context:
    def __init__(self, slp: Slp, settings: Settings):
        self.slp = slp
        self.settings = settings
        self.rng = np.random.default_rng(settings.seed)
        self._text: Optional[str] = None
        self._engines: Dict[str, Engine] = {}

    @property
    def has_oracle(self) -> bool:
        return self.slp.length <= self.settings.oracle_cap

    @property
    def text(self) -> str:
        if self._text is None:
            self._text = expand(self.slp, self.settings.oracle_cap)
        return self._text

    def engine(self, mode: str, levels: int = 0) -> Engine:
        key = f"{mode}/{levels}"
        if key not in self._engines:
            self._engines[key] = build_engine(self.slp, mode, levels)
        return self._engines[key]

    def engines(self) -> Dict[str, Engine]:
        out = {"baseline": self.engine("baseline"), "linear": self.engine("linear")}
        for levels in range(MAX_LEVELS + 1):
            out[f"biased/{levels}"] = self.engine("biased", levels)
        return out

    def positions(self) -> List[int]:
        n = self.slp.length
        if n <= self.settings.verify_samples:
            return list(range(n))
        return [int(x) for x in self.rng.integers(0, n, size=self.settings.verify_samples, dtype=np.uint64)]


def _suite_sizes(ctx: _Context) -> SuiteResult:
    result = SuiteResult("sizes")
    recomputed = compute_sizes(ctx.slp.rules)
    result.checks = len(recomputed)
    for v, (a, b) in enumerate(zip(recomputed, ctx.slp.sizes)):
        if a != b:
            return result.fail(f"size-recompute: rule {v} stores {b}, expands to {a}")
    if len(ctx.slp.sizes) != ctx.slp.n:
        return result.fail("size-recompute: size table length differs from rule count")
    return result


def _suite_oracle(ctx: _Context) -> SuiteResult:
    result = SuiteResult("oracle")
    if not ctx.has_oracle:
        return result.skip(f"N={ctx.slp.length} above oracle cap {ctx.settings.oracle_cap}")
    text = ctx.text
    engines = ctx.engines()
    for i in ctx.positions():
        for name, e in engines.items():
            result.checks += 1
            got = e.access(i)
            if got != text[i]:
                return result.fail(f"oracle-access: {name} returned {got!r} at {i}, expected {text[i]!r}")
    return result


def _suite_engines(ctx: _Context) -> SuiteResult:
    result = SuiteResult("engines")
    engines = ctx.engines()
    reference = engines["baseline"]
    for i in ctx.positions():
        want, want_trace = reference.access_with_trace(i)
        for name, e in engines.items():
            result.checks += 1
            got, trace = e.access_with_trace(i)
            if got != want:
                return result.fail(f"engine-agreement: {name} returned {got!r} at {i}, baseline {want!r}")
            if trace.steps != want_trace.steps:
                return result.fail(f"trace-agreement: {name} trace differs from baseline at {i}")
    return result


def _suite_structure(ctx: _Context) -> SuiteResult:
    result = SuiteResult("structure")
    slp = ctx.slp
    n_chars = slp.length
    light_bound = n_chars.bit_length()  # floor(log2 N) + 1
    budget = ctx.settings.telescope_c * (2 + math.log2(n_chars))
    e = ctx.engine("biased", ctx.settings.levels)
    wa = e.wa

    for i in ctx.positions():
        result.checks += 1
        _, trace = e.access_with_trace(i)
        if trace.light_edges > light_bound:
            return result.fail(f"light-edge-bound: {trace.light_edges} light edges at {i} (bound {light_bound})")
        # each jump stays inside S(head): t(w) <= |S(u)|
        for step, nxt in zip(trace.steps, trace.steps[1:]):
            start = nxt.origin - step.origin
            if start < 0 or start + slp.sizes[step.entered] > slp.sizes[step.head]:
                return result.fail(f"jump-extent: light child {step.entered} leaves rule {step.head} at {i}")
        cost = e.query_cost(i)
        if cost.predecessor_visits > budget:
            return result.fail(
                f"telescoping: {cost.predecessor_visits} predecessor visits at {i} (budget {budget:.1f})"
            )

    for chain in wa.index.chains:
        for lane in chain.sides:
            if lane is None or lane.tree is None:
                continue
            result.checks += 1
            tree = lane.tree
            if tree.depth_violations():
                return result.fail(f"ibst-depth: ladder at node {chain.top} violates the depth bound")
            if tree.build_steps > ctx.settings.ibst_build_c * tree.size:
                return result.fail(f"ibst-build: {tree.build_steps} steps for {tree.size} intervals")

    result.checks += 1
    height = wa.index.light_height()
    if height > slp.n.bit_length():
        return result.fail(f"light-height: {height} exceeds floor(log2 {slp.n}) + 1")

    stats = wa.stats()
    for level in stats["per_level"]:
        nodes = level["nodes"]
        if "bottom_trees" not in level or nodes < 2:
            continue
        result.checks += 1
        if level["top_leaves"] * math.log2(nodes) > nodes:
            return result.fail(f"top-leaves: {level['top_leaves']} leaves for {nodes} vertices")
    return result


def _suite_substring(ctx: _Context) -> SuiteResult:
    result = SuiteResult("substring")
    if not ctx.has_oracle:
        return result.skip("oracle unavailable")
    text = ctx.text
    n = len(text)
    planner = SpanPlanner(ctx.engine("biased", ctx.settings.levels))
    spans = [(0, n)]
    for _ in range(min(SPAN_SAMPLES, ctx.settings.verify_samples)):
        a, b = sorted(int(x) for x in ctx.rng.integers(0, n + 1, size=2, dtype=np.uint64))
        if a < b:
            spans.append((a, b))
    for a, b in spans:
        result.checks += 1
        got, _, counters = planner.extract(a, b)
        if got != text[a:b]:
            return result.fail(f"extract-oracle: [{a}, {b}) differs from the expansion")
        if counters["accesses"] > 2 or counters["decoded"] != b - a:
            return result.fail(f"extract-work: [{a}, {b}) counters {counters}")
    return result


def _suite_match(ctx: _Context) -> SuiteResult:
    result = SuiteResult("match")
    if not ctx.has_oracle or ctx.slp.length > MATCH_LIMIT:
        return result.skip(f"N={ctx.slp.length} above match limit {MATCH_LIMIT}")
    text = ctx.text
    e = ctx.engine("biased", ctx.settings.levels)
    for _ in range(3):
        m = int(ctx.rng.integers(1, min(6, len(text)) + 1))
        start = int(ctx.rng.integers(0, len(text) - m + 1))
        pattern = text[start:start + m]
        for k in range(min(2, m)):
            result.checks += 1
            got = search(e, pattern, k)
            want = sellers_match(pattern, text, k)
            if got != want:
                return result.fail(f"match-oracle: pattern {pattern!r} k={k} differs from the expansion scan")
    return result


SUITES: Dict[str, Callable[[_Context], SuiteResult]] = {
    "sizes": _suite_sizes,
    "oracle": _suite_oracle,
    "engines": _suite_engines,
    "structure": _suite_structure,
    "substring": _suite_substring,
    "match": _suite_match,
}


def run_suites(slp: Slp, settings: Optional[Settings] = None, only: Optional[List[str]] = None) -> VerifyReport:
    settings = settings if settings is not None else Settings()
    ctx = _Context(slp, settings)
    report = VerifyReport(digest=grammar_digest(slp), length=slp.length, rules=slp.n)
    names = list(SUITES) if only is None else only
    for name in names:
        suite = SUITES[name]
        if report.suites and report.suites[0].name == "sizes" and report.suites[0].status == FAIL:
            report.suites.append(SuiteResult(name).skip("size table is inconsistent"))
            continue
        try:
            report.suites.append(suite(ctx))
        except SlpError as exc:
            report.suites.append(SuiteResult(name).fail(f"{exc.code.name}: {exc.message}"))
    return report
