"""Counter benchmark across engines, written as CSV rows."""

from __future__ import annotations

import csv
import logging
import time
from concurrent.futures import ThreadPoolExecutor
from pathlib import Path
from typing import Any, Dict, Iterable, List, Optional, Sequence, TextIO, Tuple

import numpy as np

from .access_engine import Engine, build_engine
from .config import BENCH_QUERIES, BENCH_THREADS, DEFAULT_SEED
from .digest import grammar_digest
from .slp.core import Slp
from .substring import SpanPlanner
from .types import QueryCost

logger = logging.getLogger(__name__)

FIELDS = [
    "engine",
    "levels",
    "build_seconds",
    "build_work",
    "queries",
    "rule_visits_mean",
    "rule_visits_max",
    "pred_visits_mean",
    "pred_visits_max",
    "path_switches_mean",
    "decode_chars",
    "decode_chars_per_sec",
    "digest",
]

DEFAULT_SETUPS: Tuple[Tuple[str, int], ...] = (
    ("baseline", 0),
    ("linear", 0),
    ("biased", 0),
    ("biased", 1),
    ("biased", 2),
)

SPAN_LENGTH = 64


def _costs(e: Engine, positions: Sequence[int], threads: int) -> List[QueryCost]:
    if threads <= 1:
        return [e.query_cost(i) for i in positions]
    with ThreadPoolExecutor(max_workers=threads) as pool:
        return list(pool.map(e.query_cost, positions))


def bench_engine(
    slp: Slp,
    mode: str,
    levels: int,
    positions: Sequence[int],
    spans: Sequence[Tuple[int, int]],
    threads: int = BENCH_THREADS,
    digest: str = "",
    timings: bool = True,
) -> Dict[str, Any]:
    e = build_engine(slp, mode, levels)
    costs = _costs(e, positions, threads)
    planner = SpanPlanner(e)
    start = time.perf_counter()
    decoded = 0
    for a, b in spans:
        decoded += len(planner.extract(a, b)[0])
    elapsed = time.perf_counter() - start
    rule = [c.rule_visits for c in costs] or [0]
    pred = [c.predecessor_visits for c in costs] or [0]
    switches = [c.path_switches for c in costs] or [0]
    row = {
        "engine": mode,
        "levels": levels if mode != "baseline" else "",
        "build_seconds": f"{e.build_seconds:.6f}" if timings else "",
        "build_work": e.build_work,
        "queries": len(costs),
        "rule_visits_mean": f"{float(np.mean(rule)):.3f}",
        "rule_visits_max": int(np.max(rule)),
        "pred_visits_mean": f"{float(np.mean(pred)):.3f}",
        "pred_visits_max": int(np.max(pred)),
        "path_switches_mean": f"{float(np.mean(switches)):.3f}",
        "decode_chars": decoded,
        "decode_chars_per_sec": f"{decoded / elapsed:.1f}" if timings and elapsed > 0 else "",
        "digest": digest,
    }
    logger.debug("bench %s/%s: %s", mode, levels, row)
    return row


def run_bench(
    slp: Slp,
    setups: Iterable[Tuple[str, int]] = DEFAULT_SETUPS,
    queries: int = BENCH_QUERIES,
    seed: int = DEFAULT_SEED,
    threads: int = BENCH_THREADS,
    timings: bool = True,
) -> List[Dict[str, Any]]:
    """One row per (engine, levels); all engines see the same positions.

    With `timings=False` the wall-clock columns stay empty and the rows
    depend only on the grammar and the seed.
    """
    rng = np.random.default_rng(seed)
    n = slp.length
    positions = [int(x) for x in rng.integers(0, n, size=queries, dtype=np.uint64)]
    spans = []
    for _ in range(max(1, queries // 100)):
        a = int(rng.integers(0, n, dtype=np.uint64))
        spans.append((a, min(n, a + SPAN_LENGTH)))
    digest = grammar_digest(slp)
    rows = []
    for mode, levels in setups:
        logger.info("bench %s levels=%d on %d queries", mode, levels, len(positions))
        rows.append(bench_engine(slp, mode, levels, positions, spans, threads, digest, timings))
    return rows


def write_csv(rows: Sequence[Dict[str, Any]], out: TextIO) -> None:
    writer = csv.DictWriter(out, fieldnames=FIELDS, extrasaction="ignore", lineterminator="\n")
    writer.writeheader()
    for row in rows:
        writer.writerow(row)


def write_csv_path(rows: Sequence[Dict[str, Any]], path: Optional[Path]) -> None:
    if path is None:
        return
    path.parent.mkdir(parents=True, exist_ok=True)
    with path.open("w", encoding="utf-8", newline="") as f:
        write_csv(rows, f)
