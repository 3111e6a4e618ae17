"""slp-access command line.

Exit codes: 0 ok or found, 1 verification failed or nothing found, 2 usage
or I/O error.
"""

from __future__ import annotations

import argparse
import logging
import sys
from pathlib import Path
from typing import Any, Callable, Dict, List, Optional

from . import config
from .access_engine import Engine, build_engine
from .approx_match import exhaustive_match, search_report, sellers_match
from .bench import DEFAULT_SETUPS, run_bench, write_csv, write_csv_path
from .digest import grammar_digest
from .errors import SlpError
from .heavy_path import light_edge_histogram
from .reports import dump_yaml, json_line
from .settings import Settings, apply_overrides, load_settings
from .slp.core import height
from .slp.repair import build_grammar
from .slp.text_format import read_slp, write_slp
from .substring import extract
from .types import Side
from .verify import FAIL, SUITES, run_suites

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_FAILED = 1
EXIT_ERROR = 2

MATCHERS = {"sellers": sellers_match, "exhaustive": exhaustive_match}


def _encoding(args: argparse.Namespace) -> str:
    return "utf-8" if args.utf8 else "latin-1"


def _settings(args: argparse.Namespace) -> Settings:
    base = load_settings(args.config)
    overrides: Dict[str, Any] = {}
    for flag, key in (
        ("engine", "engine"),
        ("levels", "levels"),
        ("seed", "seed"),
        ("oracle_cap", "oracle_cap"),
        ("queries", "bench_queries"),
        ("threads", "bench_threads"),
        ("samples", "verify_samples"),
        ("max_rules", "repair_max_rules"),
    ):
        value = getattr(args, flag, None)
        if value is not None:
            overrides[key] = value
    return apply_overrides(base, overrides)


def _engine(args: argparse.Namespace) -> Engine:
    settings = _settings(args)
    slp = read_slp(Path(args.slp))
    return build_engine(slp, settings.engine, settings.levels)


# -- commands ----------------------------------------------------------------


def cmd_build(args: argparse.Namespace) -> int:
    settings = _settings(args)
    data = Path(args.input).read_bytes()
    text = data.decode(_encoding(args))
    slp = build_grammar(text, settings.repair_max_rules)
    write_slp(Path(args.output), slp)
    ratio = slp.length / slp.n
    logger.info("n=%d N=%d ratio=%.3f", slp.n, slp.length, ratio)
    return EXIT_OK


def cmd_access(args: argparse.Namespace) -> int:
    e = _engine(args)
    ch = e.access(args.i)
    sys.stdout.write(ch + "\n")
    if args.cost:
        record = {"i": args.i, "engine": e.mode.value, "levels": e.levels, **e.query_cost(args.i).as_dict()}
        sys.stdout.write(json_line(record) + "\n")
    return EXIT_OK


def cmd_extract(args: argparse.Namespace) -> int:
    e = _engine(args)
    text = extract(e, args.i, args.j)
    sys.stdout.buffer.write(text.encode(_encoding(args)))
    sys.stdout.flush()
    return EXIT_OK


def cmd_search(args: argparse.Namespace) -> int:
    e = _engine(args)
    report = search_report(e, args.pattern, args.k, MATCHERS[args.matcher])
    for end in report.ends:
        sys.stdout.write(f"{end}\n")
    logger.debug("search counters %s", report.as_dict())
    return EXIT_OK if report.ends else EXIT_FAILED


def _stats_record(e: Engine) -> Dict[str, Any]:
    slp = e.slp
    record: Dict[str, Any] = {
        "rules": slp.n,
        "length": slp.length,
        "height": height(slp),
        "digest": grammar_digest(slp),
        "light_edges": light_edge_histogram(e.forest),
        "h_roots": len(e.forest.roots),
        "max_h_depth": max(e.forest.depth),
    }
    if e.wa is not None:
        record["index"] = e.wa.stats()
    return record


def _dump_ibst(e: Engine, path: Path) -> None:
    longest = max(e.wa.index.chains, key=len)
    lane = longest.sides[Side.RIGHT]
    if lane is None or lane.tree is None:
        logger.warning("longest heavy path has no right-side intervals; nothing written")
        return
    path.write_text(lane.tree.to_dot(f"path_{longest.top}"), encoding="utf-8")
    logger.info("wrote %s (%d intervals)", path, lane.tree.size)


def cmd_stats(args: argparse.Namespace) -> int:
    settings = _settings(args)
    slp = read_slp(Path(args.slp))
    engine = settings.engine if settings.engine != "baseline" else "biased"
    e = build_engine(slp, engine, settings.levels)
    record = _stats_record(e)
    if args.format == "yaml":
        sys.stdout.write(dump_yaml(record))
    else:
        sys.stdout.write(json_line(record) + "\n")
    if args.dump_ibst:
        _dump_ibst(e, Path(args.dump_ibst))
    return EXIT_OK


def cmd_verify(args: argparse.Namespace) -> int:
    settings = _settings(args)
    slp = read_slp(Path(args.slp))
    report = run_suites(slp, settings, args.suite)
    for suite in report.suites:
        sys.stdout.write(json_line({"digest": report.digest, **suite.as_dict()}) + "\n")
        log = logger.error if suite.status == FAIL else logger.info
        log("%-10s %s %s", suite.name, suite.status, suite.detail)
    return EXIT_OK if report.passed else EXIT_FAILED


def cmd_bench(args: argparse.Namespace) -> int:
    settings = _settings(args)
    slp = read_slp(Path(args.slp))
    setups = DEFAULT_SETUPS
    if args.engine is not None:
        setups = tuple(s for s in DEFAULT_SETUPS if s[0] == args.engine)
    rows = run_bench(
        slp,
        setups,
        queries=settings.bench_queries,
        seed=settings.seed,
        threads=settings.bench_threads,
        timings=not args.no_timings,
    )
    if args.out:
        write_csv_path(rows, Path(args.out))
        logger.info("wrote %s", args.out)
    else:
        write_csv(rows, sys.stdout)
    return EXIT_OK


# -- parser ------------------------------------------------------------------


def _engine_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--engine", choices=config.ENGINES, default=None)
    p.add_argument("--levels", type=int, choices=range(config.MAX_LEVELS + 1), default=None)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="slp-access", description=__doc__.splitlines()[0])
    parser.add_argument("--config", default=None, help="YAML settings file")
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("build", help="compress a file into an SLPv1 grammar")
    p.add_argument("input")
    p.add_argument("output")
    p.add_argument("--max-rules", dest="max_rules", type=int, default=None)
    p.add_argument("--utf8", action="store_true", help="read the input as UTF-8 instead of bytes")
    p.set_defaults(func=cmd_build)

    p = sub.add_parser("access", help="print one character")
    p.add_argument("slp")
    p.add_argument("i", type=int)
    _engine_flags(p)
    p.add_argument("--cost", action="store_true")
    p.set_defaults(func=cmd_access)

    p = sub.add_parser("extract", help="write S[i, j) to standard output")
    p.add_argument("slp")
    p.add_argument("i", type=int)
    p.add_argument("j", type=int)
    _engine_flags(p)
    p.add_argument("--utf8", action="store_true")
    p.set_defaults(func=cmd_extract)

    p = sub.add_parser("search", help="approximate pattern search")
    p.add_argument("slp")
    p.add_argument("pattern")
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--matcher", choices=sorted(MATCHERS), default="sellers")
    _engine_flags(p)
    p.set_defaults(func=cmd_search)

    p = sub.add_parser("stats", help="grammar and index statistics")
    p.add_argument("slp")
    _engine_flags(p)
    p.add_argument("--format", choices=("json", "yaml"), default="json")
    p.add_argument("--dump-ibst", dest="dump_ibst", default=None, metavar="FILE")
    p.set_defaults(func=cmd_stats)

    p = sub.add_parser("verify", help="run the audit suites")
    p.add_argument("slp")
    _engine_flags(p)
    p.add_argument("--seed", type=int, default=None)
    p.add_argument("--oracle-cap", dest="oracle_cap", type=int, default=None)
    p.add_argument("--samples", type=int, default=None)
    p.add_argument("--suite", action="append", choices=list(SUITES), default=None)
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("bench", help="counter benchmark as CSV")
    p.add_argument("slp")
    p.add_argument("--engine", choices=config.ENGINES, default=None)
    p.add_argument("--seed", type=int, default=None)
    p.add_argument("--queries", type=int, default=None)
    p.add_argument("--threads", type=int, default=None)
    p.add_argument("--out", default=None)
    p.add_argument("--no-timings", dest="no_timings", action="store_true")
    p.set_defaults(func=cmd_bench)
    return parser


def main(argv: Optional[List[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(
        level=logging.DEBUG if args.verbose else logging.INFO,
        format="%(message)s",
        stream=sys.stderr,
        force=True,
    )
    handler: Callable[[argparse.Namespace], int] = args.func
    try:
        return handler(args)
    except SlpError as exc:
        logger.error("%s", exc)
        return EXIT_ERROR
    except (OSError, UnicodeError) as exc:
        logger.error("%s", exc)
        return EXIT_ERROR
