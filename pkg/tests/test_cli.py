"""Command line behaviour and exit codes."""

from __future__ import annotations

import json

import numpy as np
import pytest

from slp_access.cli import EXIT_ERROR, EXIT_FAILED, EXIT_OK, build_parser, main
from slp_access.slp.core import expand
from slp_access.slp.text_format import read_slp, write_slp


@pytest.fixture
def grammar_file(tmp_path, example_doc):
    path = tmp_path / "fib.slp"
    path.write_text(example_doc)
    return path


def test_build_then_access(tmp_path, capsys) -> None:
    src = tmp_path / "in.txt"
    src.write_bytes(b"banana bandana")
    out = tmp_path / "g.slp"
    assert main(["build", str(src), str(out)]) == EXIT_OK
    assert expand(read_slp(out)) == "banana bandana"

    assert main(["access", str(out), "7"]) == EXIT_OK
    assert capsys.readouterr().out == "b\n"


def test_build_latin1_bytes(tmp_path) -> None:
    src = tmp_path / "in.bin"
    src.write_bytes(bytes([0xE9, 0x00, 0xFF, 0xE9]))
    out = tmp_path / "g.slp"
    assert main(["build", str(src), str(out)]) == EXIT_OK
    assert expand(read_slp(out)) == "\xe9\x00\xff\xe9"


def test_build_utf8(tmp_path) -> None:
    src = tmp_path / "in.txt"
    src.write_text("naïve naïve", encoding="utf-8")
    out = tmp_path / "g.slp"
    assert main(["build", "--utf8", str(src), str(out)]) == EXIT_OK
    assert expand(read_slp(out)) == "naïve naïve"


def test_access_with_cost(grammar_file, capsys) -> None:
    assert main(["access", str(grammar_file), "5", "--engine", "biased", "--levels", "2", "--cost"]) == EXIT_OK
    ch, record = capsys.readouterr().out.splitlines()
    assert ch == "a"
    cost = json.loads(record)
    assert cost["i"] == 5
    assert cost["engine"] == "biased"
    assert cost["levels"] == 2
    assert cost["path_switches"] == 1
    assert "route" not in cost


def test_extract(grammar_file, capsys) -> None:
    assert main(["extract", str(grammar_file), "2", "5"]) == EXIT_OK
    assert capsys.readouterr().out == "aab"


def test_search(grammar_file, capsys) -> None:
    assert main(["search", str(grammar_file), "ab", "--k", "0"]) == EXIT_OK
    assert capsys.readouterr().out.split() == ["1", "4", "6"]
    assert main(["search", str(grammar_file), "bb", "--k", "0", "--matcher", "exhaustive"]) == EXIT_FAILED


def test_stats_json_and_yaml(grammar_file, capsys, tmp_path) -> None:
    dot = tmp_path / "path.dot"
    assert main(["stats", str(grammar_file), "--dump-ibst", str(dot)]) == EXIT_OK
    record = json.loads(capsys.readouterr().out)
    assert record["rules"] == 6
    assert record["length"] == 8
    assert record["height"] == 4
    assert record["light_edges"] == [2, 2, 2]
    assert record["h_roots"] == 2
    assert record["max_h_depth"] == 4
    assert record["index"]["paths"] == 2
    assert dot.read_text().startswith("digraph path_0 {")

    assert main(["stats", str(grammar_file), "--format", "yaml"]) == EXIT_OK
    out = capsys.readouterr().out
    assert "rules: 6\n" in out
    assert "length: 8\n" in out


def test_verify(grammar_file, capsys) -> None:
    assert main(["verify", str(grammar_file), "--suite", "sizes", "--suite", "oracle"]) == EXIT_OK
    lines = [json.loads(line) for line in capsys.readouterr().out.splitlines()]
    assert [line["name"] for line in lines] == ["sizes", "oracle"]
    assert all(line["status"] == "pass" for line in lines)


def test_missing_grammar_file(tmp_path) -> None:
    assert main(["verify", str(tmp_path / "missing.slp")]) == EXIT_ERROR


def test_bench(grammar_file, capsys, tmp_path) -> None:
    assert main(["bench", str(grammar_file), "--queries", "20", "--no-timings", "--engine", "biased"]) == EXIT_OK
    lines = capsys.readouterr().out.splitlines()
    assert lines[0].startswith("engine,levels,")
    assert len(lines) == 4

    out = tmp_path / "b.csv"
    assert main(["bench", str(grammar_file), "--queries", "20", "--no-timings", "--out", str(out)]) == EXIT_OK
    assert len(out.read_text().splitlines()) == 6


def test_config_file(grammar_file, tmp_path, capsys) -> None:
    cfg = tmp_path / "run.yaml"
    cfg.write_text("engine: linear\nlevels: 0\n")
    assert main(["--config", str(cfg), "access", str(grammar_file), "1", "--cost"]) == EXIT_OK
    record = json.loads(capsys.readouterr().out.splitlines()[1])
    assert record["engine"] == "linear"

    cfg.write_text("colour: blue\n")
    assert main(["--config", str(cfg), "access", str(grammar_file), "1"]) == EXIT_ERROR


def test_errors_exit_2(grammar_file, tmp_path) -> None:
    assert main(["access", str(grammar_file), "8"]) == EXIT_ERROR
    assert main(["extract", str(grammar_file), "5", "2"]) == EXIT_ERROR
    assert main(["search", str(grammar_file), "ab", "--k", "2"]) == EXIT_ERROR
    bad = tmp_path / "bad.slp"
    bad.write_text("SLPv1 1 0\n0 P 0 0\n")
    assert main(["access", str(bad), "0"]) == EXIT_ERROR


def test_parser_rejects_unknown_levels() -> None:
    with pytest.raises(SystemExit) as exc:
        build_parser().parse_args(["access", "g.slp", "0", "--levels", "5"])
    assert exc.value.code == 2


def _word_soup(seed: int, min_bytes: int) -> bytes:
    rng = np.random.default_rng(seed)
    letters = np.frombuffer(b"abcdefghijklmnopqrstuvwxyz", dtype=np.uint8)
    vocab = [bytes(rng.choice(letters, size=int(rng.integers(2, 10)))) for _ in range(2_000)]
    words = rng.integers(0, len(vocab), size=min_bytes // 3)
    out = bytearray()
    for w in words:
        out += vocab[w]
        out += b" "
        if len(out) >= min_bytes:
            break
    return bytes(out)


def test_build_then_extract_megabyte(tmp_path, capsysbinary) -> None:
    data = _word_soup(5, 1 << 20)
    assert len(data) >= 1 << 20
    src = tmp_path / "soup.txt"
    src.write_bytes(data)
    out = tmp_path / "soup.slp"
    assert main(["build", str(src), str(out)]) == EXIT_OK
    capsysbinary.readouterr()
    assert main(["extract", str(out), "0", str(len(data))]) == EXIT_OK
    assert capsysbinary.readouterr().out == data


def test_bench_above_int64(huge_slp, tmp_path, capsys) -> None:
    path = tmp_path / "huge.slp"
    write_slp(path, huge_slp)
    assert main(["bench", str(path), "--queries", "20", "--no-timings"]) == EXIT_OK
    lines = capsys.readouterr().out.splitlines()
    assert len(lines) == 6
    assert main(["access", str(path), str(1 << 63)]) == EXIT_OK
    assert capsys.readouterr().out == "b\n"
