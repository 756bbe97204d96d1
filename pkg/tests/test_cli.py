#!/usr/bin/env python3
# -*- coding: utf-8 -*-
"""命令行：退出码、输出格式与报告内容"""

import json

import pytest

from src.cli.app import main
from src.cli.context import symbolic_theorem2_meta
from src.cli.verify_commands import cmd_verify_theorem1
from src.core.patterns import build_theorem1_universe, build_theorem2_universe
from src.core.recognizers import algorithm_a, algorithm_b, fig4_tree, parse_tree
from src.utils.file_parser import FileParser

A_DSL = "(P1 a0 (P2 a1 (P3 a2 a3)))"
B_DSL = "(P4 a2 (P5 a0 (P6 a1 a3)))"
C_DSL = "(P7 a1 (P8 a2 (P9 a0 a3)))"


def run(capsys, argv):
    code = main(argv)
    captured = capsys.readouterr()
    return code, captured.out, captured.err


def run_json(capsys, argv):
    code, out, err = run(capsys, argv + ["--format", "json"])
    return code, json.loads(out)


@pytest.fixture
def universe_file(tmp_path):
    path = tmp_path / "theorem1.txt"
    path.write_text(FileParser.format_universe(build_theorem1_universe()), encoding="utf-8")
    return str(path)


# ============ verify ============

def test_verify_theorem1_passes(capsys):
    code, out, _ = run(capsys, ["verify", "theorem1"])
    assert code == 0
    assert "16/8" in out
    assert "FAIL" not in out


def test_verify_theorem1_json(capsys):
    code, payload = run_json(capsys, ["verify", "theorem1"])
    assert code == 0
    assert payload["passed"] is True
    assert [c["check"] for c in payload["checks"]] == [
        "correctness", "time table", "nontransitive cycle", "no dominator", "cycle tightness"
    ]
    assert payload["no_dominator"]["holds"] is True
    assert payload["no_dominator"]["margins"] == {"A": 8, "B": 8, "C": 8}
    assert all(entry["tight"] for entry in payload["tightness"])
    assert payload["times"]["cells"] == [["1", "2", "3"], ["2", "3", "1"], ["3", "1", "2"], ["3", "3", "3"]]


def test_verify_theorem1_detects_wrong_algorithm():
    wrong = parse_tree("(P7 a0 (P8 a2 (P9 a1 a3)))", label="C")
    result = cmd_verify_theorem1(trees=[algorithm_a(), algorithm_b(), wrong])
    assert result.exit_code == 1
    assert result.report.data["passed"] is False
    assert result.report.data["checks"][0]["check"] == "correctness"


def test_verify_theorem1_detects_broken_cycle():
    result = cmd_verify_theorem1(trees=[algorithm_a(), algorithm_b(), fig4_tree()])
    assert result.exit_code == 1
    failed = {c["check"] for c in result.report.data["checks"] if not c["passed"]}
    assert "time table" in failed
    assert "nontransitive cycle" in failed


@pytest.mark.parametrize("n", ["3", "4"])
def test_verify_theorem2_exact(capsys, n):
    code, payload = run_json(capsys, ["verify", "theorem2", "--n", n])
    assert code == 0
    assert payload["cycle"]["holds"] is True
    checks = {c["check"] for c in payload["checks"]}
    assert "image-level cross-check" in checks
    if n == "3":
        assert {"universe equals theorem1", "spines equal A,B,C"} <= checks


def test_verify_theorem2_image_level(capsys):
    code, payload = run_json(capsys, ["verify", "theorem2", "--n", "10", "--mode", "image-level"])
    assert code == 0
    assert payload["passed"] is True
    assert set(payload["spot_check_failures"].values()) == {0}


def test_verify_theorem2_rejects_small_n(capsys):
    code, _, err = run(capsys, ["verify", "theorem2", "--n", "2"])
    assert code == 2
    assert "n >= 3" in err


def test_verify_theorem2_exact_capacity(capsys):
    code, _, err = run(capsys, ["verify", "theorem2", "--n", "12"])
    assert code == 2
    assert err


# ============ 分析命令 ============

def test_compare_dsl_trees(capsys):
    code, out, _ = run(capsys, ["compare", "--universe", "theorem1", "--tree", A_DSL, "--tree", B_DSL])
    assert code == 0
    assert "first_better (16 vs 8)" in out


def test_compare_json(capsys):
    code, payload = run_json(capsys, ["compare", "--trees", "C,A"])
    assert code == 0
    assert payload["outcome"] == "first_better"
    assert payload["wins"] == [16, 8]
    assert payload["ties"] == 1


def test_compare_needs_two_trees(capsys):
    code, _, err = run(capsys, ["compare", "--trees", "A"])
    assert code == 2
    assert "compare" in err


def test_compare_incorrect_tree_exits_1(capsys):
    code, _, _ = run(capsys, ["compare", "--tree", "(P1 a1 (P2 a0 (P3 a2 a3)))", "--trees", "A"])
    # --tree 与 --trees 不能同时使用
    assert code == 2
    code, _, err = run(capsys, ["compare", "--tree", "(P1 a1 (P2 a0 (P3 a2 a3)))", "--tree", A_DSL])
    assert code == 1
    assert "误分类" in err


def test_bad_dsl_exits_2(capsys):
    code, _, err = run(capsys, ["compare", "--tree", "(P1 a0", "--tree", A_DSL])
    assert code == 2
    assert "位置" in err


def test_times_table(capsys):
    code, out, _ = run(capsys, ["times", "--trees", "A,B,C"])
    assert code == 0
    lines = out.splitlines()
    assert any(line.split() == ["a1", "2", "3", "1"] for line in lines)
    assert any(line.split() == ["a3", "3", "3", "3"] for line in lines)


def test_times_dsv(capsys):
    code, out, _ = run(capsys, ["times", "--format", "dsv"])
    assert code == 0
    assert "image\tA\tB\tC" in out
    assert "a2\t3\t1\t2" in out


def test_times_xlsx_export(capsys, tmp_path):
    openpyxl = pytest.importorskip("openpyxl")
    path = tmp_path / "times.xlsx"
    code, _, _ = run(capsys, ["times", "--xlsx", str(path)])
    assert code == 0
    workbook = openpyxl.load_workbook(path)
    rows = list(workbook["recognition times"].iter_rows(values_only=True))
    assert rows[0] == ("image", "A", "B", "C")
    assert rows[1] == ("a0", "1", "2", "3")


def test_tournament_default_cycle(capsys):
    code, payload = run_json(capsys, ["tournament"])
    assert code == 0
    assert payload["wins"] == [[0, 16, 8], [8, 0, 16], [16, 8, 0]]
    assert payload["cycle"]["holds"] is True
    assert payload["cyclic_triads"] == 1
    assert set(payload) >= {"algorithms", "wins", "outcomes", "ties"}


def test_tournament_image_level(capsys):
    code, payload = run_json(capsys, ["tournament", "--universe", "theorem2:10", "--mode", "image-level"])
    assert code == 0
    assert payload["cycle"]["holds"] is True
    assert payload["algorithms"] == [f"A{q}" for q in range(10)]


def test_universe_emit(capsys):
    code, out, _ = run(capsys, ["universe", "--emit"])
    assert code == 0
    assert "a0: 1BB01B001" in out
    assert "L=9" in out


def test_universe_json(capsys):
    code, payload = run_json(capsys, ["universe"])
    assert code == 0
    assert payload["size"] == 25
    assert payload["separating_signs"] == {"a0": [1], "a1": [7], "a2": [4], "a3": []}
    assert payload["config"]["image_sizes"] == [8, 8, 8, 1]
    assert len(payload["config"]["universe_sha256"]) == 64


# ============ 搜索命令 ============

def test_adversary(capsys):
    code, payload = run_json(capsys, ["adversary", "--trees", "A", "--joint"])
    assert code == 0
    result = payload["results"][0]
    assert result["target"] == "A"
    assert result["margin"] == 8
    assert result["witness_margin"] == 8
    assert payload["joint"]["holds"] is False
    assert payload["joint"]["best_joint_margin"] == 8


def test_adversary_joint_cycle(capsys):
    code, payload = run_json(capsys, ["adversary", "--joint"])
    assert code == 0
    assert [r["margin"] for r in payload["results"]] == [8, 8, 8]
    assert payload["joint"]["holds"] is True
    assert payload["joint"]["dominator"] is None


def test_adversary_capacity(capsys):
    code, _, _ = run(capsys, ["adversary", "--universe", "theorem2:4"])
    assert code == 2


def test_enumerate_micro_universe(capsys, tmp_path):
    path = tmp_path / "micro.txt"
    path.write_text("# L=2 微型全集\nL=2\na0: 1*\na1: 01\na2: 00\n", encoding="utf-8")
    code, payload = run_json(capsys, ["enumerate", "--universe", str(path), "--limit", "5"])
    assert code == 0
    assert payload["count"] == 2
    assert payload["trees"] == ["(P1 a0 (P2 a1 a2))", "(P2 (P1 a0 a1) (P1 a0 a2))"]


def test_simulate_same_tree(capsys):
    code, payload = run_json(capsys, ["simulate", "--steps", "1", "--trials", "1", "--seed", "7", "--trees", "A,A"])
    assert code == 0
    assert payload["simulation"]["empirical_win_fraction"] == 0.0
    assert payload["simulation"]["wins"] == 0


def test_simulate_defaults_to_first_two_cycle_members(capsys):
    code, payload = run_json(capsys, ["simulate", "--steps", "2000", "--seed", "3"])
    assert code == 0
    assert payload["simulation"]["first"] == "A"
    assert payload["simulation"]["second"] == "B"
    assert payload["simulation"]["exact_win_fraction"] == "16/25"


def test_simulate_rejects_zero_steps(capsys):
    code, _, _ = run(capsys, ["simulate", "--steps", "0"])
    assert code == 2


# ============ 确定性与等价输入 ============

def test_json_output_is_byte_identical(capsys):
    argv = ["simulate", "--steps", "500", "--trials", "2", "--seed", "11", "--format", "json"]
    _, first, _ = run(capsys, argv)
    _, second, _ = run(capsys, argv)
    assert first == second


def test_file_and_dsl_match_builtins(capsys, universe_file, tmp_path):
    tree_file = tmp_path / "cycle.txt"
    tree_file.write_text(f"# 三个算法\n{A_DSL}\n{B_DSL}\n{C_DSL}\n", encoding="utf-8")

    _, builtin_out, _ = run(capsys, ["tournament", "--trees", "A,B,C", "--format", "json"])
    _, labelled_out, _ = run(capsys, [
        "tournament", "--universe", universe_file, "--format", "json",
        "--tree", f"A={A_DSL}", "--tree", f"B={B_DSL}", "--tree", f"C={C_DSL}",
    ])
    _, from_file = run_json(capsys, ["tournament", "--universe", universe_file, "--tree", f"@{tree_file}"])

    assert labelled_out == builtin_out
    builtin = json.loads(builtin_out)
    assert builtin["config"]["universe"] == "theorem1"
    for key in ("wins", "ties", "cycle", "cyclic_triads"):
        assert from_file[key] == builtin[key]
    assert from_file["config"] == {**builtin["config"], "trees": from_file["config"]["trees"]}
    assert from_file["algorithms"] == ["cycle#1", "cycle#2", "cycle#3"]


def test_universe_file_defaults_to_builtin_cycle(capsys, universe_file):
    _, builtin, _ = run(capsys, ["adversary", "--format", "json"])
    code, from_file, _ = run(capsys, ["adversary", "--universe", universe_file, "--format", "json"])
    assert code == 0
    assert from_file == builtin


def test_theorem2_file_matches_builtin(capsys, tmp_path):
    path = tmp_path / "t2.txt"
    path.write_text(FileParser.format_universe(build_theorem2_universe(3)), encoding="utf-8")
    _, builtin, _ = run(capsys, ["times", "--universe", "theorem2:3", "--format", "json"])
    _, from_file, _ = run(capsys, ["times", "--universe", str(path), "--format", "json"])
    assert from_file == builtin


def test_other_universe_files_keep_their_name(capsys, tmp_path):
    path = tmp_path / "micro.txt"
    path.write_text("L=2\na0: 1B\na1: 01\na2: 00\n", encoding="utf-8")
    _, payload = run_json(capsys, ["enumerate", "--universe", str(path)])
    assert payload["config"]["universe"] == "micro.txt"


def test_adversary_witness_mismatch_exits_1(capsys, monkeypatch):
    from src.cli import search_commands
    monkeypatch.setattr(search_commands, "margin", lambda witness, target, universe: 0)
    code, out, err = run(capsys, ["adversary", "--trees", "A", "--format", "json"])
    assert code == 1
    payload = json.loads(out)
    assert payload["verified"] is False
    assert payload["results"][0]["witness_margin"] == 0
    assert "adversary" in err


def test_adversary_reports_verified(capsys):
    code, payload = run_json(capsys, ["adversary", "--trees", "B"])
    assert code == 0
    assert payload["verified"] is True


def test_deep_tree_is_accepted(capsys, tmp_path):
    path = tmp_path / "line.txt"
    path.write_text("L=1\na0: 1\na1: 0\n", encoding="utf-8")
    deep = "(P1 a0 " * 3000 + "a1" + ")" * 3000
    code, payload = run_json(capsys, ["compare", "--universe", str(path), "--tree", deep, "--tree", "(P1 a0 a1)"])
    assert code == 0
    assert payload["outcome"] == "second_better"
    assert payload["wins"] == [0, 1]
    assert payload["config"]["trees"][0] == f"T1: {deep}"

def test_symbolic_digest_matches_expanded_universe():
    expanded = FileParser.universe_digest(build_theorem2_universe(4))
    assert symbolic_theorem2_meta(4)["universe_sha256"] == expanded


# ============ 用法错误 ============

def test_unknown_command(capsys):
    code, _, _ = run(capsys, ["frobnicate"])
    assert code == 2


def test_unknown_format(capsys):
    code, _, _ = run(capsys, ["times", "--format", "xml"])
    assert code == 2


def test_missing_universe_file(capsys):
    code, _, err = run(capsys, ["times", "--universe", "/nonexistent/universe.txt"])
    assert code == 2
    assert "不存在" in err


def test_help_exits_zero(capsys):
    code, out, _ = run(capsys, ["--help"])
    assert code == 0
    assert "verify" in out


def test_verbose_logging_goes_to_stderr(capsys):
    code, out, err = run(capsys, ["verify", "theorem1", "-v", "--format", "json"])
    assert code == 0
    json.loads(out)
    assert "INFO" in err
