#!/usr/bin/env python3
# -*- coding: utf-8 -*-
"""
验证命令 - 复现两个定理的全部结论
"""

import itertools
import logging
from typing import List, Optional, Sequence

import numpy as np

from ..core.models import DecisionTree, CycleVerdict, CorrectnessError, DomainError
from ..core.patterns import build_theorem1_universe, build_theorem2_universe
from ..core.recognizers import algorithm_a, algorithm_b, algorithm_c, spine_tree, spot_check_spine
from ..core.tournament import (
    render_time_table, verify_cycle, pairwise_wins, image_level_wins, verify_spine_cycle
)
from ..core.adversary import verify_no_dominator, cycle_tightness
from ..utils.config import RunConfig
from ..utils.report_writer import Report, ReportSection
from .context import CommandResult, new_report, symbolic_theorem2_meta, tree_lines

logger = logging.getLogger(__name__)

# 𝔄, 𝔅, ℭ 在 α0..α3 上的识别时间
TABLE1_TIMES = [
    ["1", "2", "3"],
    ["2", "3", "1"],
    ["3", "1", "2"],
    ["3", "3", "3"],
]
THEOREM1_CYCLE_WINS = (16, 8)
SPOT_CHECK_SAMPLES = 1000


class CheckList:
    """按顺序记录每项检查的结果"""

    def __init__(self, report: Report):
        self.report = report
        self.rows: List[list] = []

    def record(self, name: str, passed: bool, detail: str = "") -> bool:
        self.rows.append([name, "pass" if passed else "FAIL", detail])
        if passed:
            logger.info("检查通过: %s", name)
        else:
            logger.warning("检查失败: %s %s", name, detail)
        return passed

    @property
    def passed(self) -> bool:
        return all(row[1] == "pass" for row in self.rows)

    def finish(self) -> CommandResult:
        self.report.sections.insert(0, _checks_section(self.rows))
        self.report.data["checks"] = [
            {"check": name, "passed": status == "pass", "detail": detail}
            for name, status, detail in self.rows
        ]
        self.report.data["passed"] = self.passed
        return CommandResult(self.report, 0 if self.passed else 1)


def _checks_section(rows: List[list]) -> ReportSection:
    return ReportSection(title="checks", headers=["check", "status", "detail"], rows=rows)


def _trace(verdict: CycleVerdict) -> str:
    return "; ".join(
        f"{s.first}<<{s.second} {s.outcome.first_wins}/{s.outcome.second_wins}" for s in verdict.steps
    )


# ============ 定理1 ============

def cmd_verify_theorem1(config: Optional[RunConfig] = None,
                        trees: Optional[Sequence[DecisionTree]] = None) -> CommandResult:
    """
    依次检查：时间表、非传递环 (16,8)、不存在同时优于三者的算法、环的紧性

    Args:
        config: 运行配置（此命令不使用其中的参数）
        trees: 替换内置的 𝔄,𝔅,ℭ（用于故障注入）
    """
    universe = build_theorem1_universe()
    trees = list(trees) if trees is not None else [algorithm_a(), algorithm_b(), algorithm_c()]
    report = new_report("verify theorem1", universe, trees)
    checks = CheckList(report)

    try:
        table = render_time_table(trees, universe)
    except CorrectnessError as e:
        checks.record("correctness", False, e.message)
        report.add_section("misclassified", lines=[e.report.summary()])
        report.data["correctness"] = e.report.to_dict()
        return checks.finish()
    checks.record("correctness", True)

    checks.record("time table", table.cells == TABLE1_TIMES, " | ".join(",".join(row) for row in table.cells))
    report.add_section(
        "recognition times",
        headers=["image"] + table.labels,
        rows=[[name] + row for name, row in zip(table.image_names, table.cells)],
    )
    report.data["times"] = table.to_dict()

    verdict = verify_cycle(trees, universe)
    wins_ok = all(
        (step.outcome.first_wins, step.outcome.second_wins) == THEOREM1_CYCLE_WINS for step in verdict.steps
    )
    checks.record(
        "nontransitive cycle",
        verdict.holds and wins_ok,
        _trace(verdict),
    )
    report.data["cycle"] = verdict.to_dict()

    dominator = verify_no_dominator(trees, universe)
    checks.record(
        "no dominator",
        dominator.holds,
        f"margins {','.join(str(m) for m in dominator.margins)}; best joint {dominator.best_joint_margin}",
    )
    report.data["no_dominator"] = {
        "holds": dominator.holds,
        "margins": dict(zip(dominator.target_labels, dominator.margins)),
        "best_joint_margin": dominator.best_joint_margin,
        "frontier_size": dominator.frontier_size,
    }

    entries = cycle_tightness(trees, universe)
    checks.record(
        "cycle tightness",
        all(entry.tight for entry in entries),
        "; ".join(f"{e.target_label}: {e.max_margin} vs {e.predecessor_label} {e.predecessor_margin}" for e in entries),
    )
    report.add_section(
        "margins",
        headers=["target", "max margin", "predecessor", "predecessor margin", "tight"],
        rows=[[e.target_label, e.max_margin, e.predecessor_label, e.predecessor_margin, e.tight] for e in entries],
    )
    report.data["tightness"] = [
        {"target": e.target_label, "max_margin": e.max_margin,
         "predecessor": e.predecessor_label, "predecessor_margin": e.predecessor_margin, "tight": e.tight}
        for e in entries
    ]
    return checks.finish()


# ============ 定理2 ============

def cmd_verify_theorem2(n: Optional[int], mode: str = "exact", max_patterns: Optional[int] = None,
                        seed: int = 0) -> CommandResult:
    """
    验证 A_0≪A_1≪…≪A_{n-1}≪A_0

    exact 模式展开全集逐模式计算，并与图像级公式交叉核对；n=3 时还检查与定理1的构造一致。
    image-level 模式只用时间公式，并对每个 A_q 抽样检查公式。

    Raises:
        DomainError: n 缺失或 n < 3
        CapacityError: exact 模式超出展开上限
    """
    if n is None:
        raise DomainError("verify theorem2 需要 --n")
    if n < 3:
        raise DomainError(f"定理2要求 n >= 3，实际 n={n}")

    if mode == "image-level":
        return _verify_theorem2_image_level(n, seed)

    universe = build_theorem2_universe(n, max_patterns=max_patterns)
    trees = [spine_tree(n, q) for q in range(n)]
    report = new_report(f"verify theorem2 n={n} exact", universe, trees)
    report.meta["mode"] = "exact"
    checks = CheckList(report)

    verdict = verify_cycle(trees, universe)
    checks.record("spine cycle", verdict.holds,
                  _trace(verdict))
    report.data["cycle"] = verdict.to_dict()

    mismatches = []
    for p, q in itertools.permutations(range(n), 2):
        exact = pairwise_wins(trees[p], trees[q], universe)
        symbolic = image_level_wins(n, p, q)
        if exact != symbolic:
            mismatches.append(f"A{p},A{q}: {exact} != {symbolic}")
    checks.record("image-level cross-check", not mismatches, "; ".join(mismatches))

    if n == 3:
        theorem1 = build_theorem1_universe()
        checks.record("universe equals theorem1", universe == theorem1)
        builtins = [algorithm_a(), algorithm_b(), algorithm_c()]
        same = all(spine.root == builtin.root for spine, builtin in zip(trees, builtins))
        checks.record("spines equal A,B,C", same)
    return checks.finish()


def _verify_theorem2_image_level(n: int, seed: int) -> CommandResult:
    trees = [spine_tree(n, q) for q in range(n)]
    report = Report(command=f"verify theorem2 n={n} image-level", meta=symbolic_theorem2_meta(n))
    report.meta["trees"] = tree_lines(trees)
    report.meta["mode"] = "image-level"
    checks = CheckList(report)

    verdict = verify_spine_cycle(n)
    checks.record("spine cycle", verdict.holds,
                  _trace(verdict))
    report.data["cycle"] = verdict.to_dict()

    rng = np.random.Generator(np.random.PCG64(seed))
    failures = {f"A{q}": spot_check_spine(n, q, SPOT_CHECK_SAMPLES, rng) for q in range(n)}
    checks.record(
        "time formula spot check",
        not any(failures.values()),
        f"{SPOT_CHECK_SAMPLES} samples per image; failures {sum(failures.values())}",
    )
    report.data["spot_check_failures"] = failures
    return checks.finish()
