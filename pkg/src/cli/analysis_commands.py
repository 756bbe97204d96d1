#!/usr/bin/env python3
# -*- coding: utf-8 -*-
"""
分析命令 - universe、times、compare、tournament
"""

import logging

from ..core.patterns import describe_universe, separating_signs
from ..core.recognizers import format_tree
from ..core.tournament import (
    compare, tournament, render_time_table, cycle_from_matrix, count_cycles, image_level_tournament
)
from ..utils.config import RunConfig
from ..utils.file_parser import FileParser
from ..utils.report_writer import Report, ReportWriter
from .context import (
    CommandResult, resolve_universe, resolve_trees, trees_or_cycle, require_trees,
    new_report, theorem2_size, symbolic_theorem2_meta
)

logger = logging.getLogger(__name__)


def _export(report: Report, config: RunConfig) -> None:
    if config.xlsx_path:
        ReportWriter.write_xlsx(report, config.xlsx_path)


def cmd_universe(config: RunConfig) -> CommandResult:
    """全集摘要；--emit 时附上规范文本"""
    universe = resolve_universe(config.universe, config.max_patterns)
    report = new_report("universe", universe)
    summary = describe_universe(universe)
    report.add_section(
        "images",
        headers=["image", "size", "templates"],
        rows=[[item["name"], item["size"], " ".join(item["templates"])] for item in summary["images"]],
    )
    separating = separating_signs(universe)
    report.add_section(
        "separating signs",
        headers=["image", "signs"],
        rows=[
            [universe.images[index].name, " ".join(f"P{k}" for k in signs) or "-"]
            for index, signs in separating.items()
        ],
    )
    report.data = {
        "images": summary["images"],
        "size": summary["size"],
        "separating_signs": {universe.images[i].name: signs for i, signs in separating.items()},
    }
    if config.emit:
        canonical = FileParser.format_universe(universe)
        report.add_section("canonical text", lines=canonical.splitlines())
        report.data["canonical"] = canonical
    return CommandResult(report)


def cmd_times(config: RunConfig) -> CommandResult:
    """识别时间表（行为图像，列为算法）"""
    universe = resolve_universe(config.universe, config.max_patterns)
    trees = trees_or_cycle(config, universe)
    table = render_time_table(trees, universe)
    report = new_report("times", universe, trees)
    report.add_section(
        "recognition times",
        headers=["image"] + table.labels,
        rows=[[name] + row for name, row in zip(table.image_names, table.cells)],
    )
    report.data = {"times": table.to_dict()}
    _export(report, config)
    return CommandResult(report)


def cmd_compare(config: RunConfig) -> CommandResult:
    """两个算法的 V(A,B)、V(B,A) 与偏好结果"""
    universe = resolve_universe(config.universe, config.max_patterns)
    trees = resolve_trees(config, universe)
    require_trees(trees, 2, "compare")
    first, second = trees
    outcome = compare(first, second, universe)
    report = new_report("compare", universe, trees)
    report.add_section(
        "preference",
        headers=["first", "second", "V(first,second)", "V(second,first)", "ties", "outcome"],
        rows=[[first.label, second.label, outcome.first_wins, outcome.second_wins,
               outcome.ties, outcome.kind.value]],
        lines=[str(outcome)],
    )
    report.data = {
        "first": first.label,
        "second": second.label,
        **outcome.to_dict(),
    }
    return CommandResult(report)


def _matrix_report(report: Report, matrix) -> None:
    labels = matrix.labels
    wins = matrix.wins.tolist()
    report.add_section(
        "wins V(row,column)",
        headers=[""] + labels,
        rows=[
            [labels[i]] + ["-" if i == j else int(wins[i][j]) for j in range(len(labels))]
            for i in range(len(labels))
        ],
    )
    report.add_section(
        "outcomes",
        headers=["first", "second", "wins", "ties", "outcome"],
        rows=[
            [labels[i], labels[j], f"{o.first_wins}/{o.second_wins}", o.ties, o.kind.value]
            for (i, j), o in matrix.outcomes.items()
        ],
    )
    data = matrix.to_dict()
    data["cyclic_triads"] = count_cycles(matrix)
    if len(labels) >= 2:
        verdict = cycle_from_matrix(matrix)
        report.add_section(
            "cycle in given order",
            lines=[f"{' << '.join(labels)} << {labels[0]}: {'holds' if verdict.holds else 'fails'}"],
        )
        data["cycle"] = verdict.to_dict()
    report.add_section("cyclic triads", lines=[str(data["cyclic_triads"])])
    report.data = data


def cmd_tournament(config: RunConfig) -> CommandResult:
    """
    胜场矩阵

    --mode image-level 且全集为 theorem2:N 时按图像级公式计算，不展开全集。
    """
    n = theorem2_size(config.universe)
    if config.mode == "image-level" and n is not None:
        matrix = image_level_tournament(n)
        report = Report(command="tournament", meta=symbolic_theorem2_meta(n))
        report.meta["trees"] = [f"{tree.label}: {format_tree(tree)}" for tree in matrix.trees]
        report.meta["mode"] = "image-level"
        _matrix_report(report, matrix)
        _export(report, config)
        return CommandResult(report)

    universe = resolve_universe(config.universe, config.max_patterns)
    trees = trees_or_cycle(config, universe)
    matrix = tournament(trees, universe)
    report = new_report("tournament", universe, trees)
    _matrix_report(report, matrix)
    _export(report, config)
    return CommandResult(report)
