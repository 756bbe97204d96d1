#!/usr/bin/env python3
# -*- coding: utf-8 -*-
"""
搜索命令 - adversary、enumerate、simulate
"""

import logging

from ..core.models import SequenceDistribution
from ..core.recognizers import format_tree, cycle_family
from ..core.adversary import max_margin_vs, margin, verify_no_dominator, enumerate_reduced_trees
from ..core.simulation import simulate
from ..utils.config import RunConfig
from .context import (
    CommandResult, resolve_universe, resolve_trees, trees_or_cycle, require_trees, new_report
)

logger = logging.getLogger(__name__)


def cmd_adversary(config: RunConfig) -> CommandResult:
    """
    对每个目标求最大优势及见证树；--joint 时检查是否存在同时优于全部目标的算法

    用时只出现在文本表格中，JSON 输出不含用时。
    见证树复算的优势与搜索结果不符时退出码为 1。
    """
    universe = resolve_universe(config.universe, config.max_patterns)
    targets = trees_or_cycle(config, universe)
    report = new_report("adversary", universe, targets)

    rows = []
    results = []
    for target in targets:
        result = max_margin_vs(target, universe)
        witness_dsl = format_tree(result.witness, universe)
        recomputed = margin(result.witness, target, universe)
        rows.append([
            target.label, result.margin, witness_dsl, result.states_explored,
            f"{result.elapsed_seconds:.3f}s",
        ])
        results.append({
            "target": target.label,
            "margin": result.margin,
            "witness": witness_dsl,
            "witness_margin": recomputed,
            "states_explored": result.states_explored,
        })
    report.add_section(
        "max margin",
        headers=["target", "margin", "witness", "states", "time"],
        rows=rows,
    )
    report.data = {"results": results}
    unverified = [r["target"] for r in results if r["witness_margin"] != r["margin"]]
    report.data["verified"] = not unverified
    if unverified:
        logger.error("见证树复算的优势与搜索结果不符: %s", ", ".join(unverified))

    if config.joint:
        joint = verify_no_dominator(targets, universe)
        dominator_dsl = format_tree(joint.dominator, universe) if joint.dominator else None
        report.add_section(
            "joint",
            lines=[
                f"no dominator: {'true' if joint.holds else 'false'}",
                f"best joint margin: {joint.best_joint_margin}",
                f"dominator: {dominator_dsl or '-'}",
            ],
        )
        report.data["joint"] = {
            "holds": joint.holds,
            "best_joint_margin": joint.best_joint_margin,
            "dominator": dominator_dsl,
            "frontier_size": joint.frontier_size,
        }
    return CommandResult(report, 1 if unverified else 0)


def cmd_enumerate(config: RunConfig) -> CommandResult:
    """约简树的精确个数及至多 --limit 棵树的DSL"""
    universe = resolve_universe(config.universe, config.max_patterns)
    result = enumerate_reduced_trees(universe, config.limit)
    listed = [format_tree(tree, universe) for tree in result.trees]
    report = new_report("enumerate", universe)
    report.add_section("count", lines=[str(result.count)])
    report.add_section(f"first {len(listed)} trees", lines=listed)
    report.data = {"count": result.count, "limit": config.limit, "trees": listed}
    return CommandResult(report)


def cmd_simulate(config: RunConfig) -> CommandResult:
    """
    均匀随机模式序列上的胜场模拟

    未给出算法时比较全集非传递环中的前两个算法。
    """
    universe = resolve_universe(config.universe, config.max_patterns)
    trees = resolve_trees(config, universe) or cycle_family(universe)[:2]
    require_trees(trees, 2, "simulate")
    first, second = trees
    dist = SequenceDistribution.uniform_over(universe)
    result = simulate(first, second, dist, config.steps, config.trials, config.seed)
    report = new_report("simulate", universe, trees)
    report.add_section(
        "simulation",
        headers=["field", "value"],
        rows=[
            ["steps", result.steps],
            ["trials", result.trials],
            ["seed", result.seed],
            ["wins", result.wins],
            ["empirical win fraction", f"{result.empirical_win_fraction:.6f}"],
            ["exact win fraction", f"{result.exact_win_fraction} ({float(result.exact_win_fraction):.6f})"],
            ["exact expectation", str(result.exact_expectation)],
            ["standard error", f"{result.standard_error:.6f}"],
        ],
    )
    report.data = {"simulation": result.to_dict()}
    return CommandResult(report)
