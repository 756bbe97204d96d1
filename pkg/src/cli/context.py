#!/usr/bin/env python3
# -*- coding: utf-8 -*-
"""
命令上下文 - 解析全集与算法来源，回显配置
"""

import logging
import math
import re
from dataclasses import dataclass, replace
from typing import Any, Dict, List, Optional, Sequence

from ..core.models import Universe, DecisionTree, FormatError, DomainError
from ..core.patterns import build_theorem1_universe, build_theorem2_universe, theorem2_templates, theorem2_wildcards
from ..core.recognizers import parse_tree, format_tree, builtin_tree, cycle_family
from ..utils.config import RunConfig
from ..utils.file_parser import FileParser
from ..utils.report_writer import Report

logger = logging.getLogger(__name__)

_THEOREM2_SOURCE = re.compile(r"^theorem2:(\d+)$")
_LABELLED_TREE = re.compile(r"^([A-Za-z_][\w.\-]*)=(.+)$", re.DOTALL)


@dataclass
class CommandResult:
    """命令的报告与退出码"""
    report: Report
    exit_code: int = 0


def theorem2_size(source: str) -> Optional[int]:
    """'theorem2:N' 中的 N，其他来源返回 None"""
    match = _THEOREM2_SOURCE.match(source)
    return int(match.group(1)) if match else None


def resolve_universe(source: str, max_patterns: Optional[int] = None) -> Universe:
    """
    theorem1 | theorem2:N | 文件路径

    Raises:
        FormatError: 文件不存在或格式错误
        DomainError / CapacityError: 定理2参数不合法或超出展开上限
    """
    if source == "theorem1":
        return build_theorem1_universe()
    n = theorem2_size(source)
    if n is not None:
        return build_theorem2_universe(n, max_patterns=max_patterns)
    universe = FileParser.parse_universe_file(source, max_patterns=max_patterns)
    return _as_builtin(universe) or universe


def _as_builtin(universe: Universe) -> Optional[Universe]:
    """规范文本与内置全集相同时，返回带内置名称与参数的同一全集"""
    digest = FileParser.universe_digest(universe)
    if digest == FileParser.universe_digest(build_theorem1_universe()):
        builtin = replace(universe, name="theorem1", block_size=3)
    else:
        n = math.isqrt(universe.length)
        if n < 3 or n * n != universe.length or digest != symbolic_theorem2_meta(n)["universe_sha256"]:
            return None
        builtin = replace(universe, name=f"theorem2:{n}", block_size=n)
    logger.info("全集文件 %s 与内置全集 %s 相同", universe.name, builtin.name)
    return builtin


def _parse_tree_argument(text: str, universe: Universe, index: int) -> List[DecisionTree]:
    """@文件 | 标签=DSL | DSL"""
    if text.startswith("@"):
        return FileParser.read_tree_file(text[1:], universe)
    match = _LABELLED_TREE.match(text.strip())
    if match:
        return [parse_tree(match.group(2), universe, label=match.group(1))]
    return [parse_tree(text, universe, label=f"T{index}")]


def resolve_trees(config: RunConfig, universe: Universe) -> List[DecisionTree]:
    """--tree / --trees 给出的算法；都未给出时返回空列表"""
    trees: List[DecisionTree] = []
    if config.trees:
        check_leaf_names(universe)
    for text in config.trees:
        trees.extend(_parse_tree_argument(text, universe, len(trees) + 1))
    for name in config.builtin_trees:
        trees.append(builtin_tree(name, n=universe.block_size))
    return trees


def trees_or_cycle(config: RunConfig, universe: Universe) -> List[DecisionTree]:
    """未指定算法时使用全集对应的非传递环"""
    return resolve_trees(config, universe) or cycle_family(universe)


def require_trees(trees: Sequence[DecisionTree], count: int, command: str) -> None:
    if len(trees) != count:
        raise DomainError(f"{command} 需要恰好 {count} 个算法，实际给出 {len(trees)} 个")


def universe_meta(universe: Universe) -> Dict[str, Any]:
    return {
        "universe": universe.name or "?",
        "length": universe.length,
        "image_sizes": list(universe.image_sizes),
        "universe_sha256": FileParser.universe_digest(universe),
    }


def symbolic_theorem2_meta(n: int) -> Dict[str, Any]:
    """不展开全集的定理2摘要；摘要与展开后的全集一致"""
    specs = [(name, [text]) for name, text in theorem2_templates(n)]
    size = 1 << theorem2_wildcards(n)
    return {
        "universe": f"theorem2:{n}",
        "length": n * n,
        "image_sizes": [size] * n + [1],
        "universe_sha256": FileParser.text_digest(FileParser.format_templates(n * n, specs)),
    }


def tree_lines(trees: Sequence[DecisionTree], universe: Optional[Universe] = None) -> List[str]:
    return [f"{tree.label or '?'}: {format_tree(tree, universe)}" for tree in trees]


def new_report(command: str, universe: Universe, trees: Sequence[DecisionTree] = ()) -> Report:
    """带配置回显的空报告"""
    meta = universe_meta(universe)
    if trees:
        meta["trees"] = tree_lines(trees, universe)
    return Report(command=command, meta=meta)


def check_leaf_names(universe: Universe) -> None:
    """DSL 中叶为图像名，图像名不能含括号或空白"""
    for name in universe.image_names:
        if any(c in name for c in "() \t") or not name:
            raise FormatError(f"图像名 {name!r} 不能用于树DSL")
