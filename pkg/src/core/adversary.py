#!/usr/bin/env python3
# -*- coding: utf-8 -*-
"""
对抗搜索 - 在全部正确的约简决策树上求对目标算法的最大优势

状态为 (模式子集位掩码, 当前深度)。到达集合只含一个图像时直接成为叶；
深度超过目标最大识别时间后，每个模式都必然落败，取值为 -|S|。
"""

import itertools
import logging
import time
from dataclasses import dataclass
from typing import Dict, Iterator, List, Optional, Sequence, Tuple

from .models import (
    Universe, DecisionTree, Leaf, Internal, Node,
    MarginResult, DominatorReport, TightnessEntry,
    CapacityError, DomainError
)
from .recognizers import time_vector

logger = logging.getLogger(__name__)

# 位掩码状态要求模式数不超过64
MAX_SEARCH_PATTERNS = 64

SubsetKey = int


def iter_bits(mask: SubsetKey) -> Iterator[int]:
    """按从低到高的顺序给出掩码中的序号"""
    while mask:
        low = mask & -mask
        yield low.bit_length() - 1
        mask ^= low


def popcount(mask: SubsetKey) -> int:
    return bin(mask).count("1")


def _step(value: int) -> int:
    return (value > 0) - (value < 0)


def _require_capacity(universe: Universe) -> None:
    if universe.size > MAX_SEARCH_PATTERNS:
        raise CapacityError(
            f"全集含 {universe.size} 个模式，对抗搜索最多支持 {MAX_SEARCH_PATTERNS} 个"
        )


class SubsetSpace:
    """全集上的子集运算：纯度判断与非平凡分裂"""

    def __init__(self, universe: Universe):
        _require_capacity(universe)
        self.universe = universe
        self.sign_masks = universe.sign_masks
        self.image_masks = universe.image_masks
        self._image_by_ordinal = [int(v) for v in universe.labels.tolist()]

    def image_of_pure(self, mask: SubsetKey) -> Optional[int]:
        """mask 只含一个图像时返回该图像，否则返回 None"""
        first = (mask & -mask).bit_length() - 1
        image = self._image_by_ordinal[first]
        if mask & ~self.image_masks[image]:
            return None
        return image

    def splits(self, mask: SubsetKey) -> Iterator[Tuple[int, SubsetKey, SubsetKey]]:
        """按符号序号升序给出把 mask 分成两个非空部分的 (k, 真部分, 假部分)"""
        for k, sign_mask in enumerate(self.sign_masks, start=1):
            true_part = mask & sign_mask
            if true_part and true_part != mask:
                yield k, true_part, mask ^ true_part

    def any_tree(self, mask: SubsetKey) -> Node:
        """任取一棵约简子树（每步取最小的分裂符号）"""
        image = self.image_of_pure(mask)
        if image is not None:
            return Leaf(image)
        k, true_part, false_part = next(self.splits(mask))
        return Internal(k, self.any_tree(true_part), self.any_tree(false_part))


# ============ 单目标 ============

class AdversarySearch:
    """
    对目标 T 求 f(S,d) = max_X Σ_{x∈S} step(T(T,x) - d - depth_X(x))

    memo 以 (S, min(d, maxT+1)) 为键。
    """

    def __init__(self, universe: Universe, target: DecisionTree):
        self.space = SubsetSpace(universe)
        self.universe = universe
        self.target = target
        self.times = [int(t) for t in time_vector(target, universe).tolist()]
        self.max_time = max(self.times)
        self.memo: Dict[Tuple[SubsetKey, int], int] = {}

    @property
    def states_explored(self) -> int:
        return len(self.memo)

    def leaf_value(self, mask: SubsetKey, depth: int) -> int:
        return sum(_step(self.times[i] - depth) for i in iter_bits(mask))

    def value(self, mask: SubsetKey, depth: int) -> int:
        """f(S, d)"""
        if not mask:
            raise DomainError("状态子集不能为空")
        if depth > self.max_time:
            return -popcount(mask)
        key = (mask, depth)
        cached = self.memo.get(key)
        if cached is not None:
            return cached
        if self.space.image_of_pure(mask) is not None:
            result = self.leaf_value(mask, depth)
        else:
            result = max(
                self.value(true_part, depth + 1) + self.value(false_part, depth + 1)
                for _, true_part, false_part in self.space.splits(mask)
            )
        self.memo[key] = result
        return result

    def best_tree(self, mask: SubsetKey, depth: int) -> Node:
        """按 argmax 重建见证子树，平局取最小的符号序号"""
        image = self.space.image_of_pure(mask)
        if image is not None:
            return Leaf(image)
        if depth > self.max_time:
            return self.space.any_tree(mask)
        best = None
        best_value = None
        for k, true_part, false_part in self.space.splits(mask):
            total = self.value(true_part, depth + 1) + self.value(false_part, depth + 1)
            if best_value is None or total > best_value:
                best, best_value = (k, true_part, false_part), total
        k, true_part, false_part = best
        return Internal(k, self.best_tree(true_part, depth + 1), self.best_tree(false_part, depth + 1))

    def evaluate(self, node: Node, mask: SubsetKey, depth: int) -> int:
        """给定子树从深度 depth 开始处理 mask 时的优势"""
        if isinstance(node, Leaf):
            return self.leaf_value(mask, depth)
        sign_mask = self.space.sign_masks[node.sign - 1]
        total = 0
        true_part = mask & sign_mask
        false_part = mask & ~sign_mask
        if true_part:
            total += self.evaluate(node.true_branch, true_part, depth + 1)
        if false_part:
            total += self.evaluate(node.false_branch, false_part, depth + 1)
        return total

    def run(self) -> MarginResult:
        started = time.perf_counter()
        full = self.universe.full_mask
        margin = self.value(full, 0)
        witness = DecisionTree(self.best_tree(full, 0), f"max-vs-{self.target.label or '?'}")
        elapsed = time.perf_counter() - started
        logger.info(
            "对 %s 的最大优势 %d（状态数 %d，用时 %.3fs）",
            self.target.label or "?", margin, self.states_explored, elapsed
        )
        return MarginResult(
            target_label=self.target.label,
            margin=margin,
            witness=witness,
            states_explored=self.states_explored,
            elapsed_seconds=elapsed,
        )


def margin(challenger: DecisionTree, target: DecisionTree, universe: Universe) -> int:
    """V(X,T) - V(T,X)"""
    first = time_vector(challenger, universe)
    second = time_vector(target, universe)
    return int((first < second).sum()) - int((second < first).sum())


def max_margin_vs(target: DecisionTree, universe: Universe) -> MarginResult:
    """
    全部正确约简树 X 上 V(X,target) - V(target,X) 的精确最大值

    Raises:
        CapacityError: 全集超过64个模式
        CorrectnessError: 目标算法不正确
    """
    return AdversarySearch(universe, target).run()


# ============ 多目标（帕累托前沿） ============

class DominatorSearch:
    """
    对每个状态保存可达的优势向量（每个目标一维）的帕累托前沿，
    每个向量附带一棵实现它的子树
    """

    def __init__(self, universe: Universe, targets: Sequence[DecisionTree]):
        if not targets:
            raise DomainError("至少需要一个目标算法")
        self.space = SubsetSpace(universe)
        self.universe = universe
        self.targets = list(targets)
        vectors = [time_vector(t, universe).tolist() for t in targets]
        self.times = [tuple(int(v[i]) for v in vectors) for i in range(universe.size)]
        self.max_time = max(max(v) for v in vectors)
        self.memo: Dict[Tuple[SubsetKey, int], Dict[Tuple[int, ...], Node]] = {}

    @property
    def states_explored(self) -> int:
        return len(self.memo)

    def leaf_vector(self, mask: SubsetKey, depth: int) -> Tuple[int, ...]:
        totals = [0] * len(self.targets)
        for i in iter_bits(mask):
            for t, target_time in enumerate(self.times[i]):
                totals[t] += _step(target_time - depth)
        return tuple(totals)

    def frontier(self, mask: SubsetKey, depth: int) -> Dict[Tuple[int, ...], Node]:
        if depth > self.max_time:
            return {(-popcount(mask),) * len(self.targets): self.space.any_tree(mask)}
        key = (mask, depth)
        cached = self.memo.get(key)
        if cached is not None:
            return cached
        image = self.space.image_of_pure(mask)
        if image is not None:
            result = {self.leaf_vector(mask, depth): Leaf(image)}
        else:
            candidates: Dict[Tuple[int, ...], Node] = {}
            for k, true_part, false_part in self.space.splits(mask):
                left = self.frontier(true_part, depth + 1)
                right = self.frontier(false_part, depth + 1)
                for (u, u_node), (v, v_node) in itertools.product(left.items(), right.items()):
                    vector = tuple(a + b for a, b in zip(u, v))
                    if vector not in candidates:
                        candidates[vector] = Internal(k, u_node, v_node)
            result = _pareto(candidates)
        self.memo[key] = result
        return result

    def run(self) -> DominatorReport:
        root = self.frontier(self.universe.full_mask, 0)
        best_vector = max(root, key=lambda v: (min(v), v))
        best_joint = min(best_vector)
        dominator = None
        if best_joint > 0:
            dominator = DecisionTree(root[best_vector], "dominator")
        margins = [
            AdversarySearch(self.universe, target).run().margin for target in self.targets
        ]
        report = DominatorReport(
            holds=best_joint <= 0,
            target_labels=[t.label for t in self.targets],
            margins=margins,
            best_joint_margin=best_joint,
            dominator=dominator,
            frontier_size=len(root),
            states_explored=self.states_explored,
        )
        logger.info(
            "同时优于 %s 的算法%s（最佳联合优势 %d）",
            ",".join(report.target_labels), "不存在" if report.holds else "存在", best_joint
        )
        return report


def _pareto(candidates: Dict[Tuple[int, ...], Node]) -> Dict[Tuple[int, ...], Node]:
    """只保留不被其他向量逐分量支配的向量"""
    kept: List[Tuple[int, ...]] = []
    for vector in sorted(candidates, reverse=True):
        if any(all(a >= b for a, b in zip(other, vector)) for other in kept):
            continue
        kept.append(vector)
    return {vector: candidates[vector] for vector in kept}


def verify_no_dominator(targets: Sequence[DecisionTree], universe: Universe) -> DominatorReport:
    """
    不存在同时严格优于全部目标的正确约简树时 holds 为真；
    单个目标时等价于其最大优势 <= 0
    """
    return DominatorSearch(universe, targets).run()


def cycle_tightness(cycle: Sequence[DecisionTree], universe: Universe) -> List[TightnessEntry]:
    """环中每个成员的最大优势是否恰好等于其前驱对它的优势"""
    entries = []
    for i, target in enumerate(cycle):
        predecessor = cycle[i - 1]
        entries.append(TightnessEntry(
            target_label=target.label,
            predecessor_label=predecessor.label,
            max_margin=max_margin_vs(target, universe).margin,
            predecessor_margin=margin(predecessor, target, universe),
        ))
    return entries


# ============ 枚举 ============

@dataclass
class EnumerationResult:
    """精确计数与按确定顺序输出的树流"""
    count: int
    trees: Iterator[DecisionTree]


class TreeEnumerator:
    """
    枚举全部正确约简树

    计数递推 c(S) = 1（S 纯）或 Σ_p c(S∩p)·c(S∖p)，使用任意精度整数。
    """

    def __init__(self, universe: Universe):
        self.space = SubsetSpace(universe)
        self.universe = universe
        self._counts: Dict[SubsetKey, int] = {}

    def count(self, mask: Optional[SubsetKey] = None) -> int:
        if mask is None:
            mask = self.universe.full_mask
        cached = self._counts.get(mask)
        if cached is not None:
            return cached
        if self.space.image_of_pure(mask) is not None:
            result = 1
        else:
            result = sum(
                self.count(true_part) * self.count(false_part)
                for _, true_part, false_part in self.space.splits(mask)
            )
        self._counts[mask] = result
        return result

    def iter_nodes(self, mask: SubsetKey) -> Iterator[Node]:
        """符号升序，先遍历真分支"""
        image = self.space.image_of_pure(mask)
        if image is not None:
            yield Leaf(image)
            return
        for k, true_part, false_part in self.space.splits(mask):
            for true_node in self.iter_nodes(true_part):
                for false_node in self.iter_nodes(false_part):
                    yield Internal(k, true_node, false_node)

    def iter_trees(self) -> Iterator[DecisionTree]:
        for i, node in enumerate(self.iter_nodes(self.universe.full_mask), start=1):
            yield DecisionTree(node, f"R{i}")


def enumerate_reduced_trees(universe: Universe, limit: int) -> EnumerationResult:
    """
    至多输出 limit 棵约简树，并给出类 R 的精确大小

    Raises:
        CapacityError: 全集超过64个模式
    """
    if limit < 0:
        raise DomainError(f"limit 不能为负: {limit}")
    enumerator = TreeEnumerator(universe)
    count = enumerator.count()
    logger.debug("全集 %s 上约简树共 %d 棵", universe.name or "?", count)
    return EnumerationResult(count=count, trees=itertools.islice(enumerator.iter_trees(), limit))


def count_reduced_trees(universe: Universe) -> int:
    return TreeEnumerator(universe).count()
