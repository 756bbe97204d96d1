#!/usr/bin/env python3
# -*- coding: utf-8 -*-
"""
锦标赛 - 胜场数 V(A,B)、偏好关系、胜场矩阵与非传递环的验证
"""

import itertools
import logging
from fractions import Fraction
from typing import List, Sequence, Tuple

import numpy as np

from .models import (
    Universe, DecisionTree, PreferenceOutcome, TournamentMatrix,
    CycleStep, CycleVerdict, TimeTable, DomainError, format_time_multiset
)
from .patterns import theorem2_wildcards
from .recognizers import time_vector, time_profile, spine_tree, spine_time

logger = logging.getLogger(__name__)


# ============ 逐模式比较 ============

def _wins_from_times(first: np.ndarray, second: np.ndarray) -> Tuple[int, int]:
    return int(np.count_nonzero(first < second)), int(np.count_nonzero(second < first))


def pairwise_wins(a: DecisionTree, b: DecisionTree, universe: Universe) -> Tuple[int, int]:
    """
    (V(a,b), V(b,a))：在 U^f 上逐模式比较严格更短的识别时间

    Raises:
        CorrectnessError: 任一算法不正确
    """
    return _wins_from_times(time_vector(a, universe), time_vector(b, universe))


def compare(a: DecisionTree, b: DecisionTree, universe: Universe) -> PreferenceOutcome:
    """A≪B 当且仅当 V(A,B) > V(B,A)；相等为等价"""
    first, second = pairwise_wins(a, b, universe)
    return PreferenceOutcome.from_counts(first, second, universe.size - first - second)


def win_fraction(a: DecisionTree, b: DecisionTree, universe: Universe) -> Fraction:
    """V(a,b)/|U^f|，即均匀随机模式上 a 胜出的概率"""
    first, _ = pairwise_wins(a, b, universe)
    return Fraction(first, universe.size)


def tournament(trees: Sequence[DecisionTree], universe: Universe) -> TournamentMatrix:
    """按输入顺序构造完整的胜场矩阵"""
    vectors = [time_vector(tree, universe) for tree in trees]
    count = len(trees)
    wins = np.zeros((count, count), dtype=object)
    ties = np.zeros((count, count), dtype=object)
    for i, j in itertools.combinations(range(count), 2):
        first, second = _wins_from_times(vectors[i], vectors[j])
        wins[i][j], wins[j][i] = first, second
        ties[i][j] = ties[j][i] = universe.size - first - second
    labels = [tree.label or f"T{i + 1}" for i, tree in enumerate(trees)]
    logger.debug("锦标赛 %s: %d 个算法", universe.name or "?", count)
    return TournamentMatrix(labels=labels, trees=list(trees), wins=wins, ties=ties, total=universe.size)


def cycle_from_matrix(matrix: TournamentMatrix) -> CycleVerdict:
    """检查 M_0≪M_1≪…≪M_{k-1}≪M_0"""
    count = len(matrix.labels)
    if count < 2:
        raise DomainError("环至少需要两个算法")
    steps = []
    for i in range(count):
        j = (i + 1) % count
        steps.append(CycleStep(matrix.labels[i], matrix.labels[j], matrix.outcome(i, j)))
    verdict = CycleVerdict(holds=all(step.holds for step in steps), steps=steps)
    logger.info("非传递环 %s: %s", " ≪ ".join(matrix.labels), "成立" if verdict.holds else "不成立")
    return verdict


def verify_cycle(trees: Sequence[DecisionTree], universe: Universe) -> CycleVerdict:
    """每个算法都优于其后继，且最后一个优于第一个"""
    if len(trees) < 2:
        raise DomainError("环至少需要两个算法")
    return cycle_from_matrix(tournament(trees, universe))


def count_cycles(matrix: TournamentMatrix) -> int:
    """多数偏好下形成环的三元组个数"""
    wins = matrix.wins.tolist()
    count = len(matrix.labels)
    cycles = 0

    def prefers(a: int, b: int) -> bool:
        return wins[a][b] > wins[b][a]

    for i, j, k in itertools.combinations(range(count), 3):
        if (prefers(i, j) and prefers(j, k) and prefers(k, i)) or (
            prefers(i, k) and prefers(k, j) and prefers(j, i)
        ):
            cycles += 1
    return cycles


# ============ 图像级计算（不展开全集） ============

def image_level_times(n: int, q: int) -> List[int]:
    """A_q 在 α_0..α_n 上的识别时间"""
    return [spine_time(n, q, j) for j in range(n + 1)]


def image_level_wins(n: int, p: int, q: int) -> Tuple[int, int]:
    """
    用时间公式与 |α_j| = 2^{n(n-1)/2} 直接计算 (V(A_p,A_q), V(A_q,A_p))
    """
    if n < 3:
        raise DomainError(f"定理2要求 n >= 3，实际 n={n}")
    for value in (p, q):
        if not 0 <= value <= n - 1:
            raise DomainError(f"算法序号 {value} 越界（0..{n - 1}）")
    size = 1 << theorem2_wildcards(n)
    first_times = image_level_times(n, p)
    second_times = image_level_times(n, q)
    first = sum(size for j in range(n) if first_times[j] < second_times[j])
    second = sum(size for j in range(n) if second_times[j] < first_times[j])
    return first, second


def image_level_tournament(n: int) -> TournamentMatrix:
    """A_0..A_{n-1} 的图像级胜场矩阵"""
    trees = [spine_tree(n, q) for q in range(n)]
    total = n * (1 << theorem2_wildcards(n)) + 1
    wins = np.zeros((n, n), dtype=object)
    ties = np.zeros((n, n), dtype=object)
    for p, q in itertools.combinations(range(n), 2):
        first, second = image_level_wins(n, p, q)
        wins[p][q], wins[q][p] = first, second
        ties[p][q] = ties[q][p] = total - first - second
    return TournamentMatrix(
        labels=[tree.label for tree in trees], trees=trees, wins=wins, ties=ties, total=total
    )


def verify_spine_cycle(n: int) -> CycleVerdict:
    """图像级验证 A_0≪A_1≪…≪A_{n-1}≪A_0"""
    return cycle_from_matrix(image_level_tournament(n))


# ============ 时间表 ============

def render_time_table(trees: Sequence[DecisionTree], universe: Universe) -> TimeTable:
    """行为图像、列为算法的识别时间表"""
    profiles = [time_profile(tree, universe) for tree in trees]
    cells = [
        [format_time_multiset(profile.per_image[image.index]) for profile in profiles]
        for image in universe.images
    ]
    labels = [tree.label or f"T{i + 1}" for i, tree in enumerate(trees)]
    return TimeTable(image_names=list(universe.image_names), labels=labels, cells=cells)
