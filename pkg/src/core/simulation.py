#!/usr/bin/env python3
# -*- coding: utf-8 -*-
"""
随机模式序列 - 胜场数学期望 m(A,B,n) 的精确计算与蒙特卡洛验证
"""

import logging
import math
from fractions import Fraction

import numpy as np

from .models import (
    DecisionTree, SequenceDistribution, SimulationReport, DomainError
)
from .recognizers import time_vector

logger = logging.getLogger(__name__)

# 每次向生成器请求的最大抽样数
DRAW_CHUNK = 1 << 16


def monus(a: int, b: int) -> int:
    """截断减法 a ∸ b"""
    return a - b if a >= b else 0


def sg(a: int) -> int:
    """a > 0 时为1，否则为0"""
    return 1 if a > 0 else 0


def _check_steps(steps: int) -> None:
    if steps < 1:
        raise DomainError(f"序列长度必须 >= 1，实际为 {steps}")


def expected_wins(a: DecisionTree, b: DecisionTree, dist: SequenceDistribution, steps: int) -> Fraction:
    """
    m(A,B,n) = Σ_x Σ_t v(x,t)·sg(T(B,x) ∸ T(A,x))

    时间齐次分布下对 t 的求和化为因子 n。

    Raises:
        DomainError: n < 1
        CorrectnessError: 任一算法不正确
    """
    _check_steps(steps)
    universe = dist.universe
    first = time_vector(a, universe).tolist()
    second = time_vector(b, universe).tolist()
    per_step = sum(
        (weight for weight, ta, tb in zip(dist.weights, first, second) if sg(monus(tb, ta))),
        Fraction(0),
    )
    return per_step * steps


def _draw(rng: np.random.Generator, dist: SequenceDistribution, count: int) -> np.ndarray:
    if dist.uniform:
        return rng.integers(0, dist.universe.size, size=count)
    return rng.choice(dist.universe.size, size=count, p=dist.probabilities())


def simulate(
    a: DecisionTree,
    b: DecisionTree,
    dist: SequenceDistribution,
    steps: int,
    trials: int,
    seed: int
) -> SimulationReport:
    """
    抽取 trials 条长度为 steps 的独立序列，统计 T(a,π(t)) < T(b,π(t)) 的步数

    每条序列使用 SeedSequence(seed).spawn(trials) 派生的 PCG64 生成器，
    相同的 seed 给出完全相同的报告。
    """
    _check_steps(steps)
    if trials < 1:
        raise DomainError(f"试验次数必须 >= 1，实际为 {trials}")
    if seed < 0:
        raise DomainError(f"种子不能为负: {seed}")

    universe = dist.universe
    wins_mask = time_vector(a, universe) < time_vector(b, universe)
    children = np.random.SeedSequence(seed).spawn(trials)
    wins = 0
    for child in children:
        rng = np.random.Generator(np.random.PCG64(child))
        remaining = steps
        while remaining:
            count = min(remaining, DRAW_CHUNK)
            wins += int(np.count_nonzero(wins_mask[_draw(rng, dist, count)]))
            remaining -= count

    exact = expected_wins(a, b, dist, steps)
    p = float(exact / steps)
    total_steps = steps * trials
    report = SimulationReport(
        first_label=a.label,
        second_label=b.label,
        steps=steps,
        trials=trials,
        seed=seed,
        wins=wins,
        empirical_win_fraction=wins / total_steps,
        exact_expectation=exact,
        standard_error=math.sqrt(p * (1.0 - p) / total_steps),
    )
    logger.debug(
        "模拟 %s vs %s: seed=%d, %d×%d 步, 胜 %d", a.label or "?", b.label or "?",
        seed, trials, steps, wins
    )
    return report
