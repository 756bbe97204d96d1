#!/usr/bin/env python3
# -*- coding: utf-8 -*-
"""随机序列：sg/monus、精确期望与蒙特卡洛"""

from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from src.core.models import Pattern, SequenceDistribution, DomainError
from src.core.tournament import pairwise_wins
from src.core.simulation import monus, sg, expected_wins, simulate

BAND = 0.0144


# ============ sg 与 monus ============

def test_monus_examples():
    assert monus(3, 1) == 2
    assert monus(1, 3) == 0
    assert monus(5, 5) == 0


def test_sg_examples():
    assert sg(2) == 1
    assert sg(0) == 0
    assert sg(-5) == 0


@given(st.integers(), st.integers())
def test_sg_of_monus_is_strict_comparison(p, q):
    assert sg(monus(p, q)) == (1 if p > q else 0)


# ============ 分布 ============

def test_uniform_distribution(theorem1):
    dist = SequenceDistribution.uniform_over(theorem1)
    assert dist.uniform
    assert sum(dist.weights) == 1
    assert dist.probabilities().sum() == pytest.approx(1.0)


def test_weights_must_sum_to_one(theorem1):
    with pytest.raises(DomainError):
        SequenceDistribution.from_weights(theorem1, {Pattern("000000000"): Fraction(1, 2)})


def test_negative_weight_rejected(theorem1):
    with pytest.raises(DomainError):
        SequenceDistribution.from_weights(theorem1, {
            Pattern("000000000"): 2,
            Pattern("100010001"): -1,
        })


def test_unknown_pattern_rejected(theorem1):
    with pytest.raises(DomainError):
        SequenceDistribution.from_weights(theorem1, {Pattern("111111111"): 1})


def test_time_varying_steps_rejected(theorem1):
    first = {Pattern("000000000"): 1}
    second = {Pattern("100010001"): 1}
    with pytest.raises(DomainError):
        SequenceDistribution.from_steps(theorem1, [first, second])
    assert SequenceDistribution.from_steps(theorem1, [first, dict(first)]).weights[0] == 1


# ============ 精确期望 ============

@pytest.mark.parametrize("steps", [1, 25, 100, 10 ** 4])
def test_expectation_identity(theorem1, tree_a, tree_b, steps):
    dist = SequenceDistribution.uniform_over(theorem1)
    assert expected_wins(tree_a, tree_b, dist, steps) * 25 == 16 * steps


def test_expectation_examples(theorem1, tree_a, tree_b):
    dist = SequenceDistribution.uniform_over(theorem1)
    assert expected_wins(tree_a, tree_b, dist, 100) == 64
    assert expected_wins(tree_a, tree_a, dist, 37) == 0
    assert expected_wins(tree_b, tree_a, dist, 25) == 8


def test_uniform_expectation_equals_scaled_wins(theorem1, cycle, tree_fig4):
    dist = SequenceDistribution.uniform_over(theorem1)
    for first in cycle + [tree_fig4]:
        for second in cycle + [tree_fig4]:
            wins, _ = pairwise_wins(first, second, theorem1)
            assert expected_wins(first, second, dist, 7) * theorem1.size == 7 * wins


def test_homogeneous_expectation_scales(theorem1, tree_a, tree_c):
    # α3 权重 1/2，其余均分
    weights = {p: Fraction(1, 48) for p in theorem1.all_patterns}
    weights[Pattern("000000000")] = Fraction(1, 2)
    dist = SequenceDistribution.from_weights(theorem1, weights)
    one = expected_wins(tree_c, tree_a, dist, 1)
    assert one == Fraction(16, 48)
    assert expected_wins(tree_c, tree_a, dist, 300) == 300 * one


def test_steps_must_be_positive(theorem1, tree_a):
    with pytest.raises(DomainError):
        expected_wins(tree_a, tree_a, SequenceDistribution.uniform_over(theorem1), 0)


# ============ 蒙特卡洛 ============

def test_monte_carlo_band_over_thirty_seeds(theorem1, tree_a, tree_b):
    dist = SequenceDistribution.uniform_over(theorem1)
    inside = 0
    for seed in range(30):
        report = simulate(tree_a, tree_b, dist, 10000, 1, seed)
        assert 0.0 <= report.empirical_win_fraction <= 1.0
        if abs(report.empirical_win_fraction - 0.64) <= BAND:
            inside += 1
    assert inside >= 29


def test_simulation_is_deterministic(theorem1, tree_a, tree_b):
    dist = SequenceDistribution.uniform_over(theorem1)
    first = simulate(tree_a, tree_b, dist, 5000, 3, 20240601)
    second = simulate(tree_a, tree_b, dist, 5000, 3, 20240601)
    assert first == second
    assert first.to_dict() == second.to_dict()


def test_simulation_against_itself(theorem1, tree_a):
    dist = SequenceDistribution.uniform_over(theorem1)
    report = simulate(tree_a, tree_a, dist, 1, 1, 7)
    assert report.wins == 0
    assert report.empirical_win_fraction == 0.0
    assert report.exact_expectation == 0


def test_simulation_report_fields(theorem1, tree_a, tree_b):
    dist = SequenceDistribution.uniform_over(theorem1)
    report = simulate(tree_a, tree_b, dist, 10000, 2, 5)
    assert report.exact_win_fraction == Fraction(16, 25)
    assert report.standard_error == pytest.approx((0.64 * 0.36 / 20000) ** 0.5)
    assert abs(report.deviation) < 4 * report.standard_error
    payload = report.to_dict()
    assert payload["exact_win_fraction"] == "16/25"
    assert payload["trials"] == 2


def test_weighted_simulation_uses_distribution(theorem1, tree_c, tree_a):
    # 只抽 α1 的模式：ℭ 每步都更快
    weights = {p: Fraction(1, 8) for p in theorem1.images[1].patterns}
    dist = SequenceDistribution.from_weights(theorem1, weights)
    report = simulate(tree_c, tree_a, dist, 200, 2, 1)
    assert report.wins == 400
    assert report.exact_win_fraction == 1


def test_simulation_argument_checks(theorem1, tree_a):
    dist = SequenceDistribution.uniform_over(theorem1)
    with pytest.raises(DomainError):
        simulate(tree_a, tree_a, dist, 0, 1, 1)
    with pytest.raises(DomainError):
        simulate(tree_a, tree_a, dist, 1, 0, 1)
