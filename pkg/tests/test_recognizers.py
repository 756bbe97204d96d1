#!/usr/bin/env python3
# -*- coding: utf-8 -*-
"""识别算法：分类、时间、正确性、内置算法与树DSL"""

from collections import Counter

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from src.core.models import (
    Pattern, DecisionTree, Leaf, Internal, FormatError, DomainError, CorrectnessError
)
from src.core.patterns import build_theorem2_universe, patterns_of
from src.cli.verify_commands import SPOT_CHECK_SAMPLES
from src.core.recognizers import (
    classify, check_correct, time_profile, time_vector, time_of_set, validate_tree,
    spine_tree, spine_time, build_spine_algorithm, spot_check_spine, builtin_tree, cycle_family,
    tree_depth, tree_size, signs_used, is_reduced, parse_tree, format_tree
)


def image_times(tree, universe):
    profile = time_profile(tree, universe)
    return [profile.image_time(image.index) for image in universe.images]


# ============ 分类与时间 ============

def test_classify_returns_image_and_arcs(tree_a):
    assert classify(tree_a, Pattern("100010001")) == (0, 1)
    assert classify(tree_a, Pattern("000000000")) == (3, 3)


@pytest.mark.parametrize("fixture, expected", [
    ("tree_a", ["1", "2", "3", "3"]),
    ("tree_b", ["2", "3", "1", "3"]),
    ("tree_c", ["3", "1", "2", "3"]),
])
def test_builtin_time_profiles(request, theorem1, fixture, expected):
    assert image_times(request.getfixturevalue(fixture), theorem1) == expected


def test_fig3_tree_times(theorem1, tree_fig3):
    assert image_times(tree_fig3, theorem1) == ["2", "2", "3", "3"]


def test_fig4_tree_times(theorem1, tree_fig4):
    assert image_times(tree_fig4, theorem1) == ["2/3", "2", "2", "3"]
    profile = time_profile(tree_fig4, theorem1)
    assert profile.per_image[0] == Counter({2: 4, 3: 4})


@pytest.mark.parametrize("name", ["A", "B", "C", "fig3", "fig4"])
def test_builtins_are_correct(theorem1, name):
    assert check_correct(builtin_tree(name), theorem1).ok


def test_swapped_leaves_are_misclassified(theorem1, dsl):
    wrong = dsl("(P1 a1 (P2 a0 (P3 a2 a3)))", "wrong")
    report = check_correct(wrong, theorem1)
    assert not report.ok
    assert len(report.misclassified) == 16
    assert "wrong" in report.summary()
    with pytest.raises(CorrectnessError) as excinfo:
        time_vector(wrong, theorem1)
    assert excinfo.value.exit_code == 1
    assert not excinfo.value.report.ok


def test_time_vector_matches_classify(theorem1, tree_c):
    times = time_vector(tree_c, theorem1)
    for pattern, t in zip(theorem1.all_patterns, times.tolist()):
        assert classify(tree_c, pattern)[1] == t


def test_time_of_set(theorem1, tree_a):
    assert time_of_set(tree_a, patterns_of(theorem1, ["a0"])) == 1
    assert time_of_set(tree_a, patterns_of(theorem1, ["a0", "a3"])) == 3
    with pytest.raises(DomainError):
        time_of_set(tree_a, [])


def test_validate_tree_rejects_bad_sign_and_leaf(theorem1):
    with pytest.raises(DomainError):
        validate_tree(DecisionTree(Internal(10, Leaf(0), Leaf(1))), theorem1)
    with pytest.raises(DomainError):
        validate_tree(DecisionTree(Internal(1, Leaf(0), Leaf(7))), theorem1)


# ============ 定理2的算法 ============

def test_spine_times_match_formula():
    n = 4
    universe = build_theorem2_universe(n)
    for q in range(n):
        profile = time_profile(build_spine_algorithm(universe, q), universe)
        for j in range(n + 1):
            assert profile.per_image[j] == Counter({spine_time(n, q, j): universe.images[j].size})


def test_spines_for_n3_are_the_theorem1_algorithms(theorem1, cycle):
    for q, tree in enumerate(cycle):
        assert build_spine_algorithm(theorem1, q).root == tree.root


def test_spine_labels_and_ranges():
    assert spine_tree(5, 2).label == "A2"
    with pytest.raises(DomainError):
        spine_tree(5, 5)
    with pytest.raises(DomainError):
        spine_tree(2, 0)


def test_build_spine_rejects_other_universes(micro_l2):
    with pytest.raises(DomainError):
        build_spine_algorithm(micro_l2, 0)


@pytest.mark.parametrize("n", range(5, 11))
def test_spot_check_spine(n):
    rng = np.random.Generator(np.random.PCG64(11))
    assert all(spot_check_spine(n, q, SPOT_CHECK_SAMPLES, rng) == 0 for q in range(n))


def test_builtin_tree_names():
    assert builtin_tree("spine1@4").root == spine_tree(4, 1).root
    assert builtin_tree("spine2", n=3).root == builtin_tree("C").root
    with pytest.raises(FormatError):
        builtin_tree("spine1")
    with pytest.raises(FormatError):
        builtin_tree("D")


def test_cycle_family(theorem1):
    assert [tree.label for tree in cycle_family(theorem1)] == ["A", "B", "C"]
    assert [tree.label for tree in cycle_family(build_theorem2_universe(4))] == ["A0", "A1", "A2", "A3"]


def test_cycle_family_requires_known_universe(micro_l2):
    with pytest.raises(DomainError):
        cycle_family(micro_l2)


# ============ 结构 ============

def test_structure_of_algorithm_a(tree_a):
    assert tree_depth(tree_a) == 3
    assert tree_size(tree_a) == 3
    assert signs_used(tree_a) == {1, 2, 3}


def test_reduced_builtins(theorem1, cycle, tree_fig3, tree_fig4):
    for tree in cycle + [tree_fig3, tree_fig4]:
        assert is_reduced(tree, theorem1)


def test_split_of_pure_set_is_not_reduced(theorem1, dsl):
    tree = dsl("(P1 (P2 a0 a0) (P7 a1 (P4 a2 a3)))")
    assert check_correct(tree, theorem1).ok
    assert not is_reduced(tree, theorem1)


def test_trivial_split_is_not_reduced(theorem1, dsl):
    tree = dsl("(P1 a0 (P1 a0 (P7 a1 (P4 a2 a3))))")
    assert check_correct(tree, theorem1).ok
    assert not is_reduced(tree, theorem1)


# ============ DSL ============

def test_parse_algorithm_a(tree_a, theorem1):
    parsed = parse_tree("(P1 a0 (P2 a1 (P3 a2 a3)))", theorem1)
    assert parsed == tree_a


def test_parse_tolerates_whitespace(tree_b):
    assert parse_tree("  ( P4  a2\n(P5 a0 (P6 a1 a3) ) )  ") == tree_b


def test_format_is_canonical(theorem1, tree_c):
    assert format_tree(tree_c, theorem1) == "(P7 a1 (P8 a2 (P9 a0 a3)))"


@pytest.mark.parametrize("text, position", [
    ("(Q1 a0 a1)", 2),
    ("(P1 a0 a1) a2", 12),
    ("(P1 a0 a1))", 11),
    (")", 1),
    ("(P0 a0 a1)", 2),
])
def test_parse_errors_carry_position(text, position):
    with pytest.raises(FormatError) as excinfo:
        parse_tree(text)
    assert excinfo.value.position == position


@pytest.mark.parametrize("text", ["", "(P1 a0", "(P1 a0 a1", "(P1 a0 a1 a2)", "foo"])
def test_parse_rejects_malformed(text):
    with pytest.raises(FormatError):
        parse_tree(text)


def test_parse_checks_universe_names_and_signs(theorem1):
    with pytest.raises(FormatError):
        parse_tree("(P1 a0 a9)", theorem1)
    with pytest.raises(FormatError):
        parse_tree("(P10 a0 a1)", theorem1)


def trees(max_leaves=30):
    leaves = st.builds(Leaf, st.integers(min_value=0, max_value=12))
    return st.recursive(
        leaves,
        lambda children: st.builds(Internal, st.integers(min_value=1, max_value=40), children, children),
        max_leaves=max_leaves,
    )


@settings(max_examples=1000, deadline=None)
@given(trees())
def test_format_parse_round_trip(root):
    tree = DecisionTree(root)
    text = format_tree(tree)
    parsed = parse_tree(text)
    assert parsed.root == root
    assert format_tree(parsed) == text


def test_deep_tree_parse_and_format(micro_l1):
    depth = 3000
    text = "(P1 a0 " * depth + "a1" + ")" * depth
    tree = parse_tree(text, micro_l1)
    assert tree_depth(tree) == depth
    assert tree_size(tree) == depth
    assert signs_used(tree) == {1}
    assert format_tree(tree, micro_l1) == text
    assert check_correct(tree, micro_l1).ok


def test_deep_tree_unbalanced_parentheses(micro_l1):
    text = "(P1 a0 " * 2000 + "a1" + ")" * 1999
    with pytest.raises(FormatError) as excinfo:
        parse_tree(text, micro_l1)
    assert excinfo.value.position == len(text) + 1
