#!/usr/bin/env python3
# -*- coding: utf-8 -*-
"""共享夹具：定理1全集、内置算法与微型全集"""

import pytest

from src.core.models import DecisionTree, Leaf
from src.core.patterns import build_theorem1_universe, make_universe, parse_template
from src.core.recognizers import algorithm_a, algorithm_b, algorithm_c, fig3_tree, fig4_tree, parse_tree


@pytest.fixture(scope="session")
def theorem1():
    return build_theorem1_universe()


@pytest.fixture
def tree_a():
    return algorithm_a()


@pytest.fixture
def tree_b():
    return algorithm_b()


@pytest.fixture
def tree_c():
    return algorithm_c()


@pytest.fixture
def cycle(tree_a, tree_b, tree_c):
    return [tree_a, tree_b, tree_c]


@pytest.fixture
def tree_fig3():
    return fig3_tree()


@pytest.fixture
def tree_fig4():
    return fig4_tree()


@pytest.fixture
def micro_l1():
    """L=1：a0={1}, a1={0}"""
    return make_universe(1, [("a0", [parse_template("1")]), ("a1", [parse_template("0")])], name="micro1")


@pytest.fixture
def micro_l2():
    """L=2：a0={1B}, a1={01}, a2={00}"""
    return make_universe(
        2,
        [
            ("a0", [parse_template("1B")]),
            ("a1", [parse_template("01")]),
            ("a2", [parse_template("00")]),
        ],
        name="micro2",
    )


@pytest.fixture
def single_image():
    """只有一个图像的全集"""
    return make_universe(2, [("a0", [parse_template("BB")])], name="single")


@pytest.fixture
def leaf_tree():
    return DecisionTree(Leaf(0), "leaf")


@pytest.fixture
def dsl():
    """按 theorem1 的图像名解析DSL"""
    def parse(text, label=""):
        return parse_tree(text, build_theorem1_universe(), label=label)
    return parse
