#!/usr/bin/env python3
# -*- coding: utf-8 -*-
"""
识别算法 - 决策树的构造、分类、识别时间、正确性检查与文本DSL
"""

import logging
import re
from collections import Counter
from typing import Iterable, List, Optional, Set, Tuple

import numpy as np

from .models import (
    Pattern, Universe, Leaf, Internal, Node, DecisionTree,
    CorrectnessReport, Misclassification, TimeProfile,
    FormatError, DomainError, CorrectnessError
)
from .patterns import theorem2_templates, parse_template, sample_template

logger = logging.getLogger(__name__)

_SIGN_TOKEN = re.compile(r"^P(\d+)$")
_DEFAULT_LEAF = re.compile(r"^a(\d+)$")


# ============ 分类与时间 ============

def classify(tree: DecisionTree, pattern: Pattern) -> Tuple[int, int]:
    """
    从根走到叶：符号为真走 true_branch

    Returns:
        (图像序号, 经过的弧数)
    """
    node = tree.root
    time = 0
    while isinstance(node, Internal):
        node = node.true_branch if pattern.bit(node.sign) else node.false_branch
        time += 1
    return node.image, time


def validate_tree(tree: DecisionTree, universe: Universe) -> None:
    """
    检查符号序号和叶图像是否适用于全集

    Raises:
        DomainError: 符号越界或叶图像不存在
    """
    stack: List[Node] = [tree.root]
    while stack:
        node = stack.pop()
        if isinstance(node, Leaf):
            if not 0 <= node.image < len(universe.images):
                raise DomainError(f"叶节点图像序号 {node.image} 不存在")
        else:
            if not 1 <= node.sign <= universe.length:
                raise DomainError(f"符号 P{node.sign} 越界（1..{universe.length}）")
            stack.append(node.false_branch)
            stack.append(node.true_branch)


def route(tree: DecisionTree, universe: Universe) -> Tuple[np.ndarray, np.ndarray]:
    """
    向量化地对全集全部模式分类

    Returns:
        (按序号排列的输出图像, 按序号排列的识别时间)
    """
    validate_tree(tree, universe)
    images = np.full(universe.size, -1, dtype=np.int64)
    times = np.zeros(universe.size, dtype=np.int64)
    bits = universe.bit_matrix
    stack = [(tree.root, np.arange(universe.size), 0)]
    while stack:
        node, index, depth = stack.pop()
        if index.size == 0:
            continue
        if isinstance(node, Leaf):
            images[index] = node.image
            times[index] = depth
            continue
        column = bits[index, node.sign - 1]
        stack.append((node.false_branch, index[~column], depth + 1))
        stack.append((node.true_branch, index[column], depth + 1))
    return images, times


def check_correct(tree: DecisionTree, universe: Universe) -> CorrectnessReport:
    """检查算法是否把全集中每个模式分到其所属图像"""
    images, _ = route(tree, universe)
    wrong = np.nonzero(images != universe.labels)[0]
    report = CorrectnessReport(tree_label=tree.label)
    for ordinal in wrong.tolist():
        report.misclassified.append(Misclassification(
            pattern=universe.all_patterns[ordinal],
            expected=int(universe.labels[ordinal]),
            actual=int(images[ordinal]),
        ))
    if not report.ok:
        logger.debug(report.summary())
    return report


def time_vector(tree: DecisionTree, universe: Universe) -> np.ndarray:
    """
    按序号排列的识别时间 T(A,x)

    Raises:
        CorrectnessError: 算法不正确
    """
    images, times = route(tree, universe)
    if np.any(images != universe.labels):
        raise CorrectnessError(check_correct(tree, universe))
    return times


def time_profile(tree: DecisionTree, universe: Universe) -> TimeProfile:
    """逐模式与逐图像的识别时间；不正确的算法会被拒绝"""
    times = time_vector(tree, universe)
    per_pattern = {p: int(t) for p, t in zip(universe.all_patterns, times.tolist())}
    per_image = {image.index: Counter() for image in universe.images}
    for pattern, t in per_pattern.items():
        per_image[universe.image_of(pattern)][t] += 1
    return TimeProfile(per_pattern=per_pattern, per_image=per_image)


def time_of_set(tree: DecisionTree, patterns: Iterable[Pattern]) -> int:
    """T(A,M) = max_{x∈M} T(A,x)"""
    times = [classify(tree, p)[1] for p in patterns]
    if not times:
        raise DomainError("集合M不能为空")
    return max(times)


# ============ 内置算法 ============

def _chain(*steps: Tuple[int, int], last: int) -> Node:
    """右脊树：每个 (符号, 图像) 为真时输出该图像，最终为假时输出 last"""
    node: Node = Leaf(last)
    for sign, image in reversed(steps):
        node = Internal(sign, Leaf(image), node)
    return node


def algorithm_a() -> DecisionTree:
    """算法𝔄：P1, P2, P3"""
    return DecisionTree(_chain((1, 0), (2, 1), (3, 2), last=3), "A")


def algorithm_b() -> DecisionTree:
    """算法𝔅：P4, P5, P6"""
    return DecisionTree(_chain((4, 2), (5, 0), (6, 1), last=3), "B")


def algorithm_c() -> DecisionTree:
    """算法ℭ：P7, P8, P9（第三个叶为α₀）"""
    return DecisionTree(_chain((7, 1), (8, 2), (9, 0), last=3), "C")


def fig3_tree() -> DecisionTree:
    """证明中的第一个子情形：与𝔅等价"""
    root = Internal(
        2,
        Internal(1, Leaf(0), Leaf(1)),
        Internal(1, Leaf(0), Internal(4, Leaf(2), Leaf(3))),
    )
    return DecisionTree(root, "fig3")


def fig4_tree() -> DecisionTree:
    """证明中的第二个子情形：与𝔄等价"""
    root = Internal(
        2,
        Internal(1, Leaf(0), Leaf(1)),
        Internal(4, Leaf(2), Internal(1, Leaf(0), Leaf(3))),
    )
    return DecisionTree(root, "fig4")


def spine_tree(n: int, q: int) -> DecisionTree:
    """
    定理2的算法 A_q

    依次计算 P_1^q … P_n^q（符号 n·q+m），第 m 个节点为真时输出
    α_{(n-q+m-1) mod n}，最后为假时输出 α_n。
    """
    if n < 3:
        raise DomainError(f"定理2要求 n >= 3，实际 n={n}")
    if not 0 <= q <= n - 1:
        raise DomainError(f"q={q} 越界（0..{n - 1}）")
    steps = [(n * q + m, (n - q + m - 1) % n) for m in range(1, n + 1)]
    return DecisionTree(_chain(*steps, last=n), f"A{q}")


def build_spine_algorithm(universe: Universe, q: int) -> DecisionTree:
    """在定理2全集上构造 A_q"""
    n = universe.block_size
    if n is None or universe.length != n * n or len(universe.images) != n + 1:
        raise DomainError(f"全集 {universe.name or '?'} 不是定理2的构造")
    return spine_tree(n, q)


def spine_time(n: int, q: int, j: int) -> int:
    """T(A_q, α_j)：j<n 时为 ((j+q) mod n)+1，α_n 为 n"""
    if j == n:
        return n
    return (j + q) % n + 1


def spot_check_spine(n: int, q: int, samples: int, rng: np.random.Generator) -> int:
    """
    不展开全集，随机抽取各图像的模式检查 A_q 的输出与时间公式

    Returns:
        不符合的抽样个数
    """
    tree = spine_tree(n, q)
    failures = 0
    templates = [parse_template(text) for _, text in theorem2_templates(n)]
    for j, template in enumerate(templates):
        count = 1 if template.wildcard_count == 0 else samples
        for _ in range(count):
            pattern = sample_template(template, rng)
            image, time = classify(tree, pattern)
            if image != j or time != spine_time(n, q, j):
                failures += 1
    return failures


BUILTIN_NAMES = ("A", "B", "C", "fig3", "fig4")


def builtin_tree(name: str, n: Optional[int] = None) -> DecisionTree:
    """
    按名称取内置算法：A, B, C, fig3, fig4, spine<q>[@<n>]

    spine<q> 省略 @<n> 时使用参数 n。

    Raises:
        FormatError: 未知名称
    """
    factories = {
        "A": algorithm_a,
        "B": algorithm_b,
        "C": algorithm_c,
        "fig3": fig3_tree,
        "fig4": fig4_tree,
    }
    if name in factories:
        return factories[name]()
    match = re.match(r"^spine(\d+)(?:@(\d+))?$", name)
    if match:
        block_size = int(match.group(2)) if match.group(2) else n
        if block_size is None:
            raise FormatError(f"{name} 需要指定 n（spine<q>@<n>）")
        return spine_tree(block_size, int(match.group(1)))
    raise FormatError(f"未知的内置算法: {name}")


def cycle_family(universe: Universe) -> List[DecisionTree]:
    """全集对应的非传递环：定理1为𝔄,𝔅,ℭ，定理2为 A_0..A_{n-1}"""
    n = universe.block_size
    if n is None:
        raise DomainError(f"全集 {universe.name or '?'} 没有内置的算法环")
    if n == 3 and universe.name == "theorem1":
        return [algorithm_a(), algorithm_b(), algorithm_c()]
    return [build_spine_algorithm(universe, q) for q in range(n)]


# ============ 结构性质 ============

def tree_depth(tree: DecisionTree) -> int:
    """根到叶的最长弧数"""
    deepest = 0
    stack: List[Tuple[Node, int]] = [(tree.root, 0)]
    while stack:
        node, depth = stack.pop()
        if isinstance(node, Internal):
            stack.append((node.true_branch, depth + 1))
            stack.append((node.false_branch, depth + 1))
        else:
            deepest = max(deepest, depth)
    return deepest


def tree_size(tree: DecisionTree) -> int:
    """内部节点个数"""
    count = 0
    stack: List[Node] = [tree.root]
    while stack:
        node = stack.pop()
        if isinstance(node, Internal):
            count += 1
            stack.extend((node.true_branch, node.false_branch))
    return count


def signs_used(tree: DecisionTree) -> Set[int]:
    """树中出现过的符号序号"""
    found: Set[int] = set()
    stack: List[Node] = [tree.root]
    while stack:
        node = stack.pop()
        if isinstance(node, Internal):
            found.add(node.sign)
            stack.extend((node.true_branch, node.false_branch))
    return found


def is_reduced(tree: DecisionTree, universe: Universe) -> bool:
    """
    约简性：每个内部节点把到达的模式集分成两个非空部分，
    且到达集合只含一个图像的节点必须是叶
    """
    validate_tree(tree, universe)
    bits = universe.bit_matrix
    labels = universe.labels
    stack = [(tree.root, np.arange(universe.size))]
    while stack:
        node, index = stack.pop()
        pure = np.unique(labels[index]).size <= 1
        if isinstance(node, Leaf):
            continue
        if pure:
            return False
        column = bits[index, node.sign - 1]
        if column.all() or not column.any():
            return False
        stack.append((node.true_branch, index[column]))
        stack.append((node.false_branch, index[~column]))
    return True


# ============ 文本DSL ============

def _tokenize(text: str) -> List[Tuple[str, int]]:
    tokens = []
    i = 0
    while i < len(text):
        char = text[i]
        if char.isspace():
            i += 1
        elif char in "()":
            tokens.append((char, i + 1))
            i += 1
        else:
            start = i
            while i < len(text) and not text[i].isspace() and text[i] not in "()":
                i += 1
            tokens.append((text[start:i], start + 1))
    return tokens


def _leaf_index(name: str, position: int, universe: Optional[Universe]) -> int:
    if universe is not None:
        try:
            return universe.image_index(name)
        except FormatError:
            raise FormatError(f"未知的图像名称 {name!r}", position) from None
    match = _DEFAULT_LEAF.match(name)
    if not match:
        raise FormatError(f"未知的图像名称 {name!r}", position)
    return int(match.group(1))


def parse_tree(text: str, universe: Optional[Universe] = None, label: str = "") -> DecisionTree:
    """
    解析树DSL

    叶为图像名；内部节点为 (P<k> <真子树> <假子树>)。
    未给出全集时图像名须为 a<序号>。用显式栈解析，深度不受递归限制。

    Raises:
        FormatError: 语法错误（带位置）、未知图像名、符号越界
    """
    tokens = _tokenize(text)
    if not tokens:
        raise FormatError("树DSL为空", 1)

    # 每个未闭合的括号：[符号, 已解析的子树]
    open_nodes: List[Tuple[int, List[Node]]] = []
    root: Optional[Node] = None
    cursor = 0
    while cursor < len(tokens):
        token, position = tokens[cursor]
        cursor += 1

        if token == ")":
            if not open_nodes or len(open_nodes[-1][1]) < 2:
                raise FormatError("多余的右括号", position)
            sign, children = open_nodes.pop()
            node: Node = Internal(sign, children[0], children[1])
        else:
            if open_nodes and len(open_nodes[-1][1]) == 2:
                raise FormatError(f"期望右括号，得到 {token!r}", position)
            if not open_nodes and root is not None:
                raise FormatError(f"多余的内容 {token!r}", position)
            if token != "(":
                node = Leaf(_leaf_index(token, position, universe))
            else:
                if cursor >= len(tokens):
                    raise FormatError("左括号后缺少符号", len(text) + 1)
                head, head_position = tokens[cursor]
                cursor += 1
                match = _SIGN_TOKEN.match(head)
                if not match:
                    raise FormatError(f"期望符号 P<k>，得到 {head!r}", head_position)
                sign = int(match.group(1))
                if sign < 1 or (universe is not None and sign > universe.length):
                    limit = universe.length if universe is not None else "L"
                    raise FormatError(f"符号 P{sign} 越界（1..{limit}）", head_position)
                open_nodes.append((sign, []))
                continue

        if open_nodes:
            open_nodes[-1][1].append(node)
        else:
            root = node

    if open_nodes:
        if len(open_nodes[-1][1]) == 2:
            raise FormatError("缺少右括号", len(text) + 1)
        raise FormatError("树DSL意外结束", len(text) + 1)
    return DecisionTree(root, label)


def format_tree(tree: DecisionTree, universe: Optional[Universe] = None) -> str:
    """规范的DSL文本：单空格分隔，无多余空白"""
    def name(index: int) -> str:
        if universe is not None:
            return universe.images[index].name
        return f"a{index}"

    pieces: List[str] = []
    stack: List[object] = [tree.root]
    while stack:
        item = stack.pop()
        if isinstance(item, str):
            pieces.append(item)
        elif isinstance(item, Leaf):
            pieces.append(name(item.image))
        else:
            stack.extend((")", item.false_branch, " ", item.true_branch, f"(P{item.sign} "))
    return "".join(pieces)
