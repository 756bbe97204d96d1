#!/usr/bin/env python3
# -*- coding: utf-8 -*-
"""
数据模型 - 模式、模板、图像、全集、决策树及各类报告的数据结构
"""

import math
from collections import Counter
from dataclasses import dataclass, field
from enum import Enum
from fractions import Fraction
from functools import cached_property
from typing import Optional, List, Dict, Any, Tuple, Union, FrozenSet

import numpy as np


# ============ 常量 ============

WILDCARD = "B"
WILDCARD_ALIASES = frozenset({"B", "*"})
BIT_SYMBOLS = frozenset({"0", "1"})


# ============ 异常类型 ============

class RecognitionError(Exception):
    """识别相关错误的基类"""

    def __init__(self, message: str, exit_code: int = 1):
        super().__init__(message)
        self.message = message
        self.exit_code = exit_code

    def __str__(self) -> str:
        return self.message


class FormatError(RecognitionError):
    """格式错误：模板符号、全集文件、树DSL语法"""

    def __init__(self, message: str, position: Optional[int] = None):
        if position is not None:
            message = f"{message}（位置 {position}）"
        super().__init__(message, exit_code=2)
        self.position = position


class DomainError(RecognitionError):
    """定义域错误：参数越界、空集合、非法分布"""

    def __init__(self, message: str):
        super().__init__(message, exit_code=2)


class CapacityError(RecognitionError):
    """容量错误：展开规模或位掩码搜索超出上限"""

    def __init__(self, message: str):
        super().__init__(message, exit_code=2)


class CorrectnessError(RecognitionError):
    """识别算法不正确（存在误分类的模式）"""

    def __init__(self, report: 'CorrectnessReport'):
        super().__init__(report.summary(), exit_code=1)
        self.report = report


# ============ 模式与全集 ============

@dataclass(frozen=True, order=True)
class Pattern:
    """定长二进制模式，位置从1开始编号，位置1为最左侧"""
    bits: str

    def __post_init__(self):
        if not self.bits or not set(self.bits) <= BIT_SYMBOLS:
            raise FormatError(f"非法模式: {self.bits!r}")

    @property
    def length(self) -> int:
        return len(self.bits)

    def bit(self, k: int) -> bool:
        """第k位是否为1"""
        return self.bits[k - 1] == "1"

    def __str__(self) -> str:
        return self.bits


@dataclass(frozen=True)
class Template:
    """通配模板，符号取自 {0, 1, B}"""
    symbols: str

    @property
    def length(self) -> int:
        return len(self.symbols)

    @property
    def wildcard_count(self) -> int:
        return self.symbols.count(WILDCARD)

    @property
    def expansion_size(self) -> int:
        return 1 << self.wildcard_count

    def __str__(self) -> str:
        return self.symbols


@dataclass(frozen=True)
class ImageDef:
    """图像（类别）：由若干模板展开得到的模式集合"""
    index: int
    name: str
    templates: Tuple[Template, ...]
    patterns: FrozenSet[Pattern]

    @property
    def size(self) -> int:
        return len(self.patterns)


@dataclass(frozen=True)
class Universe:
    """
    有限模式全集 U^f，划分为若干两两不交的图像

    每个模式按字典序分配稠密序号 0..|U^f|-1，供位掩码搜索使用。
    """
    length: int
    images: Tuple[ImageDef, ...]
    name: str = field(default="", compare=False)
    block_size: Optional[int] = field(default=None, compare=False)

    def __post_init__(self):
        if self.length < 1:
            raise DomainError(f"符号数L必须为正: {self.length}")
        if not self.images:
            raise DomainError("全集至少需要一个图像")
        seen: Dict[Pattern, str] = {}
        for position, image in enumerate(self.images):
            if image.index != position:
                raise DomainError(f"图像序号不连续: {image.name} 的序号为 {image.index}")
            for pattern in image.patterns:
                if pattern.length != self.length:
                    raise FormatError(
                        f"图像 {image.name} 中模式 {pattern} 的长度不等于 L={self.length}"
                    )
                if pattern in seen:
                    raise FormatError(
                        f"图像 {seen[pattern]} 与 {image.name} 相交于模式 {pattern}"
                    )
                seen[pattern] = image.name

    # ============ 基本属性 ============

    @cached_property
    def all_patterns(self) -> Tuple[Pattern, ...]:
        """按字典序排列的全部模式"""
        return tuple(sorted(p for image in self.images for p in image.patterns))

    @cached_property
    def _ordinals(self) -> Dict[Pattern, int]:
        return {pattern: i for i, pattern in enumerate(self.all_patterns)}

    @cached_property
    def _image_lookup(self) -> Dict[Pattern, int]:
        return {p: image.index for image in self.images for p in image.patterns}

    @property
    def size(self) -> int:
        return len(self.all_patterns)

    @property
    def image_sizes(self) -> Tuple[int, ...]:
        return tuple(image.size for image in self.images)

    @property
    def image_names(self) -> Tuple[str, ...]:
        return tuple(image.name for image in self.images)

    def image_index(self, name: str) -> int:
        """按名称查找图像序号"""
        for image in self.images:
            if image.name == name:
                return image.index
        raise FormatError(f"未知的图像名称: {name}")

    def image_of(self, pattern: Pattern) -> int:
        """模式所属图像的序号"""
        try:
            return self._image_lookup[pattern]
        except KeyError:
            raise DomainError(f"模式 {pattern} 不属于全集") from None

    def ordinal(self, pattern: Pattern) -> int:
        """模式的稠密序号"""
        try:
            return self._ordinals[pattern]
        except KeyError:
            raise DomainError(f"模式 {pattern} 不属于全集") from None

    # ============ 向量化视图 ============

    @cached_property
    def bit_matrix(self) -> np.ndarray:
        """|U^f| x L 的布尔矩阵，第 k-1 列为符号 P_k 的取值"""
        rows = [[c == "1" for c in p.bits] for p in self.all_patterns]
        return np.array(rows, dtype=bool).reshape(self.size, self.length)

    @cached_property
    def labels(self) -> np.ndarray:
        """按序号排列的真实图像序号"""
        return np.array([self._image_lookup[p] for p in self.all_patterns], dtype=np.int64)

    @cached_property
    def sign_masks(self) -> Tuple[int, ...]:
        """sign_masks[k-1] 为 P_k 为真的模式的位掩码"""
        masks = []
        for k in range(self.length):
            mask = 0
            for i, pattern in enumerate(self.all_patterns):
                if pattern.bits[k] == "1":
                    mask |= 1 << i
            masks.append(mask)
        return tuple(masks)

    @cached_property
    def image_masks(self) -> Tuple[int, ...]:
        """image_masks[i] 为图像 i 的位掩码"""
        masks = [0] * len(self.images)
        for i, pattern in enumerate(self.all_patterns):
            masks[self._image_lookup[pattern]] |= 1 << i
        return tuple(masks)

    def sign_mask(self, k: int) -> int:
        """P_k 为真的模式的位掩码"""
        return self.sign_masks[k - 1]

    def image_mask(self, index: int) -> int:
        """图像 index 中全部模式的位掩码"""
        return self.image_masks[index]

    @property
    def full_mask(self) -> int:
        return (1 << self.size) - 1


# ============ 决策树 ============

@dataclass(frozen=True)
class Leaf:
    """叶节点：输出图像序号"""
    image: int


@dataclass(frozen=True)
class Internal:
    """内部节点：计算符号 P_sign，为真走 true_branch（DSL 中的第一个子树）"""
    sign: int
    true_branch: 'Node'
    false_branch: 'Node'


Node = Union[Leaf, Internal]


@dataclass(frozen=True)
class DecisionTree:
    """识别算法；结构相等只比较根节点，标签仅用于展示"""
    root: Node
    label: str = field(default="", compare=False)

    def with_label(self, label: str) -> 'DecisionTree':
        return DecisionTree(self.root, label)


@dataclass
class Misclassification:
    """一次误分类"""
    pattern: Pattern
    expected: int
    actual: int


@dataclass
class CorrectnessReport:
    """正确性检查结果"""
    tree_label: str
    misclassified: List[Misclassification] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.misclassified

    def summary(self) -> str:
        if self.ok:
            return f"算法 {self.tree_label or '?'} 识别正确"
        head = ", ".join(
            f"{m.pattern}->{m.actual}(应为{m.expected})" for m in self.misclassified[:5]
        )
        more = "" if len(self.misclassified) <= 5 else f" 等共{len(self.misclassified)}个"
        return f"算法 {self.tree_label or '?'} 误分类: {head}{more}"

    def to_dict(self) -> Dict[str, Any]:
        return {
            "tree": self.tree_label,
            "correct": self.ok,
            "misclassified": [
                {"pattern": str(m.pattern), "expected": m.expected, "actual": m.actual}
                for m in self.misclassified
            ],
        }


@dataclass
class TimeProfile:
    """识别时间：逐模式时间与逐图像时间多重集"""
    per_pattern: Dict[Pattern, int]
    per_image: Dict[int, Counter]

    def image_time(self, index: int) -> str:
        return format_time_multiset(self.per_image[index])


def format_time_multiset(times: Counter) -> str:
    """
    时间多重集的表格写法

    一致时写作 "t"；恰好一半/一半写作 "t1/t2"（较小者在前）；
    其他情况写作 "t1(c1)/t2(c2)/..."。
    """
    if not times:
        return "-"
    values = sorted(times)
    if len(values) == 1:
        return str(values[0])
    if len(values) == 2 and times[values[0]] == times[values[1]]:
        return f"{values[0]}/{values[1]}"
    return "/".join(f"{t}({times[t]})" for t in values)


# ============ 偏好关系 ============

class PreferenceKind(Enum):
    """两两比较结果"""
    FIRST_BETTER = "first_better"
    SECOND_BETTER = "second_better"
    EQUIVALENT = "equivalent"

    @property
    def display_name(self) -> str:
        names = {
            self.FIRST_BETTER: "前者更优",
            self.SECOND_BETTER: "后者更优",
            self.EQUIVALENT: "等价",
        }
        return names.get(self, self.value)

    def mirrored(self) -> 'PreferenceKind':
        if self is PreferenceKind.FIRST_BETTER:
            return PreferenceKind.SECOND_BETTER
        if self is PreferenceKind.SECOND_BETTER:
            return PreferenceKind.FIRST_BETTER
        return self


@dataclass(frozen=True)
class PreferenceOutcome:
    """A 与 B 的比较：V(A,B)、V(B,A) 及平局数"""
    kind: PreferenceKind
    first_wins: int
    second_wins: int
    ties: int = 0

    @classmethod
    def from_counts(cls, first_wins: int, second_wins: int, ties: int = 0) -> 'PreferenceOutcome':
        if first_wins > second_wins:
            kind = PreferenceKind.FIRST_BETTER
        elif first_wins < second_wins:
            kind = PreferenceKind.SECOND_BETTER
        else:
            kind = PreferenceKind.EQUIVALENT
        return cls(kind, first_wins, second_wins, ties)

    def mirrored(self) -> 'PreferenceOutcome':
        return PreferenceOutcome(self.kind.mirrored(), self.second_wins, self.first_wins, self.ties)

    def __str__(self) -> str:
        return f"{self.kind.value} ({self.first_wins} vs {self.second_wins})"

    def to_dict(self) -> Dict[str, Any]:
        return {
            "outcome": self.kind.value,
            "wins": [self.first_wins, self.second_wins],
            "ties": self.ties,
        }


@dataclass
class TournamentMatrix:
    """算法列表上的胜场矩阵 wins[i][j] = V(A_i, A_j)"""
    labels: List[str]
    trees: List[DecisionTree]
    wins: np.ndarray
    ties: np.ndarray
    total: int

    def outcome(self, i: int, j: int) -> PreferenceOutcome:
        return PreferenceOutcome.from_counts(
            int(self.wins[i][j]), int(self.wins[j][i]), int(self.ties[i][j])
        )

    @property
    def outcomes(self) -> Dict[Tuple[int, int], PreferenceOutcome]:
        count = len(self.labels)
        return {
            (i, j): self.outcome(i, j)
            for i in range(count) for j in range(i + 1, count)
        }

    def to_dict(self) -> Dict[str, Any]:
        return {
            "algorithms": list(self.labels),
            "wins": [[int(v) for v in row] for row in self.wins.tolist()],
            "ties": [[int(v) for v in row] for row in self.ties.tolist()],
            "outcomes": [
                {"first": self.labels[i], "second": self.labels[j], **o.to_dict()}
                for (i, j), o in self.outcomes.items()
            ],
            "total": self.total,
        }


@dataclass
class CycleStep:
    """环中的一步比较"""
    first: str
    second: str
    outcome: PreferenceOutcome

    @property
    def holds(self) -> bool:
        return self.outcome.kind is PreferenceKind.FIRST_BETTER


@dataclass
class CycleVerdict:
    """非传递环的验证结果及轨迹"""
    holds: bool
    steps: List[CycleStep]

    def to_dict(self) -> Dict[str, Any]:
        return {
            "holds": self.holds,
            "trace": [
                {"first": s.first, "second": s.second, "better": s.holds, **s.outcome.to_dict()}
                for s in self.steps
            ],
        }


@dataclass
class TimeTable:
    """识别时间表：行为图像，列为算法"""
    image_names: List[str]
    labels: List[str]
    cells: List[List[str]]

    def column(self, label: str) -> List[str]:
        j = self.labels.index(label)
        return [row[j] for row in self.cells]

    def to_dict(self) -> Dict[str, Any]:
        return {
            "images": list(self.image_names),
            "algorithms": list(self.labels),
            "cells": [list(row) for row in self.cells],
        }


# ============ 对抗搜索 ============

@dataclass
class MarginResult:
    """对目标算法的最大优势 max_X V(X,T) - V(T,X) 及其见证树"""
    target_label: str
    margin: int
    witness: DecisionTree
    states_explored: int
    elapsed_seconds: float = 0.0


@dataclass
class DominatorReport:
    """是否存在同时优于全部目标的算法"""
    holds: bool
    target_labels: List[str]
    margins: List[int]
    best_joint_margin: int
    dominator: Optional[DecisionTree]
    frontier_size: int
    states_explored: int


@dataclass
class TightnessEntry:
    """环成员 target 的最大优势是否等于其前驱已取得的优势"""
    target_label: str
    predecessor_label: str
    max_margin: int
    predecessor_margin: int

    @property
    def tight(self) -> bool:
        return self.max_margin == self.predecessor_margin


# ============ 随机序列 ============

@dataclass(frozen=True)
class SequenceDistribution:
    """
    时间齐次的模式分布 v(x,t) = v(x)

    weights 按全集序号排列，使用有理数保存以便精确计算期望。
    """
    universe: Universe = field(compare=False, repr=False)
    weights: Tuple[Fraction, ...]
    uniform: bool = False

    TOLERANCE = 1e-12

    def __post_init__(self):
        if len(self.weights) != self.universe.size:
            raise DomainError(
                f"权重个数 {len(self.weights)} 与全集大小 {self.universe.size} 不一致"
            )
        if any(w < 0 for w in self.weights):
            raise DomainError("概率不能为负")
        if abs(float(sum(self.weights)) - 1.0) > self.TOLERANCE:
            raise DomainError(f"概率之和必须为1，实际为 {float(sum(self.weights))}")

    @classmethod
    def uniform_over(cls, universe: Universe) -> 'SequenceDistribution':
        """U^f 上的均匀分布"""
        share = Fraction(1, universe.size)
        return cls(universe, tuple(share for _ in range(universe.size)), uniform=True)

    @classmethod
    def from_weights(cls, universe: Universe, mapping: Dict[Pattern, Any]) -> 'SequenceDistribution':
        """由 模式->概率 映射构造，未列出的模式概率为0"""
        weights = [Fraction(0)] * universe.size
        for pattern, probability in mapping.items():
            weights[universe.ordinal(pattern)] = _as_fraction(probability)
        return cls(universe, tuple(weights))

    @classmethod
    def from_steps(cls, universe: Universe, steps: List[Dict[Pattern, Any]]) -> 'SequenceDistribution':
        """逐步权重；仅当各步完全相同（时间齐次）时接受"""
        if not steps:
            raise DomainError("至少需要一步的权重")
        distributions = [cls.from_weights(universe, step) for step in steps]
        first = distributions[0]
        for t, other in enumerate(distributions[1:], start=2):
            if other.weights != first.weights:
                raise DomainError(f"第{t}步的权重与第1步不同：仅支持时间齐次分布")
        return first

    def probabilities(self) -> np.ndarray:
        probs = np.array([float(w) for w in self.weights], dtype=float)
        return probs / probs.sum()


def _as_fraction(value: Any) -> Fraction:
    if isinstance(value, Fraction):
        return value
    if isinstance(value, float):
        if not math.isfinite(value):
            raise DomainError(f"非法概率: {value}")
        return Fraction(value)
    try:
        return Fraction(value)
    except (TypeError, ValueError):
        raise DomainError(f"非法概率: {value!r}") from None


@dataclass
class SimulationReport:
    """蒙特卡洛模拟结果"""
    first_label: str
    second_label: str
    steps: int
    trials: int
    seed: int
    wins: int
    empirical_win_fraction: float
    exact_expectation: Fraction
    standard_error: float

    @property
    def exact_win_fraction(self) -> Fraction:
        return self.exact_expectation / self.steps

    @property
    def deviation(self) -> float:
        return self.empirical_win_fraction - float(self.exact_win_fraction)

    def to_dict(self) -> Dict[str, Any]:
        return {
            "first": self.first_label,
            "second": self.second_label,
            "steps": self.steps,
            "trials": self.trials,
            "seed": self.seed,
            "wins": self.wins,
            "empirical_win_fraction": self.empirical_win_fraction,
            "exact_expectation": str(self.exact_expectation),
            "exact_win_fraction": str(self.exact_win_fraction),
            "standard_error": self.standard_error,
        }
