#!/usr/bin/env python3
# -*- coding: utf-8 -*-
"""
模式与全集 - 通配模板展开、两个定理的全集构造、符号计算
"""

import itertools
import logging
from typing import Dict, Iterable, List, Optional, Sequence, Tuple, FrozenSet

import numpy as np

from .models import (
    Pattern, Template, ImageDef, Universe,
    FormatError, DomainError, CapacityError,
    WILDCARD, WILDCARD_ALIASES, BIT_SYMBOLS
)

logger = logging.getLogger(__name__)

# 单个图像展开规模的上限 2^62
MAX_WILDCARDS = 62

# 未指定上限时定理2全集展开的模式总数上限
DEFAULT_MAX_PATTERNS = 1 << 22

THEOREM1_TEMPLATES = (
    ("a0", "1BB01B001"),
    ("a1", "01B0011BB"),
    ("a2", "0011BB01B"),
    ("a3", "000000000"),
)


# ============ 模板 ============

def parse_template(text: str) -> Template:
    """
    解析模板文本，'*' 视同 'B'

    Raises:
        FormatError: 空模板或含有非法符号
    """
    symbols = text.strip()
    if not symbols:
        raise FormatError("模板不能为空")
    normalized = []
    for position, symbol in enumerate(symbols, start=1):
        if symbol in WILDCARD_ALIASES:
            normalized.append(WILDCARD)
        elif symbol in BIT_SYMBOLS:
            normalized.append(symbol)
        else:
            raise FormatError(f"模板 {symbols!r} 含非法符号 {symbol!r}", position)
    return Template("".join(normalized))


def expand_template(template: Template) -> FrozenSet[Pattern]:
    """展开模板的全部 2^k 个实例"""
    if not template.symbols:
        raise FormatError("模板不能为空")
    for position, symbol in enumerate(template.symbols, start=1):
        if symbol != WILDCARD and symbol not in BIT_SYMBOLS:
            raise FormatError(f"模板 {template.symbols!r} 含非法符号 {symbol!r}", position)

    slots = [i for i, s in enumerate(template.symbols) if s == WILDCARD]
    base = list(template.symbols)
    patterns = set()
    for assignment in itertools.product("01", repeat=len(slots)):
        for slot, bit in zip(slots, assignment):
            base[slot] = bit
        patterns.add(Pattern("".join(base)))
    return frozenset(patterns)


def sample_template(template: Template, rng: np.random.Generator) -> Pattern:
    """随机实例化模板（不展开），用于超出展开上限时的抽查"""
    bits = [
        ("1" if rng.integers(0, 2) else "0") if s == WILDCARD else s
        for s in template.symbols
    ]
    return Pattern("".join(bits))


# ============ 全集构造 ============

def build_image(index: int, name: str, templates: Sequence[Template]) -> ImageDef:
    """由模板列表构造图像，图像内部的重复模式自动去重"""
    if not templates:
        raise FormatError(f"图像 {name} 没有模板")
    patterns = set()
    for template in templates:
        patterns |= expand_template(template)
    return ImageDef(index=index, name=name, templates=tuple(templates), patterns=frozenset(patterns))


def make_universe(
    length: int,
    image_specs: Sequence[Tuple[str, Sequence[Template]]],
    name: str = "",
    block_size: Optional[int] = None,
    max_patterns: Optional[int] = None
) -> Universe:
    """
    构造全集

    Args:
        length: 符号数 L
        image_specs: [(图像名, 模板列表), ...]，顺序即图像序号
        name: 展示名称
        block_size: 定理2全集的参数 n
        max_patterns: 展开模式总数上限，None 表示不限制

    Raises:
        FormatError: 模板长度不符或图像相交
        CapacityError: 展开规模超限
    """
    names = [image_name for image_name, _ in image_specs]
    if len(set(names)) != len(names):
        raise FormatError(f"图像名称重复: {names}")
    for image_name, templates in image_specs:
        for template in templates:
            if template.length != length:
                raise FormatError(
                    f"图像 {image_name} 的模板 {template} 长度为 {template.length}，应为 {length}"
                )
            if template.wildcard_count > MAX_WILDCARDS:
                raise CapacityError(
                    f"模板 {template} 含 {template.wildcard_count} 个通配符，超过上限 {MAX_WILDCARDS}"
                )

    upper_bound = sum(t.expansion_size for _, templates in image_specs for t in templates)
    if max_patterns is not None and upper_bound > max_patterns:
        raise CapacityError(f"全集需展开约 {upper_bound} 个模式，超过上限 {max_patterns}")

    images = tuple(
        build_image(index, image_name, list(templates))
        for index, (image_name, templates) in enumerate(image_specs)
    )
    universe = Universe(length=length, images=images, name=name, block_size=block_size)
    logger.debug("全集 %s: L=%d, 图像大小=%s", name or "?", length, universe.image_sizes)
    return universe


def build_theorem1_universe() -> Universe:
    """定理1的全集：L=9，四个图像，|U^f|=25"""
    specs = [(name, [parse_template(text)]) for name, text in THEOREM1_TEMPLATES]
    return make_universe(9, specs, name="theorem1", block_size=3)


def block_template(n: int, i: int) -> str:
    """块 v_i：i-1 个0，一个1，n-i 个通配符"""
    if not 1 <= i <= n:
        raise DomainError(f"块序号 i={i} 越界（1..{n}）")
    return "0" * (i - 1) + "1" + WILDCARD * (n - i)


def theorem2_templates(n: int) -> List[Tuple[str, str]]:
    """定理2全集的 (图像名, 模板) 列表；α_j 为 v_{j+1}…v_n v_1…v_j，α_n 全零"""
    blocks = [block_template(n, i) for i in range(1, n + 1)]
    specs = []
    for j in range(n):
        specs.append((f"a{j}", "".join(blocks[j:] + blocks[:j])))
    specs.append((f"a{n}", "0" * (n * n)))
    return specs


def theorem2_wildcards(n: int) -> int:
    """定理2中每个非零图像的通配符个数 n(n-1)/2"""
    return n * (n - 1) // 2


def build_theorem2_universe(n: int, max_patterns: Optional[int] = None) -> Universe:
    """
    定理2的全集：L=n²，n+1 个图像

    max_patterns 为 None 时使用 DEFAULT_MAX_PATTERNS。

    Raises:
        DomainError: n < 3
        CapacityError: n(n-1)/2 > 62 或超过 max_patterns
    """
    if n < 3:
        raise DomainError(f"定理2要求 n >= 3，实际 n={n}")
    if theorem2_wildcards(n) > MAX_WILDCARDS:
        raise CapacityError(
            f"n={n} 时每个图像含 2^{theorem2_wildcards(n)} 个模式，超过展开上限 2^{MAX_WILDCARDS}"
        )
    if max_patterns is None:
        max_patterns = DEFAULT_MAX_PATTERNS
    specs = [(name, [parse_template(text)]) for name, text in theorem2_templates(n)]
    return make_universe(n * n, specs, name=f"theorem2:{n}", block_size=n, max_patterns=max_patterns)


# ============ 符号 ============

def eval_sign(k: int, pattern: Pattern) -> bool:
    """P_k(x)：第k位是否为1"""
    if not 1 <= k <= pattern.length:
        raise DomainError(f"符号序号 k={k} 越界（1..{pattern.length}）")
    return pattern.bit(k)


def sign_from_block(n: int, i: int, m: int) -> int:
    """P_m^i 对应的符号序号 n·i+m"""
    if not 0 <= i <= n - 1:
        raise DomainError(f"块序号 i={i} 越界（0..{n - 1}）")
    if not 1 <= m <= n:
        raise DomainError(f"块内位置 m={m} 越界（1..{n}）")
    return n * i + m


def separating_signs(universe: Universe) -> Dict[int, List[int]]:
    """恰好在某个完整图像上为真的符号"""
    result: Dict[int, List[int]] = {image.index: [] for image in universe.images}
    for k in range(1, universe.length + 1):
        mask = universe.sign_mask(k)
        for image in universe.images:
            if mask and mask == universe.image_mask(image.index):
                result[image.index].append(k)
    return result


def rotate_blocks(pattern: Pattern, n: int, shift: int) -> Pattern:
    """把长度为 n² 的模式按块循环右移 shift 块"""
    if pattern.length != n * n:
        raise DomainError(f"模式长度 {pattern.length} 不等于 n²={n * n}")
    blocks = [pattern.bits[i * n:(i + 1) * n] for i in range(n)]
    shift %= n
    rotated = blocks[n - shift:] + blocks[:n - shift]
    return Pattern("".join(rotated))


def describe_universe(universe: Universe) -> Dict[str, object]:
    """全集摘要"""
    return {
        "name": universe.name,
        "length": universe.length,
        "images": [
            {"name": image.name, "size": image.size, "templates": [str(t) for t in image.templates]}
            for image in universe.images
        ],
        "size": universe.size,
    }


def patterns_of(universe: Universe, names: Iterable[str]) -> List[Pattern]:
    """按图像名取出模式（按序号顺序）"""
    wanted = {universe.image_index(name) for name in names}
    return [p for p in universe.all_patterns if universe.image_of(p) in wanted]
