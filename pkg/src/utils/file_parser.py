#!/usr/bin/env python3
# -*- coding: utf-8 -*-
"""
文件解析器 - 全集文件（TXT、CSV、Excel）与树文件的导入导出
"""

import csv
import hashlib
import logging
import os
import re
from typing import List, Optional, Sequence, Tuple

from ..core.models import Universe, DecisionTree, FormatError
from ..core.patterns import parse_template, make_universe
from ..core.recognizers import parse_tree

logger = logging.getLogger(__name__)

_LENGTH_LINE = re.compile(r"^L\s*=\s*(\d+)$")
_IMAGE_LINE = re.compile(r"^([^:\s]+)\s*:\s*(\S+)$")


class FileParser:
    """文件解析器类"""

    # ============ 全集文本格式 ============

    @staticmethod
    def parse_universe_text(text: str, name: str = "", max_patterns: Optional[int] = None) -> Universe:
        """
        解析全集文本
        第1行：L=<整数>
        之后每行：<图像名>: <模板>（同名图像累加模板；'#' 开头为注释）

        Args:
            text: 文件内容
            name: 全集展示名称
            max_patterns: 展开上限

        Returns:
            Universe

        Raises:
            FormatError: 格式错误（带行号）
        """
        length = None
        entries: List[Tuple[str, str, int]] = []

        for line_number, raw in enumerate(text.splitlines(), start=1):
            line = raw.strip()

            # 跳过空行和注释
            if not line or line.startswith("#"):
                continue

            if length is None:
                match = _LENGTH_LINE.match(line)
                if not match:
                    raise FormatError(f"第{line_number}行应为 L=<整数>，实际为 {line!r}")
                length = int(match.group(1))
                continue

            match = _IMAGE_LINE.match(line)
            if not match:
                raise FormatError(f"第{line_number}行应为 <图像名>: <模板>，实际为 {line!r}")
            entries.append((match.group(1), match.group(2), line_number))

        if length is None:
            raise FormatError("全集文件缺少 L=<整数> 行")
        return FileParser._assemble(length, entries, name, max_patterns)

    @staticmethod
    def _assemble(
        length: int,
        entries: Sequence[Tuple[str, str, int]],
        name: str,
        max_patterns: Optional[int]
    ) -> Universe:
        """按首次出现的顺序合并同名图像的模板"""
        if not entries:
            raise FormatError("全集文件中没有图像")
        grouped: dict = {}
        for image_name, template_text, line_number in entries:
            try:
                template = parse_template(template_text)
            except FormatError as e:
                raise FormatError(f"第{line_number}行: {e.message}") from None
            grouped.setdefault(image_name, []).append(template)
        return make_universe(length, list(grouped.items()), name=name, max_patterns=max_patterns)

    @staticmethod
    def format_templates(length: int, specs: Sequence[Tuple[str, Sequence[str]]]) -> str:
        """由 (图像名, 模板列表) 直接生成规范文本，不展开模式"""
        lines = [f"L={length}"]
        for image_name, templates in specs:
            for template in templates:
                lines.append(f"{image_name}: {template}")
        return "\n".join(lines) + "\n"

    @staticmethod
    def format_universe(universe: Universe) -> str:
        """规范的全集文本，parse_universe_text 可原样读回"""
        return FileParser.format_templates(
            universe.length,
            [(image.name, [str(t) for t in image.templates]) for image in universe.images],
        )

    @staticmethod
    def text_digest(canonical: str) -> str:
        return hashlib.sha256(canonical.encode("utf-8")).hexdigest()

    @staticmethod
    def universe_digest(universe: Universe) -> str:
        """规范文本的 SHA-256"""
        return FileParser.text_digest(FileParser.format_universe(universe))

    # ============ 全集文件 ============

    @staticmethod
    def parse_universe_file(file_path: str, max_patterns: Optional[int] = None) -> Universe:
        """
        按扩展名解析全集文件：.csv、.xlsx，其余按文本格式

        Raises:
            FormatError: 文件不存在或格式错误
        """
        if not os.path.isfile(file_path):
            raise FormatError(f"全集文件不存在: {file_path}")
        name = os.path.basename(file_path)
        extension = os.path.splitext(file_path)[1].lower()
        if extension == ".csv":
            universe = FileParser.parse_universe_csv(file_path, max_patterns)
        elif extension == ".xlsx":
            universe = FileParser.parse_universe_excel(file_path, max_patterns)
        else:
            with open(file_path, "r", encoding="utf-8") as f:
                universe = FileParser.parse_universe_text(f.read(), name, max_patterns)
        logger.debug("读取全集文件 %s: %d 个模式", file_path, universe.size)
        return universe

    @staticmethod
    def _parse_rows(rows: List[List[str]], name: str, max_patterns: Optional[int]) -> Universe:
        """
        表格行：图像,模板；可选标题行；第一个数据行可以是 L,<n>
        未给出 L 时取第一个模板的长度
        """
        length = None
        entries: List[Tuple[str, str, int]] = []
        for row_number, row in enumerate(rows, start=1):
            cells = [cell.strip() for cell in row]
            # 跳过空行和注释
            if not cells or not any(cells) or cells[0].startswith("#"):
                continue
            if len(cells) < 2 or not cells[1]:
                raise FormatError(f"第{row_number}行至少需要两列（图像,模板）")
            first, second = cells[0], cells[1]
            if first.lower() == "image" or first == "图像":
                continue
            if first == "L" and length is None and not entries:
                if not second.isdigit():
                    raise FormatError(f"第{row_number}行: L 必须是整数，实际为 {second!r}")
                length = int(second)
                continue
            entries.append((first, second, row_number))

        if not entries:
            raise FormatError(
                "未找到有效的图像数据\n\n"
                "请确保表格格式正确：\n"
                "image,template\n"
                "a0,1BB01B001"
            )
        if length is None:
            length = len(entries[0][1])
        return FileParser._assemble(length, entries, name, max_patterns)

    @staticmethod
    def parse_universe_csv(file_path: str, max_patterns: Optional[int] = None) -> Universe:
        """
        解析CSV全集文件
        格式：image,template（可选 L,<n> 行）
        """
        with open(file_path, "r", encoding="utf-8-sig", newline="") as f:
            rows = [row for row in csv.reader(f)]
        return FileParser._parse_rows(rows, os.path.basename(file_path), max_patterns)

    @staticmethod
    def parse_universe_excel(file_path: str, max_patterns: Optional[int] = None) -> Universe:
        """
        解析Excel全集文件（.xlsx格式，第一个工作表）
        第1列：图像名
        第2列：模板
        """
        try:
            import openpyxl
        except ImportError:
            raise ImportError(
                "需要安装openpyxl库来解析Excel文件\n\n"
                "请运行: pip install openpyxl"
            )

        try:
            workbook = openpyxl.load_workbook(file_path, read_only=True, data_only=True)
        except Exception as e:
            raise FormatError(f"Excel文件解析失败: {str(e)}")

        try:
            sheet = workbook.worksheets[0]
            rows = []
            for row in sheet.iter_rows(values_only=True):
                if not row or all(cell is None for cell in row):
                    continue
                rows.append(["" if cell is None else str(cell) for cell in row[:2]])
        finally:
            workbook.close()
        return FileParser._parse_rows(rows, os.path.basename(file_path), max_patterns)

    # ============ 树文件 ============

    @staticmethod
    def parse_tree_text(text: str, universe: Optional[Universe] = None, prefix: str = "") -> List[DecisionTree]:
        """每行一棵树的DSL文本；'#' 开头为注释"""
        trees = []
        for line_number, raw in enumerate(text.splitlines(), start=1):
            line = raw.strip()
            if not line or line.startswith("#"):
                continue
            try:
                tree = parse_tree(line, universe, label=f"{prefix}{len(trees) + 1}")
            except FormatError as e:
                raise FormatError(f"第{line_number}行: {e.message}") from None
            trees.append(tree)
        if not trees:
            raise FormatError("树文件中没有树")
        return trees

    @staticmethod
    def read_tree_file(file_path: str, universe: Optional[Universe] = None) -> List[DecisionTree]:
        """
        读取树文件，标签为 <文件名>#<序号>

        Raises:
            FormatError: 文件不存在或DSL错误
        """
        if not os.path.isfile(file_path):
            raise FormatError(f"树文件不存在: {file_path}")
        with open(file_path, "r", encoding="utf-8") as f:
            text = f.read()
        stem = os.path.splitext(os.path.basename(file_path))[0]
        return FileParser.parse_tree_text(text, universe, prefix=f"{stem}#")


def parse_universe(text: str) -> Universe:
    """FileParser.parse_universe_text 的简写"""
    return FileParser.parse_universe_text(text)


def format_universe(universe: Universe) -> str:
    return FileParser.format_universe(universe)


def universe_digest(universe: Universe) -> str:
    return FileParser.universe_digest(universe)


def read_tree_file(file_path: str, universe: Optional[Universe] = None) -> List[DecisionTree]:
    return FileParser.read_tree_file(file_path, universe)
