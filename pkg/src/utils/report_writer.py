#!/usr/bin/env python3
# -*- coding: utf-8 -*-
"""
报告输出 - 对齐文本、分隔符表格、JSON 与 Excel 工作簿
"""

import json
import logging
from dataclasses import dataclass, field
from typing import Any, Dict, List, Optional, Sequence

logger = logging.getLogger(__name__)


@dataclass
class ReportSection:
    """报告中的一节：可选的表格与若干文本行"""
    title: str
    headers: List[str] = field(default_factory=list)
    rows: List[List[Any]] = field(default_factory=list)
    lines: List[str] = field(default_factory=list)


@dataclass
class Report:
    """
    一次命令的报告

    meta 回显解析后的配置（全集摘要、树DSL），data 为 JSON 输出的结果部分。
    """
    command: str
    meta: Dict[str, Any] = field(default_factory=dict)
    sections: List[ReportSection] = field(default_factory=list)
    data: Dict[str, Any] = field(default_factory=dict)

    def add_section(self, title: str, headers: Optional[Sequence[str]] = None,
                    rows: Optional[Sequence[Sequence[Any]]] = None,
                    lines: Optional[Sequence[str]] = None) -> ReportSection:
        section = ReportSection(
            title=title,
            headers=list(headers or []),
            rows=[list(row) for row in rows or []],
            lines=list(lines or []),
        )
        self.sections.append(section)
        return section

    def to_dict(self) -> Dict[str, Any]:
        return {"command": self.command, "config": dict(self.meta), **self.data}


class ReportWriter:
    """按输出格式把 Report 渲染为文本"""

    DELIMITER = "\t"

    def __init__(self, output_format: str = "table"):
        self.output_format = output_format

    def render(self, report: Report) -> str:
        if self.output_format == "json":
            return self.render_json(report)
        if self.output_format == "dsv":
            return self.render_dsv(report)
        return self.render_table(report)

    # ============ 文本 ============

    @staticmethod
    def _cell(value: Any) -> str:
        if isinstance(value, bool):
            return "true" if value else "false"
        return str(value)

    @classmethod
    def align(cls, headers: Sequence[str], rows: Sequence[Sequence[Any]]) -> List[str]:
        """左对齐的列，列间两个空格"""
        table = [[cls._cell(v) for v in headers]] + [[cls._cell(v) for v in row] for row in rows]
        widths = [max(len(row[i]) for row in table if i < len(row)) for i in range(len(table[0]))]
        lines = []
        for row in table:
            cells = [value.ljust(widths[i]) for i, value in enumerate(row)]
            lines.append("  ".join(cells).rstrip())
        return lines

    def render_table(self, report: Report) -> str:
        lines = [f"== {report.command} =="]
        for key, value in report.meta.items():
            if isinstance(value, (list, tuple)):
                lines.append(f"{key}:")
                lines.extend(f"  {self._cell(item)}" for item in value)
            else:
                lines.append(f"{key}: {self._cell(value)}")
        for section in report.sections:
            lines.append("")
            lines.append(f"-- {section.title} --")
            if section.headers:
                lines.extend(self.align(section.headers, section.rows))
            lines.extend(section.lines)
        return "\n".join(lines) + "\n"

    def render_dsv(self, report: Report) -> str:
        """每节一张表，节之间空一行；只含文本行的节逐行输出"""
        blocks = []
        for section in report.sections:
            rows = []
            if section.headers:
                rows.append(self.DELIMITER.join(self._cell(v) for v in section.headers))
                rows.extend(self.DELIMITER.join(self._cell(v) for v in row) for row in section.rows)
            rows.extend(section.lines)
            blocks.append("\n".join([f"# {section.title}"] + rows))
        return "\n\n".join(blocks) + "\n"

    # ============ JSON ============

    @staticmethod
    def render_json(report: Report) -> str:
        """键排序、两空格缩进；相同输入给出逐字节相同的输出"""
        return json.dumps(report.to_dict(), sort_keys=True, indent=2, ensure_ascii=False) + "\n"

    # ============ Excel ============

    @staticmethod
    def write_xlsx(report: Report, file_path: str) -> None:
        """
        每个带表格的节写入一个工作表，另有一个 config 工作表回显配置
        """
        try:
            import openpyxl
        except ImportError:
            raise ImportError(
                "需要安装openpyxl库来导出Excel文件\n\n"
                "请运行: pip install openpyxl"
            )

        workbook = openpyxl.Workbook()
        config_sheet = workbook.active
        config_sheet.title = "config"
        config_sheet.append(["key", "value"])
        for key, value in report.meta.items():
            if isinstance(value, (list, tuple)):
                value = "\n".join(str(item) for item in value)
            config_sheet.append([key, str(value)])

        used = {"config"}
        for section in report.sections:
            if not section.headers:
                continue
            title = _sheet_title(section.title, used)
            sheet = workbook.create_sheet(title)
            sheet.append([str(h) for h in section.headers])
            for row in section.rows:
                sheet.append([v if isinstance(v, (int, float)) and not isinstance(v, bool) else str(v) for v in row])
        workbook.save(file_path)
        logger.info("报告已导出到 %s", file_path)


def _sheet_title(title: str, used: set) -> str:
    """工作表名最长31个字符，不含 []:*?/\\ 且不重复"""
    cleaned = "".join("_" if c in "[]:*?/\\" else c for c in title)[:31] or "sheet"
    candidate = cleaned
    suffix = 2
    while candidate in used:
        candidate = f"{cleaned[:28]}_{suffix}"
        suffix += 1
    used.add(candidate)
    return candidate
