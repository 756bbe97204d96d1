#!/usr/bin/env python3
# -*- coding: utf-8 -*-
"""
命令行入口 - 参数解析、日志配置、命令分发与退出码

退出码：0 全部通过；1 被验证的结论不成立或算法不正确；2 用法、格式或容量错误。
"""

import argparse
import logging
import sys
from typing import Callable, Dict, List, Optional

from ..core.models import RecognitionError
from ..utils.config import RunConfig, get_config_manager, OUTPUT_FORMATS, VERIFY_MODES
from ..utils.report_writer import ReportWriter
from .context import CommandResult
from .analysis_commands import cmd_universe, cmd_times, cmd_compare, cmd_tournament
from .verify_commands import cmd_verify_theorem1, cmd_verify_theorem2
from .search_commands import cmd_adversary, cmd_enumerate, cmd_simulate

logger = logging.getLogger(__name__)

PROG = "ntpref"
EXIT_OK = 0
EXIT_FAILED = 1
EXIT_USAGE = 2

LOG_FORMAT = "%(asctime)s %(levelname)s %(name)s: %(message)s"


def build_parser() -> argparse.ArgumentParser:
    """构造参数解析器；未给出的数值参数为 None，由 ConfigManager 补全"""
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--universe", help="theorem1 | theorem2:N | 全集文件路径（.txt/.csv/.xlsx）")
    common.add_argument("--tree", action="append", metavar="DSL|@FILE",
                        help="算法：DSL 文本、label=DSL 或 @树文件，可重复")
    common.add_argument("--trees", dest="builtin_trees", metavar="NAMES",
                        help="逗号分隔的内置算法名：A,B,C,fig3,fig4,spine<q>[@<n>]")
    common.add_argument("--format", choices=OUTPUT_FORMATS, help="输出格式")
    common.add_argument("--xlsx", metavar="PATH", help="同时导出 Excel 工作簿（times/tournament）")
    common.add_argument("-v", "--verbose", action="count", default=0, help="日志更详细（可重复）")

    parser = argparse.ArgumentParser(prog=PROG, description="识别算法偏好关系的非传递性验证工具")
    subparsers = parser.add_subparsers(dest="command", metavar="COMMAND")
    subparsers.required = True

    universe = subparsers.add_parser("universe", parents=[common], help="全集摘要")
    universe.add_argument("--emit", action="store_true", help="输出规范的全集文本")

    subparsers.add_parser("times", parents=[common], help="识别时间表")
    subparsers.add_parser("compare", parents=[common], help="比较两个算法")

    tournament = subparsers.add_parser("tournament", parents=[common], help="胜场矩阵")
    tournament.add_argument("--mode", choices=VERIFY_MODES, help="theorem2:N 全集的计算方式")

    verify = subparsers.add_parser("verify", parents=[common], help="验证定理")
    verify.add_argument("theorem", choices=("theorem1", "theorem2"))
    verify.add_argument("--n", type=int, help="定理2的参数 n（>= 3）")
    verify.add_argument("--mode", choices=VERIFY_MODES, help="exact（展开全集）或 image-level")
    verify.add_argument("--seed", type=int, help="image-level 抽查使用的种子")

    adversary = subparsers.add_parser("adversary", parents=[common], help="对目标算法的最大优势")
    adversary.add_argument("--joint", action="store_true", help="检查是否存在同时优于全部目标的算法")

    enumerate_parser = subparsers.add_parser("enumerate", parents=[common], help="枚举约简树")
    enumerate_parser.add_argument("--limit", type=int, help="最多输出的树数")

    simulate = subparsers.add_parser("simulate", parents=[common], help="随机序列模拟")
    simulate.add_argument("--steps", type=int, help="序列长度 n")
    simulate.add_argument("--trials", type=int, help="独立序列条数")
    simulate.add_argument("--seed", type=int, help="随机种子")
    return parser


def configure_logging(verbosity: int) -> None:
    """-v 为 INFO，-vv 为 DEBUG；否则使用 NTPREF_LOG_LEVEL"""
    if verbosity >= 2:
        level = logging.DEBUG
    elif verbosity == 1:
        level = logging.INFO
    else:
        level = getattr(logging, get_config_manager().load_log_level(), logging.WARNING)
    logging.basicConfig(level=level, format=LOG_FORMAT, stream=sys.stderr, force=True)


def _run_verify(config: RunConfig) -> CommandResult:
    if config.theorem == "theorem1":
        return cmd_verify_theorem1(config)
    return cmd_verify_theorem2(config.n, config.mode, config.max_patterns, config.seed)


COMMANDS: Dict[str, Callable[[RunConfig], CommandResult]] = {
    "universe": cmd_universe,
    "times": cmd_times,
    "compare": cmd_compare,
    "tournament": cmd_tournament,
    "verify": _run_verify,
    "adversary": cmd_adversary,
    "enumerate": cmd_enumerate,
    "simulate": cmd_simulate,
}


def main(argv: Optional[List[str]] = None) -> int:
    """
    运行一条命令

    Returns:
        退出码
    """
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return e.code if isinstance(e.code, int) else EXIT_USAGE

    configure_logging(args.verbose)
    config = RunConfig.from_args(args)
    ok, message = config.validate()
    if not ok:
        print(f"{PROG}: 错误: {message}", file=sys.stderr)
        return EXIT_USAGE

    logger.debug("运行配置: %s", config)
    try:
        result = COMMANDS[config.command](config)
    except RecognitionError as e:
        print(f"{PROG}: 错误: {e.message}", file=sys.stderr)
        return e.exit_code
    except (OSError, ImportError) as e:
        print(f"{PROG}: 错误: {e}", file=sys.stderr)
        return EXIT_USAGE

    sys.stdout.write(ReportWriter(config.output_format).render(result.report))
    if result.exit_code != EXIT_OK:
        print(f"{PROG}: {config.command} 未通过", file=sys.stderr)
    return result.exit_code
