#!/usr/bin/env python3
# -*- coding: utf-8 -*-
"""
配置管理 - 默认参数、环境变量覆盖与单次运行的配置
"""

import logging
import os
from dataclasses import dataclass, field
from typing import Optional, Dict, Any, Tuple

from ..core.patterns import DEFAULT_MAX_PATTERNS

logger = logging.getLogger(__name__)

ENV_PREFIX = "NTPREF_"

OUTPUT_FORMATS = ("table", "json", "dsv")
VERIFY_MODES = ("exact", "image-level")
LOG_LEVELS = ("DEBUG", "INFO", "WARNING", "ERROR")


class ConfigManager:
    """配置管理器"""

    # 配置键常量
    KEY_SEED = "simulate/seed"
    KEY_STEPS = "simulate/steps"
    KEY_TRIALS = "simulate/trials"
    KEY_LIMIT = "enumerate/limit"
    KEY_FORMAT = "output/format"
    KEY_MAX_PATTERNS = "universe/max_patterns"
    KEY_LOG_LEVEL = "logging/log_level"

    DEFAULTS: Dict[str, Any] = {
        KEY_SEED: 20240601,
        KEY_STEPS: 10000,
        KEY_TRIALS: 1,
        KEY_LIMIT: 20,
        KEY_FORMAT: "table",
        KEY_MAX_PATTERNS: DEFAULT_MAX_PATTERNS,
        KEY_LOG_LEVEL: "WARNING",
    }

    def __init__(self, environ: Optional[Dict[str, str]] = None):
        """
        初始化配置管理器

        Args:
            environ: 环境变量映射，默认读取 os.environ
        """
        self.environ = dict(os.environ if environ is None else environ)
        self.values: Dict[str, Any] = dict(self.DEFAULTS)
        self._apply_environment()

    @staticmethod
    def env_name(key: str) -> str:
        """simulate/seed -> NTPREF_SEED"""
        return ENV_PREFIX + key.split("/")[-1].upper()

    def _apply_environment(self) -> None:
        for key, default in self.DEFAULTS.items():
            name = self.env_name(key)
            raw = self.environ.get(name)
            if raw is None or raw.strip() == "":
                continue
            if isinstance(default, int):
                try:
                    self.values[key] = int(raw)
                except ValueError:
                    logger.warning("忽略无效的环境变量 %s=%r", name, raw)
            else:
                self.values[key] = raw.strip()

    # ============ 模拟配置 ============

    def load_seed(self) -> int:
        return self.values[self.KEY_SEED]

    def load_steps(self) -> int:
        return self.values[self.KEY_STEPS]

    def load_trials(self) -> int:
        return self.values[self.KEY_TRIALS]

    # ============ 输出配置 ============

    def load_limit(self) -> int:
        """枚举时输出的最大树数"""
        return self.values[self.KEY_LIMIT]

    def load_format(self) -> str:
        return self.values[self.KEY_FORMAT]

    def load_max_patterns(self) -> int:
        """展开全集时的模式总数上限"""
        return self.values[self.KEY_MAX_PATTERNS]

    def load_log_level(self) -> str:
        level = str(self.values[self.KEY_LOG_LEVEL]).upper()
        return level if level in LOG_LEVELS else "WARNING"

    # ============ 通用方法 ============

    def set_value(self, key: str, value: Any) -> None:
        """设置配置值"""
        self.values[key] = value

    def get_value(self, key: str, default: Any = None) -> Any:
        """获取配置值"""
        return self.values.get(key, default)

    def reset(self) -> None:
        """恢复默认值并重新读取环境变量"""
        self.values = dict(self.DEFAULTS)
        self._apply_environment()


# 全局配置管理器实例
_config_manager: Optional[ConfigManager] = None


def get_config_manager() -> ConfigManager:
    """获取配置管理器单例"""
    global _config_manager
    if _config_manager is None:
        _config_manager = ConfigManager()
    return _config_manager


@dataclass(frozen=True)
class RunConfig:
    """一次命令行调用解析后的配置"""
    command: str
    universe: str = "theorem1"
    trees: Tuple[str, ...] = field(default_factory=tuple)
    builtin_trees: Tuple[str, ...] = field(default_factory=tuple)
    output_format: str = "table"
    mode: str = "exact"
    theorem: str = "theorem1"
    n: Optional[int] = None
    steps: int = 10000
    trials: int = 1
    seed: int = 20240601
    limit: int = 20
    max_patterns: int = DEFAULT_MAX_PATTERNS
    xlsx_path: Optional[str] = None
    joint: bool = False
    emit: bool = False

    @classmethod
    def from_args(cls, args: Any, manager: Optional[ConfigManager] = None) -> 'RunConfig':
        """由 argparse 结果构造；未给出的参数取 ConfigManager 中的值"""
        manager = manager or get_config_manager()

        def pick(name: str, fallback: Any) -> Any:
            value = getattr(args, name, None)
            return fallback if value is None else value

        builtin = getattr(args, "builtin_trees", None)
        return cls(
            command=args.command,
            universe=pick("universe", "theorem1"),
            trees=tuple(getattr(args, "tree", None) or ()),
            builtin_trees=tuple(name.strip() for name in builtin.split(",") if name.strip()) if builtin else (),
            output_format=pick("format", manager.load_format()),
            mode=pick("mode", "exact"),
            theorem=pick("theorem", "theorem1"),
            n=getattr(args, "n", None),
            steps=pick("steps", manager.load_steps()),
            trials=pick("trials", manager.load_trials()),
            seed=pick("seed", manager.load_seed()),
            limit=pick("limit", manager.load_limit()),
            max_patterns=manager.load_max_patterns(),
            xlsx_path=getattr(args, "xlsx", None),
            joint=bool(getattr(args, "joint", False)),
            emit=bool(getattr(args, "emit", False)),
        )

    def validate(self) -> Tuple[bool, str]:
        """
        验证配置

        Returns:
            (是否有效, 错误信息)
        """
        if self.output_format not in OUTPUT_FORMATS:
            return False, f"未知的输出格式 {self.output_format}，可选 {'/'.join(OUTPUT_FORMATS)}"
        if self.mode not in VERIFY_MODES:
            return False, f"未知的验证模式 {self.mode}，可选 {'/'.join(VERIFY_MODES)}"
        if self.theorem not in ("theorem1", "theorem2"):
            return False, f"未知的定理 {self.theorem}"
        if not self.universe:
            return False, "必须指定全集"
        if self.steps < 1:
            return False, "--steps 必须 >= 1"
        if self.trials < 1:
            return False, "--trials 必须 >= 1"
        if self.seed < 0:
            return False, "--seed 不能为负"
        if self.limit < 0:
            return False, "--limit 不能为负"
        if self.trees and self.builtin_trees:
            return False, "--tree 与 --trees 不能同时使用"
        return True, ""
