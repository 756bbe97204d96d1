#!/usr/bin/env python3
# -*- coding: utf-8 -*-
"""
识别算法偏好关系非传递性验证工具
主程序入口
"""

import sys

from src.cli.app import main


if __name__ == "__main__":
    sys.exit(main())
