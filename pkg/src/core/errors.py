#!/usr/bin/env python3
# -*- coding: utf-8 -*-
"""
异常定义模块
所有计算与输出错误的统一层级，CLI 根据类型映射退出码
"""

from typing import Any, Dict, Optional


class CarpetError(Exception):
    """量子地毯系统的基础异常"""


class InvalidParameterError(CarpetError, ValueError):
    """参数不合法（非正宽度、越界位置、网格不匹配等）"""


class NonCoprimeError(InvalidParameterError):
    """分数 α/β 未约分"""

    def __init__(self, alpha: int, beta: int, divisor: int):
        super().__init__(f"α={alpha} 与 β={beta} 不互质 (gcd={divisor})，请先约分")
        self.alpha = alpha
        self.beta = beta
        self.divisor = divisor


class DegenerateStateError(InvalidParameterError):
    """离散初态全部下溢为0，无法归一化"""


class NumericAccuracyError(CarpetError, ArithmeticError):
    """数值积分或级数未达到要求精度"""


class TruncationError(NumericAccuracyError):
    """模式截断超过上限"""

    def __init__(self, message: str, diagnostic: Optional[Dict[str, Any]] = None):
        super().__init__(message)
        self.diagnostic = diagnostic or {}


class InternalConsistencyError(CarpetError, RuntimeError):
    """内部一致性检查失败（例如 |S| ≠ √β）"""


class OutputError(CarpetError, OSError):
    """文件写出失败"""

    def __init__(self, path: str, reason: str):
        super().__init__(f"写入失败 {path}: {reason}")
        self.path = path
