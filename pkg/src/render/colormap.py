#!/usr/bin/env python3
# -*- coding: utf-8 -*-
"""
着色模块
把 CarpetField 映射为 RGB 栅格：密度图 灰→红，发散图 蓝→灰→红
"""

import logging
from dataclasses import dataclass
from typing import Optional

import numpy as np

from src.core.errors import InvalidParameterError
from src.core.model import CarpetField

logger = logging.getLogger(__name__)

GRAY = np.array([128.0, 128.0, 128.0])
RED = np.array([255.0, 0.0, 0.0])
BLUE = np.array([0.0, 0.0, 255.0])

COLORMAPS = ("density", "diverging")
NORMALIZATIONS = ("global-max", "fixed")
OUTPUT_FORMATS = ("ppm", "csv")


@dataclass(frozen=True)
class RenderSpec:
    """渲染规格"""
    colormap: str = "density"
    normalization: str = "global-max"
    norm_value: Optional[float] = None
    output_format: str = "ppm"

    def __post_init__(self):
        if self.colormap not in COLORMAPS:
            raise InvalidParameterError(f"未知色图: {self.colormap}")
        if self.normalization not in NORMALIZATIONS:
            raise InvalidParameterError(f"未知归一化方式: {self.normalization}")
        if self.output_format not in OUTPUT_FORMATS:
            raise InvalidParameterError(f"未知输出格式: {self.output_format}")
        if self.normalization == "fixed":
            if self.norm_value is None or not self.norm_value > 0:
                raise InvalidParameterError(f"固定归一化值必须为正，当前: {self.norm_value}")


@dataclass(frozen=True)
class Raster:
    """RGB 栅格，pixels 形状 (height, width, 3)，第0行为最大 x"""
    width: int
    height: int
    pixels: np.ndarray


def _scale(field: CarpetField, spec: RenderSpec) -> float:
    if spec.normalization == "fixed":
        return float(spec.norm_value)
    peak = float(np.max(np.abs(field.values)))
    # 全零场画成灰色
    return peak if peak > 0 else 1.0


def colorize(field: CarpetField, spec: RenderSpec) -> Raster:
    """按规格着色

    实数插值后每通道取 floor(v + 0.5)，行翻转使位置向上递增。

    Raises:
        InvalidParameterError: 符号场配密度色图
    """
    if field.signed and spec.colormap == "density":
        raise InvalidParameterError("符号场必须使用 diverging 色图")

    scaled = field.values / _scale(field, spec)
    if spec.colormap == "density":
        c = np.clip(scaled, 0.0, 1.0)[..., None]
        rgb = GRAY + c * (RED - GRAY)
    else:
        c = np.clip(scaled, -1.0, 1.0)[..., None]
        rgb = np.where(c >= 0, GRAY + c * (RED - GRAY), GRAY + (-c) * (BLUE - GRAY))

    pixels = np.floor(rgb + 0.5).astype(np.uint8)[::-1]
    height, width = pixels.shape[:2]
    return Raster(width=width, height=height, pixels=np.ascontiguousarray(pixels))
