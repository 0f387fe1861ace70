#!/usr/bin/env python3
# -*- coding: utf-8 -*-
"""
PPM 输出模块
以 Pillow 编码二进制 P6，并写出同名 .meta 参数溯源文件
"""

import io
import logging
from pathlib import Path
from typing import Any, Dict, Optional, Union

import numpy as np
from PIL import Image

from src.core.errors import InvalidParameterError, OutputError
from .colormap import Raster

logger = logging.getLogger(__name__)


def format_meta(meta: Dict[str, Any]) -> str:
    """"# key: value" 行，按插入顺序，浮点用 repr 保证可复现"""
    lines = []
    for key, value in meta.items():
        text = repr(value) if isinstance(value, float) else str(value)
        lines.append(f"# {key}: {text}\n")
    return "".join(lines)


def encode_ppm(raster: Raster) -> bytes:
    """编码为 P6 字节串，尺寸不符时在任何写出之前报错"""
    pixels = np.asarray(raster.pixels)
    if raster.width < 1 or raster.height < 1:
        raise InvalidParameterError(f"栅格为空: {raster.width}×{raster.height}")
    if pixels.shape != (raster.height, raster.width, 3) or pixels.dtype != np.uint8:
        raise InvalidParameterError(
            f"像素数据 {pixels.shape}/{pixels.dtype} 与 {raster.width}×{raster.height} RGB 不符")
    buffer = io.BytesIO()
    Image.fromarray(np.ascontiguousarray(pixels)).save(buffer, format="PPM")
    return buffer.getvalue()


def write_ppm(raster: Raster, path: Union[str, Path],
              meta: Optional[Dict[str, Any]] = None) -> None:
    """写出 P6 文件，给出 meta 时另写 <path>.meta

    Raises:
        OutputError: 写文件失败
    """
    payload = encode_ppm(raster)
    path = Path(path)
    try:
        path.parent.mkdir(parents=True, exist_ok=True)
        path.write_bytes(payload)
        if meta is not None:
            Path(f"{path}.meta").write_bytes(format_meta(meta).encode("utf-8"))
    except OSError as e:
        raise OutputError(str(path), str(e)) from e
    logger.info(f"已写出 PPM: {path} ({raster.width}×{raster.height})")
