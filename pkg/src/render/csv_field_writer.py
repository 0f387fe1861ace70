#!/usr/bin/env python3
# -*- coding: utf-8 -*-
"""
CSV 场输出模块
负责把 CarpetField 与一维剖面写成带 "# " 元数据头的 CSV，并可原样读回
"""

import csv
import io
import logging
from pathlib import Path
from typing import Any, Dict, Mapping, Optional, Tuple, Union

import numpy as np

from src.core.errors import InvalidParameterError, OutputError
from src.core.model import CarpetField
from .ppm_writer import format_meta

logger = logging.getLogger(__name__)

VALUE_FORMAT = "%.17g"


def field_meta(field: CarpetField, extra: Optional[Mapping[str, Any]] = None) -> Dict[str, Any]:
    """网格元数据，后接生成参数"""
    grid = field.grid
    meta: Dict[str, Any] = {
        "nx": grid.nx,
        "nt": grid.nt,
        "x_range": f"{grid.x_lo!r} {grid.x_hi!r}",
        "t_range": f"{grid.t_lo!r} {grid.t_hi!r}",
        "signed": str(field.signed).lower(),
    }
    if grid.t_samples is not None:
        meta["t_samples"] = " ".join(repr(v) for v in grid.t_samples)
    if extra:
        meta.update(extra)
    return meta


def _write_text(path: Path, text: str) -> None:
    try:
        path.parent.mkdir(parents=True, exist_ok=True)
        with open(path, "w", encoding="utf-8", newline="") as f:
            f.write(text)
    except OSError as e:
        raise OutputError(str(path), str(e)) from e


def write_csv(field: CarpetField, path: Union[str, Path],
              meta: Optional[Mapping[str, Any]] = None) -> None:
    """写出场：每行一个时刻（t 递增），每列一个位置（x 递增）

    Args:
        field: 时空场
        path: 输出路径
        meta: 生成参数，追加在网格元数据之后
    """
    buffer = io.StringIO()
    buffer.write(format_meta(field_meta(field, meta)))
    writer = csv.writer(buffer, lineterminator="\n")
    for row in field.values.T:
        writer.writerow([VALUE_FORMAT % v for v in row])
    _write_text(Path(path), buffer.getvalue())
    logger.info(f"已写出 CSV: {path} ({field.grid.nt} 行 × {field.grid.nx} 列)")


def read_csv_field(path: Union[str, Path]) -> Tuple[np.ndarray, Dict[str, str]]:
    """读回 write_csv 的输出

    Returns:
        (values, meta)，values 形状 (nx, nt)，meta 值为原始字符串
    """
    meta: Dict[str, str] = {}
    rows = []
    try:
        with open(path, "r", encoding="utf-8", newline="") as f:
            for line in f:
                if line.startswith("# "):
                    key, _, value = line[2:].rstrip("\n").partition(": ")
                    meta[key] = value
                elif line.strip():
                    rows.append(next(csv.reader([line])))
    except OSError as e:
        raise OutputError(str(path), str(e)) from e

    if not rows:
        raise InvalidParameterError(f"CSV 中没有数据行: {path}")
    values = np.array([[float(v) for v in row] for row in rows]).T
    return values, meta


def write_profile_csv(x, columns: Mapping[str, Any], path: Union[str, Path],
                      meta: Optional[Mapping[str, Any]] = None) -> None:
    """写出一维剖面：首列 x，其后每列一条曲线"""
    x = np.asarray(x, dtype=float)
    data = {name: np.asarray(values, dtype=float) for name, values in columns.items()}
    for name, values in data.items():
        if values.shape != x.shape:
            raise InvalidParameterError(f"列 {name} 长度 {values.shape} 与 x {x.shape} 不符")

    buffer = io.StringIO()
    buffer.write(format_meta(dict(meta or {})))
    writer = csv.writer(buffer, lineterminator="\n")
    writer.writerow(["x", *data.keys()])
    for i in range(len(x)):
        writer.writerow([VALUE_FORMAT % x[i], *(VALUE_FORMAT % v[i] for v in data.values())])
    _write_text(Path(path), buffer.getvalue())
    logger.info(f"已写出剖面 CSV: {path}")
