#!/usr/bin/env python3
# -*- coding: utf-8 -*-
"""
渲染模块
包含着色、PPM 与 CSV 输出
"""

from .colormap import RenderSpec, Raster, colorize
from .ppm_writer import write_ppm, encode_ppm, format_meta
from .csv_field_writer import write_csv, read_csv_field, write_profile_csv, field_meta

__all__ = [
    'RenderSpec',
    'Raster',
    'colorize',
    'write_ppm',
    'encode_ppm',
    'format_meta',
    'write_csv',
    'read_csv_field',
    'write_profile_csv',
    'field_meta'
]
