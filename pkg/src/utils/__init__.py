#!/usr/bin/env python3
# -*- coding: utf-8 -*-
"""
工具包模块

提供项目通用的工具函数和类。
"""

from .output_cleaner import OutputCleaner, prepare_output_dir

__all__ = [
    'OutputCleaner',
    'prepare_output_dir'
]
