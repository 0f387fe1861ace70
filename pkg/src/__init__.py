#!/usr/bin/env python3
# -*- coding: utf-8 -*-
"""
量子地毯模拟系统
无限深方势阱与紧束缚链中高斯波包的量子地毯，以及三种解析分解的数值互验
"""

# 导入核心模块
from . import core
from . import render
from . import config

# 导入主要类和函数
from .core import (
    make_well,
    make_packet,
    coeffs_quadrature,
    choose_nmax,
    carpet,
    make_fraction,
    gauss_table,
    fractional_reconstruction,
    reconstruct_density,
    DiscreteChain,
    CarpetError
)

from .config import (
    ConfigManager,
    get_config_manager
)

__version__ = "1.0.0"
__author__ = "Quantum Carpet Team"
__description__ = "量子地毯模拟系统"

__all__ = [
    # 核心模块
    'core',
    'render',
    'config',

    # 主要类和函数
    'make_well',
    'make_packet',
    'coeffs_quadrature',
    'choose_nmax',
    'carpet',
    'make_fraction',
    'gauss_table',
    'fractional_reconstruction',
    'reconstruct_density',
    'DiscreteChain',
    'CarpetError',
    'ConfigManager',
    'get_config_manager',

    # 元信息
    '__version__',
    '__author__',
    '__description__'
]
