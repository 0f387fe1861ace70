#!/usr/bin/env python3
# -*- coding: utf-8 -*-
"""
测试共享夹具
默认波包（s_x/L = 1/(5π)）与窄波包（s_x/L = 1/(20π)）
"""

import sys
import math
from pathlib import Path

import pytest

# 添加项目路径
sys.path.insert(0, str(Path(__file__).resolve().parent.parent))

from src.core.model import make_well, make_packet
from src.core.eigenbasis import coeffs_quadrature

DEFAULT_SX = 1.0 / (5.0 * math.pi)
NARROW_SX = 1.0 / (20.0 * math.pi)
DEFAULT_PBAR = 25.0 * math.pi


@pytest.fixture(scope="session")
def well():
    return make_well(1.0)


@pytest.fixture(scope="session")
def default_packet(well):
    return make_packet(well, 0.25, DEFAULT_SX, DEFAULT_PBAR)


@pytest.fixture(scope="session")
def narrow_packet(well):
    return make_packet(well, 0.25, NARROW_SX, DEFAULT_PBAR)


@pytest.fixture(scope="session")
def default_modes(well, default_packet):
    return coeffs_quadrature(well, default_packet, 128)


@pytest.fixture(scope="session")
def narrow_modes(well, narrow_packet):
    return coeffs_quadrature(well, narrow_packet, 256)
