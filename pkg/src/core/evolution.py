#!/usr/bin/env python3
# -*- coding: utf-8 -*-
"""
时间演化模块
本征态展开直接演化 Ψ(x,t)、地毯合成，以及复原度量（L² 距离、保真度）
"""

import math
import logging
from concurrent.futures import ThreadPoolExecutor
from typing import Optional

import numpy as np
from scipy.integrate import trapezoid

from .errors import InvalidParameterError
from .eigenbasis import ModeExpansion
from .model import CarpetField, SpaceTimeGrid, WellConfig, well_indicator

logger = logging.getLogger(__name__)

# 每个并行任务处理的时间列数
COLUMN_BLOCK = 64


def evolution_phases(well: WellConfig, modes: ModeExpansion, t) -> np.ndarray:
    """exp(−i·2π·mod(n²·t/T, 1))，形状 (nmax, len(t))"""
    ratio = np.atleast_1d(np.asarray(t, dtype=float)) / well.T
    n2 = modes.n.astype(float) ** 2
    frac = np.mod(np.outer(n2, ratio), 1.0)
    return np.exp(-2j * math.pi * frac)


def _sine_basis(well: WellConfig, modes: ModeExpansion, x: np.ndarray) -> np.ndarray:
    """η_x·√(2/L)·sin(nπx/L)，形状 (len(x), nmax)"""
    basis = np.sin(np.outer(x, modes.n) * (math.pi / well.L))
    return (well_indicator(well, x) * math.sqrt(2.0 / well.L))[:, None] * basis


def wavefunction_at(well: WellConfig, modes: ModeExpansion, x, t: float):
    """Ψ(x,t) = Σ cₙ ψₙ(x) e^{−iEₙt/ħ}

    Args:
        well: 势阱配置
        modes: 展开系数
        x: 位置（标量或数组）
        t: 时间（标量）

    Returns:
        复振幅，阱外为0
    """
    x_arr = np.atleast_1d(np.asarray(x, dtype=float))
    weights = modes.coeffs * evolution_phases(well, modes, t)[:, 0]
    psi = _sine_basis(well, modes, x_arr) @ weights
    return psi[0] if np.ndim(x) == 0 else psi.reshape(np.shape(x))


def wavefunction_columns(well: WellConfig, modes: ModeExpansion, x, times) -> np.ndarray:
    """多个时刻的 Ψ(x,t)，形状 (len(x), len(times))"""
    basis = _sine_basis(well, modes, np.asarray(x, dtype=float))
    weights = modes.coeffs[:, None] * evolution_phases(well, modes, times)
    return basis @ weights


def carpet(well: WellConfig, modes: ModeExpansion, grid: SpaceTimeGrid,
           max_workers: Optional[int] = None) -> CarpetField:
    """量子地毯 |Ψ(x_i, t_j)|²

    Args:
        well: 势阱配置
        modes: 展开系数
        grid: 时空网格
        max_workers: 大于1时按时间列分块并行，结果与串行一致

    Returns:
        非符号 CarpetField
    """
    x = grid.x
    t = grid.t
    basis = _sine_basis(well, modes, x)

    def block(start: int) -> np.ndarray:
        times = t[start:start + COLUMN_BLOCK]
        weights = modes.coeffs[:, None] * evolution_phases(well, modes, times)
        return np.abs(basis @ weights) ** 2

    starts = list(range(0, grid.nt, COLUMN_BLOCK))
    if max_workers and max_workers > 1 and len(starts) > 1:
        with ThreadPoolExecutor(max_workers=max_workers) as executor:
            blocks = list(executor.map(block, starts))
    else:
        blocks = [block(s) for s in starts]

    logger.debug(f"地毯完成: {grid.nx}×{grid.nt}, nmax={modes.nmax}")
    return CarpetField(grid=grid, values=np.hstack(blocks), signed=False)


# ==================== 度量 ====================
def _check_pair(a, b):
    a = np.asarray(a)
    b = np.asarray(b)
    if a.shape != b.shape or a.ndim != 1:
        raise InvalidParameterError(f"网格不匹配: {a.shape} vs {b.shape}")
    return a, b


def l2_distance(a, b, dx: float) -> float:
    """√(Σ|aᵢ − bᵢ|²·Δx)"""
    a, b = _check_pair(a, b)
    if dx <= 0:
        raise InvalidParameterError(f"Δx 必须为正，当前: {dx}")
    return float(math.sqrt(np.sum(np.abs(a - b) ** 2) * dx))


def inner_product(a, b, dx: float) -> complex:
    """梯形求积的内积 ⟨a|b⟩"""
    a, b = _check_pair(a, b)
    return complex(trapezoid(np.conj(a) * b, dx=dx))


def fidelity(a, b, dx: float = 1.0) -> float:
    """归一化保真度 |⟨a|b⟩|² / (⟨a|a⟩⟨b|b⟩)，取值 [0, 1]"""
    norm_a = inner_product(a, a, dx).real
    norm_b = inner_product(b, b, dx).real
    if norm_a <= 0 or norm_b <= 0:
        raise InvalidParameterError("保真度要求两个非零态")
    value = abs(inner_product(a, b, dx)) ** 2 / (norm_a * norm_b)
    return float(min(1.0, value))


def density_norm(psi, dx: float) -> float:
    """∫|Ψ|²dx（梯形）"""
    return float(trapezoid(np.abs(np.asarray(psi)) ** 2, dx=dx))


def mirror(values) -> np.ndarray:
    """关于阱中心反射：在对称网格 [0, L] 上即 f(L − x)"""
    return np.asarray(values)[::-1]
