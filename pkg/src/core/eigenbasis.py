#!/usr/bin/env python3
# -*- coding: utf-8 -*-
"""
本征基模块
能级、正弦本征函数，以及高斯波包展开系数 cₙ 的两条独立计算路线：
[0, L] 上的复合 Gauss–Legendre 求积，与 ±∞ 延拓后的高斯傅里叶闭式
"""

import math
import logging
from dataclasses import dataclass
from typing import Dict, Optional

import numpy as np
from numpy.polynomial.legendre import leggauss

from .errors import InvalidParameterError, NumericAccuracyError, TruncationError
from .model import GaussianPacket, WellConfig, packet_value, well_indicator

logger = logging.getLogger(__name__)

NODES_PER_PANEL = 16
MIN_PANELS = 64
QUADRATURE_TOLERANCE = 1e-12
MAX_REFINEMENTS = 4
NMAX_CAP = 4096
MODE_BLOCK = 256


# ==================== 数据类 ====================
@dataclass(frozen=True)
class ModeExpansion:
    """截断的正弦基展开 c₁..c_nmax"""
    nmax: int
    coeffs: np.ndarray
    captured_norm: float
    route: str = "quadrature"

    def __post_init__(self):
        coeffs = np.array(self.coeffs, dtype=complex)
        if self.nmax < 1 or coeffs.shape != (self.nmax,):
            raise InvalidParameterError(f"系数长度 {coeffs.shape} 与 nmax={self.nmax} 不符")
        coeffs.setflags(write=False)
        object.__setattr__(self, "coeffs", coeffs)
        if self.captured_norm > 1.0 + 1e-12:
            # 仅在波包明显越过阱壁时出现：[0, L] 上的 Ψ̃ 本身范数略大于1
            logger.warning(f"展开范数 {self.captured_norm:.15f} 超过1，波包泄漏到阱外")

    @property
    def n(self) -> np.ndarray:
        """模式编号 1..nmax"""
        return np.arange(1, self.nmax + 1)

    def c(self, n: int) -> complex:
        """延拓访问器：c(−n) = −c(n)，c(0) = 0，超出截断返回0"""
        if n == 0 or abs(n) > self.nmax:
            return 0j
        value = complex(self.coeffs[abs(n) - 1])
        return value if n > 0 else -value


# ==================== 本征值与本征态 ====================
def eigen_energy(well: WellConfig, n: int) -> float:
    """Eₙ = n²π²ħ²/(2mL²)"""
    if n < 1:
        raise InvalidParameterError(f"量子数 n 必须 ≥ 1，当前: {n}")
    return n * n * math.pi ** 2 * well.hbar ** 2 / (2.0 * well.mass * well.L ** 2)


def eigen_state(well: WellConfig, n: int, x):
    """ψₙ(x) = η_x·√(2/L)·sin(nπx/L)"""
    if n < 1:
        raise InvalidParameterError(f"量子数 n 必须 ≥ 1，当前: {n}")
    x = np.asarray(x, dtype=float)
    return well_indicator(well, x) * math.sqrt(2.0 / well.L) * np.sin(n * math.pi * x / well.L)


def odd_packet(packet: GaussianPacket, x, hbar: float = 1.0):
    """Ψ̃(x,0) = Ψ(x,0) − Ψ(−x,0)"""
    x = np.asarray(x, dtype=float)
    return packet_value(packet, x, hbar) - packet_value(packet, -x, hbar)


# ==================== 求积路线 ====================
def _panel_count(well: WellConfig, packet: GaussianPacket, nmax: int) -> int:
    """面板数：每半周期至少一个面板，并解析波包宽度"""
    oscillation = (nmax * math.pi / well.L + abs(packet.pbar) / well.hbar) * well.L / math.pi
    return max(MIN_PANELS, math.ceil(oscillation), math.ceil(4.0 * well.L / packet.sx))


def _panel_nodes(L: float, panels: int, nodes_per_panel: int = NODES_PER_PANEL):
    """[0, L] 上复合 Gauss–Legendre 节点与权重"""
    if not isinstance(nodes_per_panel, int) or nodes_per_panel < 2:
        raise InvalidParameterError(f"每面板节点数必须为 ≥ 2 的整数，当前: {nodes_per_panel}")
    nodes, weights = leggauss(nodes_per_panel)
    h = L / panels
    left = np.arange(panels) * h
    x = (left[:, None] + 0.5 * h * (nodes[None, :] + 1.0)).ravel()
    w = np.tile(0.5 * h * weights, panels)
    return x, w


def _project(well: WellConfig, packet: GaussianPacket, nmax: int, panels: int,
             nodes_per_panel: int = NODES_PER_PANEL) -> np.ndarray:
    """在给定面板数下计算 c₁..c_nmax"""
    x, w = _panel_nodes(well.L, panels, nodes_per_panel)
    weighted = w * odd_packet(packet, x, well.hbar)
    coeffs = np.empty(nmax, dtype=complex)
    # 分块避免大 nmax 时的内存峰值
    for start in range(0, nmax, MODE_BLOCK):
        n = np.arange(start + 1, min(start + MODE_BLOCK, nmax) + 1)
        basis = np.sin(np.outer(n, x) * (math.pi / well.L))
        coeffs[start:start + len(n)] = basis @ weighted
    return math.sqrt(2.0 / well.L) * coeffs


def coeffs_quadrature(well: WellConfig, packet: GaussianPacket, nmax: int,
                      nodes_per_panel: int = NODES_PER_PANEL) -> ModeExpansion:
    """复合求积计算展开系数

    在 P 与 2P 面板下各算一次，逐系数差 ≤ 1e−12 视为收敛。

    Args:
        well: 势阱配置
        packet: 高斯波包
        nmax: 截断模式数
        nodes_per_panel: 每个面板的 Gauss–Legendre 节点数

    Returns:
        ModeExpansion（route="quadrature"）

    Raises:
        NumericAccuracyError: 多次加密后仍未收敛
    """
    if nmax < 1:
        raise InvalidParameterError(f"nmax 必须 ≥ 1，当前: {nmax}")

    panels = _panel_count(well, packet, nmax)
    coarse = _project(well, packet, nmax, panels, nodes_per_panel)
    for _ in range(MAX_REFINEMENTS):
        fine = _project(well, packet, nmax, 2 * panels, nodes_per_panel)
        error = float(np.max(np.abs(fine - coarse)))
        if error <= QUADRATURE_TOLERANCE:
            logger.debug(f"求积收敛: nmax={nmax}, 面板={2 * panels}, 误差={error:.2e}")
            return ModeExpansion(nmax=nmax, coeffs=fine,
                                 captured_norm=float(np.sum(np.abs(fine) ** 2)))
        panels *= 2
        coarse = fine

    raise NumericAccuracyError(f"系数求积未收敛: nmax={nmax}, 最后误差={error:.3e}")


# ==================== 解析路线 ====================
def gaussian_fourier(packet: GaussianPacket, k, hbar: float = 1.0):
    """F(k) = ∫ Ψ(x,0)·e^{ikx} dx（对整个实轴的闭式）"""
    k = np.asarray(k, dtype=float)
    sx = packet.sx
    shifted = k + packet.pbar / hbar
    norm = (2.0 * math.pi * sx ** 2) ** -0.25
    return (norm * 2.0 * math.sqrt(math.pi) * sx
            * np.exp(1j * shifted * packet.xbar) * np.exp(-(shifted * sx) ** 2))


def coeffs_analytic(well: WellConfig, packet: GaussianPacket, nmax: int) -> ModeExpansion:
    """±∞ 延拓闭式：cₙ = (1/2i)·√(2/L)·[F(nπ/L) − F(−nπ/L)]"""
    if nmax < 1:
        raise InvalidParameterError(f"nmax 必须 ≥ 1，当前: {nmax}")
    k = np.arange(1, nmax + 1) * math.pi / well.L
    diff = gaussian_fourier(packet, k, well.hbar) - gaussian_fourier(packet, -k, well.hbar)
    coeffs = math.sqrt(2.0 / well.L) * diff / 2j
    if packet.leaky:
        logger.debug("解析路线对泄漏波包只是近似")
    return ModeExpansion(nmax=nmax, coeffs=coeffs,
                         captured_norm=float(np.sum(np.abs(coeffs) ** 2)), route="analytic")


# ==================== 截断选择 ====================
def total_norm(well: WellConfig, packet: GaussianPacket,
               nodes_per_panel: int = NODES_PER_PANEL) -> float:
    """阱内初态 Ψ̃ 在 [0, L] 上的范数，即 Σ|cₙ|² 在 nmax→∞ 的极限"""
    panels = _panel_count(well, packet, 1)
    x, w = _panel_nodes(well.L, 2 * panels, nodes_per_panel)
    return float(np.sum(w * np.abs(odd_packet(packet, x, well.hbar)) ** 2))


def choose_nmax(well: WellConfig, packet: GaussianPacket, tail_tol: float,
                cap: int = NMAX_CAP, nodes_per_panel: int = NODES_PER_PANEL) -> int:
    """满足 total_norm − captured_norm ≤ tail_tol 的最小 2 的幂

    尾部以 Ψ̃ 在 [0, L] 上的实际范数为基准，对泄漏波包同样成立。

    Raises:
        TruncationError: 达到上限仍不满足
    """
    if not 0.0 < tail_tol < 1.0:
        raise InvalidParameterError(f"tail_tol 必须在 (0, 1) 内，当前: {tail_tol}")

    limit = total_norm(well, packet, nodes_per_panel)
    nmax = 1
    tail: Optional[float] = None
    while nmax <= cap:
        modes = coeffs_quadrature(well, packet, nmax, nodes_per_panel)
        tail = limit - modes.captured_norm
        if tail <= tail_tol:
            logger.debug(f"choose_nmax: nmax={nmax}, 尾部={tail:.3e}")
            return nmax
        nmax *= 2

    diagnostic: Dict[str, float] = {"cap": cap, "tail": tail, "tail_tol": tail_tol,
                                    "sp": packet.sp, "pbar": packet.pbar}
    raise TruncationError(f"nmax 超过上限 {cap} 仍未满足 tail_tol={tail_tol}", diagnostic)
