#!/usr/bin/env python3
# -*- coding: utf-8 -*-
"""
分数复原模块
二次高斯和 S(n,α,β)、相位 Θ、奇延拓 Φ 与分数复原闭式重构，
并以直接本征态演化作交叉验证
"""

import math
import logging
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Tuple

import numpy as np

from .errors import InternalConsistencyError, InvalidParameterError, NonCoprimeError
from .eigenbasis import ModeExpansion, odd_packet
from .evolution import l2_distance, wavefunction_at
from .model import GaussianPacket, WellConfig, well_indicator

logger = logging.getLogger(__name__)

MAGNITUDE_TOLERANCE = 1e-9
SWEEP_TOLERANCE = 1e-12
IMAGE_TAIL = 1e-15


# ==================== 数据类 ====================
@dataclass(frozen=True)
class RevivalFraction:
    """复原分数 α/β，复原时刻 t = (α/β)(T/2)"""
    alpha: int
    beta: int
    q_alpha: int
    original_alpha: Optional[int] = None

    @property
    def reduced(self) -> bool:
        """输入 α 是否经过模 2β 约化"""
        return self.original_alpha is not None


@dataclass(frozen=True)
class GaussSumTable:
    """n = 1..β 的高斯和与主辐角"""
    fraction: RevivalFraction
    values: np.ndarray
    phases: np.ndarray

    def phase(self, n: int) -> float:
        """Θ(n)，利用周期性 Θ(n + β) = Θ(n)"""
        return float(self.phases[(n - 1) % self.fraction.beta])

    @property
    def max_deviation(self) -> float:
        return float(np.max(np.abs(np.abs(self.values) - math.sqrt(self.fraction.beta))))


@dataclass
class GaussSweepReport:
    """|S| = √β 穷举检查结果"""
    beta_max: int
    pairs_checked: int = 0
    sums_checked: int = 0
    max_deviation: float = 0.0
    worst_case: Tuple[int, int, int] = (0, 0, 0)
    by_parity: Dict[str, float] = field(default_factory=dict)
    violations: List[Tuple[int, int, int, float]] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return not self.violations


# ==================== 高斯和 ====================
def make_fraction(alpha: int, beta: int) -> RevivalFraction:
    """构造并规范化复原分数

    α 按相位周期 2β 约化到 1..2β，约化后检查互质。

    Raises:
        InvalidParameterError: α 或 β 小于1
        NonCoprimeError: gcd(α, β) ≠ 1
    """
    if int(beta) != beta or beta < 1:
        raise InvalidParameterError(f"β 必须为正整数，当前: {beta}")
    if int(alpha) != alpha or alpha < 1:
        raise InvalidParameterError(f"α 必须为正整数，当前: {alpha}")
    alpha, beta = int(alpha), int(beta)

    canonical = (alpha - 1) % (2 * beta) + 1
    divisor = math.gcd(canonical, beta)
    if divisor != 1:
        raise NonCoprimeError(alpha, beta, divisor)

    original = None
    if canonical != alpha:
        original = alpha
        logger.info(f"α={alpha} 约化为 {canonical}（周期 2β={2 * beta}）")
    return RevivalFraction(alpha=canonical, beta=beta, q_alpha=canonical % 2,
                           original_alpha=original)


def _gauss_sums(fraction: RevivalFraction, ns) -> np.ndarray:
    """对一组 n 计算 S(n,α,β)，相位在整数域内约化模 2β"""
    alpha, beta, q = fraction.alpha, fraction.beta, fraction.q_alpha
    # 在 Python 整数域取模，n 可为任意整数
    ns = np.array([int(n) % beta for n in ns], dtype=np.int64)
    j = np.arange(1, beta + 1, dtype=np.int64)
    residue = np.mod(j[None, :] * q * beta + 2 * np.outer(ns, j) - (j * j * alpha)[None, :],
                     2 * beta)
    return np.exp(1j * math.pi * residue / beta).sum(axis=1)


def gauss_sum(fraction: RevivalFraction, n: int) -> complex:
    """S(n,α,β) = Σ_{j=1..β} exp[iπj(q_α + 2n/β − jα/β)]"""
    return complex(_gauss_sums(fraction, [n])[0])


def principal_phase(values) -> np.ndarray:
    """主辐角，取值 (−π, π]"""
    phases = np.angle(np.asarray(values, dtype=complex))
    return np.where(phases <= -math.pi, math.pi, phases)


def gauss_table(fraction: RevivalFraction) -> GaussSumTable:
    """制表 n = 1..β 并断言 |S| = √β

    Raises:
        InternalConsistencyError: 模长偏差超过 1e−9
    """
    values = _gauss_sums(fraction, np.arange(1, fraction.beta + 1))
    table = GaussSumTable(fraction=fraction, values=values, phases=principal_phase(values))
    deviation = table.max_deviation
    if deviation > MAGNITUDE_TOLERANCE:
        raise InternalConsistencyError(
            f"|S| 偏离 √β: α={fraction.alpha}, β={fraction.beta}, 偏差={deviation:.3e}")
    return table


def _sweep_beta(beta: int) -> List[Tuple[int, int, float]]:
    """单个 β 下所有互质 α 的最大偏差，返回 [(α, n_worst, 偏差)]"""
    results = []
    ns = np.arange(beta)
    root = math.sqrt(beta)
    for alpha in range(1, 2 * beta):
        if math.gcd(alpha, beta) != 1:
            continue
        fraction = RevivalFraction(alpha=alpha, beta=beta, q_alpha=alpha % 2)
        deviations = np.abs(np.abs(_gauss_sums(fraction, ns)) - root)
        worst = int(np.argmax(deviations))
        results.append((alpha, worst, float(deviations[worst])))
    return results


def gauss_sweep(beta_max: int, max_workers: Optional[int] = None) -> GaussSweepReport:
    """对所有互质 (α, β)，β ≤ beta_max，1 ≤ α < 2β，n = 0..β−1 检查 |S| = √β

    违反时只记录不抛出，按 (α 奇偶, β 奇偶) 分类汇总最大偏差。
    """
    if beta_max < 1:
        raise InvalidParameterError(f"beta_max 必须 ≥ 1，当前: {beta_max}")

    betas = list(range(1, beta_max + 1))
    if max_workers and max_workers > 1:
        with ThreadPoolExecutor(max_workers=max_workers) as executor:
            per_beta = list(executor.map(_sweep_beta, betas))
    else:
        per_beta = [_sweep_beta(b) for b in betas]

    report = GaussSweepReport(beta_max=beta_max)
    parity_name = ("even", "odd")
    for beta, results in zip(betas, per_beta):
        for alpha, n, deviation in results:
            report.pairs_checked += 1
            report.sums_checked += beta
            key = f"alpha_{parity_name[alpha % 2]}/beta_{parity_name[beta % 2]}"
            report.by_parity[key] = max(report.by_parity.get(key, 0.0), deviation)
            if deviation > report.max_deviation:
                report.max_deviation = deviation
                report.worst_case = (alpha, beta, n)
            if deviation > SWEEP_TOLERANCE:
                report.violations.append((alpha, beta, n, deviation))

    logger.info(f"高斯和扫描: {report.pairs_checked} 组, 最大偏差 {report.max_deviation:.3e}")
    return report


# ==================== 奇延拓与重构 ====================
def default_image_count(well: WellConfig, packet: GaussianPacket) -> int:
    """最远省略镜像贡献 < 1e−15 峰值所需的镜像数"""
    reach = math.sqrt(4.0 * math.log(1.0 / IMAGE_TAIL)) * packet.sx
    return max(1, math.ceil(reach / (2.0 * well.L)) + 1)


def odd_extension_value(well: WellConfig, packet: GaussianPacket, x,
                        n_images: Optional[int] = None):
    """Φ(x,0) = Σ_{m=−M..M} Ψ̃(x − 2Lm, 0)

    默认先把 x 约化到 [−L, L) 再按尾部规则取 M；显式给出 n_images 时直接求和。
    """
    x = np.asarray(x, dtype=float)
    L = well.L
    if n_images is None:
        images = default_image_count(well, packet)
        x = x - 2.0 * L * np.floor((x + L) / (2.0 * L))
    else:
        if n_images < 0:
            raise InvalidParameterError(f"n_images 必须 ≥ 0，当前: {n_images}")
        images = n_images

    total = np.zeros(x.shape, dtype=complex)
    for m in range(-images, images + 1):
        total = total + odd_packet(packet, x - 2.0 * L * m, well.hbar)
    return total[()] if total.ndim == 0 else total


def fractional_reconstruction(well: WellConfig, packet: GaussianPacket,
                              fraction: RevivalFraction, x,
                              table: Optional[GaussSumTable] = None):
    """(η_x/√β)·Σ_{n=1..β} Φ(x − L·q_α − 2Ln/β, 0)·e^{iΘ(n)}"""
    x = np.asarray(x, dtype=float)
    if table is None:
        table = gauss_table(fraction)
    L, beta = well.L, fraction.beta

    total = np.zeros(x.shape, dtype=complex)
    for n in range(1, beta + 1):
        shift = L * fraction.q_alpha + 2.0 * L * n / beta
        total = total + odd_extension_value(well, packet, x - shift) * np.exp(1j * table.phase(n))
    return well_indicator(well, x) * total / math.sqrt(beta)


def revival_time(fraction: RevivalFraction, well: WellConfig) -> float:
    """t = (α/β)(T/2)"""
    return fraction.alpha / fraction.beta * well.T / 2.0


def reconstruction_error(well: WellConfig, packet: GaussianPacket, modes: ModeExpansion,
                         fraction: RevivalFraction, x_grid) -> float:
    """闭式重构与直接演化在 x 网格上的 L² 距离"""
    x_grid = np.asarray(x_grid, dtype=float)
    if x_grid.ndim != 1 or len(x_grid) < 2:
        raise InvalidParameterError("x_grid 必须是至少两个点的一维均匀网格")
    dx = float(x_grid[1] - x_grid[0])
    reconstructed = fractional_reconstruction(well, packet, fraction, x_grid)
    direct = wavefunction_at(well, modes, x_grid, revival_time(fraction, well))
    return l2_distance(reconstructed, direct, dx)


# ==================== 计数 ====================
def count_packets(density, threshold_frac: float = 0.01) -> int:
    """统计超过 threshold_frac·max 的严格局部极大值，平台只计一次"""
    if not 0.0 < threshold_frac < 1.0:
        raise InvalidParameterError(f"threshold_frac 必须在 (0, 1) 内，当前: {threshold_frac}")
    density = np.asarray(density, dtype=float)
    peak = float(np.max(density)) if density.size else 0.0
    if peak <= 0.0:
        raise InvalidParameterError("密度全为0，无法计数")

    # 合并相等值的平台
    change = np.flatnonzero(np.diff(density) != 0) + 1
    starts = np.concatenate(([0], change))
    levels = density[starts]
    padded = np.concatenate(([-np.inf], levels, [-np.inf]))
    is_max = (padded[1:-1] > padded[:-2]) & (padded[1:-1] > padded[2:])
    return int(np.count_nonzero(is_max & (levels > threshold_frac * peak)))
