#!/usr/bin/env python3
# -*- coding: utf-8 -*-
"""
渠道分解模块
Wigner 函数把 |Ψ(x,t)|² 拆成背景项 B±ⱼₖ 与干涉项 Iⱼₖ（高斯闭式），
提供单项场渲染、x̃ = 0 直线族，以及与直接密度的重求和比较
"""

import math
import logging
from dataclasses import dataclass
from typing import Optional, Tuple

import numpy as np

from .errors import InvalidParameterError
from .model import CarpetField, GaussianPacket, SpaceTimeGrid, WellConfig, well_indicator

logger = logging.getLogger(__name__)

DEFAULT_N_SIGMA = 8.0
TERM_KINDS = ("background_plus", "background_minus", "interference", "all")

IntRange = Tuple[int, int]


# ==================== 数据类 ====================
@dataclass(frozen=True)
class CanalIndex:
    j: int
    k: int


@dataclass(frozen=True)
class TildeCoords:
    """剪切后的相空间坐标 (x̃, p̃)"""
    x_tilde: np.ndarray
    p_tilde: float


@dataclass(frozen=True)
class TermSelection:
    """单项场的选择：项类型与 j、k 闭区间（None 表示自动）"""
    kind: str = "all"
    j_range: Optional[IntRange] = None
    k_range: Optional[IntRange] = None

    def __post_init__(self):
        if self.kind not in TERM_KINDS:
            raise InvalidParameterError(f"未知项类型: {self.kind}，可选 {TERM_KINDS}")
        for name in ("j_range", "k_range"):
            bounds = getattr(self, name)
            if bounds is not None and bounds[0] > bounds[1]:
                raise InvalidParameterError(f"{name} 为空: {bounds}")


# ==================== 单项 ====================
def gaussian_factor(theta):
    """G(θ) = exp(−θ²/2)"""
    return np.exp(-0.5 * np.square(theta))


def parity_sign(j, k):
    """(−1)^{jk}"""
    return 1.0 - 2.0 * np.mod(np.multiply(j, k), 2)


def tilde_coords(well: WellConfig, index: CanalIndex, x, t) -> TildeCoords:
    """x̃ = (x/L − j·t/(T/2) − k)·L，p̃ = (πħ/2L)·j"""
    x = np.asarray(x, dtype=float)
    t = np.asarray(t, dtype=float)
    x_tilde = (x / well.L - index.j * t / (well.T / 2.0) - index.k) * well.L
    p_tilde = math.pi * well.hbar / (2.0 * well.L) * index.j
    return TildeCoords(x_tilde=x_tilde, p_tilde=p_tilde)


def _background(well, packet, sign, j, k, x_tilde, p_tilde):
    return (parity_sign(j, k) / (math.pi * well.hbar)
            * gaussian_factor((sign * x_tilde - packet.xbar) / packet.sx)
            * gaussian_factor((sign * p_tilde - packet.pbar) / packet.sp))


def _interference(well, packet, j, k, x_tilde, p_tilde):
    phase = (packet.xbar * p_tilde - packet.pbar * x_tilde) / (well.hbar / 2.0)
    return (-2.0 * parity_sign(j, k) / (math.pi * well.hbar)
            * gaussian_factor(x_tilde / packet.sx)
            * gaussian_factor(p_tilde / packet.sp)
            * np.cos(phase))


def background_term(well: WellConfig, packet: GaussianPacket, index: CanalIndex,
                    sign: int, x, t):
    """B±ⱼₖ = (−1)^{jk}/(πħ)·G((±x̃ − x̄)/s_x)·G((±p̃ − p̄)/s_p)"""
    if sign not in (1, -1):
        raise InvalidParameterError(f"sign 只能是 ±1，当前: {sign}")
    coords = tilde_coords(well, index, x, t)
    return _background(well, packet, sign, index.j, index.k, coords.x_tilde, coords.p_tilde)


def interference_term(well: WellConfig, packet: GaussianPacket, index: CanalIndex, x, t):
    """Iⱼₖ = −2(−1)^{jk}/(πħ)·G(x̃/s_x)·G(p̃/s_p)·cos[(x̄p̃ − p̄x̃)/(ħ/2)]"""
    coords = tilde_coords(well, index, x, t)
    return _interference(well, packet, index.j, index.k, coords.x_tilde, coords.p_tilde)


# ==================== 截断 ====================
def _j_limit(well: WellConfig, packet: GaussianPacket, n_sigma: float) -> int:
    """|p̃| ≤ |p̄| + n_sigma·s_p 覆盖背景项与干涉项的动量支撑"""
    reach = abs(packet.pbar) + n_sigma * packet.sp
    # 整数边界处的舍入不能丢掉最外层的 j
    return int(math.floor(reach * 2.0 * well.L / (math.pi * well.hbar) + 1e-9))


def _x_reach(well: WellConfig, packet: GaussianPacket, n_sigma: float) -> float:
    """|x̃|/L 的支撑半径：背景项中心在 ±x̄，干涉项在0"""
    return (packet.xbar + n_sigma * packet.sx) / well.L


def term_bounds(well: WellConfig, packet: GaussianPacket, grid: SpaceTimeGrid,
                n_sigma: float = DEFAULT_N_SIGMA) -> Tuple[IntRange, IntRange]:
    """无穷双重求和的截断范围

    Returns:
        (j_range, k_range)，均为闭区间
    """
    if not n_sigma > 0:
        raise InvalidParameterError(f"n_sigma 必须为正，当前: {n_sigma}")
    j_max = _j_limit(well, packet, n_sigma)
    r = _x_reach(well, packet, n_sigma)

    # u = x/L − 2jt/T 在网格与 j 范围上的取值区间
    shear = [2.0 * j * t / well.T for j in (-j_max, j_max) for t in (grid.t_lo, grid.t_hi)]
    u_lo = grid.x_lo / well.L - max(shear)
    u_hi = grid.x_hi / well.L - min(shear)
    k_range = (int(math.ceil(u_lo - r)), int(math.floor(u_hi + r)))
    logger.debug(f"截断范围: j=±{j_max}, k={k_range}")
    return (-j_max, j_max), k_range


# ==================== 求和 ====================
def _sum_terms(well: WellConfig, packet: GaussianPacket, kind: str, x: np.ndarray,
               t: np.ndarray, j_range: IntRange, k_range: IntRange,
               n_sigma: float) -> np.ndarray:
    """对 (x, t) 广播数组按 j 向量化求和；每个 j 只保留 |x̃| 可达支撑内的 k"""
    r = _x_reach(well, packet, n_sigma)
    depth = int(math.ceil(r)) + 1
    p_unit = math.pi * well.hbar / (2.0 * well.L)
    total = np.zeros(np.broadcast(x, t).shape)

    for j in range(j_range[0], j_range[1] + 1):
        p_tilde = p_unit * j
        u = x / well.L - j * t / (well.T / 2.0)
        base = np.floor(u)
        for d in range(-depth, depth + 1):
            k = base + d
            inside = (k >= k_range[0]) & (k <= k_range[1])
            if not np.any(inside):
                continue
            x_tilde = (u - k) * well.L
            if kind in ("background_plus", "all"):
                total += np.where(inside, _background(well, packet, 1, j, k, x_tilde, p_tilde), 0.0)
            if kind in ("background_minus", "all"):
                total += np.where(inside, _background(well, packet, -1, j, k, x_tilde, p_tilde), 0.0)
            if kind in ("interference", "all"):
                total += np.where(inside, _interference(well, packet, j, k, x_tilde, p_tilde), 0.0)
    return total


def reconstruct_density(well: WellConfig, packet: GaussianPacket, x, t,
                        n_sigma: float = DEFAULT_N_SIGMA):
    """|Ψ|² = η_x·(πħ/2L)·Σⱼₖ (B⁺ + B⁻ + I)，双重求和按 n_sigma 截断"""
    if not n_sigma > 0:
        raise InvalidParameterError(f"n_sigma 必须为正，当前: {n_sigma}")
    x = np.asarray(x, dtype=float)
    t = np.asarray(t, dtype=float)
    j_max = _j_limit(well, packet, n_sigma)
    unbounded = (-(2 ** 62), 2 ** 62)
    total = _sum_terms(well, packet, "all", x, t, (-j_max, j_max), unbounded, n_sigma)
    density = well_indicator(well, x) * (math.pi * well.hbar / (2.0 * well.L)) * total
    return density[()] if density.ndim == 0 else density


def term_field(well: WellConfig, packet: GaussianPacket, selection: TermSelection,
               grid: SpaceTimeGrid, n_sigma: float = DEFAULT_N_SIGMA) -> CarpetField:
    """所选部分和的原始符号场（无 η_x，无 πħ/2L 缩放）"""
    auto_j, auto_k = term_bounds(well, packet, grid, n_sigma)
    j_range = selection.j_range if selection.j_range is not None else auto_j
    k_range = selection.k_range if selection.k_range is not None else auto_k

    x = grid.x[:, None]
    t = grid.t[None, :]
    values = _sum_terms(well, packet, selection.kind, x, t, j_range, k_range, n_sigma)
    logger.debug(f"单项场: {selection.kind}, j={j_range}, k={k_range}")
    return CarpetField(grid=grid, values=values, signed=True)


def density_field(well: WellConfig, packet: GaussianPacket, grid: SpaceTimeGrid,
                  n_sigma: float = DEFAULT_N_SIGMA) -> CarpetField:
    """网格上的重求和密度"""
    values = reconstruct_density(well, packet, grid.x[:, None], grid.t[None, :], n_sigma)
    # 截断求和可在零密度处留下 1e−16 量级的负值
    return CarpetField(grid=grid, values=np.clip(values, 0.0, None), signed=False)


def _line_mask(well: WellConfig, families, grid: SpaceTimeGrid) -> CarpetField:
    x = grid.x[:, None]
    t = grid.t[None, :]
    half_step = grid.dx / 2.0
    mask = np.zeros((grid.nx, grid.nt))
    for j, (k_lo, k_hi) in families:
        for k in range(k_lo, k_hi + 1):
            coords = tilde_coords(well, CanalIndex(j, k), x, t)
            mask[np.abs(coords.x_tilde) <= half_step] = 1.0
    return CarpetField(grid=grid, values=mask, signed=False)


def canal_lines(well: WellConfig, j_range: IntRange, k_range: IntRange,
                grid: SpaceTimeGrid) -> CarpetField:
    """x̃ = 0 直线族的 0/1 掩码：|x̃| ≤ Δx/2 处为1"""
    if j_range[0] > j_range[1] or k_range[0] > k_range[1]:
        raise InvalidParameterError(f"直线族范围为空: j={j_range}, k={k_range}")
    families = [(j, k_range) for j in range(j_range[0], j_range[1] + 1)]
    return _line_mask(well, families, grid)


def figure_canal_lines(well: WellConfig, grid: SpaceTimeGrid, j_extent: int = 4) -> CarpetField:
    """默认直线族：j ∈ [−j_extent, j_extent]，k ∈ [−|j|, |j| + 1]"""
    families = [(j, (-abs(j), abs(j) + 1)) for j in range(-j_extent, j_extent + 1)]
    return _line_mask(well, families, grid)
