#!/usr/bin/env python3
# -*- coding: utf-8 -*-
"""
基础模型模块
自然单位约定（ħ = m = 1）、势阱与高斯波包配置、时空网格和地毯场数据类
"""

import math
import logging
from dataclasses import dataclass, field
from typing import Any, Dict, Optional, Tuple

import numpy as np

from .errors import InternalConsistencyError, InvalidParameterError

logger = logging.getLogger(__name__)

# 低于该约束比（到最近阱壁的距离 / s_x）时给出泄漏警告
CONFINEMENT_WARNING_RATIO = 4.0


def revival_period(L: float, hbar: float = 1.0, mass: float = 1.0) -> float:
    """完全复原时间 T = 4mL²/(πħ)"""
    return 4.0 * mass * L * L / (math.pi * hbar)


# ==================== 数据类 ====================
@dataclass(frozen=True)
class WellConfig:
    """无限深方势阱配置"""
    L: float
    hbar: float = 1.0
    mass: float = 1.0
    T: float = field(default=0.0)

    def __post_init__(self):
        for name in ("L", "hbar", "mass"):
            value = getattr(self, name)
            if not math.isfinite(value) or value <= 0:
                raise InvalidParameterError(f"{name} 必须为正有限数，当前: {value}")
        expected = revival_period(self.L, self.hbar, self.mass)
        if self.T == 0.0:
            object.__setattr__(self, "T", expected)
        elif self.T != expected:
            raise InternalConsistencyError(f"T={self.T} 与 4mL²/(πħ)={expected} 不一致")

    def to_dict(self) -> Dict[str, float]:
        return {"L": self.L, "hbar": self.hbar, "mass": self.mass, "T": self.T}


@dataclass(frozen=True)
class GaussianPacket:
    """高斯初始波包（含派生动量宽度与约束诊断）"""
    xbar: float
    sx: float
    pbar: float
    sp: float
    confinement_ratio: float

    @property
    def leaky(self) -> bool:
        """约束比低于阈值时，±∞ 积分延拓误差可见"""
        return self.confinement_ratio < CONFINEMENT_WARNING_RATIO

    def to_dict(self) -> Dict[str, float]:
        return {
            "xbar": self.xbar, "sx": self.sx, "pbar": self.pbar,
            "sp": self.sp, "confinement_ratio": self.confinement_ratio,
        }


@dataclass(frozen=True)
class SpaceTimeGrid:
    """时空网格，两端点均包含在内

    x 轴总是均匀的；t 轴默认均匀，给出 t_samples 时按给定时刻取样。
    单点轴要求区间退化为一点（lo == hi）。
    """
    nx: int
    nt: int
    x_lo: float
    x_hi: float
    t_lo: float
    t_hi: float
    t_samples: Optional[Tuple[float, ...]] = None

    def __post_init__(self):
        if self.nx < 1 or self.nt < 1:
            raise InvalidParameterError(f"网格点数必须 ≥ 1，当前 nx={self.nx}, nt={self.nt}")
        _check_axis("x", self.nx, self.x_lo, self.x_hi)
        if self.t_samples is None:
            _check_axis("t", self.nt, self.t_lo, self.t_hi)
            return

        samples = tuple(float(v) for v in self.t_samples)
        if len(samples) != self.nt or not all(math.isfinite(v) for v in samples):
            raise InvalidParameterError(f"t_samples 须为 {self.nt} 个有限时刻")
        if (min(samples), max(samples)) != (self.t_lo, self.t_hi):
            raise InvalidParameterError("t_lo/t_hi 必须等于 t_samples 的最小/最大值")
        object.__setattr__(self, "t_samples", samples)

    @property
    def x(self) -> np.ndarray:
        return np.linspace(self.x_lo, self.x_hi, self.nx)

    @property
    def t(self) -> np.ndarray:
        if self.t_samples is not None:
            return np.array(self.t_samples)
        return np.linspace(self.t_lo, self.t_hi, self.nt)

    @property
    def dx(self) -> float:
        if self.nx < 2:
            raise InvalidParameterError("单点 x 轴没有步长")
        return (self.x_hi - self.x_lo) / (self.nx - 1)

    def to_dict(self) -> Dict[str, Any]:
        data = {
            "nx": self.nx, "nt": self.nt,
            "x_lo": self.x_lo, "x_hi": self.x_hi,
            "t_lo": self.t_lo, "t_hi": self.t_hi,
        }
        if self.t_samples is not None:
            data["t_samples"] = list(self.t_samples)
        return data

    @classmethod
    def from_times(cls, nx: int, x_lo: float, x_hi: float, times) -> "SpaceTimeGrid":
        """按给定时刻序列建网格（可单点、可非均匀）"""
        samples = tuple(float(v) for v in np.atleast_1d(np.asarray(times, dtype=float)))
        if not samples:
            raise InvalidParameterError("times 不能为空")
        return cls(nx=nx, nt=len(samples), x_lo=x_lo, x_hi=x_hi,
                   t_lo=min(samples), t_hi=max(samples), t_samples=samples)


def _check_axis(name: str, count: int, lo: float, hi: float) -> None:
    if count == 1:
        if lo != hi:
            raise InvalidParameterError(f"单点 {name} 轴要求 {name}_lo == {name}_hi，当前: [{lo}, {hi}]")
    elif not lo < hi:
        raise InvalidParameterError(f"{name} 区间无效: [{lo}, {hi}]")


@dataclass(frozen=True)
class CarpetField:
    """时空二维实值场，values[i, j] 对应 (x_i, t_j)"""
    grid: SpaceTimeGrid
    values: np.ndarray
    signed: bool = False

    def __post_init__(self):
        values = np.array(self.values, dtype=float)
        if values.shape != (self.grid.nx, self.grid.nt):
            raise InvalidParameterError(
                f"场形状 {values.shape} 与网格 ({self.grid.nx}, {self.grid.nt}) 不符")
        if not np.all(np.isfinite(values)):
            raise InternalConsistencyError("场中存在非有限值")
        if not self.signed and np.any(values < 0):
            raise InternalConsistencyError("非符号场出现负值")
        values.setflags(write=False)
        object.__setattr__(self, "values", values)

    def column(self, j: int) -> np.ndarray:
        """取第 j 个时间列"""
        return self.values[:, j]


# ==================== 构造与求值 ====================
def make_well(L: float) -> WellConfig:
    """按自然单位（ħ = m = 1）构造势阱"""
    if not isinstance(L, (int, float)) or not math.isfinite(L) or L <= 0:
        raise InvalidParameterError(f"势阱宽度 L 必须为正有限数，当前: {L}")
    return WellConfig(L=float(L))


def make_packet(well: WellConfig, xbar_over_L: float, sx_over_L: float,
                pbar_in_hbar_over_L: float) -> GaussianPacket:
    """由无量纲比值构造高斯波包

    Args:
        well: 势阱配置
        xbar_over_L: 平均位置 x̄/L，须在 (0, 1) 内
        sx_over_L: 位置标准差 s_x/L，须为正
        pbar_in_hbar_over_L: 平均动量 p̄/(ħ/L)

    Returns:
        GaussianPacket，s_p 取最小不确定值 ħ/(2s_x)
    """
    if not math.isfinite(xbar_over_L) or not 0.0 < xbar_over_L < 1.0:
        raise InvalidParameterError(f"x̄/L 必须在 (0, 1) 内，当前: {xbar_over_L}")
    if not math.isfinite(sx_over_L) or sx_over_L <= 0:
        raise InvalidParameterError(f"s_x/L 必须为正，当前: {sx_over_L}")
    if not math.isfinite(pbar_in_hbar_over_L):
        raise InvalidParameterError(f"p̄L/ħ 必须为有限数，当前: {pbar_in_hbar_over_L}")

    xbar = xbar_over_L * well.L
    sx = sx_over_L * well.L
    pbar = pbar_in_hbar_over_L * well.hbar / well.L
    sp = well.hbar / (2.0 * sx)
    ratio = min(xbar, well.L - xbar) / sx

    packet = GaussianPacket(xbar=xbar, sx=sx, pbar=pbar, sp=sp, confinement_ratio=ratio)
    if packet.leaky:
        logger.warning(f"波包约束比 {ratio:.3f} < {CONFINEMENT_WARNING_RATIO}，"
                       f"±∞ 延拓会带来截断误差")
    return packet


def packet_value(packet: GaussianPacket, x, hbar: float = 1.0):
    """初始波函数 Ψ(x,0)，定义在整个实轴上（阱指示函数在别处施加）"""
    x = np.asarray(x, dtype=float)
    norm = (2.0 * math.pi * packet.sx ** 2) ** -0.25
    envelope = np.exp(-((x - packet.xbar) ** 2) / (4.0 * packet.sx ** 2))
    return norm * envelope * np.exp(1j * packet.pbar * x / hbar)


def well_indicator(well: WellConfig, x) -> np.ndarray:
    """η_x：x ∈ (0, L) 时为1，否则为0"""
    x = np.asarray(x, dtype=float)
    return ((x > 0.0) & (x < well.L)).astype(float)


def carpet_grid(well: WellConfig, nx: int, nt: int, t_max_over_T: float = 1.0,
                t_min_over_T: float = 0.0) -> SpaceTimeGrid:
    """常用网格：x ∈ [0, L]，t ∈ [t_min·T, t_max·T]"""
    return SpaceTimeGrid(nx=nx, nt=nt, x_lo=0.0, x_hi=well.L,
                         t_lo=t_min_over_T * well.T, t_hi=t_max_over_T * well.T)
