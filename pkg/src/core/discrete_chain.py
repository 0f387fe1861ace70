#!/usr/bin/env python3
# -*- coding: utf-8 -*-
"""
离散链模块
最近邻紧束缚链：I 型离散正弦变换本征基、对角传播子、离散高斯初态、
离散地毯，以及与连续势阱之间的复原时间映射
"""

import math
import logging
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Optional, Sequence, Tuple

import numpy as np
from scipy import fft as sp_fft
from scipy.optimize import minimize_scalar

from .errors import DegenerateStateError, InternalConsistencyError, InvalidParameterError
from .eigenbasis import ModeExpansion
from .evolution import wavefunction_at
from .model import CarpetField, GaussianPacket, SpaceTimeGrid, WellConfig

logger = logging.getLogger(__name__)

NORM_TOLERANCE = 1e-10
TRANSFORM_METHODS = ("fast", "dense", "scipy")


# ==================== 数据类 ====================
@dataclass(frozen=True)
class DiscreteChain:
    """N 个格点、耦合 J 的开链，时间单位 t0 = ħ/J"""
    N: int
    J: float = 1.0
    hbar: float = 1.0

    def __post_init__(self):
        if int(self.N) != self.N or self.N < 1:
            raise InvalidParameterError(f"格点数 N 必须为正整数，当前: {self.N}")
        if not math.isfinite(self.J) or self.J <= 0:
            raise InvalidParameterError(f"耦合 J 必须为正，当前: {self.J}")

    @property
    def t0(self) -> float:
        return self.hbar / self.J

    @property
    def revival_period(self) -> float:
        """T_d = 4ħ(N+1)²/(πJ)"""
        return 4.0 * self.hbar * (self.N + 1) ** 2 / (math.pi * self.J)

    def site_positions(self, well: WellConfig) -> np.ndarray:
        """xₙ = nL/N，n = 1..N"""
        return np.arange(1, self.N + 1) * well.L / self.N


@dataclass(frozen=True)
class DiscreteState:
    """N 个格点上的归一化复振幅"""
    amps: np.ndarray

    def __post_init__(self):
        amps = np.array(self.amps, dtype=complex)
        if amps.ndim != 1 or amps.size == 0:
            raise InvalidParameterError(f"振幅必须是非空一维数组，当前形状: {amps.shape}")
        norm = float(np.sum(np.abs(amps) ** 2))
        if abs(norm - 1.0) > NORM_TOLERANCE:
            raise InternalConsistencyError(f"离散态未归一化: Σ|a|² = {norm!r}")
        amps.setflags(write=False)
        object.__setattr__(self, "amps", amps)

    @property
    def density(self) -> np.ndarray:
        return np.abs(self.amps) ** 2

    @property
    def norm(self) -> float:
        return float(np.sum(self.density))


# ==================== 初态 ====================
def discrete_initial(chain: DiscreteChain, well: WellConfig, packet: GaussianPacket) -> DiscreteState:
    """A·exp[−(xₙ − x̄)²/(4s_x²)]·exp(ip̄xₙ/ħ)，A 使范数恰为1

    Raises:
        DegenerateStateError: 所有采样值下溢为0
    """
    x = chain.site_positions(well)
    envelope = np.exp(-((x - packet.xbar) ** 2) / (4.0 * packet.sx ** 2))
    weight = float(np.sum(envelope ** 2))
    if weight == 0.0:
        raise DegenerateStateError(
            f"N={chain.N} 时离散高斯全部下溢为0（x̄={packet.xbar}, s_x={packet.sx}）")
    amps = envelope * np.exp(1j * packet.pbar * x / well.hbar) / math.sqrt(weight)
    return DiscreteState(amps=amps)


# ==================== 正弦变换 ====================
def sine_matrix(N: int) -> np.ndarray:
    """⟨j|Û|k⟩ = √(2/(N+1))·sin(πjk/(N+1))"""
    idx = np.arange(1, N + 1)
    return math.sqrt(2.0 / (N + 1)) * np.sin(math.pi * np.outer(idx, idx) / (N + 1))


def dst_dense(values) -> np.ndarray:
    """O(N²) 稠密参考实现"""
    values = np.asarray(values, dtype=complex)
    return sine_matrix(values.shape[0]) @ values


def dst_fast(values) -> np.ndarray:
    """O(N log N)：长度 2(N+1) 的奇对称延拓后做复 FFT，沿第0轴"""
    values = np.asarray(values, dtype=complex)
    N = values.shape[0]
    size = 2 * (N + 1)
    extended = np.zeros((size,) + values.shape[1:], dtype=complex)
    extended[1:N + 1] = values
    extended[N + 2:] = -values[::-1]
    spectrum = np.fft.fft(extended, axis=0)[1:N + 1]
    return (0.5j * math.sqrt(2.0 / (N + 1))) * spectrum


def dst_scipy(values) -> np.ndarray:
    """scipy.fft 的正交归一 DST-I，作独立第三路实现"""
    values = np.asarray(values, dtype=complex)
    return sp_fft.dst(values, type=1, norm="ortho", axis=0)


_TRANSFORMS = {"fast": dst_fast, "dense": dst_dense, "scipy": dst_scipy}


def dst_apply(chain: DiscreteChain, state, method: str = "fast") -> np.ndarray:
    """对长度 N 的向量施加 Û

    Args:
        chain: 离散链
        state: DiscreteState 或长度 N 的数组
        method: "fast"、"dense" 或 "scipy"

    Returns:
        变换后的系数向量
    """
    if method not in _TRANSFORMS:
        raise InvalidParameterError(f"未知变换方法: {method}，可选 {TRANSFORM_METHODS}")
    values = state.amps if isinstance(state, DiscreteState) else np.asarray(state, dtype=complex)
    if values.shape[0] != chain.N:
        raise InvalidParameterError(f"向量长度 {values.shape[0]} 与 N={chain.N} 不符")
    return _TRANSFORMS[method](values)


# ==================== 能谱与演化 ====================
def eigenvalue(chain: DiscreteChain, n: int) -> float:
    """εₙ = −J·cos(πn/(N+1))，按 ε_{N+1−n} = −εₙ 精确对称求值"""
    if int(n) != n or not 1 <= n <= chain.N:
        raise InvalidParameterError(f"n 必须在 1..{chain.N}，当前: {n}")
    return float(eigenvalues(chain)[int(n) - 1])


def eigenvalues(chain: DiscreteChain) -> np.ndarray:
    """全部 εₙ，n = 1..N"""
    n = np.arange(1, chain.N + 1)
    mirrored = chain.N + 1 - n
    lower = 2 * n < chain.N + 1
    angle = math.pi * np.minimum(n, mirrored) / (chain.N + 1)
    values = np.where(lower, -chain.J * np.cos(angle), chain.J * np.cos(angle))
    return np.where(2 * n == chain.N + 1, 0.0, values)


def _propagate(chain: DiscreteChain, coeffs: np.ndarray, times) -> np.ndarray:
    """Û·D̂(t)·(Û ψ₀)，每列一个时刻"""
    phases = np.exp(-1j * np.outer(eigenvalues(chain), np.atleast_1d(times)) / chain.hbar)
    return dst_fast(coeffs[:, None] * phases)


def evolve_discrete(chain: DiscreteChain, state: DiscreteState, t: float) -> DiscreteState:
    """|Ψ_t⟩ = Û·D̂·Û|Ψ₀⟩（Û 实对称且对合，Û† = Û）"""
    if not math.isfinite(t):
        raise InvalidParameterError(f"时间必须有限，当前: {t}")
    coeffs = dst_apply(chain, state)
    return DiscreteState(amps=_propagate(chain, coeffs, t)[:, 0])


def state_fidelity(chain: DiscreteChain, state: DiscreteState, t) -> np.ndarray:
    """|⟨Ψ₀|Ψ_t⟩|² = |Σ |cₙ|²·e^{−iεₙt/ħ}|²"""
    weights = np.abs(dst_apply(chain, state)) ** 2
    times = np.atleast_1d(np.asarray(t, dtype=float))
    overlap = np.exp(-1j * np.outer(times, eigenvalues(chain)) / chain.hbar) @ weights
    return np.abs(overlap) ** 2


def discrete_carpet(chain: DiscreteChain, well: WellConfig, packet: GaussianPacket,
                    times: Sequence[float], max_workers: Optional[int] = None) -> CarpetField:
    """离散地毯：第 n 行、第 τ 列为 |⟨n|Ψ_τ⟩|²

    times 非空即可，可为单点或非均匀；列顺序与 times 一致。
    """
    times = np.atleast_1d(np.asarray(times, dtype=float))
    if times.ndim != 1 or len(times) == 0:
        raise InvalidParameterError("times 必须是非空的一维时刻序列")
    if not np.all(np.isfinite(times)):
        raise InvalidParameterError("times 中存在非有限值")

    coeffs = dst_apply(chain, discrete_initial(chain, well, packet))
    blocks = np.array_split(times, max(1, min(max_workers or 1, len(times))))

    def column_block(block):
        return np.abs(_propagate(chain, coeffs, block)) ** 2

    if max_workers and max_workers > 1:
        with ThreadPoolExecutor(max_workers=max_workers) as executor:
            parts = list(executor.map(column_block, blocks))
    else:
        parts = [column_block(b) for b in blocks]

    x = chain.site_positions(well)
    grid = SpaceTimeGrid.from_times(chain.N, float(x[0]), float(x[-1]), times)
    return CarpetField(grid=grid, values=np.hstack(parts), signed=False)


# ==================== 时间映射 ====================
def map_time(chain: DiscreteChain, well: WellConfig, t_continuous: float) -> float:
    """t·(T_d/T)，T_d = 4ħ(N+1)²/(πJ)，由 εₙ + J 与 Eₙ 的小 n 匹配得到"""
    return t_continuous * chain.revival_period / well.T


def revival_scan(chain: DiscreteChain, well: WellConfig, packet: GaussianPacket,
                 window: Tuple[float, float], samples: int = 201) -> Tuple[float, float]:
    """在时间窗内扫描保真度，再以黄金分割细化最大值

    Args:
        chain: 离散链
        well: 势阱配置
        packet: 高斯波包
        window: (t_start, t_stop)，离散时间单位
        samples: 粗扫点数，≥ 3

    Returns:
        (t_peak, fidelity_peak)
    """
    t_lo, t_hi = float(window[0]), float(window[1])
    if not (math.isfinite(t_lo) and math.isfinite(t_hi)) or not t_lo < t_hi:
        raise InvalidParameterError(f"时间窗无效: {window}")
    if samples < 3:
        raise InvalidParameterError(f"samples 必须 ≥ 3，当前: {samples}")

    state = discrete_initial(chain, well, packet)
    times = np.linspace(t_lo, t_hi, samples)
    values = state_fidelity(chain, state, times)
    best = int(np.argmax(values))
    t_peak, f_peak = float(times[best]), float(values[best])

    if 0 < best < samples - 1 and values[best - 1] < f_peak and values[best + 1] < f_peak:
        def objective(t: float) -> float:
            return -float(state_fidelity(chain, state, t)[0])

        xtol = 1e-6 * chain.t0 / max(abs(t_peak), chain.t0)
        result = minimize_scalar(objective, bracket=(times[best - 1], t_peak, times[best + 1]),
                                 method="golden", options={"xtol": xtol})
        if t_lo <= result.x <= t_hi and -result.fun >= f_peak:
            t_peak, f_peak = float(result.x), float(-result.fun)
    else:
        logger.info("粗扫最大值位于窗口边界或平台，跳过黄金分割细化")

    logger.debug(f"复原扫描: t_peak={t_peak:.6f}, fidelity={f_peak:.9f}")
    return t_peak, min(1.0, f_peak)


def continuum_correlation(chain: DiscreteChain, well: WellConfig, packet: GaussianPacket,
                          modes: ModeExpansion, t_continuous: float) -> float:
    """离散格点密度与连续密度在 xₙ 上采样值的 Pearson 相关系数"""
    state = discrete_initial(chain, well, packet)
    evolved = evolve_discrete(chain, state, map_time(chain, well, t_continuous))
    continuous = np.abs(wavefunction_at(well, modes, chain.site_positions(well), t_continuous)) ** 2
    return float(np.corrcoef(evolved.density, continuous)[0, 1])
