#!/usr/bin/env python3
# -*- coding: utf-8 -*-
"""
测试离散链
正弦变换三路一致、能谱对称、幺正演化、离散地毯与复原扫描
"""

import sys
import math
from pathlib import Path

import numpy as np
import pytest

# 添加项目路径
sys.path.insert(0, str(Path(__file__).resolve().parent.parent))

from src.core.errors import (
    DegenerateStateError, InternalConsistencyError, InvalidParameterError
)
from src.core.model import make_packet
from src.core.discrete_chain import (
    DiscreteChain, DiscreteState, continuum_correlation, discrete_carpet, discrete_initial,
    dst_apply, dst_dense, dst_fast, dst_scipy, eigenvalue, eigenvalues, evolve_discrete,
    map_time, revival_scan, sine_matrix, state_fidelity
)

CHAIN = DiscreteChain(N=150)


@pytest.fixture(scope="module")
def wide_packet(well):
    return make_packet(well, 0.5, 0.1, 0.0)


# ==================== 链与初态 ====================
def test_chain_validation():
    assert CHAIN.t0 == 1.0
    assert math.isclose(CHAIN.revival_period, 4 * 151 ** 2 / math.pi, rel_tol=1e-15)
    with pytest.raises(InvalidParameterError):
        DiscreteChain(N=0)
    with pytest.raises(InvalidParameterError):
        DiscreteChain(N=10, J=0.0)


def test_site_positions(well):
    x = CHAIN.site_positions(well)
    assert len(x) == 150
    assert x[-1] == 1.0
    assert math.isclose(x[0], 1 / 150)


def test_single_site_state(well, default_packet):
    state = discrete_initial(DiscreteChain(N=1), well, default_packet)
    assert abs(abs(state.amps[0]) - 1.0) < 1e-15


def test_initial_state_peak_and_norm(well, default_packet):
    state = discrete_initial(CHAIN, well, default_packet)
    assert abs(state.norm - 1.0) < 1e-14
    assert int(np.argmax(state.density)) in (36, 37)


def test_degenerate_state(well):
    packet = make_packet(well, 0.01, 0.001, 0.0)
    with pytest.raises(DegenerateStateError):
        discrete_initial(DiscreteChain(N=2), well, packet)


def test_state_norm_guard():
    with pytest.raises(InternalConsistencyError):
        DiscreteState(amps=np.array([1.0, 1.0]))
    with pytest.raises(InvalidParameterError):
        DiscreteState(amps=np.array([]))


# ==================== 正弦变换 ====================
def test_sine_matrix_small():
    np.testing.assert_array_equal(sine_matrix(1), [[1.0]])
    u = sine_matrix(4)
    assert np.max(np.abs(u @ u - np.eye(4))) < 1e-14
    assert np.array_equal(u, u.T)


@pytest.mark.parametrize("N", [3, 7, 150, 1023])
def test_transform_routes_agree(N):
    rng = np.random.default_rng(N)
    values = rng.normal(size=N) + 1j * rng.normal(size=N)
    dense = dst_dense(values)
    assert np.max(np.abs(dst_fast(values) - dense)) < 1e-12 * max(1.0, math.sqrt(N))
    assert np.max(np.abs(dst_scipy(values) - dense)) < 1e-12 * max(1.0, math.sqrt(N))


def test_fast_transform_is_involution():
    rng = np.random.default_rng(7)
    values = rng.normal(size=150) + 1j * rng.normal(size=150)
    assert np.max(np.abs(dst_fast(dst_fast(values)) - values)) < 1e-12


def test_fast_transform_columns():
    rng = np.random.default_rng(3)
    block = rng.normal(size=(20, 5))
    columns = np.stack([dst_fast(block[:, i]) for i in range(5)], axis=1)
    assert np.max(np.abs(dst_fast(block) - columns)) < 1e-14


def test_dst_apply_errors():
    with pytest.raises(InvalidParameterError):
        dst_apply(CHAIN, np.zeros(10))
    with pytest.raises(InvalidParameterError):
        dst_apply(CHAIN, np.zeros(150), method="slow")


# ==================== 能谱 ====================
def test_spectrum_symmetry():
    values = eigenvalues(CHAIN)
    assert np.array_equal(values, -values[::-1])
    odd = eigenvalues(DiscreteChain(N=151))
    assert odd[75] == 0.0
    assert eigenvalue(CHAIN, 1) == values[0]
    with pytest.raises(InvalidParameterError):
        eigenvalue(CHAIN, 151)


def test_small_n_limit():
    """εₙ + J ≈ J(πn/(N+1))²/2"""
    for n in (1, 2, 3):
        quadratic = (math.pi * n / 151) ** 2 / 2
        assert math.isclose(eigenvalue(CHAIN, n) + 1.0, quadratic, rel_tol=1e-3)


# ==================== 演化 ====================
def test_evolution_identity_and_norm(well, default_packet):
    state = discrete_initial(CHAIN, well, default_packet)
    assert np.max(np.abs(evolve_discrete(CHAIN, state, 0.0).amps - state.amps)) < 1e-13
    assert abs(evolve_discrete(CHAIN, state, 123.4).norm - 1.0) < 1e-12


def test_evolution_composes(well, default_packet):
    state = discrete_initial(CHAIN, well, default_packet)
    two_steps = evolve_discrete(CHAIN, evolve_discrete(CHAIN, state, 17.0), 29.0)
    one_step = evolve_discrete(CHAIN, state, 46.0)
    assert np.max(np.abs(two_steps.amps - one_step.amps)) < 1e-12


def test_repeated_steps_keep_norm(well, default_packet):
    state = discrete_initial(CHAIN, well, default_packet)
    for _ in range(1000):
        state = evolve_discrete(CHAIN, state, 0.5)
    assert abs(state.norm - 1.0) < 1e-11


def test_stationary_state():
    chain = DiscreteChain(N=2)
    state = DiscreteState(amps=np.array([1.0, 1.0]) / math.sqrt(2.0))
    evolved = evolve_discrete(chain, state, 3.7)
    np.testing.assert_allclose(evolved.density, [0.5, 0.5], atol=1e-14)


def test_state_fidelity_at_zero(well, default_packet):
    state = discrete_initial(CHAIN, well, default_packet)
    assert abs(state_fidelity(CHAIN, state, 0.0)[0] - 1.0) < 1e-12


# ==================== 地毯 ====================
def test_discrete_carpet(well, default_packet):
    times = np.linspace(0.0, 2000.0, 41)
    field = discrete_carpet(CHAIN, well, default_packet, times)
    assert field.values.shape == (150, 41)
    np.testing.assert_allclose(field.values.sum(axis=0), 1.0, atol=1e-12)
    assert field.grid.x_hi == 1.0

    parallel = discrete_carpet(CHAIN, well, default_packet, times, max_workers=4)
    assert np.max(np.abs(parallel.values - field.values)) < 1e-15


def test_discrete_carpet_flexible_times(well, default_packet):
    state = discrete_initial(CHAIN, well, default_packet)

    single = discrete_carpet(CHAIN, well, default_packet, [0.0])
    assert single.values.shape == (150, 1)
    np.testing.assert_allclose(single.column(0), state.density, atol=1e-14)

    times = [3.0, 0.0, 1.0]
    field = discrete_carpet(CHAIN, well, default_packet, times, max_workers=4)
    np.testing.assert_array_equal(field.grid.t, times)
    for j, t in enumerate(times):
        np.testing.assert_allclose(field.column(j), evolve_discrete(CHAIN, state, t).density,
                                   atol=1e-13)


def test_discrete_carpet_single_site(well, default_packet):
    field = discrete_carpet(DiscreteChain(N=1), well, default_packet, [0.0, 1.0, 5.0])
    assert field.values.shape == (1, 3)
    np.testing.assert_allclose(field.values, 1.0, atol=1e-12)
    assert field.grid.x_lo == field.grid.x_hi == 1.0


def test_discrete_carpet_time_errors(well, default_packet):
    with pytest.raises(InvalidParameterError):
        discrete_carpet(CHAIN, well, default_packet, [])
    with pytest.raises(InvalidParameterError):
        discrete_carpet(CHAIN, well, default_packet, [0.0, float("nan")])


# ==================== 时间映射与复原 ====================
def test_map_time(well):
    assert math.isclose(map_time(CHAIN, well, well.T), CHAIN.revival_period, rel_tol=1e-14)
    assert math.isclose(map_time(CHAIN, well, 1.0), 151 ** 2, rel_tol=1e-14)


def test_revival_scan_wide_packet(well, wide_packet):
    expected = CHAIN.revival_period
    t_peak, f_peak = revival_scan(CHAIN, well, wide_packet, (0.95 * expected, 1.05 * expected))
    assert abs(t_peak - expected) / expected < 0.01
    assert 0.99 < f_peak <= 1.0


def test_revival_scan_default_packet(well, default_packet, wide_packet):
    """p̄ = 25π 处色散偏离二次，N=150 的离散复原不完整"""
    expected = CHAIN.revival_period
    window = (0.9 * expected, 1.1 * expected)
    _, f_peak = revival_scan(CHAIN, well, default_packet, window)
    _, f_wide = revival_scan(CHAIN, well, wide_packet, window)
    assert 0.0 < f_peak < 0.5
    assert f_peak < f_wide


def test_revival_scan_errors(well, wide_packet):
    with pytest.raises(InvalidParameterError):
        revival_scan(CHAIN, well, wide_packet, (10.0, 5.0))
    with pytest.raises(InvalidParameterError):
        revival_scan(CHAIN, well, wide_packet, (0.0, 5.0), samples=2)


@pytest.mark.parametrize("fraction", [0.0, 0.001, 0.002])
def test_continuum_correlation(well, default_packet, default_modes, fraction):
    assert continuum_correlation(CHAIN, well, default_packet, default_modes, fraction * well.T) > 0.99


if __name__ == "__main__":
    sys.exit(pytest.main([__file__, "-v"]))
