#!/usr/bin/env python3
# -*- coding: utf-8 -*-
"""
测试本征基
能级、本征函数正交归一、两条系数路线的一致性与截断选择
"""

import sys
import math
from pathlib import Path

import numpy as np
import pytest
from scipy.integrate import quad

# 添加项目路径
sys.path.insert(0, str(Path(__file__).resolve().parent.parent))

from src.core.errors import InvalidParameterError, TruncationError
from src.core.model import make_packet
from src.core.eigenbasis import (
    choose_nmax, coeffs_analytic, coeffs_quadrature, eigen_energy, eigen_state,
    gaussian_fourier, total_norm
)


def test_eigen_energy(well):
    assert math.isclose(eigen_energy(well, 1), math.pi ** 2 / 2, rel_tol=1e-15)
    assert math.isclose(eigen_energy(well, 2), 4 * eigen_energy(well, 1), rel_tol=1e-15)
    with pytest.raises(InvalidParameterError):
        eigen_energy(well, 0)


def test_revival_phase_closes(well):
    """Eₙ·T/ħ = 2πn²"""
    for n in (1, 7, 25, 128):
        assert math.isclose(eigen_energy(well, n) * well.T, 2 * math.pi * n * n, rel_tol=1e-14)


def test_eigen_state_values(well):
    assert math.isclose(float(eigen_state(well, 1, 0.5)), math.sqrt(2.0), rel_tol=1e-15)
    for n in (1, 3, 10):
        assert float(eigen_state(well, n, -0.1)) == 0.0
        assert float(eigen_state(well, n, 1.2)) == 0.0


def test_eigen_states_orthonormal(well):
    for m in range(1, 11):
        for n in range(m, 11):
            value, _ = quad(lambda x: float(eigen_state(well, m, x) * eigen_state(well, n, x)),
                            0.0, 1.0, epsabs=1e-13, epsrel=1e-13, limit=200)
            assert abs(value - (1.0 if m == n else 0.0)) < 1e-10


def test_quadrature_peak_mode(default_modes):
    """主导动量 p̄ = 25πħ/L 对应 n = 25"""
    assert int(np.argmax(np.abs(default_modes.coeffs))) + 1 == 25


def test_quadrature_captured_norm(default_modes):
    assert default_modes.nmax == 128
    assert default_modes.captured_norm >= 1 - 1e-10
    assert default_modes.captured_norm <= 1 + 1e-9


def test_symmetric_packet_has_no_even_modes(well):
    packet = make_packet(well, 0.5, 0.05, 0.0)
    modes = coeffs_quadrature(well, packet, 16)
    assert abs(modes.c(2)) < 1e-12
    assert abs(modes.c(4)) < 1e-12
    assert abs(modes.c(1)) > 0.1


def test_routes_agree(well, default_packet, default_modes):
    analytic = coeffs_analytic(well, default_packet, 128)
    assert analytic.route == "analytic"
    assert np.max(np.abs(analytic.coeffs - default_modes.coeffs)) < 1e-9


def test_routes_agree_narrow(well, narrow_packet, narrow_modes):
    analytic = coeffs_analytic(well, narrow_packet, 256)
    assert np.max(np.abs(analytic.coeffs - narrow_modes.coeffs)) < 1e-9


def test_extended_antisymmetry(default_modes):
    assert default_modes.c(0) == 0
    for n in (1, 5, 25, 128):
        assert default_modes.c(-n) + default_modes.c(n) == 0
    assert default_modes.c(129) == 0


def test_fourier_peak_at_minus_pbar(default_packet):
    k = np.linspace(-2 * default_packet.pbar, 2 * default_packet.pbar, 4001)
    peak = k[int(np.argmax(np.abs(gaussian_fourier(default_packet, k))))]
    assert math.isclose(peak, -default_packet.pbar, abs_tol=k[1] - k[0])


def test_choose_nmax_default(well, default_packet):
    nmax = choose_nmax(well, default_packet, 1e-10)
    assert nmax & (nmax - 1) == 0
    assert nmax <= 128
    modes = coeffs_quadrature(well, default_packet, nmax)
    assert total_norm(well, default_packet) - modes.captured_norm <= 1e-10


def test_choose_nmax_narrow_needs_more(well, default_packet, narrow_packet):
    wide = choose_nmax(well, default_packet, 1e-10)
    narrow = choose_nmax(well, narrow_packet, 1e-10)
    assert narrow >= wide
    assert narrow & (narrow - 1) == 0
    assert narrow <= 256


def test_choose_nmax_loose_tolerance(well, default_packet):
    nmax = choose_nmax(well, default_packet, 0.5)
    assert 1 <= nmax <= 32


def test_choose_nmax_errors(well, narrow_packet):
    with pytest.raises(InvalidParameterError):
        choose_nmax(well, narrow_packet, 0.0)
    with pytest.raises(InvalidParameterError):
        choose_nmax(well, narrow_packet, 1.5)
    with pytest.raises(TruncationError) as info:
        choose_nmax(well, narrow_packet, 1e-10, cap=4)
    assert info.value.diagnostic["cap"] == 4


def test_nodes_per_panel(well, default_packet, default_modes):
    coarse = coeffs_quadrature(well, default_packet, 128, nodes_per_panel=8)
    assert np.max(np.abs(coarse.coeffs - default_modes.coeffs)) < 1e-10
    assert abs(total_norm(well, default_packet, nodes_per_panel=8)
               - total_norm(well, default_packet)) < 1e-12
    with pytest.raises(InvalidParameterError):
        coeffs_quadrature(well, default_packet, 8, nodes_per_panel=1)
    with pytest.raises(InvalidParameterError):
        choose_nmax(well, default_packet, 1e-10, nodes_per_panel=0)


def test_nmax_must_be_positive(well, default_packet):
    with pytest.raises(InvalidParameterError):
        coeffs_quadrature(well, default_packet, 0)
    with pytest.raises(InvalidParameterError):
        coeffs_analytic(well, default_packet, 0)


if __name__ == "__main__":
    sys.exit(pytest.main([__file__, "-v"]))
