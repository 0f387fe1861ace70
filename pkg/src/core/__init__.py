#!/usr/bin/env python3
# -*- coding: utf-8 -*-
"""
核心功能模块
包含势阱模型、本征展开、演化、分数复原、渠道分解与离散链
"""

from .errors import (
    CarpetError, InvalidParameterError, NonCoprimeError, DegenerateStateError,
    NumericAccuracyError, TruncationError, InternalConsistencyError, OutputError
)
from .model import (
    WellConfig, GaussianPacket, SpaceTimeGrid, CarpetField,
    make_well, make_packet, packet_value, carpet_grid
)
from .eigenbasis import (
    ModeExpansion, eigen_energy, eigen_state, coeffs_quadrature, coeffs_analytic, choose_nmax
)
from .evolution import wavefunction_at, carpet, l2_distance, fidelity
from .fractional_revival import (
    RevivalFraction, GaussSumTable, GaussSweepReport, make_fraction, gauss_sum, gauss_table,
    gauss_sweep, odd_extension_value, fractional_reconstruction, revival_time,
    reconstruction_error, count_packets
)
from .canal_decomposition import (
    CanalIndex, TildeCoords, TermSelection, tilde_coords, background_term, interference_term,
    term_bounds, reconstruct_density, term_field, canal_lines
)
from .discrete_chain import (
    DiscreteChain, DiscreteState, discrete_initial, dst_apply, eigenvalue, evolve_discrete,
    discrete_carpet, map_time, revival_scan, continuum_correlation
)

__all__ = [
    # 异常
    'CarpetError', 'InvalidParameterError', 'NonCoprimeError', 'DegenerateStateError',
    'NumericAccuracyError', 'TruncationError', 'InternalConsistencyError', 'OutputError',

    # 模型
    'WellConfig', 'GaussianPacket', 'SpaceTimeGrid', 'CarpetField',
    'make_well', 'make_packet', 'packet_value', 'carpet_grid',

    # 本征基与演化
    'ModeExpansion', 'eigen_energy', 'eigen_state', 'coeffs_quadrature', 'coeffs_analytic',
    'choose_nmax', 'wavefunction_at', 'carpet', 'l2_distance', 'fidelity',

    # 分数复原
    'RevivalFraction', 'GaussSumTable', 'GaussSweepReport', 'make_fraction', 'gauss_sum',
    'gauss_table', 'gauss_sweep', 'odd_extension_value', 'fractional_reconstruction',
    'revival_time', 'reconstruction_error', 'count_packets',

    # 渠道分解
    'CanalIndex', 'TildeCoords', 'TermSelection', 'tilde_coords', 'background_term',
    'interference_term', 'term_bounds', 'reconstruct_density', 'term_field', 'canal_lines',

    # 离散链
    'DiscreteChain', 'DiscreteState', 'discrete_initial', 'dst_apply', 'eigenvalue',
    'evolve_discrete', 'discrete_carpet', 'map_time', 'revival_scan', 'continuum_correlation'
]
