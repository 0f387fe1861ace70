#!/usr/bin/env python3
# -*- coding: utf-8 -*-
"""
配置管理模块
包含系统配置、渲染配置等管理功能
"""

from .config_manager import SimpleConfigManager as ConfigManager, get_config_manager, DEFAULT_CONFIG
from .render_config_manager import RenderConfigManager, get_render_config_manager

__all__ = [
    'ConfigManager',
    'get_config_manager',
    'DEFAULT_CONFIG',
    'RenderConfigManager',
    'get_render_config_manager'
]
