#!/usr/bin/env python3
# -*- coding: utf-8 -*-
"""
简化的配置管理模块
为地毯计算与命令行提供默认参数
"""

import copy
import json
import logging
import os
from typing import Any, Dict, Optional

logger = logging.getLogger(__name__)

# 默认波包：x̄/L = 1/4，s_x/L = 1/(5π)，p̄L/ħ = 25π；窄波包 s_x/L = 1/(20π)
DEFAULT_CONFIG: Dict[str, Any] = {
    "well": {
        "L": 1.0
    },
    "packet": {
        "xbar_over_L": 0.25,
        "sx_over_L": 0.06366197723675814,
        "pbar_in_hbar_over_L": 78.53981633974483
    },
    "narrow_packet": {
        "xbar_over_L": 0.25,
        "sx_over_L": 0.015915494309189534,
        "pbar_in_hbar_over_L": 78.53981633974483
    },
    "grid": {
        "nx": 512,
        "nt": 512,
        "t_max": 1.0
    },
    "eigenbasis": {
        "tail_tol": 1e-10,
        "nmax_cap": 4096,
        "nodes_per_panel": 16
    },
    "canals": {
        "n_sigma": 8.0,
        "nx": 256,
        "nt": 256,
        "line_j_extent": 4
    },
    "discrete": {
        "sites": 150,
        "J": 1.0,
        "t_max": 1.0,
        "nt": 512,
        "scan_window": 0.01,
        "scan_samples": 201
    },
    "render": {
        "colormap": "density",
        "normalization": "global-max",
        "norm_value": None,
        "format": "ppm"
    },
    "performance": {
        "parallel_processing": False,
        "max_workers": 4
    },
    "logging": {
        "log_level": "INFO",
        "format": "[%(asctime)s] [%(levelname)s] %(message)s",
        "datefmt": "%Y-%m-%d %H:%M:%S"
    },
    "paths": {
        "output_dir": "output"
    }
}


class SimpleConfigManager:
    """简化的配置管理器"""

    def __init__(self, config_path: str = "config.json"):
        """初始化配置管理器"""
        # 计算 src 目录
        self.project_root = os.path.dirname(os.path.dirname(os.path.abspath(__file__)))
        self.config_path = os.path.join(self.project_root, config_path)
        self.config = self._load_config()

    def _load_config(self) -> Dict[str, Any]:
        """加载配置文件，按节合并到默认值之上"""
        default_config = copy.deepcopy(DEFAULT_CONFIG)

        if os.path.exists(self.config_path):
            try:
                with open(self.config_path, 'r', encoding='utf-8') as f:
                    loaded_config = json.load(f)
                # 合并配置
                return {**default_config, **loaded_config}
            except Exception as e:
                logger.warning(f"无法加载配置文件 {self.config_path}：{e}，使用默认配置")

        return default_config

    def _section(self, name: str) -> Dict[str, Any]:
        return {**DEFAULT_CONFIG.get(name, {}), **self.config.get(name, {})}

    def get_well_params(self) -> Dict[str, Any]:
        """获取势阱参数"""
        return self._section("well")

    def get_packet_params(self, narrow: bool = False) -> Dict[str, Any]:
        """获取波包参数（narrow=True 取窄波包）"""
        return self._section("narrow_packet" if narrow else "packet")

    def get_grid_params(self) -> Dict[str, Any]:
        """获取时空网格参数"""
        return self._section("grid")

    def get_eigenbasis_params(self) -> Dict[str, Any]:
        """获取本征展开参数"""
        return self._section("eigenbasis")

    def get_canal_params(self) -> Dict[str, Any]:
        """获取渠道分解参数"""
        return self._section("canals")

    def get_discrete_params(self) -> Dict[str, Any]:
        """获取离散链参数"""
        return self._section("discrete")

    def get_render_params(self) -> Dict[str, Any]:
        """获取渲染参数"""
        return self._section("render")

    def get_performance_params(self) -> Dict[str, Any]:
        """获取性能参数"""
        return self._section("performance")

    def get_logging_params(self) -> Dict[str, Any]:
        """获取日志参数"""
        return self._section("logging")

    def get_paths(self) -> Dict[str, Any]:
        """获取路径配置"""
        return self._section("paths")

    def get_max_workers(self) -> Optional[int]:
        """并行开启时返回线程数，否则 None"""
        perf = self.get_performance_params()
        if not perf.get("parallel_processing", False):
            return None
        return int(perf.get("max_workers", 1))

    def get_full_path(self, path_key: str) -> str:
        """获取完整路径"""
        path_value = self.get_paths().get(path_key, "")

        if os.path.isabs(path_value):
            return path_value

        # 相对于项目根目录
        return os.path.join(os.path.dirname(self.project_root), path_value)


# 全局配置管理器实例
_config_manager = None


def get_config_manager() -> SimpleConfigManager:
    """获取全局配置管理器实例"""
    global _config_manager
    if _config_manager is None:
        _config_manager = SimpleConfigManager()
    return _config_manager
