#!/usr/bin/env python3
# -*- coding: utf-8 -*-
"""
渲染配置管理模块
负责管理和验证渲染相关的配置参数
"""

from typing import Any, Dict, List, Optional

from src.core.errors import InvalidParameterError
from src.render.colormap import COLORMAPS, NORMALIZATIONS, OUTPUT_FORMATS, RenderSpec


class RenderConfigManager:
    """渲染配置管理器"""

    def __init__(self, config_manager=None):
        """初始化渲染配置管理器

        Args:
            config_manager: 现有的配置管理器实例，如果为None则使用全局实例
        """
        if config_manager is None:
            from .config_manager import get_config_manager
            self.base_config_manager = get_config_manager()
        else:
            self.base_config_manager = config_manager

    def get_render_config(self) -> Dict[str, Any]:
        """获取渲染配置

        Returns:
            渲染配置字典
        """
        return self.base_config_manager.get_render_params()

    def validate_render_config(self) -> List[str]:
        """验证渲染配置的有效性

        Returns:
            错误信息列表，如果配置有效则返回空列表
        """
        errors = []
        render = self.get_render_config()

        if render.get("colormap") not in COLORMAPS:
            errors.append(f"不支持的色图: {render.get('colormap')}")

        normalization = render.get("normalization")
        if normalization not in NORMALIZATIONS:
            errors.append(f"不支持的归一化方式: {normalization}")
        elif normalization == "fixed":
            value = render.get("norm_value")
            if not isinstance(value, (int, float)) or value <= 0:
                errors.append("固定归一化值必须是正数")

        if render.get("format") not in OUTPUT_FORMATS:
            errors.append(f"不支持的输出格式: {render.get('format')}")

        return errors

    def get_render_spec(self, signed: bool = False, norm_value: Optional[float] = None,
                        output_format: Optional[str] = None) -> RenderSpec:
        """按配置构造 RenderSpec，符号场自动改用 diverging 色图

        Args:
            signed: 是否为符号场
            norm_value: 覆盖配置的固定归一化值
            output_format: 覆盖配置的输出格式

        Raises:
            InvalidParameterError: 配置无效
        """
        errors = self.validate_render_config()
        if errors:
            raise InvalidParameterError("; ".join(errors))

        render = self.get_render_config()
        colormap = "diverging" if signed else render["colormap"]
        normalization = render["normalization"]
        value = render.get("norm_value")
        if norm_value is not None:
            normalization, value = "fixed", norm_value
        return RenderSpec(colormap=colormap, normalization=normalization,
                          norm_value=value if normalization == "fixed" else None,
                          output_format=output_format or render["format"])


# 全局渲染配置管理器实例
_render_config_manager = None


def get_render_config_manager() -> RenderConfigManager:
    """获取全局渲染配置管理器实例"""
    global _render_config_manager
    if _render_config_manager is None:
        _render_config_manager = RenderConfigManager()
    return _render_config_manager
