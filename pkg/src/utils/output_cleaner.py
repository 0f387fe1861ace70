#!/usr/bin/env python3
# -*- coding: utf-8 -*-
"""
输出目录清理工具模块

图集输出前清空目标目录，避免残留的旧图与本次结果混在一起。
"""

import shutil
from pathlib import Path
from typing import List, Optional, Union
import logging

from src.core.errors import OutputError

# 设置日志
logger = logging.getLogger(__name__)

# 输出根目录下的分类子目录
OUTPUT_SUBDIRS = ("figures", "carpets", "fractional", "canals", "discrete")


class OutputCleaner:
    """输出目录清理器"""

    def __init__(self, output_root: Optional[Union[str, Path]] = None):
        """初始化清理器

        Args:
            output_root: 输出根目录，如果为None则使用项目根目录下的 output
        """
        if output_root is None:
            self.output_root = Path(__file__).resolve().parent.parent.parent / "output"
        else:
            self.output_root = Path(output_root)

    def get_output_directories(self) -> List[Path]:
        """获取所有需要清理的输出目录"""
        return [self.output_root / name for name in OUTPUT_SUBDIRS]

    def clean_directory(self, directory: Union[str, Path], recreate: bool = True) -> bool:
        """清理指定目录

        Args:
            directory: 要清理的目录路径
            recreate: 是否重新创建空目录

        Returns:
            bool: 清理是否成功
        """
        dir_path = Path(directory)

        try:
            if dir_path.exists():
                # 删除目录中的所有内容
                for item in sorted(dir_path.iterdir()):
                    try:
                        if item.is_file() or item.is_symlink():
                            item.unlink()
                        elif item.is_dir():
                            shutil.rmtree(item)
                    except Exception as e:
                        logger.warning(f"删除项目失败 {item}: {e}")

                logger.info(f"已清理目录: {dir_path}")

            # 重新创建空目录
            if recreate:
                dir_path.mkdir(parents=True, exist_ok=True)
                logger.debug(f"已重新创建目录: {dir_path}")

            return True

        except Exception as e:
            logger.error(f"清理目录失败 {dir_path}: {e}")
            return False

    def clean_all_outputs(self) -> bool:
        """清理所有分类输出目录

        Returns:
            bool: 是否全部清理成功
        """
        all_success = True
        for dir_path in self.get_output_directories():
            if not self.clean_directory(dir_path, recreate=True):
                all_success = False

        if not all_success:
            logger.warning("部分目录清理失败")
        return all_success


# 便利函数
def prepare_output_dir(directory: Union[str, Path]) -> Path:
    """清空并重建目录的便利函数"""
    cleaner = OutputCleaner(directory)
    if not cleaner.clean_directory(directory, recreate=True):
        raise OutputError(str(directory), "无法清理或创建目录")
    return Path(directory)
