#!/usr/bin/env python3
"""
配置文件读取模块
支持从YAML文件读取配置，提供简单的get方法
"""

import os
from pathlib import Path
from typing import Any

import yaml
from loguru import logger

from errors import ValidationError

CONFIG_FILE = Path(__file__).resolve().parent / "config.yaml"
BUDGET_ENV = "MONOREG_BUDGET"


class Config:
    """配置管理类"""

    _instance = None
    _config_data = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super(Config, cls).__new__(cls)
        return cls._instance

    def __init__(self):
        if self._config_data is None:
            self._load_config()

    def _load_config(self):
        """加载配置文件"""
        if not CONFIG_FILE.exists():
            raise FileNotFoundError(f"配置文件 {CONFIG_FILE} 不存在")

        try:
            with open(CONFIG_FILE, 'r', encoding='utf-8') as f:
                self._config_data = yaml.safe_load(f) or {}
            logger.debug(f"配置文件 {CONFIG_FILE.name} 加载成功")
        except Exception as e:
            logger.error(f"❌ 加载配置文件失败: {e}")
            raise

    def get(self, key: str) -> Any:
        """
        获取配置值

        Args:
            key: 配置键，支持点号分隔的嵌套键，如 "verifier.enumeration_budget"

        Returns:
            Any: 配置值

        Raises:
            KeyError: 当配置键不存在时
        """
        if self._config_data is None:
            raise RuntimeError("配置未初始化")

        value = self._config_data
        try:
            for k in key.split('.'):
                value = value[k]
            return value
        except (KeyError, TypeError) as e:
            raise KeyError(f"配置键 '{key}' 不存在") from e

    def get_with_default(self, key: str, default: Any = None) -> Any:
        """获取配置值，如果不存在则返回默认值"""
        try:
            return self.get(key)
        except KeyError:
            return default


# 创建全局配置实例
config = Config()


def get_config_with_default(key: str, default: Any = None) -> Any:
    """获取配置值的便捷函数（带默认值）"""
    return config.get_with_default(key, default)


def enumeration_budget() -> int:
    """
    穷举验证的字符串数量上限

    环境变量 MONOREG_BUDGET 优先于配置文件中的 verifier.enumeration_budget。

    Returns:
        int: 预算值

    Raises:
        ValidationError: 环境变量不是非负整数时
    """
    raw = os.environ.get(BUDGET_ENV)
    if raw is None:
        return int(get_config_with_default("verifier.enumeration_budget", 10_000_000))
    try:
        budget = int(raw)
    except ValueError as e:
        raise ValidationError(f"环境变量 {BUDGET_ENV} 不是整数: {raw!r}") from e
    if budget < 0:
        raise ValidationError(f"环境变量 {BUDGET_ENV} 不能为负数: {budget}")
    return budget
