"""
工具函数模块
提供配置管理、日志设置、公共异常以及三值判定结果
"""

import yaml
import os
import logging
from enum import Enum
from typing import Dict, Any, Optional


DEFAULT_CONFIG_PATH = os.path.join(os.path.dirname(os.path.abspath(__file__)), "config.yaml")


class ConfigManager:
    """配置管理器，读取 config.yaml，键用点号分隔"""

    def __init__(self, config_path: str = DEFAULT_CONFIG_PATH, required: bool = False):
        """
        Args:
            config_path: 配置文件路径
            required: 为 True 时文件缺失或格式错误抛出 InputError（命令行显式给出 --config 时）
        """
        self.config_path = config_path
        self.required = required
        self.config = self._load_config()

    def _load_config(self) -> Dict[str, Any]:
        try:
            with open(self.config_path, 'r', encoding='utf-8') as file:
                config = yaml.safe_load(file)
        except FileNotFoundError:
            if self.required:
                raise InputError(f"配置文件 {self.config_path} 不存在")
            logging.warning(f"配置文件 {self.config_path} 不存在，使用默认值")
            return {}
        except yaml.YAMLError as e:
            if self.required:
                raise InputError(f"配置文件格式错误: {e}") from e
            logging.error(f"配置文件格式错误: {e}")
            return {}
        if config is not None and not isinstance(config, dict):
            raise InputError(f"配置文件 {self.config_path} 顶层必须是映射")
        return config or {}

    def get(self, key: str, default: Any = None) -> Any:
        """
        获取配置值，null 视为未设置

        Args:
            key: 配置键，如 homology.cutoff
            default: 默认值
        """
        value = self.config
        try:
            for k in key.split('.'):
                value = value[k]
        except (KeyError, TypeError):
            return default
        return default if value is None else value


class LoggerManager:
    """日志管理器"""

    @staticmethod
    def setup_logger(config: ConfigManager, level: Optional[str] = None) -> logging.Logger:
        """
        设置日志记录器

        Args:
            config: 配置管理器
            level: 覆盖配置文件中的日志级别

        Returns:
            配置好的日志记录器
        """
        log_level = level or config.get('logging.level', 'WARNING')
        file_enabled = config.get('logging.file_enabled', False)
        file_path = config.get('logging.file_path', 'logs/auslander.log')

        # 创建日志目录
        if file_enabled:
            log_dir = os.path.dirname(file_path)
            if log_dir and not os.path.exists(log_dir):
                os.makedirs(log_dir)

        formatter = logging.Formatter(
            '%(asctime)s - %(name)s - %(levelname)s - %(message)s'
        )

        logger = logging.getLogger()
        logger.setLevel(getattr(logging, str(log_level).upper()))
        logger.handlers.clear()

        # 日志走stderr，stdout只留给报告
        console_handler = logging.StreamHandler()
        console_handler.setFormatter(formatter)
        logger.addHandler(console_handler)

        if file_enabled:
            from logging.handlers import RotatingFileHandler
            max_size = config.get('logging.max_file_size', 10) * 1024 * 1024  # MB to bytes
            backup_count = config.get('logging.backup_count', 5)

            file_handler = RotatingFileHandler(
                file_path, maxBytes=max_size, backupCount=backup_count, encoding='utf-8'
            )
            file_handler.setFormatter(formatter)
            logger.addHandler(file_handler)

        return logger


class Decision(Enum):
    """三值判定结果"""
    TRUE = "true"
    FALSE = "false"
    UNKNOWN = "unknown"

    @classmethod
    def of(cls, flag: bool) -> "Decision":
        return cls.TRUE if flag else cls.FALSE

    def __bool__(self) -> bool:
        return self is Decision.TRUE

    @staticmethod
    def all_of(decisions) -> "Decision":
        """合取：有FALSE即FALSE，否则有UNKNOWN即UNKNOWN"""
        decisions = list(decisions)
        if any(d is Decision.FALSE for d in decisions):
            return Decision.FALSE
        if any(d is Decision.UNKNOWN for d in decisions):
            return Decision.UNKNOWN
        return Decision.TRUE


class InputError(ValueError):
    """输入文件或命令行参数错误（退出码1）"""


class AlgebraError(ValueError):
    """代数构造失败：理想不可容许、幂等元不完备、不是理想等"""


class DecompositionError(ValueError):
    """直和分解在重试预算内未能完成"""


class TruncationError(ValueError):
    """分解在所需次数之前被截断，需要更大的cutoff"""


class PreconditionError(ValueError):
    """运算的前提条件不满足"""


class NotClusterTiltingError(ValueError):
    """c-分解的最后一个核不在add(X)中，可作为反例"""

    def __init__(self, message: str, witness=None):
        super().__init__(message)
        self.witness = witness


class CertificateError(RuntimeError):
    """内部正确性证书校验失败（退出码2，属于程序缺陷）"""


# 全局配置管理器实例
config_manager = ConfigManager()
