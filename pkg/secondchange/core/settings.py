import os
from typing import Literal, Tuple

from pydantic_settings import BaseSettings, SettingsConfigDict

BASE_DIR = os.path.dirname(os.path.dirname(os.path.abspath(__file__)))

LOG_LEVEL = Literal[
    "CRITICAL",
    "FATAL",
    "ERROR",
    "WARN",
    "WARNING",
    "INFO",
    "DEBUG",
    "NOTSET",
]

KERNEL_ID = Literal["epanechnikov", "biweight", "triweight"]


class Base(BaseSettings):
    """Settings for reading environment variables from a file.

    env_file - The path to the environment, to run locally
    """

    model_config = SettingsConfigDict(
        env_prefix="SECONDCHANGE_",
        env_nested_delimiter="__",
        env_file=os.path.join(BASE_DIR, ".env_secondchange"),
        env_file_encoding="utf-8",
        extra="ignore",
    )


class LogSettings(Base):
    """Setting logging.

    level (str, optional): The level of logging. Defaults to "INFO".
    guru (bool, optional): Whether to enable guru mode. Defaults to True.
    traceback (bool, optional): Whether to include tracebacks in logs. Defaults to False.
    serialize (bool, optional): Emit loguru records as JSON lines. Defaults to False.
    """

    level: LOG_LEVEL = "INFO"
    guru: bool = True
    traceback: bool = False
    serialize: bool = False


class RuntimeSettings(Base):
    """Execution settings.

    threads (int, optional): Default worker count for bootstrap and study loops. Defaults to 1.
    report_timestamps (bool, optional): Write wall-clock timestamps into report provenance. Defaults to False.
    chunk_size (int, optional): Bootstrap replicates per parallel job. Defaults to 250.
    """

    threads: int = 1
    report_timestamps: bool = False
    chunk_size: int = 250


class StudySettings(Base):
    kernel: KERNEL_ID = "epanechnikov"
    zeta: float = 0.016
    mv_grid_low: float = 0.025
    mv_grid_high: float = 0.3
    mv_grid_size: int = 12
    gcv_grid_size: int = 30
    alphas: Tuple[float, ...] = (0.10, 0.05)
    B: int = 2000
    burn_in: int = 200
    ma_truncation: int = 100
