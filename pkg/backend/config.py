"""
Настройки приложения и логирование
"""
import logging
import os
import sys
from typing import Optional

from dotenv import load_dotenv
from pydantic import BaseModel, ConfigDict, Field

load_dotenv()

LOG_FORMAT = "%(asctime)s %(levelname)s %(name)s: %(message)s"


class Settings(BaseModel):
    """Настройки, читаемые из переменных окружения"""

    model_config = ConfigDict(frozen=True)

    max_soft_sets: int = Field(default=2 ** 16, ge=1)
    max_topologies: int = Field(default=10 ** 6, ge=1)
    seed: int = Field(default=0, ge=0, lt=2 ** 64)
    n_jobs: int = Field(default=1)
    log_level: str = "WARNING"
    data_dir: str = "src_data"


def get_settings() -> Settings:
    """
    Собирает настройки из окружения (и файла .env, если он есть)

    Возвращает:
        Проверенный объект Settings
    """
    return Settings(
        max_soft_sets=os.getenv('SOFTTOP_MAX_SOFT_SETS', 2 ** 16),
        max_topologies=os.getenv('SOFTTOP_MAX_TOPOLOGIES', 10 ** 6),
        seed=os.getenv('SOFTTOP_SEED', 0),
        n_jobs=os.getenv('SOFTTOP_N_JOBS', 1),
        log_level=os.getenv('SOFTTOP_LOG_LEVEL', 'WARNING').upper(),
        data_dir=os.getenv('SOFTTOP_DATA_DIR', 'src_data'),
    )


_handler: Optional[logging.Handler] = None


def configure_logging(level: Optional[str] = None) -> None:
    """Один обработчик в stderr, чтобы stdout оставался под отчеты"""
    global _handler
    level = (level or get_settings().log_level).upper()
    root = logging.getLogger()
    if _handler is not None:
        root.removeHandler(_handler)
    _handler = logging.StreamHandler(sys.stderr)
    _handler.setFormatter(logging.Formatter(LOG_FORMAT))
    root.addHandler(_handler)
    root.setLevel(level)
