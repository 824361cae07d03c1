# src/config/settings.py
from functools import lru_cache
from typing import Optional
import logging

from pydantic_settings import BaseSettings, SettingsConfigDict

logger = logging.getLogger(__name__)


class Settings(BaseSettings):
    # Logging
    LOG_LEVEL: str = "INFO"

    # Algebra
    GENERAL_GRASSMANNIANS: bool = False  # grassmannian(m, k) with k > 2
    MAX_WORKERS: int = 1  # > 1 evaluates strata on a process pool

    # HTTP service
    API_HOST: str = "0.0.0.0"
    API_PORT: int = 8000

    # Redis Configuration
    REDIS_ENABLED: bool = False
    REDIS_HOST: str = "localhost"
    REDIS_PORT: int = 6379
    REDIS_PASSWORD: Optional[str] = None
    REDIS_CACHE_TTL: int = 3600  # 1 hour default

    model_config = SettingsConfigDict(
        env_file=".env",
        env_file_encoding="utf-8",
        extra="ignore",
    )

    def __init__(self, **kwargs):
        super().__init__(**kwargs)
        logger.debug("Settings initialized")


@lru_cache
def get_settings() -> Settings:
    """Process-wide settings instance."""
    return Settings()


def setup_logging(level: Optional[str] = None) -> None:
    """Configure the root logger once; later calls only adjust the level."""
    level_name = (level or get_settings().LOG_LEVEL).upper()
    logging.basicConfig(
        level=getattr(logging, level_name, logging.INFO),
        format="%(asctime)s %(levelname)s %(name)s: %(message)s",
    )
    logging.getLogger().setLevel(getattr(logging, level_name, logging.INFO))
