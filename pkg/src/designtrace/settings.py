# src/designtrace/settings.py
"""
Environment-driven runtime settings

Resolution order: explicit CLI flag > process environment > .env file > default.
"""

import logging
import os
from dataclasses import dataclass
from typing import Optional

from dotenv import find_dotenv, load_dotenv

from .errors import DomainError

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class Settings:
    workers: int = 1
    mapping_path: Optional[str] = None
    log_level: str = "INFO"

    def __post_init__(self):
        if self.workers < 1:
            raise DomainError(f"workers must be >= 1, got {self.workers}")
        if logging.getLevelName(self.log_level.upper()) not in (
            logging.DEBUG,
            logging.INFO,
            logging.WARNING,
            logging.ERROR,
        ):
            raise DomainError(f"Unknown log level: {self.log_level}")

    @property
    def level(self) -> int:
        return logging.getLevelName(self.log_level.upper())

    @classmethod
    def from_env(cls, env_file: Optional[str] = None) -> "Settings":
        load_dotenv(env_file or find_dotenv(usecwd=True), override=False)

        raw_workers = os.getenv("DESIGNTRACE_WORKERS", "1")
        try:
            workers = int(raw_workers)
        except ValueError:
            logger.warning(f"Invalid DESIGNTRACE_WORKERS: {raw_workers}, using 1")
            workers = 1

        return cls(
            workers=workers,
            mapping_path=os.getenv("DESIGNTRACE_MAPPING") or None,
            log_level=os.getenv("DESIGNTRACE_LOG_LEVEL", "INFO"),
        )
