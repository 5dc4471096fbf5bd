"""Configuration settings for the fat point resolution toolkit."""
import os
from typing import Optional

from dotenv import load_dotenv
from pydantic import field_validator
from pydantic_settings import BaseSettings

# Load environment variables from .env file
load_dotenv()


def default_cache_path() -> str:
    """results.json under $XDG_CACHE_HOME/fatpoints, falling back to ~/.cache."""
    base = os.getenv("XDG_CACHE_HOME") or os.path.join(os.path.expanduser("~"), ".cache")
    return os.path.join(base, "fatpoints", "results.json")


def _optional_int(name: str) -> Optional[int]:
    raw = os.getenv(name, "").strip().lower()
    if raw in ("", "inf", "none"):
        return None
    return int(raw)


class Settings(BaseSettings):
    """Application settings."""

    # App settings
    DEBUG: bool = os.getenv("DEBUG", "False").lower() in ("true", "1", "t")
    LOG_LEVEL: str = os.getenv("LOG_LEVEL", "INFO")
    LOG_FILE: Optional[str] = os.getenv("LOG_FILE") or None

    # Oracle (random points over GF(p))
    ORACLE_PRIME: int = int(os.getenv("ORACLE_PRIME", "1000003"))
    ORACLE_SEED: int = int(os.getenv("ORACLE_SEED", "0"))
    ORACLE_MAX_DEGREE: int = int(os.getenv("ORACLE_MAX_DEGREE", "40"))
    ORACLE_RESAMPLE_LIMIT: int = int(os.getenv("ORACLE_RESAMPLE_LIMIT", "5"))

    # Order l of -K restricted to the cubic for r = 9; None means infinite
    CUBIC_ORDER: Optional[int] = _optional_int("CUBIC_ORDER")

    # Result cache
    CACHE_ENABLED: bool = os.getenv("CACHE_ENABLED", "True").lower() in ("true", "1", "t")
    CACHE_PATH: str = os.getenv("CACHE_PATH") or default_cache_path()

    # Defaults for the scanning commands
    SCAN_M_MAX: int = int(os.getenv("SCAN_M_MAX", "120"))
    ORBIT_BOUND: int = int(os.getenv("ORBIT_BOUND", "60"))
    ORBIT_MAX_CLASSES: int = int(os.getenv("ORBIT_MAX_CLASSES", "200000"))

    @field_validator("CUBIC_ORDER", mode="before")
    @classmethod
    def _check_order(cls, value: object) -> Optional[int]:
        if value is None or (isinstance(value, str) and value.strip().lower() in ("", "inf", "none")):
            return None
        order = int(value)  # type: ignore[call-overload]
        if order < 1:
            raise ValueError("CUBIC_ORDER must be a positive integer or unset")
        return order

    @field_validator("LOG_FILE", mode="before")
    @classmethod
    def _blank_log_file(cls, value: object) -> object:
        return value or None

    @field_validator("CACHE_PATH", mode="before")
    @classmethod
    def _blank_cache_path(cls, value: object) -> object:
        return value or default_cache_path()

    @field_validator("ORACLE_RESAMPLE_LIMIT", "ORACLE_MAX_DEGREE", "ORBIT_MAX_CLASSES")
    @classmethod
    def _check_positive(cls, value: int) -> int:
        if value < 1:
            raise ValueError("must be positive")
        return value

    class Config:
        env_file = ".env"
        env_file_encoding = "utf-8"
        case_sensitive = True


# Create settings instance
settings = Settings()
