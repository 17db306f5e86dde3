"""Configuration management for Retrofit PRAE"""

from pathlib import Path
from typing import Optional

from pydantic_settings import BaseSettings, SettingsConfigDict


class Settings(BaseSettings):
    """Process-level settings loaded from environment variables (prefix RPRAE_)"""

    model_config = SettingsConfigDict(
        env_prefix="RPRAE_",
        env_file=".env",
        env_file_encoding="utf-8",
        case_sensitive=False,
        extra="ignore",
    )

    # Logging
    log_level: str = "INFO"
    log_file: Optional[str] = None
    log_rotation: str = "10 MB"
    log_retention: str = "14 days"

    # Runs
    output_dir: str = "./runs"
    threads: int = 1

    def get_output_dir(self) -> Path:
        """Get default output directory path, creating if needed"""
        out_dir = Path(self.output_dir)
        out_dir.mkdir(parents=True, exist_ok=True)
        return out_dir


# Global settings instance
_settings: Optional[Settings] = None


def get_settings() -> Settings:
    """Get global settings instance, creating if needed"""
    global _settings
    if _settings is None:
        _settings = Settings()
    return _settings


def reset_settings() -> None:
    """Reset global settings instance (mainly for testing)"""
    global _settings
    _settings = None
