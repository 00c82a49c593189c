"""Application configuration using Pydantic Settings."""
import logging

from pydantic import field_validator
from pydantic_settings import BaseSettings, SettingsConfigDict


class Settings(BaseSettings):
    """Ambient settings loaded from EXACTGJ_* environment variables or .env.

    Nothing here changes the bytes a command prints; these only steer logging,
    the verification ledger and self-check parallelism.
    """

    # Logging
    log_level: str = "WARNING"
    log_format: str = "standard"  # "json" or "standard"

    # Verification ledger
    database_url: str = "sqlite:///verification_runs.db"
    run_retention_days: int = 90

    # Self-check
    selfcheck_workers: int = 1

    @field_validator('log_level')
    @classmethod
    def validate_log_level(cls, v):
        level = v.upper()
        if not isinstance(logging.getLevelName(level), int):
            raise ValueError(f'log_level must be a logging level name, got {v!r}')
        return level

    @field_validator('log_format')
    @classmethod
    def validate_log_format(cls, v):
        valid_formats = ['json', 'standard']
        if v.lower() not in valid_formats:
            raise ValueError(f'log_format must be one of {valid_formats}')
        return v.lower()

    @field_validator('database_url')
    @classmethod
    def validate_database_url(cls, v):
        if not v or len(v.strip()) == 0:
            raise ValueError('database_url must not be empty')
        return v.strip()

    @field_validator('run_retention_days')
    @classmethod
    def validate_run_retention_days(cls, v):
        if v < 1:
            raise ValueError('run_retention_days must be at least 1')
        if v > 3650:
            raise ValueError('run_retention_days must not exceed 3650 (10 years)')
        return v

    @field_validator('selfcheck_workers')
    @classmethod
    def validate_selfcheck_workers(cls, v):
        if v < 1:
            raise ValueError('selfcheck_workers must be positive')
        if v > 64:
            raise ValueError('selfcheck_workers must not exceed 64')
        return v

    model_config = SettingsConfigDict(
        env_prefix="EXACTGJ_",
        env_file=".env",
        env_file_encoding="utf-8",
        case_sensitive=False,
        extra="ignore",
    )


# Global settings instance
settings = Settings()
