from functools import lru_cache

from pydantic_settings import BaseSettings, SettingsConfigDict


class Settings(BaseSettings):
    model_config = SettingsConfigDict(
        env_prefix="BUCHI_RL_",
        env_file=".env",
        env_file_encoding="utf-8",
        extra="ignore",
    )
    # Product enumeration
    STATE_CAP: int = 1_000_000

    # Logging / execution
    LOG_LEVEL: str = "INFO"
    WORKERS: int = 1

    # Model checker
    DIRECT_SOLVER_LIMIT: int = 50_000
    SOLVER_TOLERANCE: float = 1e-10
    MAX_ITERATIONS: int = 100_000


@lru_cache
def get_settings() -> Settings:
    return Settings()
