from pydantic_settings import BaseSettings
from pydantic import ConfigDict


class Settings(BaseSettings):
    model_config = ConfigDict(
        env_file=".env",
        case_sensitive=True,
        extra="ignore",  # Allow extra fields from .env file
    )

    # Application
    APP_NAME: str = "TwinWL"
    APP_VERSION: str = "1.0.0"
    APP_DEBUG: bool = False
    APP_ENV: str = "production"
    LOG_LEVEL: str = "WARNING"

    # Worker processes for experiment samples
    TWINWL_THREADS: int = 1

    # Size guards
    WL_MAX_TUPLES: int = 100_000_000
    WL_MAX_MEMORY_MB: int = 4096
    PEBBLE_MAX_POSITIONS: int = 5_000_000
    RANK_CONNECTIVITY_MAX_VERTICES: int = 20
    NAIVE_TWW_MAX_VERTICES: int = 7

    # Twin-width search budget defaults
    EXACT_TWW_MAX_NODES: int = 2_000_000
    EXACT_TWW_TIME_CAP: float = 600.0
    HEURISTIC_BEAM: int = 8
    HEURISTIC_MAX_NODES: int = 50_000_000

    # Where experiment reports and counterexample bundles land
    OUTPUT_DIR: str = "out"

    # CORS
    ALLOWED_ORIGINS: list = ["http://localhost:3000", "http://localhost:8080"]


settings = Settings()
