import os
from pathlib import Path

from pydantic import Field
from pydantic_settings import BaseSettings

"""
Command line configuration settings
Process-level settings loaded from environment variables (prefix SSMREC_)
"""
class Settings(BaseSettings):
    """
    Application
    """
    app_name: str = "ssmrec"
    app_version: str = "0.1.0"
    log_level: str = "INFO"

    """
    Output paths
    """
    out_dir: Path = Path("./runs")

    """
    Parallelism (caps sweep workers)
    """
    threads: int = Field(default=os.cpu_count() or 1, ge=1)

    """
    Sweep settings
    """
    max_grid_points: int = Field(default=64, ge=1)

    """
    Evaluation settings
    """
    eval_chunk_size: int = Field(default=1024, ge=1)

    """
    Verification settings
    """
    verify_trials: int = Field(default=10_000, ge=1)

    class Config:
        env_prefix = "SSMREC_"
        env_file = ".env"


"""
Global settings instance
"""
settings = Settings()
