from pydantic_settings import BaseSettings
from typing import Optional
import os
from dotenv import load_dotenv

load_dotenv()

class Settings(BaseSettings):
    # Parallelism
    SLICE_THREADS: Optional[int] = None

    # Monte Carlo
    DEFAULT_SAMPLES: int = 1_000_000
    DEFAULT_SEED: int = 20240601
    BLOCK_SIZE: int = 4096
    COORD_CHUNK: int = 64
    KURTOSIS_ALARM: float = 1e3
    VERIFY_SAMPLES: int = 200_000

    # Verdicts
    GUARD_BAND_SE: float = 4.0
    BALL_GUARD_BAND_SE: float = 6.0

    # Exact enumeration
    ENUM_MAX_N: int = 24

    # Quadrature
    QUAD_ABS_TOL: float = 1e-10
    PSI_MAX_PERIODS: int = 200_000
    FOURIER_MAX_CHUNKS: int = 400_000

    # Logging
    LOG_LEVEL: str = os.getenv("LOG_LEVEL", "WARNING")

    PROJECT_NAME: str = "lpslice"

    @property
    def worker_count(self) -> int:
        """Number of worker threads for block reductions"""
        if self.SLICE_THREADS:
            return max(1, self.SLICE_THREADS)
        return os.cpu_count() or 1

    class Config:
        env_file = ".env"
        case_sensitive = True
        extra = "ignore"

settings = Settings()
