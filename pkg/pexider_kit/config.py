from pydantic_settings import BaseSettings
from functools import lru_cache
import logging


class Settings(BaseSettings):
    """Toolkit settings loaded from PEXIDER_* environment variables with hardcoded defaults"""

    # Logging - off | info | debug
    LOG: str = "off"

    # Interval handling
    INTERIOR_MARGIN_REL: float = 1e-6
    EMPTY_SLACK: float = 1e-12

    # Piece junctions
    CONTINUITY_RTOL: float = 1e-12
    JUNCTION_TOL: float = 1e-9

    # Quadrature
    QUAD_TOL: float = 1e-10
    QUAD_CHECKPOINTS: int = 129
    QUAD_MAX_SUBDIVISIONS: int = 200

    # Monotone inversion
    INVERSE_TOL: float = 1e-13
    BISECTION_MAX_ITER: int = 200
    MONOTONE_SAMPLES: int = 257

    # Denominator sampling for closed forms and profile constructors
    DENOMINATOR_SAMPLES: int = 1024
    PROFILE_DENOMINATOR_SAMPLES: int = 4096

    # G recovery and artifacts
    G_GRID_SIZE: int = 513
    ARTIFACT_SAMPLES: int = 1025
    INTERPOLATION_TOL: float = 1e-9

    # Residual grids and classifier defaults
    RESIDUAL_N: int = 200
    RESIDUAL_MARGIN: float = 1e-3
    CLASSIFY_N: int = 4096
    CLASSIFY_TOL: float = 1e-6

    class Config:
        env_prefix = "PEXIDER_"
        env_file = ".env"
        case_sensitive = True

    @property
    def log_level(self) -> int:
        """Map the LOG switch onto a logging level"""
        levels = {"off": logging.CRITICAL + 1, "info": logging.INFO, "debug": logging.DEBUG}
        return levels.get(self.LOG.strip().lower(), logging.CRITICAL + 1)


@lru_cache()
def get_settings() -> Settings:
    """Get cached settings instance"""
    return Settings()
