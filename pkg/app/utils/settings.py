"""
Run-time settings.
Resolved from CLI flags, then environment (.env supported), then rule defaults.
"""

import logging
import os
from typing import Optional

from dotenv import load_dotenv
from pydantic import BaseModel, Field

from app.rules.tolerances import ToleranceRules

logger = logging.getLogger(__name__)

# Load environment variables
load_dotenv()


class GridConfig(BaseModel):
    """Geometric sampling grid for numeric verification."""
    tmin: float = Field(gt=0, description="Smallest parameter value")
    tmax: float = Field(gt=0, description="Largest parameter value")
    points: int = Field(ge=2, description="Number of samples")


class Settings(BaseModel):
    """Settings shared by every pipeline stage."""
    seed: int = Field(0, description="Seed of every random generator")
    precision: int = Field(100, ge=30, description="mpmath decimal working precision")
    nondegenerate_at_infinity: bool = Field(False, description="User-asserted genericity flag")
    exhaustive_faces: bool = Field(False, description="Keep every bad face instead of the maximal ones")
    grid: GridConfig
    log_level: str = Field("INFO", description="Logging level name")


def _env_int(name: str) -> Optional[int]:
    raw = os.getenv(name)
    if raw is None or raw.strip() == "":
        return None
    try:
        return int(raw)
    except ValueError:
        logger.warning(f"Ignoring non-integer {name}={raw!r}")
        return None


def load_settings(
    seed: Optional[int] = None,
    precision: Optional[int] = None,
    nondegenerate: bool = False,
    tmin: Optional[float] = None,
    tmax: Optional[float] = None,
    points: Optional[int] = None,
    log_level: Optional[str] = None,
    exhaustive_faces: bool = False,
    rules: Optional[ToleranceRules] = None,
) -> Settings:
    """Resolve settings: explicit argument, then environment, then rules.

    Args:
        seed: Explicit seed (CLI flag or problem file).
        precision: Explicit working precision.
        nondegenerate: Non-degeneracy-at-infinity flag.
        tmin: Smallest grid parameter.
        tmax: Largest grid parameter.
        points: Grid size.
        log_level: Logging level name.
        exhaustive_faces: Keep every bad face instead of the maximal ones.
        rules: Numeric rules providing the defaults.

    Returns:
        Settings instance.
    """
    rules = rules or ToleranceRules()

    env_seed = _env_int("ACV_SEED")
    if seed is None:
        seed = env_seed if env_seed is not None else 0

    env_precision = _env_int("ACV_PRECISION")
    if precision is None:
        precision = env_precision if env_precision is not None else rules.get("working_precision")

    grid = GridConfig(
        tmin=tmin if tmin is not None else rules.get("grid_tmin"),
        tmax=tmax if tmax is not None else rules.get("grid_tmax"),
        points=points if points is not None else rules.get("grid_points"),
    )
    if grid.tmin >= grid.tmax:
        raise ValueError(f"Grid requires tmin < tmax, got {grid.tmin} >= {grid.tmax}")

    return Settings(
        seed=seed,
        precision=precision,
        nondegenerate_at_infinity=nondegenerate,
        exhaustive_faces=exhaustive_faces,
        grid=grid,
        log_level=(log_level or os.getenv("ACV_LOG_LEVEL") or "INFO").upper(),
    )
