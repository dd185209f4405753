"""Configuration management for the Turán lab."""

from functools import lru_cache
from pathlib import Path

from pydantic import Field
from pydantic_settings import BaseSettings, SettingsConfigDict

# Hard ceiling for exhaustive enumeration, regardless of settings.
ENUMERATION_HARD_CAP = 12


class Settings(BaseSettings):
    """Lab-wide knobs: tolerances, enumeration budget, exact-search capacities, paths."""

    # Core paths
    cache_dir: Path = Field(default=Path("./lab_cache"), description="Record store directory (env LAB_CACHE_DIR)")
    output_dir: Path = Field(default=Path("./lab_reports"), description="Default directory for emitted reports")
    log_level: str = Field(default="INFO", description="Logging level")

    # Numerics
    spectral_tol: float = Field(default=1e-9, gt=0, description="Residual tolerance ||Mx - rho x||_inf for radii")
    max_power_iterations: int = Field(default=20000, ge=1, description="Perron refinement iteration budget")
    tie_rel_tol: float = Field(default=1e-9, gt=0, description="Relative tolerance for spectral ties")
    near_tie_rel_tol: float = Field(default=1e-6, gt=0, description="Relative window for the near-tie annex")

    # Enumeration
    enumeration_budget: int = Field(default=50_000_000, ge=1, description="Node expansions allowed per enumeration")
    max_enumeration_n: int = Field(default=10, ge=0, le=ENUMERATION_HARD_CAP, description="Largest n enumerated without override")
    min_degree_eps: float = Field(default=0.1, gt=0, le=1, description="Epsilon of the minimum-degree class proxy")

    # Exact-search capacities
    partition_vertex_cap: int = Field(default=20, ge=1, description="Largest n for exact max-r-cut")
    exhaustive_partition_cap: int = Field(default=14, ge=1, description="Largest n searched without bounding")
    chromatic_vertex_cap: int = Field(default=16, ge=1, description="Largest n for exact chromatic number")
    regularity_side_cap: int = Field(default=14, ge=1, description="Largest side of an exhaustively scanned pair")
    regular_partition_search_cap: int = Field(default=10, ge=1, description="Largest n for regular-partition search")

    # Performance
    workers: int = Field(default=1, ge=1, description="Worker processes for data-parallel sweeps")
    random_seed: int = Field(default=20250101, description="Seed for randomized suites")

    # Development
    verbose_logging: bool = Field(default=False, description="Enable verbose logging across modules")

    model_config = SettingsConfigDict(
        env_file=".env",
        env_prefix="LAB_",
        case_sensitive=False,
        extra="ignore",
    )

    def ensure_dirs(self) -> None:
        """Ensure directories exist."""
        for path in [self.cache_dir, self.output_dir]:
            path.mkdir(parents=True, exist_ok=True)

    @property
    def effective_log_level(self) -> str:
        """Resolve the log level, honouring verbose mode."""
        return "DEBUG" if self.verbose_logging else self.log_level.upper()


@lru_cache
def get_settings() -> Settings:
    """Process-wide settings loaded once from the environment."""
    return Settings()
