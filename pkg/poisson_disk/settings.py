import os

from dotenv import load_dotenv
from pydantic import BaseModel, Field

load_dotenv()

DEFAULT_K = 64


def _env_flag(name: str) -> bool:
    return os.environ.get(name, "").strip().lower() in {"1", "true", "yes", "on"}


class Settings(BaseModel):
    """Process-wide configuration read from the environment (and a local .env)."""

    log_level: str = "INFO"
    k: int = Field(default=DEFAULT_K, ge=8)
    workers: int = Field(default=1, ge=1)
    cloud_logging: bool = False
    cloud_project: str | None = None
    service_min_radius: float = Field(default=0.005, gt=0)


def load_settings() -> Settings:
    return Settings(
        log_level=os.environ.get("POISSON_DISK_LOG_LEVEL", "INFO").upper(),
        k=int(os.environ.get("POISSON_DISK_K", DEFAULT_K)),
        workers=int(os.environ.get("POISSON_DISK_WORKERS", os.cpu_count() or 1)),
        cloud_logging=_env_flag("POISSON_DISK_CLOUD_LOGGING"),
        cloud_project=os.environ.get("GOOGLE_CLOUD_PROJECT"),
        service_min_radius=float(os.environ.get("POISSON_DISK_SERVICE_MIN_RADIUS", 0.005)),
    )
