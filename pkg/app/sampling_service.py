import logging
from typing import Literal

from fastapi import HTTPException
from pydantic import BaseModel, Field

from poisson_disk import engine
from poisson_disk.errors import PoissonDiskError
from poisson_disk.formats import PatternDocument
from poisson_disk.naive import NaiveConfig, naive_run
from poisson_disk.settings import DEFAULT_K, load_settings
from poisson_disk.stats import PatternStats, compute_stats, maximality_bound, maximality_probe

settings = load_settings()


class GenerateRequest(BaseModel):
    radius: float = Field(gt=0)
    k: int = Field(default=DEFAULT_K, ge=8)
    seed: int = 0
    method: Literal["engine", "naive"] = "engine"


class StatsResponse(BaseModel):
    stats: PatternStats
    worst_gap: float
    maximal: bool


def generate_pattern(request: GenerateRequest) -> PatternDocument:
    if request.radius < settings.service_min_radius:
        raise HTTPException(status_code=400, detail=f"radius must be at least {settings.service_min_radius}")
    try:
        if request.method == "naive":
            pattern = naive_run(NaiveConfig(r=request.radius, seed=request.seed))
        else:
            pattern = engine.run(request.radius, request.k, request.seed)
    except (PoissonDiskError, ValueError) as e:
        logging.error(f"Rejected generate request: {e}")
        raise HTTPException(status_code=400, detail=str(e))
    except Exception as e:
        logging.error(f"Error generating pattern: {e}")
        raise HTTPException(status_code=500, detail="Internal Server Error")
    logging.info(f"[generate] r={request.radius} seed={request.seed} N={len(pattern)}")
    return PatternDocument.from_pattern(pattern)


def pattern_stats(document: PatternDocument) -> StatsResponse:
    try:
        pattern = document.to_pattern()
        stats = compute_stats(pattern)
        gap = maximality_probe(pattern, maximality_bound(pattern))
    except (PoissonDiskError, ValueError) as e:
        logging.error(f"Rejected stats request: {e}")
        raise HTTPException(status_code=400, detail=str(e))
    except Exception as e:
        logging.error(f"Error computing pattern stats: {e}")
        raise HTTPException(status_code=500, detail="Internal Server Error")
    return StatsResponse(stats=stats, worst_gap=gap.worst_gap, maximal=gap.maximal)
