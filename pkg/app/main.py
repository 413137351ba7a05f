from dotenv import load_dotenv
from fastapi import FastAPI
from fastapi.middleware.cors import CORSMiddleware

from app.sampling_service import GenerateRequest, StatsResponse, generate_pattern, pattern_stats, settings
from poisson_disk.formats import PatternDocument
from poisson_disk.logging_setup import configure_logging

load_dotenv()
configure_logging(settings)

app = FastAPI(title="poisson-disk")

app.add_middleware(
    CORSMiddleware,
    allow_origins=["*"],
    allow_credentials=True,
    allow_methods=["*"],
    allow_headers=["*"],
)


@app.post("/generate", response_model=PatternDocument)
def handle_generate(request: GenerateRequest):
    return generate_pattern(request)


@app.post("/stats", response_model=StatsResponse)
def handle_stats(document: PatternDocument):
    return pattern_stats(document)
