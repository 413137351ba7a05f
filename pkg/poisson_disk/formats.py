"""Pattern and benchmark emission: CSV, JSON document, SVG."""

import xml.etree.ElementTree as ET
from pathlib import Path
from typing import Sequence

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402
import pandas as pd  # noqa: E402
from pydantic import BaseModel, ValidationError  # noqa: E402

from poisson_disk.engine import Pattern, Sample  # noqa: E402
from poisson_disk.errors import PatternFormatError  # noqa: E402
from poisson_disk.grid import GridParams  # noqa: E402
from poisson_disk.settings import DEFAULT_K  # noqa: E402
from poisson_disk.stats import BenchRecord  # noqa: E402

POINT_COLUMNS = ["x", "y", "t"]
BENCH_COLUMNS = ["r", "n_accepted", "n_generated", "wall_seconds", "samples_per_second"]
FLOAT_FORMAT = "%.17g"
SVG_SIZE = 800


class PatternDocument(BaseModel):
    radius: float
    k: int = DEFAULT_K
    seed: int = 0
    method: str = "engine"
    points: list[tuple[float, float, float]]
    generated_count: int

    @classmethod
    def from_pattern(cls, pattern: Pattern) -> "PatternDocument":
        return cls(
            radius=pattern.radius,
            k=pattern.k,
            seed=pattern.seed,
            method=pattern.method,
            points=[tuple(s) for s in pattern.samples],
            generated_count=pattern.generated_count,
        )

    def to_pattern(self) -> Pattern:
        params = GridParams.from_radius(self.radius, self.k)
        samples = tuple(Sample(x, y, t) for x, y, t in self.points)
        return Pattern(samples, params, self.seed, self.generated_count, self.method)


def points_frame(pattern: Pattern) -> pd.DataFrame:
    return pd.DataFrame(list(pattern.samples), columns=POINT_COLUMNS)


def write_points_csv(pattern: Pattern, path: Path) -> None:
    points_frame(pattern).to_csv(path, index=False, float_format=FLOAT_FORMAT, lineterminator="\n")


def read_points_csv(path: Path, radius: float, k: int = DEFAULT_K, seed: int = 0) -> Pattern:
    try:
        frame = pd.read_csv(path, dtype=float, float_precision="round_trip")
    except pd.errors.EmptyDataError as e:
        raise PatternFormatError(f"{path} is empty") from e
    except (pd.errors.ParserError, ValueError) as e:
        raise PatternFormatError(f"{path} is not a point table: {e}") from e
    if list(frame.columns) != POINT_COLUMNS:
        raise PatternFormatError(f"{path} must have header {','.join(POINT_COLUMNS)}, found {','.join(frame.columns)}")
    if frame.isna().any().any():
        raise PatternFormatError(f"{path} has missing values")
    samples = tuple(Sample(float(row.x), float(row.y), float(row.t)) for row in frame.itertuples(index=False))
    params = GridParams.from_radius(radius, k)
    return Pattern(samples, params, seed, len(samples), method="file")


def write_pattern_json(pattern: Pattern, path: Path) -> None:
    Path(path).write_text(PatternDocument.from_pattern(pattern).model_dump_json(indent=2) + "\n")


def read_pattern_json(path: Path) -> Pattern:
    text = Path(path).read_text()
    if not text.strip():
        raise PatternFormatError(f"{path} is empty")
    try:
        return PatternDocument.model_validate_json(text).to_pattern()
    except ValidationError as e:
        raise PatternFormatError(f"{path} is not a pattern document: {e}") from e


def points_svg(pattern: Pattern) -> ET.Element:
    """One circle per point with radius r/2, viewBox over the unit square, y up."""
    svg = ET.Element(
        "svg",
        xmlns="http://www.w3.org/2000/svg",
        width=str(SVG_SIZE),
        height=str(SVG_SIZE),
        viewBox="0 0 1 1",
    )
    ET.SubElement(svg, "rect", x="0", y="0", width="1", height="1", fill="white", stroke="black", attrib={"stroke-width": "0.002"})
    group = ET.SubElement(svg, "g", fill="black", transform="matrix(1 0 0 -1 0 1)")
    dot = repr(pattern.radius / 2.0)
    for s in pattern.samples:
        ET.SubElement(group, "circle", cx=repr(s.x), cy=repr(s.y), r=dot)
    return svg


def write_points_svg(pattern: Pattern, path: Path) -> None:
    tree = ET.ElementTree(points_svg(pattern))
    tree.write(path, encoding="utf-8", xml_declaration=True)


def write_pattern(pattern: Pattern, path: Path, fmt: str) -> None:
    writers = {"csv": write_points_csv, "json": write_pattern_json, "svg": write_points_svg}
    writers[fmt](pattern, path)


def read_pattern(path: Path, radius: float | None, k: int = DEFAULT_K) -> Pattern:
    """CSV needs the radius from the caller; JSON documents carry their own."""
    if Path(path).suffix.lower() == ".json":
        return read_pattern_json(path)
    if radius is None:
        raise PatternFormatError("a radius is required to read a CSV pattern")
    return read_points_csv(path, radius, k)


def bench_frame(records: Sequence[BenchRecord]) -> pd.DataFrame:
    return pd.DataFrame([r.model_dump() for r in records], columns=BENCH_COLUMNS)


def write_bench_csv(records: Sequence[BenchRecord], path: Path) -> None:
    bench_frame(records).to_csv(path, index=False, float_format=FLOAT_FORMAT, lineterminator="\n")


def plot_bench(records: Sequence[BenchRecord], path: Path) -> None:
    frame = bench_frame(records)
    ratio = frame["n_generated"] / frame["n_accepted"]

    fig, left = plt.subplots(figsize=(7, 4))
    left.plot(frame["n_accepted"], frame["samples_per_second"], "o-", color="tab:blue")
    left.set_xscale("log")
    left.set_xlabel("accepted samples N")
    left.set_ylabel("samples per second", color="tab:blue")
    left.set_ylim(bottom=0)

    right = left.twinx()
    right.plot(frame["n_accepted"], ratio, "s--", color="tab:red")
    right.set_ylabel("generated / accepted", color="tab:red")
    right.set_ylim(bottom=0)

    left.set_title("Poisson-disk throughput over the radius sweep", fontsize=9)
    fig.tight_layout()
    fig.savefig(path, format="svg")
    plt.close(fig)
