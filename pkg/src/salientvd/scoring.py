"""Sustainability scoring and ranking of candidate deployment models.

Each model profile earns reward/punishment marks on three trade-offs:

    time:     1 if its mean inference time beats the cohort mean, else 0
    loss:     1 below 0.1, 0 in [0.1, 0.2), -1 at or above 0.2
    accuracy: 1 above 95%, 0 in (90, 95], -1 at or below 90

and is ranked by the mark total. Read literally as open intervals, the
middle buckets would punish a loss of exactly 0.1 harder than 0.15; the
default closes them on the reward side (loss 0.1 and accuracy 95 earn the
middle mark, while loss 0.2 and accuracy 90 stay punished), and strict=True
keeps the open-interval reading where every boundary value falls through
to the punishment mark. The cohort for the time mean is whatever
profile list is passed in; profiles with different frames-per-input never
share a cohort unless explicitly allowed.
"""

from __future__ import annotations

import csv
import io
import json
from dataclasses import dataclass
from importlib import resources
from pathlib import Path

from .errors import EmptyCohort, MixedCohort

PROFILE_FIELDS = [
    "name",
    "input_frames",
    "params_millions",
    "num_layers",
    "time_ms",
    "val_loss",
    "accuracy_pct",
]


@dataclass
class ModelProfile:
    name: str
    input_frames: int
    params_millions: float
    num_layers: int
    time_ms: float
    val_loss: float
    accuracy_pct: float

    def __post_init__(self):
        if self.time_ms <= 0:
            raise ValueError("time_ms must be positive")
        if not 0.0 <= self.accuracy_pct <= 100.0:
            raise ValueError("accuracy_pct must be within [0, 100]")
        if self.val_loss < 0:
            raise ValueError("val_loss must be non-negative")

    def to_dict(self) -> dict:
        return {f: getattr(self, f) for f in PROFILE_FIELDS}


@dataclass
class ScoreCard:
    m_time: int
    m_loss: int
    m_acc: int

    @property
    def total(self) -> int:
        return self.m_time + self.m_loss + self.m_acc

    def to_dict(self) -> dict:
        return {
            "m_time": self.m_time,
            "m_loss": self.m_loss,
            "m_acc": self.m_acc,
            "total": self.total,
        }


def score_time(profiles: list[ModelProfile]) -> list[int]:
    """1 for each profile strictly faster than the cohort's mean time."""
    if not profiles:
        raise EmptyCohort("cannot score an empty cohort")
    mean = sum(p.time_ms for p in profiles) / len(profiles)
    return [1 if p.time_ms < mean else 0 for p in profiles]


def score_loss(val_loss: float, strict: bool = False) -> int:
    if val_loss < 0:
        raise ValueError("loss must be non-negative")
    if val_loss < 0.1:
        return 1
    if strict:
        return 0 if 0.1 < val_loss < 0.2 else -1
    return 0 if val_loss < 0.2 else -1


def score_accuracy(accuracy_pct: float, strict: bool = False) -> int:
    if not 0.0 <= accuracy_pct <= 100.0:
        raise ValueError("accuracy must be a percentage in [0, 100]")
    if accuracy_pct > 95.0:
        return 1
    if strict:
        return 0 if 90.0 < accuracy_pct < 95.0 else -1
    return 0 if accuracy_pct > 90.0 else -1


def score_cards(profiles: list[ModelProfile], strict: bool = False) -> list[ScoreCard]:
    times = score_time(profiles)
    return [
        ScoreCard(
            m_time=t,
            m_loss=score_loss(p.val_loss, strict=strict),
            m_acc=score_accuracy(p.accuracy_pct, strict=strict),
        )
        for p, t in zip(profiles, times)
    ]


def rank(
    profiles: list[ModelProfile],
    strict: bool = False,
    allow_mixed: bool = False,
) -> list[tuple[ModelProfile, ScoreCard]]:
    """Profiles with score cards, best first.

    Sorted by total descending; ties break on lower time, then lower loss,
    then fewer parameters, then name.
    """
    if not profiles:
        raise EmptyCohort("cannot rank an empty cohort")
    frames = {p.input_frames for p in profiles}
    if len(frames) > 1 and not allow_mixed:
        raise MixedCohort(f"profiles mix input_frames {sorted(frames)}; pass allow_mixed to force")
    cards = score_cards(profiles, strict=strict)
    paired = list(zip(profiles, cards))
    paired.sort(key=lambda pc: (-pc[1].total, pc[0].time_ms, pc[0].val_loss, pc[0].params_millions, pc[0].name))
    return paired


def format_ranking(ranking: list[tuple[ModelProfile, ScoreCard]]) -> str:
    """Aligned text table of a ranking."""
    headers = ["model", "frames", "param(M)", "layers", "time(ms)", "loss", "acc(%)", "mT", "mL", "mP", "total"]
    rows = [
        [
            p.name,
            str(p.input_frames),
            f"{p.params_millions:g}",
            str(p.num_layers),
            f"{p.time_ms:g}",
            f"{p.val_loss:g}",
            f"{p.accuracy_pct:g}",
            f"{c.m_time:+d}",
            f"{c.m_loss:+d}",
            f"{c.m_acc:+d}",
            f"{c.total:+d}",
        ]
        for p, c in ranking
    ]
    widths = [max(len(h), *(len(r[i]) for r in rows)) for i, h in enumerate(headers)]
    lines = ["  ".join(h.ljust(w) for h, w in zip(headers, widths)).rstrip()]
    for row in rows:
        lines.append("  ".join(v.ljust(w) for v, w in zip(row, widths)).rstrip())
    return "\n".join(lines) + "\n"


def ranking_to_json(ranking: list[tuple[ModelProfile, ScoreCard]]) -> str:
    doc = [{**p.to_dict(), **c.to_dict()} for p, c in ranking]
    return json.dumps(doc, indent=2) + "\n"


def _profile_from_row(row: dict) -> ModelProfile:
    return ModelProfile(
        name=str(row["name"]),
        input_frames=int(row["input_frames"]),
        params_millions=float(row["params_millions"]),
        num_layers=int(row["num_layers"]),
        time_ms=float(row["time_ms"]),
        val_loss=float(row["val_loss"]),
        accuracy_pct=float(row["accuracy_pct"]),
    )


def parse_profiles(text: str, fmt: str) -> list[ModelProfile]:
    """Parse profiles from 'csv' (headered) or 'json' (array of objects)."""
    if fmt == "csv":
        return [_profile_from_row(row) for row in csv.DictReader(io.StringIO(text))]
    if fmt == "json":
        return [_profile_from_row(row) for row in json.loads(text)]
    raise ValueError(f"unknown profiles format {fmt!r}")


def read_profiles(path: str | Path) -> list[ModelProfile]:
    path = Path(path)
    fmt = "json" if path.suffix.lower() == ".json" else "csv"
    return parse_profiles(path.read_text("utf-8"), fmt)


def load_reference_profiles() -> list[ModelProfile]:
    """The bundled reference trade-off table (both 15- and 6-frame cohorts)."""
    text = resources.files("salientvd").joinpath("data/table3.csv").read_text("utf-8")
    return parse_profiles(text, "csv")
