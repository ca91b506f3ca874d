"""Build labeled salient-image datasets from class-organized frame directories.

Expected input layout:

    root/
      NonViolence/<video_id>/frame_000000.ppm ...
      Violence/<video_id>/...
      WeaponizedViolence/<video_id>/...

Every video is chunked and composed, the mosaics are persisted as canonical
PPM under the output directory, and a JSON-lines manifest records one row per
salient image. Split assignment is per video so no chunk of one clip can end
up on both sides.
"""

from __future__ import annotations

import json
import warnings
from dataclasses import dataclass
from enum import IntEnum
from pathlib import Path

from . import frame_io
from .composer import GridSpec, TailPolicy, chunk_and_compose
from .errors import DegenerateSplit, UnknownClassDir
from .rng import Rng


class ClassLabel(IntEnum):
    NON_VIOLENCE = 0
    VIOLENCE = 1
    WEAPONIZED_VIOLENCE = 2


CLASS_DIR_NAMES = {
    "NonViolence": ClassLabel.NON_VIOLENCE,
    "Violence": ClassLabel.VIOLENCE,
    "WeaponizedViolence": ClassLabel.WEAPONIZED_VIOLENCE,
}

TRAIN, TEST = "train", "test"


@dataclass
class ManifestRecord:
    salient_path: str
    label: ClassLabel
    source_id: str
    chunk_index: int
    grid: GridSpec
    split: str | None = None

    def to_json(self) -> str:
        return json.dumps(
            {
                "salient_path": self.salient_path,
                "label": int(self.label),
                "source_id": self.source_id,
                "chunk_index": self.chunk_index,
                "grid": str(self.grid),
                "split": self.split,
            }
        )

    @classmethod
    def from_json(cls, line: str) -> "ManifestRecord":
        obj = json.loads(line)
        return cls(
            salient_path=obj["salient_path"],
            label=ClassLabel(obj["label"]),
            source_id=obj["source_id"],
            chunk_index=obj["chunk_index"],
            grid=GridSpec.parse(obj["grid"]),
            split=obj.get("split"),
        )


def write_manifest(records: list[ManifestRecord], path: str | Path) -> None:
    path = Path(path)
    path.write_text("".join(r.to_json() + "\n" for r in records), encoding="utf-8")


def read_manifest(path: str | Path) -> list[ManifestRecord]:
    lines = Path(path).read_text("utf-8").splitlines()
    return [ManifestRecord.from_json(line) for line in lines if line.strip()]


def build_dataset(
    root: str | Path,
    grid: GridSpec,
    tail_policy: TailPolicy,
    out_dir: str | Path,
) -> list[ManifestRecord]:
    """Compose every video under root and persist images plus manifest.

    Returns records sorted by (label, source_id, chunk_index); the manifest
    is written to out_dir/manifest.jsonl with salient paths relative to
    out_dir. Directories under root other than the three class names are
    rejected.
    """
    root = Path(root)
    out_dir = Path(out_dir)
    for entry in sorted(root.iterdir()):
        if entry.is_dir() and entry.name not in CLASS_DIR_NAMES:
            raise UnknownClassDir(f"unexpected class directory {entry}")

    records = []
    for class_name, label in CLASS_DIR_NAMES.items():
        class_dir = root / class_name
        if not class_dir.is_dir():
            warnings.warn(f"missing class directory {class_dir}, no {class_name} records")
            continue
        videos = sorted(p for p in class_dir.iterdir() if p.is_dir())
        if not videos:
            warnings.warn(f"empty class directory {class_dir}, no {class_name} records")
            continue
        for video_dir in videos:
            # frame_io errors already name the offending file or directory
            seq = frame_io.read_frame_dir(video_dir)
            salients = chunk_and_compose(seq, grid, tail_policy)
            image_dir = out_dir / "images" / class_name
            image_dir.mkdir(parents=True, exist_ok=True)
            for salient in salients:
                rel = Path("images") / class_name / salient.filename
                (out_dir / rel).write_bytes(frame_io.encode_ppm(salient.image))
                records.append(
                    ManifestRecord(
                        salient_path=rel.as_posix(),
                        label=label,
                        source_id=f"{class_name}/{seq.source_id}",
                        chunk_index=salient.chunk_index,
                        grid=grid,
                    )
                )

    records.sort(key=lambda r: (int(r.label), r.source_id, r.chunk_index))
    write_manifest(records, out_dir / "manifest.jsonl")
    return records


def split_dataset(
    records: list[ManifestRecord], test_fraction: float, seed: int
) -> list[ManifestRecord]:
    """Assign train/test per video with a seeded shuffle within each class.

    Per-class test count is round-half-up(test_fraction * videos in class).
    All chunks of one video land on the same side. Returns the same records
    with split filled in; order is unchanged.
    """
    if not records:
        raise ValueError("cannot split an empty manifest")
    if not 0.0 < test_fraction < 1.0:
        raise ValueError("test_fraction must be in (0, 1)")

    rng = Rng(seed)
    assignment: dict[str, str] = {}
    for label in ClassLabel:
        videos = sorted({r.source_id for r in records if r.label == label})
        if not videos:
            continue
        rng.shuffle(videos)
        n_test = int(test_fraction * len(videos) + 0.5)
        if n_test == 0 or n_test == len(videos):
            warnings.warn(
                f"class {label.name}: {len(videos)} video(s) at fraction "
                f"{test_fraction} leaves one split side empty",
                DegenerateSplit,
            )
        for i, vid in enumerate(videos):
            assignment[vid] = TEST if i < n_test else TRAIN

    for r in records:
        r.split = assignment[r.source_id]
    return records
