"""Reader for the generator's dataset file format.

A dataset directory holds {paradigm}.{split}.jsonl files (UTF-8 JSON lines
behind a schema header) and a {paradigm}.manifest.json sidecar. Records
carry the task label, the linear-rule label, and quad/cell metadata that
pairs minimal-pair members.
"""

from __future__ import annotations

import json
import os
from dataclasses import dataclass
from typing import Mapping

SPLITS = ("train", "dev", "test")

FIELDS = (
    "text",
    "label",
    "label_linear",
    "paradigm",
    "split",
    "template_kind",
    "quad_id",
    "cell",
)


class FormatError(Exception):
    """A dataset file does not conform to the interchange format."""


@dataclass(frozen=True)
class Record:
    text: str
    label: bool
    label_linear: bool
    paradigm: str
    split: str
    template_kind: str
    quad_id: int
    cell: str


def load_split(path) -> list:
    records = []
    with open(path, "r", encoding="utf-8") as handle:
        for lineno, line in enumerate(handle, start=1):
            line = line.strip()
            if not line:
                continue
            where = f"{path}:{lineno}"
            try:
                obj = json.loads(line)
            except json.JSONDecodeError as exc:
                raise FormatError(f"{where}: invalid JSON ({exc.msg})") from None
            if lineno == 1:
                if obj.get("kind") != "schema":
                    raise FormatError(f"{where}: missing schema header line")
                continue
            missing = [name for name in FIELDS if name not in obj]
            if missing:
                raise FormatError(f"{where}: missing field(s) {missing}")
            records.append(
                Record(
                    text=str(obj["text"]),
                    label=bool(obj["label"]),
                    label_linear=bool(obj["label_linear"]),
                    paradigm=str(obj["paradigm"]),
                    split=str(obj["split"]),
                    template_kind=str(obj["template_kind"]),
                    quad_id=int(obj["quad_id"]),
                    cell=str(obj["cell"]),
                )
            )
    return records


def load_dataset(indir, paradigm: str) -> Mapping[str, list]:
    splits = {}
    for split in SPLITS:
        path = os.path.join(indir, f"{paradigm}.{split}.jsonl")
        if not os.path.exists(path):
            raise FormatError(f"missing split file {path}")
        splits[split] = load_split(path)
    return splits


def detect_paradigms(indir) -> list:
    return [
        name[: -len(".manifest.json")]
        for name in sorted(os.listdir(indir))
        if name.endswith(".manifest.json")
    ]
