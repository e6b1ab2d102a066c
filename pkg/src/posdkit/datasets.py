"""Split assembly, deduplication, and the dataset file format.

Every quad is a pure function of (master_seed, paradigm, stream index), so
generation is reproducible byte-for-byte regardless of worker count: quads
may be built in parallel, but acceptance (deduplication) and emission fold
over them in stream order.

Split composition: the train split holds training-template members only;
dev and test each hold 50% held-out training-template pairs and 50%
test-template pairs. Each accepted quad contributes exactly one of its two
pairs to exactly one split.
"""

from __future__ import annotations

import datetime as _dt
import hashlib
import itertools
import json
import multiprocessing
import os
import random
import tempfile
from dataclasses import dataclass
from typing import Callable, Mapping, Optional, Sequence

import posdkit
from posdkit.data import default_lexicon, paradigm_templates
from posdkit.lexicon import Lexicon
from posdkit.paradigms import (
    DesignCheck,
    DesignReport,
    LabeledSentence,
    Quad,
    build_confound_control,
    build_quad,
    get_paradigm,
)

SPLITS = ("train", "dev", "test")


class DatasetError(Exception):
    pass


class MalformedRecordError(DatasetError):
    pass


class InsufficientLexiconError(DatasetError):
    pass


@dataclass(frozen=True)
class DatasetSpec:
    """What to generate: paradigm, size, seed, and optional control mix."""

    paradigm: str
    n_per_split: int = 10000
    master_seed: int = 0
    augment_controls: bool = False

    def validate(self) -> None:
        get_paradigm(self.paradigm)
        if self.n_per_split < 4 or self.n_per_split % 4 != 0:
            raise DatasetError("n_per_split must be >= 4 and divisible by 4")
        if self.augment_controls:
            if self.paradigm != "saux_inv":
                raise DatasetError("confound controls exist only for saux_inv")
            if self.n_per_split % 8 != 0:
                raise DatasetError(
                    "with controls enabled n_per_split must be divisible by 8"
                )

    @property
    def n_controls(self) -> int:
        return self.n_per_split // 4 if self.augment_controls else 0

    def to_dict(self) -> dict:
        return {
            "paradigm": self.paradigm,
            "n_per_split": self.n_per_split,
            "master_seed": self.master_seed,
            "augment_controls": self.augment_controls,
        }


RECORD_FIELDS = (
    "text",
    "label",
    "label_linear",
    "paradigm",
    "split",
    "template_kind",
    "quad_id",
    "cell",
)


@dataclass(frozen=True)
class SplitRecord:
    """One emitted sentence; label is the task label (structural truth)."""

    text: str
    label: bool
    label_linear: bool
    paradigm: str
    split: str
    template_kind: str
    quad_id: int
    cell: str

    def to_line(self) -> str:
        return json.dumps(
            {name: getattr(self, name) for name in RECORD_FIELDS},
            ensure_ascii=False,
            separators=(",", ":"),
        )

    @classmethod
    def from_obj(cls, obj: Mapping, where: str) -> "SplitRecord":
        missing = [name for name in RECORD_FIELDS if name not in obj]
        if missing:
            raise MalformedRecordError(f"{where}: missing field(s) {missing}")
        try:
            record = cls(
                text=str(obj["text"]),
                label=bool(obj["label"]),
                label_linear=bool(obj["label_linear"]),
                paradigm=str(obj["paradigm"]),
                split=str(obj["split"]),
                template_kind=str(obj["template_kind"]),
                quad_id=int(obj["quad_id"]),
                cell=str(obj["cell"]),
            )
        except (TypeError, ValueError) as exc:
            raise MalformedRecordError(f"{where}: {exc}") from None
        if record.split not in SPLITS:
            raise MalformedRecordError(f"{where}: unknown split {record.split!r}")
        if record.template_kind not in ("train", "test"):
            raise MalformedRecordError(
                f"{where}: unknown template_kind {record.template_kind!r}"
            )
        return record


def stream_seed(master_seed: int, paradigm_id: str, stream: str, index: int) -> int:
    """Independent substream seed per (paradigm, stream, index)."""
    payload = f"{master_seed}\x1f{paradigm_id}\x1f{stream}\x1f{index}".encode("utf-8")
    return int.from_bytes(hashlib.sha256(payload).digest()[:8], "big")


def stream_rng(master_seed: int, paradigm_id: str, stream: str, index: int) -> random.Random:
    return random.Random(stream_seed(master_seed, paradigm_id, stream, index))


# Role blocks: which split and which pair of each accepted quad is emitted.
_ROLE_TO_SPLIT_KIND = {
    "train": ("train", "train"),
    "dev-held": ("dev", "train"),
    "dev-test": ("dev", "test"),
    "test-held": ("test", "train"),
    "test-test": ("test", "test"),
}


def _role_blocks(spec: DatasetSpec):
    per_block = spec.n_per_split // 4
    quad_train_records = spec.n_per_split - spec.n_controls
    return (
        ("train", quad_train_records // 2),
        ("dev-held", per_block),
        ("dev-test", per_block),
        ("test-held", per_block),
        ("test-test", per_block),
    )


@dataclass
class BuildResult:
    spec: DatasetSpec
    splits: Mapping[str, list]
    report: DesignReport
    accepted: int
    rejected: int
    capacity_estimate: int
    controls: int = 0


# Worker state for multiprocessing generation.
_WORKER = {}


def _init_worker(lexicon, templates, paradigm_id, master_seed):
    _WORKER["lexicon"] = lexicon
    _WORKER["templates"] = templates
    _WORKER["paradigm"] = paradigm_id
    _WORKER["seed"] = master_seed


def _build_indexed_quad(index: int) -> Quad:
    rng = stream_rng(_WORKER["seed"], _WORKER["paradigm"], "quad", index)
    return build_quad(
        _WORKER["paradigm"], _WORKER["lexicon"], _WORKER["templates"], rng, quad_id=index
    )


def _quad_stream(spec, lexicon, templates, jobs: int):
    """Quads in stream-index order, optionally built by a worker pool."""
    if jobs <= 1:
        for index in itertools.count():
            rng = stream_rng(spec.master_seed, spec.paradigm, "quad", index)
            yield build_quad(spec.paradigm, lexicon, templates, rng, quad_id=index)
        return

    ctx = multiprocessing.get_context("fork")
    pool = ctx.Pool(
        jobs,
        initializer=_init_worker,
        initargs=(lexicon, templates, spec.paradigm, spec.master_seed),
    )
    try:
        yield from pool.imap(_build_indexed_quad, itertools.count(), chunksize=32)
    finally:
        pool.terminate()
        pool.join()


def estimate_capacity(spec: DatasetSpec, lexicon: Lexicon, templates) -> int:
    """Rough count of distinct quads the lexicon supports: the product of
    candidate-set sizes along one sampled generation path."""
    trace: list = []
    rng = stream_rng(spec.master_seed, spec.paradigm, "quad", 0)
    build_quad(spec.paradigm, lexicon, templates, rng, quad_id=0, trace=trace)
    capacity = 1
    for n_candidates, _ in trace:
        capacity *= n_candidates
    return capacity


def build_splits(
    spec: DatasetSpec,
    lexicon: Optional[Lexicon] = None,
    templates=None,
    jobs: int = 1,
    sink: Optional[Callable[[SplitRecord, LabeledSentence], None]] = None,
) -> BuildResult:
    """Generate, deduplicate, verify, and partition records for one paradigm.

    The optional sink receives every emitted record together with its
    labeled sentence (tree attached) in emission order, letting callers
    derive features without a second pass.
    """
    spec.validate()
    lexicon = lexicon if lexicon is not None else default_lexicon()
    templates = templates if templates is not None else paradigm_templates(spec.paradigm)

    blocks = _role_blocks(spec)
    needed = sum(count for _, count in blocks)
    capacity = estimate_capacity(spec, lexicon, templates)
    if capacity < needed:
        raise InsufficientLexiconError(
            f"lexicon supports roughly {capacity} distinct {spec.paradigm} quads "
            f"but the spec needs {needed}"
        )

    check = DesignCheck(spec.paradigm)
    seen: set = set()
    splits = {name: [] for name in SPLITS}
    accepted = 0
    rejected = 0
    max_attempts = 64 + 32 * needed

    block_iter = iter(blocks)
    role, remaining = next(block_iter)
    stream = _quad_stream(spec, lexicon, templates, jobs)
    for attempt, quad in enumerate(stream):
        if attempt >= max_attempts:
            raise InsufficientLexiconError(
                f"deduplication stalled after {attempt} candidate quads "
                f"({accepted}/{needed} accepted)"
            )
        texts = [member.text for member in quad.members]
        if any(text in seen for text in texts):
            rejected += 1
            continue
        seen.update(texts)
        accepted += 1
        check.add_quad(quad)

        split_name, kind = _ROLE_TO_SPLIT_KIND[role]
        for member in quad.members:
            if member.template_kind != kind:
                continue
            record = SplitRecord(
                text=member.text,
                label=member.label_structural,
                label_linear=member.label_linear,
                paradigm=spec.paradigm,
                split=split_name,
                template_kind=member.template_kind,
                quad_id=quad.quad_id,
                cell=member.cell,
            )
            splits[split_name].append(record)
            if sink is not None:
                sink(record, member)

        remaining -= 1
        if remaining == 0:
            nxt = next(block_iter, None)
            if nxt is None:
                break
            role, remaining = nxt
    stream.close()

    controls = 0
    if spec.n_controls:
        for index in itertools.count():
            if controls == spec.n_controls:
                break
            if index >= 64 + 32 * spec.n_controls:
                raise InsufficientLexiconError(
                    f"control deduplication stalled after {index} candidates"
                )
            rng = stream_rng(spec.master_seed, spec.paradigm, "control", index)
            member = build_confound_control(lexicon, templates, rng)
            if member.text in seen:
                continue
            seen.add(member.text)
            record = SplitRecord(
                text=member.text,
                label=member.label_structural,
                label_linear=member.label_linear,
                paradigm=spec.paradigm,
                split="train",
                template_kind="train",
                quad_id=-1 - index,
                cell="control",
            )
            splits["train"].append(record)
            if sink is not None:
                sink(record, member)
            controls += 1

    for name in SPLITS:
        if len(splits[name]) != spec.n_per_split:
            raise DatasetError(
                f"internal error: {name} split has {len(splits[name])} records, "
                f"expected {spec.n_per_split}"
            )

    return BuildResult(
        spec=spec,
        splits=splits,
        report=check.result(),
        accepted=accepted,
        rejected=rejected,
        capacity_estimate=capacity,
        controls=controls,
    )


# ---------------------------------------------------------------------------
# File format.

_HEADER = {"kind": "schema", "record": "labeled-sentence", "fields": list(RECORD_FIELDS)}


def header_line() -> str:
    """The schema line that opens every split file."""
    return json.dumps(_HEADER, separators=(",", ":"))


def serialize_records(records: Sequence["SplitRecord"]) -> str:
    """Exact file content for a record sequence (used for digest checks)."""
    lines = [header_line()]
    lines.extend(record.to_line() for record in records)
    return "\n".join(lines) + "\n"


def _atomic_write(path: str, text: str) -> None:
    directory = os.path.dirname(os.path.abspath(path))
    fd, tmp = tempfile.mkstemp(dir=directory, suffix=".tmp")
    try:
        with os.fdopen(fd, "w", encoding="utf-8", newline="\n") as handle:
            handle.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def emit(records: Sequence[SplitRecord], path) -> None:
    """Write records as JSON lines behind a schema header, atomically."""
    _atomic_write(str(path), serialize_records(records))


def load(path) -> list:
    """Read a split file back; raises MalformedRecordError with the line."""
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
                raise MalformedRecordError(f"{where}: invalid JSON ({exc.msg})") from None
            if lineno == 1:
                if obj.get("kind") != "schema":
                    raise MalformedRecordError(f"{where}: missing schema header")
                continue
            records.append(SplitRecord.from_obj(obj, where))
    return records


def split_filename(paradigm: str, split: str) -> str:
    return f"{paradigm}.{split}.jsonl"


def manifest_filename(paradigm: str) -> str:
    return f"{paradigm}.manifest.json"


def sha256_file(path) -> str:
    digest = hashlib.sha256()
    with open(path, "rb") as handle:
        for chunk in iter(lambda: handle.read(1 << 20), b""):
            digest.update(chunk)
    return digest.hexdigest()


def write_dataset(result: BuildResult, outdir) -> dict:
    """Emit the three split files plus a manifest with content digests.

    The manifest's created_at timestamp is informational and excluded from
    all digests, so re-running an identical spec reproduces identical data
    files.
    """
    os.makedirs(outdir, exist_ok=True)
    spec = result.spec
    files = {}
    for split in SPLITS:
        name = split_filename(spec.paradigm, split)
        path = os.path.join(outdir, name)
        emit(result.splits[split], path)
        files[name] = {
            "sha256": sha256_file(path),
            "records": len(result.splits[split]),
        }
    manifest = {
        "kind": "dataset-manifest",
        "spec": spec.to_dict(),
        "tool_version": posdkit.__version__,
        "created_at": _dt.datetime.now(_dt.timezone.utc).isoformat(),
        "files": files,
        "generation": {
            "quads_accepted": result.accepted,
            "quads_rejected": result.rejected,
            "capacity_estimate": result.capacity_estimate,
            "controls": result.controls,
        },
        "verification": result.report.to_dict(),
    }
    _atomic_write(
        os.path.join(outdir, manifest_filename(spec.paradigm)),
        json.dumps(manifest, indent=2, ensure_ascii=False) + "\n",
    )
    return manifest


def read_manifest(indir, paradigm: str) -> dict:
    path = os.path.join(indir, manifest_filename(paradigm))
    if not os.path.exists(path):
        raise DatasetError(f"no manifest for {paradigm!r} under {indir}")
    with open(path, "r", encoding="utf-8") as handle:
        return json.load(handle)


def load_dataset(indir, paradigm: str):
    """Load the three splits plus manifest for one paradigm."""
    manifest = read_manifest(indir, paradigm)
    splits = {}
    for split in SPLITS:
        splits[split] = load(os.path.join(indir, split_filename(paradigm, split)))
    return splits, manifest


def detect_paradigms(indir) -> list:
    found = []
    for name in sorted(os.listdir(indir)):
        if name.endswith(".manifest.json"):
            found.append(name[: -len(".manifest.json")])
    return found
