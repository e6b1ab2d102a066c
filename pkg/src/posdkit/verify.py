"""Integrity and design checks over emitted dataset files.

File-level checks need only the stored records: digests, counts, split
composition, deduplication, class balance, pairing, training-label
ambiguity, and the per-paradigm test-pair divergence pattern. The deep
check regenerates the dataset from its manifest seed and re-runs the full
tree-level design verification (including the NPI alternative-rule
equivalence, which stored records cannot express).
"""

from __future__ import annotations

import os
from dataclasses import dataclass, field
from typing import Optional

from posdkit import datasets
from posdkit.datasets import DatasetSpec, SPLITS


@dataclass
class FileCheckReport:
    paradigm: str
    checks: list = field(default_factory=list)  # (name, passed, detail)
    deep: Optional[dict] = None

    def add(self, name: str, passed: bool, detail: str = "") -> None:
        self.checks.append((name, passed, detail))

    @property
    def passed(self) -> bool:
        if any(not ok for _, ok, _ in self.checks):
            return False
        if self.deep is not None and not self.deep.get("passed", False):
            return False
        return True

    def to_text(self) -> str:
        status = "PASS" if self.passed else "FAIL"
        lines = [f"dataset check [{self.paradigm}]: {status}"]
        for name, ok, detail in self.checks:
            mark = "ok " if ok else "FAIL"
            suffix = f" ({detail})" if detail else ""
            lines.append(f"  [{mark}] {name}{suffix}")
        if self.deep is not None:
            mark = "ok " if self.deep.get("passed") else "FAIL"
            lines.append(
                f"  [{mark}] deep regeneration + design verification "
                f"({self.deep.get('detail', '')})"
            )
        return "\n".join(lines)


def _test_pair_pattern_ok(paradigm: str, pair) -> bool:
    if paradigm == "saux_inv":
        return all(r.label != r.label_linear for r in pair)
    labels = sorted(r.label for r in pair)
    if labels != [False, True]:
        return False
    for record in pair:
        diverges = record.label != record.label_linear
        if record.label and diverges:
            return False
        if not record.label and not diverges:
            return False
    return True


def check_dataset(indir, paradigm: str, deep: bool = False, jobs: int = 1) -> FileCheckReport:
    report = FileCheckReport(paradigm=paradigm)
    manifest = datasets.read_manifest(indir, paradigm)
    splits, _ = datasets.load_dataset(indir, paradigm)
    spec = DatasetSpec(
        paradigm=manifest["spec"]["paradigm"],
        n_per_split=int(manifest["spec"]["n_per_split"]),
        master_seed=int(manifest["spec"]["master_seed"]),
        augment_controls=bool(manifest["spec"]["augment_controls"]),
    )

    digest_ok, digest_detail = True, []
    for split in SPLITS:
        name = datasets.split_filename(paradigm, split)
        actual = datasets.sha256_file(os.path.join(indir, name))
        if actual != manifest["files"][name]["sha256"]:
            digest_ok = False
            digest_detail.append(name)
    report.add("content digests match manifest", digest_ok, ", ".join(digest_detail))

    counts_ok = all(len(splits[s]) == spec.n_per_split for s in SPLITS)
    report.add(
        "record counts",
        counts_ok,
        "/".join(str(len(splits[s])) for s in SPLITS),
    )

    leak = [r for r in splits["train"] if r.template_kind != "train"]
    report.add("no test templates in the train split", not leak, f"{len(leak)} leaked")

    texts: dict = {}
    duplicates = 0
    for split in SPLITS:
        for record in splits[split]:
            if record.text in texts:
                duplicates += 1
            texts[record.text] = split
    report.add("no duplicate sentences within or across splits", duplicates == 0,
               f"{duplicates} duplicates")

    for split in SPLITS:
        records = [r for r in splits[split] if r.cell != "control"]
        positives = sum(r.label for r in records)
        balanced = 2 * positives == len(records)
        report.add(f"{split} split class balance (quad records)", balanced,
                   f"{positives}/{len(records)} positive")

    composition_ok = True
    for split in ("dev", "test"):
        kinds = {r.template_kind for r in splits[split]}
        if kinds != {"train", "test"}:
            composition_ok = False
    report.add("dev/test mix held-out and test templates", composition_ok)

    ambiguity_bad = sum(
        1
        for split in SPLITS
        for r in splits[split]
        if r.template_kind == "train" and r.label != r.label_linear
    )
    report.add("training members ambiguous (structural = linear)", ambiguity_bad == 0,
               f"{ambiguity_bad} violations")

    pair_bad = 0
    unpaired = 0
    for split in SPLITS:
        groups: dict = {}
        for record in splits[split]:
            if record.cell == "control":
                continue
            groups.setdefault((record.quad_id, record.template_kind), []).append(record)
        for (quad_id, kind), members in groups.items():
            if len(members) != 2:
                unpaired += 1
                continue
            if kind == "test" and not _test_pair_pattern_ok(paradigm, members):
                pair_bad += 1
    report.add("quad pairs complete", unpaired == 0, f"{unpaired} incomplete")
    report.add("test pairs show the designed divergence", pair_bad == 0,
               f"{pair_bad} violations")

    if deep:
        from posdkit.pipeline import regenerate_eval_sets

        try:
            _, result, _ = regenerate_eval_sets(indir, paradigm, "surface", jobs=jobs)
            design = result.report
            report.deep = {
                "passed": design.passed,
                "detail": (
                    f"{design.n_quads} quads, "
                    f"{design.ambiguity_violations}+{design.divergence_violations}"
                    f"+{design.alternative_violations} violations"
                ),
                "design": design.to_dict(),
            }
        except Exception as exc:  # surfaced in the report, not raised
            report.deep = {"passed": False, "detail": str(exc)}

    return report
