"""Glue between generation, featurization, and evaluation.

Relation featurizers need derivation trees, which the dataset files do not
carry; instead of widening the file format, training regenerates the
dataset deterministically from its manifest (verifying content digests) and
featurizes members in-stream.
"""

from __future__ import annotations

import os
from typing import Mapping, Sequence

from posdkit import datasets
from posdkit.datasets import DatasetSpec, DatasetError
from posdkit.learners import EvalSet, make_featurizer, vectorize


def build_eval_sets_multi(
    spec: DatasetSpec,
    featurizer_names: Sequence[str],
    lexicon=None,
    templates=None,
    jobs: int = 1,
):
    """Generate the dataset once and featurize every record for several
    featurizers in the same pass.

    Returns ({featurizer: {split: EvalSet}}, build_result); matrices follow
    emission order.
    """
    featurizers = {
        name: make_featurizer(name, paradigm=spec.paradigm) for name in featurizer_names
    }
    records_by_split = {name: [] for name in datasets.SPLITS}
    vectors = {name: {split: [] for split in datasets.SPLITS} for name in featurizers}

    def sink(record, member):
        records_by_split[record.split].append(record)
        for name, featurize in featurizers.items():
            vectors[name][record.split].append(featurize(record, member))

    result = datasets.build_splits(
        spec, lexicon=lexicon, templates=templates, jobs=jobs, sink=sink
    )
    out = {}
    for name in featurizers:
        out[name] = {
            split: EvalSet(
                split=split,
                records=records_by_split[split],
                matrix=vectorize(vectors[name][split]),
            )
            for split in datasets.SPLITS
        }
    return out, result


def build_eval_sets(
    spec: DatasetSpec,
    featurizer_name: str,
    lexicon=None,
    templates=None,
    jobs: int = 1,
):
    """Generate the dataset and featurize every record in one pass."""
    by_name, result = build_eval_sets_multi(
        spec, [featurizer_name], lexicon=lexicon, templates=templates, jobs=jobs
    )
    return by_name[featurizer_name], result


def spec_from_manifest(manifest: Mapping) -> DatasetSpec:
    raw = manifest["spec"]
    return DatasetSpec(
        paradigm=raw["paradigm"],
        n_per_split=int(raw["n_per_split"]),
        master_seed=int(raw["master_seed"]),
        augment_controls=bool(raw["augment_controls"]),
    )


def regenerate_eval_sets(indir, paradigm: str, featurizer_name: str, jobs: int = 1):
    """Rebuild a stored dataset from its manifest, check the regeneration
    matches the files on disk digest-for-digest, and featurize it."""
    manifest = datasets.read_manifest(indir, paradigm)
    spec = spec_from_manifest(manifest)
    eval_sets, result = build_eval_sets(spec, featurizer_name, jobs=jobs)

    import hashlib

    for split in datasets.SPLITS:
        name = datasets.split_filename(paradigm, split)
        expected = manifest["files"][name]["sha256"]
        content = datasets.serialize_records(eval_sets[split].records)
        digest = hashlib.sha256(content.encode("utf-8")).hexdigest()
        if digest != expected:
            raise DatasetError(
                f"regenerated {name} does not match the manifest digest; "
                "the files were edited or generated by a different tool version"
            )
        on_disk = os.path.join(indir, name)
        if os.path.exists(on_disk) and datasets.sha256_file(on_disk) != expected:
            raise DatasetError(f"{on_disk} does not match its manifest digest")
    return eval_sets, result, manifest


def eval_sets_from_files(indir, paradigm: str) -> dict:
    """Load stored splits without feature matrices (label-only predictors)."""
    splits, _ = datasets.load_dataset(indir, paradigm)
    return {
        name: EvalSet(split=name, records=records, matrix=None)
        for name, records in splits.items()
    }
