import json

import pytest

from mlmprobe.dataio import FormatError, detect_paradigms, load_dataset, load_split


def test_load_fixture_dataset(fixture_data_dir):
    splits = load_dataset(fixture_data_dir, "saux_inv")
    assert set(splits) == {"train", "dev", "test"}
    for records in splits.values():
        assert len(records) == 8
    assert all(r.template_kind == "train" for r in splits["train"])
    kinds = {r.template_kind for r in splits["test"]}
    assert kinds == {"train", "test"}


def test_detect_paradigms(fixture_data_dir):
    assert detect_paradigms(fixture_data_dir) == ["saux_inv"]


def test_records_carry_pair_metadata(fixture_data_dir):
    splits = load_dataset(fixture_data_dir, "saux_inv")
    record = splits["train"][0]
    assert record.cell in ("train-A", "train-B")
    assert isinstance(record.quad_id, int)
    assert isinstance(record.label, bool) and isinstance(record.label_linear, bool)


def test_missing_header_rejected(tmp_path):
    path = tmp_path / "x.jsonl"
    path.write_text(json.dumps({"text": "a"}) + "\n")
    with pytest.raises(FormatError, match="header"):
        load_split(path)


def test_missing_field_reports_location(tmp_path):
    path = tmp_path / "y.jsonl"
    header = json.dumps({"kind": "schema"})
    bad = json.dumps({"text": "a ."})
    path.write_text(header + "\n" + bad + "\n")
    with pytest.raises(FormatError, match=":2"):
        load_split(path)


def test_missing_split_file(tmp_path):
    with pytest.raises(FormatError, match="missing split file"):
        load_dataset(tmp_path, "saux_inv")
