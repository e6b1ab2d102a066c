import json
import os

import pytest

from posdkit.cli import main
from posdkit.datasets import sha256_file, split_filename


@pytest.fixture(scope="module")
def dataset_dir(tmp_path_factory):
    out = tmp_path_factory.mktemp("data")
    code = main(["generate", "--paradigm", "npi", "--n", "64",
                 "--seed", "12", "--out", str(out)])
    assert code == 0
    return out


def test_generate_outputs(dataset_dir):
    names = sorted(os.listdir(dataset_dir))
    assert names == [
        "npi.dev.jsonl", "npi.manifest.json", "npi.test.jsonl", "npi.train.jsonl",
    ]
    with open(dataset_dir / "npi.manifest.json") as handle:
        manifest = json.load(handle)
    for split in ("train", "dev", "test"):
        name = split_filename("npi", split)
        assert manifest["files"][name]["sha256"] == sha256_file(dataset_dir / name)
    assert manifest["verification"]["passed"]


def test_generate_idempotent(dataset_dir, tmp_path):
    again = tmp_path / "again"
    assert main(["generate", "--paradigm", "npi", "--n", "64",
                 "--seed", "12", "--out", str(again)]) == 0
    for split in ("train", "dev", "test"):
        name = split_filename("npi", split)
        assert sha256_file(dataset_dir / name) == sha256_file(again / name)


def test_verify_passes(dataset_dir, capsys):
    assert main(["verify", "--in", str(dataset_dir)]) == 0
    assert "PASS" in capsys.readouterr().out


def test_verify_deep_passes(dataset_dir):
    assert main(["verify", "--in", str(dataset_dir), "--deep"]) == 0


def test_verify_detects_tampering(dataset_dir, tmp_path):
    import shutil

    corrupt = tmp_path / "corrupt"
    shutil.copytree(dataset_dir, corrupt)
    path = corrupt / "npi.dev.jsonl"
    lines = path.read_text().splitlines()
    record = json.loads(lines[1])
    record["label"] = not record["label"]
    lines[1] = json.dumps(record, separators=(",", ":"))
    path.write_text("\n".join(lines) + "\n")
    assert main(["verify", "--in", str(corrupt)]) == 1


def test_eval_oracles(dataset_dir):
    assert main(["eval", "--in", str(dataset_dir), "--paradigm", "npi",
                 "--featurizer", "oracle-structural"]) == 0
    assert main(["eval", "--in", str(dataset_dir), "--paradigm", "npi",
                 "--featurizer", "oracle-linear"]) == 0
    assert main(["eval", "--in", str(dataset_dir), "--paradigm", "npi",
                 "--featurizer", "random", "--seed", "3"]) == 0


def test_train_and_report(dataset_dir, tmp_path):
    runs = tmp_path / "runs"
    code = main(["train", "--in", str(dataset_dir), "--paradigm", "npi",
                 "--featurizer", "structural", "--restarts", "2",
                 "--out", str(runs / "structural"), "--save-models"])
    assert code == 0
    assert (runs / "structural" / "npi.structural.results.jsonl").exists()
    assert (runs / "structural" / "npi.structural.model.json").exists()

    report_dir = tmp_path / "report"
    assert main(["report", "--in", str(runs), "--out", str(report_dir)]) == 0
    assert (report_dir / "report.png").exists()
    assert (report_dir / "report.tsv").exists()
    table = (report_dir / "report.tsv").read_text().splitlines()
    assert table[0].startswith("paradigm\tpredictor")
    assert any("structural" in line for line in table[1:])


def test_eval_saved_model(dataset_dir, tmp_path):
    runs = tmp_path / "m"
    assert main(["train", "--in", str(dataset_dir), "--paradigm", "npi",
                 "--featurizer", "structural", "--restarts", "1",
                 "--out", str(runs), "--save-models"]) == 0
    model = runs / "npi.structural.model.json"
    assert main(["eval", "--in", str(dataset_dir), "--paradigm", "npi",
                 "--featurizer", "structural", "--model", str(model)]) == 0


def test_prob_prints_exact_value(capsys):
    assert main(["prob", "--domains", "4", "--atleast", "3", "--p", "0.25"]) == 0
    assert capsys.readouterr().out.strip() == "0.05078125"


def test_lock_blocks_concurrent_writers(tmp_path):
    out = tmp_path / "locked"
    out.mkdir()
    (out / ".posdkit.lock").write_text("pid 0\n")
    code = main(["generate", "--paradigm", "tense", "--n", "8",
                 "--seed", "1", "--out", str(out)])
    assert code == 1


def test_usage_error_exit_code():
    with pytest.raises(SystemExit) as err:
        main(["generate", "--paradigm", "bogus", "--seed", "1", "--out", "/tmp/x"])
    assert err.value.code == 2


def test_missing_input_is_reported(tmp_path, capsys):
    assert main(["verify", "--in", str(tmp_path / "nowhere")]) == 1
    assert "error" in capsys.readouterr().err
