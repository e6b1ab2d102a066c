import os
import pathlib

import pytest

# The probe must run without model-hub access; everything in the tests is
# built locally.
os.environ.setdefault("HF_HUB_OFFLINE", "1")
os.environ.setdefault("TRANSFORMERS_OFFLINE", "1")

FIXTURES = pathlib.Path(__file__).parent / "fixtures"


@pytest.fixture(scope="session")
def fixture_data_dir():
    return FIXTURES / "dataset"


@pytest.fixture(scope="session")
def primary_result_path():
    return FIXTURES / "primary_eval_result.json"


@pytest.fixture(scope="session")
def tiny_checkpoint(tmp_path_factory, fixture_data_dir):
    from mlmprobe.dataio import load_dataset
    from mlmprobe.tiny import make_tiny_checkpoint

    splits = load_dataset(fixture_data_dir, "saux_inv")
    texts = [record.text for records in splits.values() for record in records]
    return make_tiny_checkpoint(tmp_path_factory.mktemp("ckpt"), texts, seed=1)
