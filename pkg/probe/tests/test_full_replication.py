"""Qualitative replication gate (opt-in: needs a real pretrained checkpoint
and hours of compute).

Set MLMPROBE_CHECKPOINT to a bert-large-class checkpoint path/name and
MLMPROBE_DATA to a directory holding full-size generated datasets for all
four paradigms, then run this module directly with pytest. Expected
qualitative pattern, with loose tolerances: median test-pair accuracy
> 0.90 for saux_inv and tense, > 0.80 for reflexive, < 0.35 for npi, and
held-out pair accuracy > 0.90 everywhere.
"""

import os

import pytest

CHECKPOINT = os.environ.get("MLMPROBE_CHECKPOINT")
DATA = os.environ.get("MLMPROBE_DATA")

pytestmark = pytest.mark.skipif(
    not (CHECKPOINT and DATA),
    reason="full replication needs MLMPROBE_CHECKPOINT and MLMPROBE_DATA",
)

THRESHOLDS = {
    "saux_inv": ("gt", 0.90),
    "tense": ("gt", 0.90),
    "reflexive": ("gt", 0.80),
    "npi": ("lt", 0.35),
}


@pytest.mark.parametrize("paradigm", sorted(THRESHOLDS))
def test_qualitative_replication(paradigm, tmp_path):
    from mlmprobe.config import ProbeConfig
    from mlmprobe.finetune import finetune_and_eval

    config = ProbeConfig(model=CHECKPOINT, restarts=20)
    results, summary = finetune_and_eval(config, DATA, paradigm, tmp_path / paradigm)
    assert summary["min_heldout_pair_accuracy"] > 0.90
    direction, bound = THRESHOLDS[paradigm]
    if direction == "gt":
        assert summary["median_test_pair_accuracy"] > bound
    else:
        assert summary["median_test_pair_accuracy"] < bound
