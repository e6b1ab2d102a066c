import pytest

from mlmprobe.config import ProbeConfig


def test_defaults_follow_the_protocol():
    config = ProbeConfig()
    assert config.learning_rate == 2e-5
    assert config.dropout == 0.2
    assert config.batch_size == 16
    assert config.max_epochs == 4
    assert config.eval_every_batches == 10
    assert config.patience == 5
    assert config.restarts == 20


def test_overrides():
    config = ProbeConfig(model="local/ckpt", restarts=2, batch_size=4)
    config.validate()
    assert config.restarts == 2


def test_validation():
    with pytest.raises(ValueError):
        ProbeConfig(learning_rate=0).validate()
    with pytest.raises(ValueError):
        ProbeConfig(dropout=1.0).validate()
    with pytest.raises(ValueError):
        ProbeConfig(restarts=0).validate()
