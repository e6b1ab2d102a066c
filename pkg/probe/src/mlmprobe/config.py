"""Fine-tuning protocol configuration.

Defaults follow the published protocol: learning rate 2e-5, dropout 0.2,
batch size 16, at most 4 epochs with a dev evaluation every 10 batches and
early stopping after 5 evaluations without improvement, 20 restarts that
differ only in the classifier-initialization seed.
"""

from __future__ import annotations

from dataclasses import dataclass


@dataclass(frozen=True)
class ProbeConfig:
    model: str = "bert-large-uncased"
    learning_rate: float = 2e-5
    dropout: float = 0.2
    batch_size: int = 16
    max_epochs: int = 4
    eval_every_batches: int = 10
    patience: int = 5
    restarts: int = 20
    seed: int = 0
    max_length: int = 48
    device: str = "cpu"
    deterministic: bool = False

    def validate(self) -> None:
        if self.learning_rate <= 0:
            raise ValueError("learning_rate must be positive")
        if not 0.0 <= self.dropout < 1.0:
            raise ValueError("dropout must lie in [0, 1)")
        for name in ("batch_size", "max_epochs", "eval_every_batches",
                     "patience", "restarts"):
            if getattr(self, name) < 1:
                raise ValueError(f"{name} must be >= 1")
