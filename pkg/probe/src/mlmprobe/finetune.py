"""Fine-tune a pretrained masked-LM sequence classifier on a dataset
directory and report per-restart minimal-pair accuracies.

Restarts share the pretrained weights and all hyperparameters; only the
seed that initializes the classifier head (and batch shuffling) differs.
"""

from __future__ import annotations

import copy
import json
import os
import statistics
from typing import Mapping, Sequence

import numpy as np
import torch

from mlmprobe.config import ProbeConfig
from mlmprobe.dataio import SPLITS, Record, load_dataset
from mlmprobe.metrics import make_result, split_metrics

HELDOUT_INTERPRETABILITY_FLOOR = 0.90


class CheckpointUnavailableError(Exception):
    pass


def _load_tokenizer_and_config(config: ProbeConfig):
    import transformers
    from transformers import AutoConfig, AutoTokenizer

    transformers.logging.set_verbosity_error()
    try:
        model_config = AutoConfig.from_pretrained(config.model, num_labels=2)
        tokenizer = AutoTokenizer.from_pretrained(config.model)
    except (OSError, EnvironmentError, ValueError) as exc:
        raise CheckpointUnavailableError(
            f"cannot load checkpoint {config.model!r}: {exc}"
        ) from exc
    for attr in ("hidden_dropout_prob", "attention_probs_dropout_prob",
                 "classifier_dropout"):
        if hasattr(model_config, attr):
            setattr(model_config, attr, config.dropout)
    return tokenizer, model_config


def _fresh_model(config: ProbeConfig, model_config, seed: int):
    from transformers import AutoModelForSequenceClassification

    torch.manual_seed(seed)
    if config.deterministic:
        torch.use_deterministic_algorithms(True, warn_only=True)
    try:
        model = AutoModelForSequenceClassification.from_pretrained(
            config.model, config=model_config
        )
    except (OSError, EnvironmentError, ValueError) as exc:
        raise CheckpointUnavailableError(
            f"cannot load checkpoint {config.model!r}: {exc}"
        ) from exc
    return model.to(config.device)


def _encode(tokenizer, records: Sequence[Record], config: ProbeConfig):
    batch = tokenizer(
        [record.text for record in records],
        padding=True,
        truncation=True,
        max_length=config.max_length,
        return_tensors="pt",
    )
    labels = torch.tensor([int(record.label) for record in records])
    return batch, labels


@torch.no_grad()
def _predict(model, encoded, config: ProbeConfig) -> np.ndarray:
    model.eval()
    predictions = []
    inputs, _ = encoded
    n = inputs["input_ids"].shape[0]
    for start in range(0, n, 64):
        chunk = {k: v[start:start + 64].to(config.device) for k, v in inputs.items()}
        logits = model(**chunk).logits
        predictions.append(logits.argmax(dim=-1).cpu())
    return torch.cat(predictions).numpy().astype(bool)


def _accuracy(model, encoded, config: ProbeConfig) -> float:
    _, labels = encoded
    predictions = _predict(model, encoded, config)
    return float((predictions == labels.numpy().astype(bool)).mean())


def finetune_once(
    config: ProbeConfig,
    splits: Mapping[str, Sequence[Record]],
    seed: int,
    tokenizer=None,
    model_config=None,
) -> dict:
    """One restart: fine-tune on the train split with early stopping on dev,
    then report metrics for every split."""
    if tokenizer is None or model_config is None:
        tokenizer, model_config = _load_tokenizer_and_config(config)
    paradigm = splits["train"][0].paradigm if splits["train"] else "unknown"
    model = _fresh_model(config, model_config, seed)

    encoded = {name: _encode(tokenizer, splits[name], config) for name in SPLITS}
    train_inputs, train_labels = encoded["train"]
    n = train_labels.shape[0]

    optimizer = torch.optim.AdamW(model.parameters(), lr=config.learning_rate)
    generator = torch.Generator().manual_seed(seed)

    best_state = None
    best_dev = -1.0
    stale = 0
    batches_seen = 0
    stop = False
    for _ in range(config.max_epochs):
        order = torch.randperm(n, generator=generator)
        for start in range(0, n, config.batch_size):
            index = order[start:start + config.batch_size]
            model.train()
            chunk = {k: v[index].to(config.device) for k, v in train_inputs.items()}
            labels = train_labels[index].to(config.device)
            loss = model(**chunk, labels=labels).loss
            optimizer.zero_grad()
            loss.backward()
            optimizer.step()
            batches_seen += 1
            if batches_seen % config.eval_every_batches == 0:
                dev_accuracy = _accuracy(model, encoded["dev"], config)
                if dev_accuracy > best_dev:
                    best_dev = dev_accuracy
                    best_state = copy.deepcopy(
                        {k: v.cpu() for k, v in model.state_dict().items()}
                    )
                    stale = 0
                else:
                    stale += 1
                    if stale >= config.patience:
                        stop = True
                        break
        if stop:
            break
    if best_state is not None:
        model.load_state_dict(best_state)

    split_reports = {
        name: split_metrics(splits[name], _predict(model, encoded[name], config), name)
        for name in SPLITS
    }
    result = make_result(paradigm, f"mlm:{os.path.basename(str(config.model))}",
                         seed, split_reports)
    result["heldout_interpretable"] = (
        split_reports["test"]["train_pair_accuracy"] > HELDOUT_INTERPRETABILITY_FLOOR
    )
    return result


def summarize(results: Sequence[dict]) -> dict:
    scores = sorted(r["splits"]["test"]["test_pair_accuracy"] for r in results)
    heldout = sorted(r["splits"]["test"]["train_pair_accuracy"] for r in results)
    return {
        "kind": "probe-summary",
        "n_restarts": len(results),
        "median_test_pair_accuracy": float(statistics.median(scores)),
        "min_test_pair_accuracy": scores[0],
        "max_test_pair_accuracy": scores[-1],
        "min_heldout_pair_accuracy": heldout[0],
        "interpretable_restarts": sum(bool(r.get("heldout_interpretable")) for r in results),
    }


def finetune_and_eval(
    config: ProbeConfig,
    data_dir,
    paradigm: str,
    outdir=None,
) -> tuple:
    """Run the configured restarts over one dataset directory.

    Returns (results, summary); with outdir set, also writes results.jsonl,
    summary.json, and the restart scatter in the shared report formats.
    """
    config.validate()
    splits = load_dataset(data_dir, paradigm)
    tokenizer, model_config = _load_tokenizer_and_config(config)
    results = []
    for restart in range(config.restarts):
        results.append(
            finetune_once(config, splits, config.seed + restart,
                          tokenizer=tokenizer, model_config=model_config)
        )
    summary = summarize(results)
    if outdir is not None:
        os.makedirs(outdir, exist_ok=True)
        prefix = os.path.join(outdir, f"{paradigm}.probe")
        with open(f"{prefix}.results.jsonl", "w", encoding="utf-8") as handle:
            for result in results:
                handle.write(json.dumps(result, ensure_ascii=False) + "\n")
        with open(f"{prefix}.summary.json", "w", encoding="utf-8") as handle:
            json.dump(summary, handle, indent=2)
            handle.write("\n")
        from mlmprobe.plotting import plot_restarts

        plot_restarts(results, f"{prefix}.png")
    return results, summary
