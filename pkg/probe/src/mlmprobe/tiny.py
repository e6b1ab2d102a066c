"""Locally constructed miniature masked-LM checkpoints for smoke tests.

CI environments have no model-hub access; a randomly initialized two-layer
encoder with a word-level vocabulary built from the dataset exercises the
full fine-tuning path at trivial cost.
"""

from __future__ import annotations

import os
from typing import Iterable

SPECIALS = ["[PAD]", "[UNK]", "[CLS]", "[SEP]", "[MASK]"]


def vocab_from_texts(texts: Iterable[str]) -> list:
    seen = []
    known = set()
    for text in texts:
        for token in text.lower().split(" "):
            if token and token not in known:
                known.add(token)
                seen.append(token)
    return SPECIALS + sorted(seen)


def make_tiny_checkpoint(directory, texts: Iterable[str], seed: int = 0) -> str:
    import torch
    from transformers import BertConfig, BertForMaskedLM, BertTokenizer

    directory = str(directory)
    os.makedirs(directory, exist_ok=True)
    vocab = vocab_from_texts(texts)
    vocab_path = os.path.join(directory, "vocab.txt")
    with open(vocab_path, "w", encoding="utf-8") as handle:
        handle.write("\n".join(vocab) + "\n")
    tokenizer = BertTokenizer(vocab_path, do_lower_case=True)

    torch.manual_seed(seed)
    config = BertConfig(
        vocab_size=len(vocab),
        hidden_size=32,
        num_hidden_layers=2,
        num_attention_heads=2,
        intermediate_size=64,
        max_position_embeddings=64,
    )
    model = BertForMaskedLM(config)
    model.save_pretrained(directory)
    tokenizer.save_pretrained(directory)
    return directory
