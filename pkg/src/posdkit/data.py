"""Access to the packaged seed lexicon and template files."""

from __future__ import annotations

from functools import lru_cache
from importlib import resources

from posdkit.grammar import load_templates
from posdkit.lexicon import Lexicon, load_lexicon


def _data_root():
    return resources.files("posdkit") / "data"


@lru_cache(maxsize=None)
def default_lexicon() -> Lexicon:
    path = _data_root() / "lexicon.jsonl"
    return load_lexicon(path.read_bytes(), name="lexicon.jsonl")


@lru_cache(maxsize=None)
def paradigm_templates(paradigm_id: str) -> dict:
    """Templates for one paradigm, keyed by template id."""
    from posdkit.paradigms import get_paradigm

    spec = get_paradigm(paradigm_id)
    path = _data_root() / "templates" / spec.template_file
    return load_templates(path.read_bytes(), name=spec.template_file)
