"""Toolkit for building minimal-pair classification datasets whose training
data is ambiguous between a structural and a linear rule, verifying that
design property mechanically, and measuring which rule a learner forms."""

__version__ = "0.1.0"

from posdkit.lexicon import Lexicon, LexicalEntry, load_lexicon, unify
from posdkit.grammar import DerivationTree, Sentence, Template, expand, linearize
from posdkit.paradigms import PARADIGMS, Quad, build_quad, verify_design

__all__ = [
    "__version__",
    "Lexicon",
    "LexicalEntry",
    "load_lexicon",
    "unify",
    "DerivationTree",
    "Sentence",
    "Template",
    "expand",
    "linearize",
    "PARADIGMS",
    "Quad",
    "build_quad",
    "verify_design",
]
