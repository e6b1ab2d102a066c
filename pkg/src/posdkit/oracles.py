"""Structural relations over derivation trees and the fronting transform.

All functions are pure: they read immutable trees and return values or
fresh trees, so concurrent use needs no coordination.
"""

from __future__ import annotations

import enum
from typing import Optional

from posdkit.grammar import DerivationTree, Node, Sentence, find_role, linearize
from posdkit.lexicon import LexicalEntry


class OracleError(Exception):
    """Base class for relation/transform failures."""


class NodeNotInTreeError(OracleError):
    pass


class OverlapError(OracleError):
    """precedes() was asked about nodes where one dominates the other."""


class NoAuxiliaryError(OracleError):
    pass


class MissingRoleError(OracleError):
    def __init__(self, role: str):
        super().__init__(f"tree has no node with role {role!r}")
        self.role = role


class FrontingStrategy(enum.Enum):
    """Which auxiliary of a declarative is moved to the front."""

    MAIN = "main"
    FIRST = "first"
    LAST = "last"


AUX_CATEGORIES = ("Aux", "Neg")

# Synthetic question-mark entry used by the punctuation swap, so fronting
# does not need lexicon access.
_QUESTION_MARK = LexicalEntry(id="?", category="Punct", forms={"base": "?"}, features={})


def _require_in_tree(tree: DerivationTree, node: Node) -> None:
    if not tree.contains(node):
        raise NodeNotInTreeError("node does not belong to this tree")


def dominates(tree: DerivationTree, a: Node, b: Node) -> bool:
    """True iff a is a proper ancestor of b."""
    _require_in_tree(tree, a)
    _require_in_tree(tree, b)
    cursor = b.parent
    while cursor is not None:
        if cursor is a:
            return True
        cursor = cursor.parent
    return False


def c_commands(tree: DerivationTree, a: Node, b: Node) -> bool:
    """First-branching c-command: neither dominates the other and a's parent
    dominates b. The root, having no parent, c-commands nothing."""
    if a is b:
        raise OracleError("c-command is irreflexive")
    _require_in_tree(tree, a)
    _require_in_tree(tree, b)
    if a.parent is None:
        return False
    if dominates(tree, a, b) or dominates(tree, b, a):
        return False
    return a.parent is b or dominates(tree, a.parent, b)


def _span(tree: DerivationTree, node: Node):
    leaves = tree.leaves(include_gaps=True)
    if node.is_leaf:
        index = tree.leaf_index(node)
        return index, index
    lo, hi = None, None
    for index, leaf in enumerate(leaves):
        cursor = leaf
        under = False
        while cursor is not None:
            if cursor is node:
                under = True
                break
            cursor = cursor.parent
        if under:
            if lo is None:
                lo = index
            hi = index
    if lo is None:
        raise OracleError("node spans no leaves")
    return lo, hi


def precedes(tree: DerivationTree, a: Node, b: Node) -> bool:
    """True iff every leaf under a is left of every leaf under b."""
    _require_in_tree(tree, a)
    _require_in_tree(tree, b)
    if a is b or dominates(tree, a, b) or dominates(tree, b, a):
        raise OverlapError("precedence is defined only for disjoint nodes")
    _, a_hi = _span(tree, a)
    b_lo, _ = _span(tree, b)
    return a_hi < b_lo


def aux_positions(tree: DerivationTree):
    """Auxiliary leaves (including extraction gaps) in linear order."""
    return [
        leaf
        for leaf in tree.leaves(include_gaps=True)
        if leaf.label in AUX_CATEGORIES and leaf.role != "fronted-aux"
    ]


def extraction_gap(tree: DerivationTree) -> Optional[Node]:
    gaps = [leaf for leaf in tree.leaves(include_gaps=True) if leaf.is_gap]
    if not gaps:
        return None
    if len(gaps) > 1:
        raise OracleError("tree has more than one extraction gap")
    return gaps[0]


def front_auxiliary(declarative: DerivationTree, strategy: FrontingStrategy) -> Sentence:
    """Build the polar question that fronts one auxiliary of the declarative.

    The chosen auxiliary leaf becomes a gap at its source position, its
    capitalized form is prepended under a new root, the sentence-final
    period becomes a question mark, and the previously initial token is
    lower-cased. Everything else keeps its relative order.
    """
    tree = declarative.clone()
    auxes = aux_positions(tree)
    if not auxes:
        raise NoAuxiliaryError("declarative contains no auxiliary")
    if any(aux.is_gap for aux in auxes):
        raise OracleError("declarative already contains an extraction gap")

    if strategy is FrontingStrategy.MAIN:
        selected = find_role(tree, "main-aux")
        if selected is None:
            raise MissingRoleError("main-aux")
    elif strategy is FrontingStrategy.FIRST:
        selected = auxes[0]
    elif strategy is FrontingStrategy.LAST:
        selected = auxes[-1]
    else:  # pragma: no cover - enum is closed
        raise OracleError(f"unknown strategy {strategy!r}")

    fronted = Node(selected.label, selected.features, role="fronted-aux")
    fronted.lexeme = selected.lexeme
    fronted.form_key = selected.form_key
    surface = selected.surface
    fronted.surface = surface[0].upper() + surface[1:]

    selected.is_gap = True
    selected.surface = None

    question = Node("SQ")
    question.add(fronted)
    question.add(tree.root)
    out = DerivationTree(question)

    for leaf in out.leaves(include_gaps=True):
        if leaf.label == "Punct" and leaf.surface == ".":
            leaf.lexeme = _QUESTION_MARK
            leaf.surface = "?"

    # Demote the token that used to open the sentence.
    remnant_leaves = [
        leaf for leaf in out.leaves(include_gaps=False) if leaf is not fronted
    ]
    if remnant_leaves:
        first = remnant_leaves[0]
        first.surface = first.surface[0].lower() + first.surface[1:]

    return linearize(out)


def embedded_verb_tense(tree: DerivationTree) -> str:
    """Tense of the unique embedded-verb leaf: "past" or "present"."""
    leaf = find_role(tree, "embedded-verb")
    if leaf is None:
        raise MissingRoleError("embedded-verb")
    if leaf.form_key == "past":
        return "past"
    if leaf.form_key in ("pres_3sg", "pres_pl"):
        return "present"
    raise OracleError(f"embedded verb has non-finite form {leaf.form_key!r}")


_PHI_FEATURES = ("pers", "num", "gen")


def agreement_match(binder: Node, reflexive: Node) -> bool:
    """Person/number (and gender when both mark it) compatibility."""
    for feat in _PHI_FEATURES:
        a = binder.features.get(feat)
        b = reflexive.features.get(feat)
        if a is not None and b is not None and a != b:
            return False
    return True


def verb_tense_of_leaf(leaf: Node) -> Optional[str]:
    """Tense of a finite verb/auxiliary leaf, None for non-finite forms."""
    if leaf.form_key == "past":
        return "past"
    if leaf.form_key in ("pres_3sg", "pres_pl"):
        return "present"
    if leaf.label in AUX_CATEGORIES:
        # Shipped auxiliaries are all present-tense finite forms.
        return "present"
    return None
