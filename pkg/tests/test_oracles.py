import random

import pytest

from posdkit.grammar import expand, linearize
from posdkit.oracles import (
    FrontingStrategy,
    MissingRoleError,
    NoAuxiliaryError,
    NodeNotInTreeError,
    OverlapError,
    agreement_match,
    c_commands,
    dominates,
    embedded_verb_tense,
    extraction_gap,
    front_auxiliary,
    precedes,
)


def leaf_by_surface(tree, surface):
    for leaf in tree.leaves():
        if leaf.surface == surface:
            return leaf
    raise AssertionError(f"no leaf {surface!r}")


def test_dominates_basics(lexicon, templates):
    tree = expand(templates["saux_inv"]["saux_train_decl"], lexicon, random.Random(0))
    leaf = tree.leaves()[0]
    assert dominates(tree, tree.root, leaf)
    assert not dominates(tree, leaf, tree.root)
    assert not dominates(tree, leaf, leaf)  # proper ancestry only


def test_dominates_rejects_foreign_node(lexicon, templates):
    t1 = expand(templates["saux_inv"]["saux_train_decl"], lexicon, random.Random(0))
    t2 = expand(templates["saux_inv"]["saux_train_decl"], lexicon, random.Random(1))
    with pytest.raises(NodeNotInTreeError):
        dominates(t1, t2.root, t1.leaves()[0])


def test_sibling_symmetry_and_axioms(lexicon, templates):
    for pid, paradigm_templates in templates.items():
        for template in paradigm_templates.values():
            for seed in range(20):
                tree = expand(template, lexicon, random.Random(seed))
                nodes = list(tree.nodes())
                for parent in nodes:
                    kids = parent.children
                    for i, a in enumerate(kids):
                        for b in kids[i + 1:]:
                            assert c_commands(tree, a, b)
                            assert c_commands(tree, b, a)
                for node in nodes:
                    cursor = node.parent
                    while cursor is not None:
                        assert not c_commands(tree, node, cursor)
                        assert not c_commands(tree, cursor, node)
                        cursor = cursor.parent
                # c-command implies non-dominance (spot check on leaves)
                leaves = tree.leaves()
                for a in leaves[:4]:
                    for b in leaves[-4:]:
                        if a is b:
                            continue
                        if c_commands(tree, a, b):
                            assert not dominates(tree, a, b)


def test_root_c_commands_nothing(lexicon, templates):
    tree = expand(templates["tense"]["tense_train_past"], lexicon, random.Random(0))
    assert not c_commands(tree, tree.root, tree.leaves()[0])


def test_reflexive_illusion_relations(reference_quads):
    # "The boy that loves ladies talks to themselves ." - the plural noun
    # precedes but does not c-command the reflexive.
    member = reference_quads["reflexive"].member("test-B")
    tree = member.sentence.tree
    ladies = leaf_by_surface(tree, "ladies")
    themselves = leaf_by_surface(tree, "themselves")
    assert not c_commands(tree, ladies, themselves)
    assert precedes(tree, ladies, themselves)
    assert agreement_match(ladies, themselves)


def test_npi_training_c_command(reference_quads):
    # "Kids who saw the cats won't get any dogs ."
    member = reference_quads["npi"].member("train-A")
    tree = member.sentence.tree
    wont = leaf_by_surface(tree, "won't")
    any_ = leaf_by_surface(tree, "any")
    assert c_commands(tree, wont, any_)


def test_precedes_antisymmetry_and_totality_on_leaves(lexicon, templates):
    tree = expand(templates["reflexive"]["refl_test_pos"], lexicon, random.Random(2))
    leaves = tree.leaves()
    for i, a in enumerate(leaves):
        for b in leaves[i + 1:]:
            assert precedes(tree, a, b)
            assert not precedes(tree, b, a)


def test_precedes_overlap_error(lexicon, templates):
    tree = expand(templates["reflexive"]["refl_test_pos"], lexicon, random.Random(2))
    leaf = tree.leaves()[0]
    with pytest.raises(OverlapError):
        precedes(tree, tree.root, leaf)


def test_fronting_reproduces_published_strings(lexicon, templates, reference_quads):
    quad = reference_quads["saux_inv"]
    assert quad.member("train-A").text == "Has the man who is going seen the cat ?"
    assert quad.member("train-B").text == "Is the man who going has seen the cat ?"
    assert quad.member("test-A").text == "Has the man seen the cat who is going ?"
    assert quad.member("test-B").text == "Is the man has seen the cat who going ?"


def test_fronting_annotates_source(reference_quads):
    for cell, role in (("train-A", "main-aux"), ("train-B", "embedded-aux"),
                       ("test-A", "main-aux"), ("test-B", "embedded-aux")):
        tree = reference_quads["saux_inv"].member(cell).sentence.tree
        gap = extraction_gap(tree)
        assert gap is not None and gap.role == role


def test_fronting_preserves_token_multiset(lexicon, templates):
    template = templates["saux_inv"]["saux_train_decl"]
    for seed in range(50):
        tree = expand(template, lexicon, random.Random(seed))
        declarative = linearize(tree)
        for strategy in FrontingStrategy:
            question = front_auxiliary(tree, strategy)
            before = sorted(t.lower() for t in declarative.tokens if t != ".")
            after = sorted(t.lower() for t in question.tokens if t != "?")
            assert before == after


def test_fronting_strategy_coincidence(lexicon, templates):
    """Training declaratives: MAIN = LAST; test declaratives: MAIN = FIRST."""
    for seed in range(100):
        train = expand(templates["saux_inv"]["saux_train_decl"], lexicon,
                       random.Random(seed))
        assert (front_auxiliary(train, FrontingStrategy.MAIN).tokens
                == front_auxiliary(train, FrontingStrategy.LAST).tokens)
        test = expand(templates["saux_inv"]["saux_test_decl"], lexicon,
                      random.Random(seed))
        assert (front_auxiliary(test, FrontingStrategy.MAIN).tokens
                == front_auxiliary(test, FrontingStrategy.FIRST).tokens)


def test_fronting_without_auxiliary(lexicon, templates):
    tree = expand(templates["tense"]["tense_train_past"], lexicon, random.Random(0))
    with pytest.raises(NoAuxiliaryError):
        front_auxiliary(tree, FrontingStrategy.FIRST)


def test_fronting_main_requires_role(lexicon, templates):
    tree = expand(templates["saux_inv"]["saux_train_decl"], lexicon, random.Random(0))
    for node in tree.nodes():
        if node.role == "main-aux":
            node.role = None
    with pytest.raises(MissingRoleError):
        front_auxiliary(tree, FrontingStrategy.MAIN)


def test_embedded_verb_tense(reference_quads):
    tense = reference_quads["tense"]
    assert embedded_verb_tense(tense.member("train-A").sentence.tree) == "past"
    assert embedded_verb_tense(tense.member("test-B").sentence.tree) == "present"


def test_embedded_verb_tense_missing_role(lexicon, templates):
    tree = expand(templates["saux_inv"]["saux_control_decl"], lexicon, random.Random(0))
    for node in tree.nodes():
        if node.role == "embedded-verb":
            node.role = None
    with pytest.raises(MissingRoleError):
        embedded_verb_tense(tree)


def test_agreement_match_examples(reference_quads):
    refl = reference_quads["reflexive"]
    train_tree = refl.member("train-A").sentence.tree
    boy = leaf_by_surface(train_tree, "boy")
    himself = leaf_by_surface(train_tree, "himself")
    assert agreement_match(boy, himself)

    neg_tree = refl.member("train-B").sentence.tree
    boy_neg = leaf_by_surface(neg_tree, "boy")
    themselves = leaf_by_surface(neg_tree, "themselves")
    assert not agreement_match(boy_neg, themselves)

    # A binder with no gender agrees with a gendered reflexive.
    genderless = boy.clone()
    genderless.features = {"pers": "3", "num": "sg"}
    assert agreement_match(genderless, himself)
