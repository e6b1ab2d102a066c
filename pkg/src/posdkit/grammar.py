"""Template expansion into derivation trees, and linearization.

Templates are finite (acyclic) context-free skeletons whose terminal slots
name a lexical category, a constraint bundle, and an inflection key.
Agreement is enforced at expansion time by feature-passing links declared
per production: a link (parent_feature, child_index, child_feature) pushes
the parent's value down before the child expands and pulls the child's
value up afterwards, so later siblings see features fixed by earlier ones
and ill-formed combinations are never generated.
"""

from __future__ import annotations

import json
import random
from dataclasses import dataclass, field
from typing import IO, Iterator, Mapping, Optional, Union

from posdkit.lexicon import (
    CONTENT_CATEGORIES,
    LexicalEntry,
    Lexicon,
    NoCandidateError,
    unify,
)


class GrammarError(Exception):
    """Base class for template/expansion problems."""


class TemplateError(GrammarError):
    """A template definition is invalid (cycle, dangling nonterminal, bad link)."""


class UnlexicalizedLeafError(GrammarError):
    """linearize() met a leaf without a sampled lexical entry."""


class DuplicateRoleError(GrammarError):
    """A role tag that must be unique appears on more than one node."""


@dataclass(frozen=True)
class Slot:
    """Terminal position: category plus constraints, inflection, bookkeeping tags."""

    cat: str
    constraints: Mapping[str, str] = field(default_factory=dict)
    form: str = "base"
    share: Optional[str] = None
    role: Optional[str] = None
    lexeme: Optional[str] = None  # pinned entry id; skips sampling entirely


@dataclass(frozen=True)
class ChildRef:
    """Nonterminal position in a production."""

    nt: str
    role: Optional[str] = None
    constraints: Mapping[str, str] = field(default_factory=dict)


@dataclass(frozen=True)
class Production:
    lhs: str
    children: tuple
    links: tuple  # (parent_feature, child_index, child_feature)


@dataclass(frozen=True)
class Template:
    id: str
    root: str
    rules: Mapping[str, tuple]  # nonterminal -> productions

    def max_depth(self) -> int:
        """Longest derivation chain; defined because templates are acyclic."""
        memo = {}

        def depth(nt: str) -> int:
            if nt in memo:
                return memo[nt]
            best = 1
            for prod in self.rules[nt]:
                for child in prod.children:
                    if isinstance(child, ChildRef):
                        best = max(best, 1 + depth(child.nt))
                    else:
                        best = max(best, 2)
            memo[nt] = best
            return best

        return depth(self.root)


class Node:
    """Derivation-tree node.

    Leaves (and only leaves) carry a lexical entry, the inflection key that
    was chosen for it, and the emitted surface string. A gap node marks the
    extraction site of a fronted auxiliary: it occupies a tree position and
    keeps the extracted entry/role, but contributes no token.
    """

    __slots__ = (
        "label",
        "features",
        "children",
        "parent",
        "role",
        "lexeme",
        "form_key",
        "surface",
        "is_gap",
    )

    def __init__(self, label, features=None, role=None):
        self.label = label
        self.features = dict(features) if features else {}
        self.children = []
        self.parent = None
        self.role = role
        self.lexeme = None
        self.form_key = None
        self.surface = None
        self.is_gap = False

    @property
    def is_leaf(self) -> bool:
        return not self.children

    @property
    def category(self) -> Optional[str]:
        return self.label if self.is_leaf else None

    def add(self, child: "Node") -> "Node":
        child.parent = self
        self.children.append(child)
        return child

    def clone(self) -> "Node":
        copy = Node(self.label, self.features, self.role)
        copy.lexeme = self.lexeme
        copy.form_key = self.form_key
        copy.surface = self.surface
        copy.is_gap = self.is_gap
        for child in self.children:
            copy.add(child.clone())
        return copy

    def __repr__(self):
        if self.is_leaf:
            tag = "gap" if self.is_gap else self.surface
            return f"Node({self.label}:{tag})"
        return f"Node({self.label}, {len(self.children)} children)"


class DerivationTree:
    """A rooted constituency tree over Node objects."""

    def __init__(self, root: Node):
        self.root = root
        self._leaf_order = None

    def nodes(self) -> Iterator[Node]:
        stack = [self.root]
        while stack:
            node = stack.pop()
            yield node
            stack.extend(reversed(node.children))

    def leaves(self, include_gaps: bool = False):
        order = self._leaves()
        if include_gaps:
            return list(order)
        return [leaf for leaf in order if not leaf.is_gap]

    def _leaves(self):
        if self._leaf_order is None:
            out = []

            def walk(node):
                if node.is_leaf:
                    out.append(node)
                else:
                    for child in node.children:
                        walk(child)

            walk(self.root)
            self._leaf_order = out
        return self._leaf_order

    def leaf_index(self, node: Node) -> int:
        """Position of a leaf in the full left-to-right order, gaps included."""
        try:
            return self._leaves().index(node)
        except ValueError:
            raise GrammarError("node is not a leaf of this tree") from None

    def contains(self, node: Node) -> bool:
        cursor = node
        while cursor.parent is not None:
            cursor = cursor.parent
        return cursor is self.root

    def clone(self) -> "DerivationTree":
        return DerivationTree(self.root.clone())

    def depth(self) -> int:
        def walk(node):
            if node.is_leaf:
                return 1
            return 1 + max(walk(child) for child in node.children)

        return walk(self.root)


@dataclass(frozen=True)
class Sentence:
    """Token sequence plus the tree it was read off.

    tokens are the surfaces of the lexicalized leaves in order (gap nodes
    contribute none); leaf_spans maps each contributing leaf to its token
    index, bijectively.
    """

    tokens: tuple
    tree: DerivationTree
    leaf_spans: Mapping[Node, int]

    @property
    def text(self) -> str:
        return " ".join(self.tokens)


def find_role(tree: DerivationTree, role: str) -> Optional[Node]:
    """The unique node carrying a role tag, None when absent."""
    found = None
    for node in tree.nodes():
        if node.role == role:
            if found is not None:
                raise DuplicateRoleError(f"role {role!r} appears on more than one node")
            found = node
    return found


def linearize(tree: DerivationTree) -> Sentence:
    """Read the token sequence off the tree's lexicalized leaves."""
    tokens = []
    spans = {}
    for leaf in tree.leaves(include_gaps=True):
        if leaf.is_gap:
            continue
        if leaf.lexeme is None or leaf.surface is None:
            raise UnlexicalizedLeafError(f"leaf {leaf.label!r} carries no lexeme")
        spans[leaf] = len(tokens)
        tokens.append(leaf.surface)
    return Sentence(tokens=tuple(tokens), tree=tree, leaf_spans=spans)


def capitalize_initial(tree: DerivationTree) -> None:
    """Uppercase the first character of the sentence-initial token."""
    for leaf in tree.leaves(include_gaps=True):
        if not leaf.is_gap:
            if leaf.surface:
                leaf.surface = leaf.surface[0].upper() + leaf.surface[1:]
            return


def _resolve_form(slot: Slot, features: Mapping[str, str]) -> str:
    """Map a slot's form key to a concrete inflection key."""
    form = slot.form
    if form == "pres":
        num = features.get("num")
        if num == "sg":
            return "pres_3sg"
        if num == "pl":
            return "pres_pl"
        raise TemplateError(
            f"slot {slot.cat!r} uses form 'pres' but number is unresolved"
        )
    if form.startswith("from:"):
        feat = form[5:]
        value = features.get(feat)
        if value is None:
            raise TemplateError(
                f"slot {slot.cat!r} takes its form from feature {feat!r}, which is unbound"
            )
        return value
    return form


class _Expansion:
    """Single expansion run: owns the rng, bindings and used-id state."""

    def __init__(self, template, lexicon, rng, bindings, used, pins, trace):
        self.template = template
        self.lexicon = lexicon
        self.rng = rng
        self.bindings = bindings
        self.used = used
        self.pins = pins or {}
        self.trace = trace

    def _draw(self, n: int, forced: Optional[int]) -> int:
        if forced is not None:
            index = forced
        elif n == 1:
            index = 0
        else:
            index = self.rng.randrange(n)
        if self.trace is not None:
            self.trace.append((n, index))
        return index

    def _child_features(self, parent: Node, links, index: int) -> dict:
        feats = {}
        for parent_feat, child_index, child_feat in links:
            if child_index == index:
                value = parent.features.get(parent_feat)
                if value is not None:
                    feats[child_feat] = value
        return feats

    def _pull_up(self, parent: Node, child: Node, links, index: int) -> None:
        for parent_feat, child_index, child_feat in links:
            if child_index != index:
                continue
            value = child.features.get(child_feat)
            if value is None:
                continue
            prior = parent.features.get(parent_feat)
            if prior is None:
                parent.features[parent_feat] = value
            elif prior != value:
                raise TemplateError(
                    f"agreement clash on {parent.label!r}.{parent_feat}: "
                    f"{prior!r} vs {value!r} from child {child.label!r}"
                )

    def expand_nt(self, nt: str, features: dict, role: Optional[str]) -> Node:
        productions = self.template.rules.get(nt)
        if not productions:
            raise TemplateError(f"nonterminal {nt!r} has no production")
        index = self._draw(len(productions), None) if len(productions) > 1 else 0
        production = productions[index]
        node = Node(nt, features, role)
        for child_index, child in enumerate(production.children):
            init = self._child_features(node, production.links, child_index)
            if isinstance(child, ChildRef):
                merged = unify(init, child.constraints)
                if merged is None:
                    raise NoCandidateError(
                        child.nt, init, detail=f"conflicts with node constraints in {nt}"
                    )
                sub = self.expand_nt(child.nt, merged, child.role)
            else:
                sub = self.expand_slot(child, init, nt)
            node.add(sub)
            self._pull_up(node, sub, production.links, child_index)
        return node

    def expand_slot(self, slot: Slot, pushed: dict, context: str) -> Node:
        constraints = unify(pushed, slot.constraints)
        if constraints is None:
            raise NoCandidateError(
                slot.cat,
                dict(slot.constraints),
                detail=f"inherited features {pushed} clash in {context}",
            )
        form_key = _resolve_form(slot, constraints)

        if slot.lexeme is not None:
            entry = self.lexicon[slot.lexeme]
        elif slot.share is not None and slot.share in self.bindings:
            entry = self.bindings[slot.share]
            if not _entry_fits(entry, constraints, form_key):
                raise NoCandidateError(
                    slot.cat,
                    constraints,
                    detail=f"shared item {entry.id!r} no longer fits slot in {context}",
                )
        else:
            exclude = self.used if slot.cat in CONTENT_CATEGORIES else frozenset()
            candidates = self.lexicon.eligible(
                slot.cat, constraints, require_form=form_key, exclude=exclude
            )
            if not candidates:
                raise NoCandidateError(
                    slot.cat, constraints, detail=f"slot in {context}, form {form_key!r}"
                )
            forced = None
            if slot.share is not None and slot.share in self.pins:
                want = self.pins[slot.share]
                ids = [c.id for c in candidates]
                if want not in ids:
                    raise NoCandidateError(
                        slot.cat, constraints, detail=f"pin {want!r} not eligible"
                    )
                forced = ids.index(want)
            entry = candidates[self._draw(len(candidates), forced)]
            if slot.share is not None:
                self.bindings[slot.share] = entry
            if slot.cat in CONTENT_CATEGORIES:
                self.used.add(entry.id)

        merged = unify(constraints, entry.features)
        if merged is None:
            raise NoCandidateError(
                slot.cat, constraints, detail=f"entry {entry.id!r} clashes in {context}"
            )
        node = Node(slot.cat, merged, slot.role)
        node.lexeme = entry
        node.form_key = form_key
        node.surface = entry.form(form_key)
        return node


def _entry_fits(entry: LexicalEntry, constraints: Mapping[str, str], form_key: str) -> bool:
    if form_key not in entry.forms:
        return False
    for name, value in constraints.items():
        have = entry.features.get(name)
        if have is not None and have != value:
            return False
    return True


def expand(
    template: Template,
    lexicon: Lexicon,
    rng: random.Random,
    bindings: Optional[dict] = None,
    used: Optional[set] = None,
    pins: Optional[Mapping[str, str]] = None,
    trace: Optional[list] = None,
) -> DerivationTree:
    """Expand a template into a fully lexicalized derivation tree.

    bindings and used carry shared lexical choices across the members of one
    sentence set; pins force named shared slots to specific entry ids while
    still recording the draw they replace (used for seed calibration).
    """
    run = _Expansion(
        template,
        lexicon,
        rng,
        bindings if bindings is not None else {},
        used if used is not None else set(),
        pins,
        trace,
    )
    root = run.expand_nt(template.root, {}, None)
    tree = DerivationTree(root)
    bound = template.max_depth() + 1
    if tree.depth() > bound:
        raise TemplateError(f"template {template.id!r} exceeded its static depth bound")
    return tree


def _parse_child(raw: Mapping, where: str):
    if "nt" in raw:
        return ChildRef(
            nt=raw["nt"],
            role=raw.get("role"),
            constraints=dict(raw.get("constraints", {})),
        )
    if "cat" in raw:
        return Slot(
            cat=raw["cat"],
            constraints=dict(raw.get("constraints", {})),
            form=raw.get("form", "base"),
            share=raw.get("share"),
            role=raw.get("role"),
            lexeme=raw.get("lexeme"),
        )
    raise TemplateError(f"{where}: child is neither a nonterminal nor a slot")


def _validate_template(template: Template) -> None:
    if template.root not in template.rules:
        raise TemplateError(f"template {template.id!r}: root {template.root!r} undefined")
    # Reachability and acyclicity over the nonterminal graph.
    state = {}

    def visit(nt: str):
        mark = state.get(nt)
        if mark == "active":
            raise TemplateError(f"template {template.id!r}: recursion through {nt!r}")
        if mark == "done":
            return
        if nt not in template.rules:
            raise TemplateError(f"template {template.id!r}: nonterminal {nt!r} undefined")
        state[nt] = "active"
        for production in template.rules[nt]:
            arity = len(production.children)
            for parent_feat, child_index, child_feat in production.links:
                if not 0 <= child_index < arity:
                    raise TemplateError(
                        f"template {template.id!r}: link child index {child_index} "
                        f"out of range in {nt!r}"
                    )
            for child in production.children:
                if isinstance(child, ChildRef):
                    visit(child.nt)
        state[nt] = "done"

    visit(template.root)


def load_templates(source: Union[IO, bytes, str], name: str = "<templates>") -> dict:
    """Parse a template file (same JSON-lines container as the lexicon)."""
    if isinstance(source, bytes):
        text = source.decode("utf-8")
    elif isinstance(source, str):
        text = source
    else:
        text = source.read()
        if isinstance(text, bytes):
            text = text.decode("utf-8")

    templates = {}
    for lineno, line in enumerate(text.splitlines(), start=1):
        if not line.strip():
            continue
        try:
            record = json.loads(line)
        except json.JSONDecodeError as exc:
            raise TemplateError(f"{name}:{lineno}: invalid JSON ({exc.msg})") from None
        if record.get("kind") != "template":
            raise TemplateError(f"{name}:{lineno}: unknown record kind")
        rules = {}
        for raw_rule in record["rules"]:
            where = f"{name}:{lineno}:{raw_rule.get('lhs')}"
            production = Production(
                lhs=raw_rule["lhs"],
                children=tuple(_parse_child(c, where) for c in raw_rule["children"]),
                links=tuple(
                    (str(pf), int(ci), str(cf)) for pf, ci, cf in raw_rule.get("links", [])
                ),
            )
            rules.setdefault(production.lhs, []).append(production)
        template = Template(
            id=record["id"],
            root=record["root"],
            rules={lhs: tuple(prods) for lhs, prods in rules.items()},
        )
        _validate_template(template)
        if template.id in templates:
            raise TemplateError(f"{name}:{lineno}: duplicate template id {template.id!r}")
        templates[template.id] = template
    return templates


def load_templates_path(path) -> dict:
    with open(path, "rb") as handle:
        return load_templates(handle, name=str(path))
