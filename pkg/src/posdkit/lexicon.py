"""Feature-annotated lexicon: schema validation, unification, seeded sampling.

A lexicon file is UTF-8 JSON-lines. The first record declares the schema
(kind="schema", feature names with their allowed values, category tags);
every following record is one entry (kind="entry") with an id, a category,
an inflection-key -> surface-form map, and a feature -> value map.
"""

from __future__ import annotations

import json
import random
from dataclasses import dataclass
from typing import IO, Iterable, Mapping, Optional, Sequence, Union

# A feature bundle is a flat map from feature name to an atomic string value.
FeatureBundle = dict

# Categories whose members count as content words: within one generated
# sentence set, the same content word is never sampled for two different
# slots.
CONTENT_CATEGORIES = frozenset({"N", "V"})


class LexiconError(Exception):
    """Base class for lexicon problems."""


class SchemaViolationError(LexiconError):
    """A bundle or entry uses a feature, value, or category the schema does not declare."""


class LexiconParseError(LexiconError):
    """The lexicon stream is not well-formed; message carries the line number."""


class NoCandidateError(LexiconError):
    """No entry of the requested category satisfies the constraints."""

    def __init__(self, category: str, constraints: Mapping[str, str], detail: str = ""):
        self.category = category
        self.constraints = dict(constraints)
        msg = f"no {category} entry unifies with {self.constraints}"
        if detail:
            msg += f" ({detail})"
        super().__init__(msg)


@dataclass(frozen=True)
class Schema:
    """Declared feature names/values and category tags."""

    features: Mapping[str, tuple]
    categories: tuple

    def check_bundle(self, bundle: Mapping[str, str], where: str = "bundle") -> None:
        for name, value in bundle.items():
            if not name:
                raise SchemaViolationError(f"{where}: empty feature name")
            allowed = self.features.get(name)
            if allowed is None:
                raise SchemaViolationError(f"{where}: undeclared feature {name!r}")
            if value not in allowed:
                raise SchemaViolationError(
                    f"{where}: feature {name!r} has undeclared value {value!r}"
                )

    def check_category(self, category: str, where: str = "entry") -> None:
        if category not in self.categories:
            raise SchemaViolationError(f"{where}: undeclared category {category!r}")


def unify(a: Mapping[str, str], b: Mapping[str, str], schema: Optional[Schema] = None):
    """Combine two feature bundles.

    Returns the union bundle, or None when some feature carries different
    atomic values in a and b. With a schema, undeclared features raise
    SchemaViolationError instead of failing silently.
    """
    if schema is not None:
        schema.check_bundle(a, "left operand")
        schema.check_bundle(b, "right operand")
    if len(a) < len(b):
        a, b = b, a
    out = dict(a)
    for name, value in b.items():
        prior = out.get(name)
        if prior is None:
            out[name] = value
        elif prior != value:
            return None
    return out


def compatible(entry_features: Mapping[str, str], constraints: Mapping[str, str]) -> bool:
    """Cheap unification test used in candidate filtering (no allocation)."""
    for name, value in constraints.items():
        have = entry_features.get(name)
        if have is not None and have != value:
            return False
    return True


@dataclass(frozen=True)
class LexicalEntry:
    """One vocabulary item: inflected surface forms plus its feature bundle."""

    id: str
    category: str
    forms: Mapping[str, str]
    features: Mapping[str, str]

    def form(self, key: str) -> str:
        try:
            return self.forms[key]
        except KeyError:
            raise LexiconError(f"entry {self.id!r} has no {key!r} form") from None


def _check_entry(entry: LexicalEntry, schema: Schema) -> None:
    if not entry.id:
        raise SchemaViolationError("entry with empty id")
    where = f"entry {entry.id!r}"
    schema.check_category(entry.category, where)
    if not entry.forms:
        raise SchemaViolationError(f"{where}: no surface forms")
    schema.check_bundle(entry.features, where)
    if entry.category == "V":
        if "past" not in entry.forms:
            raise SchemaViolationError(f"{where}: verb lacks a past form")
        if "pres_3sg" not in entry.forms and "pres_pl" not in entry.forms:
            raise SchemaViolationError(f"{where}: verb lacks a present form")
    if entry.category == "Refl":
        for feat in ("pers", "num"):
            if feat not in entry.features:
                raise SchemaViolationError(f"{where}: reflexive lacks {feat!r}")
        # Gender is atomic, so plural reflexives (themselves) must leave it
        # unspecified to agree with binders of any gender.
        if entry.features.get("num") == "sg" and "gen" not in entry.features:
            raise SchemaViolationError(f"{where}: singular reflexive lacks gender")


class Lexicon:
    """Immutable, schema-validated entry collection with category indexes."""

    def __init__(self, schema: Schema, entries: Iterable[LexicalEntry]):
        self.schema = schema
        self.entries = tuple(entries)
        self._by_id = {}
        self._by_category = {}
        bad = []
        for entry in self.entries:
            try:
                _check_entry(entry, schema)
            except SchemaViolationError as exc:
                bad.append(str(exc))
                continue
            if entry.id in self._by_id:
                bad.append(f"duplicate entry id {entry.id!r}")
                continue
            self._by_id[entry.id] = entry
            self._by_category.setdefault(entry.category, []).append(entry)
        if bad:
            raise SchemaViolationError("; ".join(bad))

    def __len__(self) -> int:
        return len(self.entries)

    def __getitem__(self, entry_id: str) -> LexicalEntry:
        try:
            return self._by_id[entry_id]
        except KeyError:
            raise LexiconError(f"unknown entry id {entry_id!r}") from None

    def __contains__(self, entry_id: str) -> bool:
        return entry_id in self._by_id

    def categories(self):
        return tuple(self._by_category)

    def by_category(self, category: str) -> Sequence[LexicalEntry]:
        return self._by_category.get(category, ())

    def eligible(
        self,
        category: str,
        constraints: Mapping[str, str],
        require_form: Optional[str] = None,
        exclude: frozenset = frozenset(),
    ) -> list:
        """Entries of the category unifying with constraints, in file order."""
        self.schema.check_bundle(constraints, f"constraints on {category}")
        out = []
        for entry in self._by_category.get(category, ()):
            if entry.id in exclude:
                continue
            if require_form is not None and require_form not in entry.forms:
                continue
            if compatible(entry.features, constraints):
                out.append(entry)
        return out


def sample_entry(
    lexicon: Lexicon,
    category: str,
    constraints: Mapping[str, str],
    rng: random.Random,
    exclude: frozenset = frozenset(),
) -> LexicalEntry:
    """Uniform draw over entries of the category that unify with constraints.

    Deterministic given the rng state; a single candidate is returned
    without consuming randomness.
    """
    candidates = lexicon.eligible(category, constraints, exclude=exclude)
    if not candidates:
        raise NoCandidateError(category, constraints)
    if len(candidates) == 1:
        return candidates[0]
    return candidates[rng.randrange(len(candidates))]


def _parse_record(line: str, lineno: int, where: str):
    try:
        record = json.loads(line)
    except json.JSONDecodeError as exc:
        raise LexiconParseError(f"{where}:{lineno}: invalid JSON ({exc.msg})") from None
    if not isinstance(record, dict):
        raise LexiconParseError(f"{where}:{lineno}: record is not an object")
    return record


def load_lexicon(source: Union[IO, bytes, str], name: str = "<lexicon>") -> Lexicon:
    """Parse and validate a lexicon stream (file object, bytes, or str)."""
    if isinstance(source, bytes):
        text = source.decode("utf-8")
    elif isinstance(source, str):
        text = source
    else:
        text = source.read()
        if isinstance(text, bytes):
            text = text.decode("utf-8")

    schema = None
    entries = []
    for lineno, line in enumerate(text.splitlines(), start=1):
        if not line.strip():
            continue
        record = _parse_record(line, lineno, name)
        kind = record.get("kind")
        if kind == "schema":
            if schema is not None:
                raise LexiconParseError(f"{name}:{lineno}: duplicate schema record")
            features = record.get("features")
            categories = record.get("categories")
            if not isinstance(features, dict) or not isinstance(categories, list):
                raise LexiconParseError(f"{name}:{lineno}: malformed schema record")
            schema = Schema(
                features={k: tuple(v) for k, v in features.items()},
                categories=tuple(categories),
            )
        elif kind == "entry":
            if schema is None:
                raise LexiconParseError(f"{name}:{lineno}: entry precedes schema record")
            try:
                entries.append(
                    LexicalEntry(
                        id=record["id"],
                        category=record["category"],
                        forms=dict(record["forms"]),
                        features=dict(record.get("features", {})),
                    )
                )
            except (KeyError, TypeError):
                raise LexiconParseError(f"{name}:{lineno}: malformed entry record") from None
        else:
            raise LexiconParseError(f"{name}:{lineno}: unknown record kind {kind!r}")
    if schema is None:
        raise LexiconParseError(f"{name}: missing schema record")
    return Lexicon(schema, entries)


def load_lexicon_path(path) -> Lexicon:
    with open(path, "rb") as handle:
        return load_lexicon(handle, name=str(path))
