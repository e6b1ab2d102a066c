"""Baseline classifiers over surface vs. relation features, minimal-pair
metrics, and the chance-alignment statistic.

The logistic-regression trainer is deliberately from scratch (mini-batch
gradient descent over hashed sparse features) so its determinism and
gradients are fully under test.
"""

from __future__ import annotations

import hashlib
import json
import math
import statistics
from dataclasses import dataclass, replace
from typing import Mapping, Optional, Sequence

import numpy as np
from scipy import sparse

from posdkit.paradigms import LabeledSentence, get_paradigm, label_linear, label_structural

HASH_DIM = 1 << 20
_HASH_KEY = b"posdkit.features.v1"


class LearnerError(Exception):
    pass


class EmptyTrainingSetError(LearnerError):
    pass


class UnpairedRecordError(LearnerError):
    pass


def hash_bucket(feature: str) -> int:
    """Stable feature hashing (independent of PYTHONHASHSEED)."""
    digest = hashlib.blake2b(feature.encode("utf-8"), digest_size=8, key=_HASH_KEY)
    return int.from_bytes(digest.digest(), "big") % HASH_DIM


def surface_feature_names(tokens: Sequence[str]) -> list:
    """Unigrams, bigrams, absolute-position pairs, and edge markers."""
    names = []
    for index, token in enumerate(tokens):
        names.append(f"uni:{token}")
        names.append(f"pos:{token}@{index}")
    for left, right in zip(tokens, tokens[1:]):
        names.append(f"bi:{left}_{right}")
    if tokens:
        names.append(f"first:{tokens[0]}")
        names.append(f"last:{tokens[-1]}")
    return names


def featurize_surface(tokens: Sequence[str]) -> dict:
    vec: dict = {}
    for name in surface_feature_names(tokens):
        bucket = hash_bucket(name)
        vec[bucket] = vec.get(bucket, 0.0) + 1.0
    return vec


_STRUCTURAL_NAMES = {
    "saux_inv": "fronted-aux-sourced-main",
    "reflexive": "binder-c-commands-reflexive",
    "npi": "negation-c-commands-npi",
    "tense": "embedded-verb-past",
}
_LINEAR_NAMES = {
    "saux_inv": "fronted-aux-sourced-last",
    "reflexive": "agreeing-noun-precedes-reflexive",
    "npi": "negation-precedes-npi",
    "tense": "first-verb-past",
}


def featurize_structural(member: LabeledSentence, paradigm) -> dict:
    """Indicator of the paradigm's structural relation, recomputed from the
    tree (not read off the stored label)."""
    spec = get_paradigm(paradigm)
    holds = label_structural(spec, member.sentence)
    name = _STRUCTURAL_NAMES[spec.id]
    return {hash_bucket(f"rel:{spec.id}:{name}"): 1.0} if holds else {}


def featurize_linear(member: LabeledSentence, paradigm) -> dict:
    """Precedence counterpart of the structural indicator."""
    spec = get_paradigm(paradigm)
    holds = label_linear(spec, member.sentence)
    name = _LINEAR_NAMES[spec.id]
    return {hash_bucket(f"rel:{spec.id}:{name}"): 1.0} if holds else {}


def make_featurizer(name: str, paradigm: Optional[str] = None):
    """A callable (record, member) -> sparse dict for the named featurizer.

    The surface featurizer works from record text alone; the relation
    featurizers need the member's derivation tree.
    """
    if name == "surface":
        def surface(record, member=None):
            tokens = member.tokens if member is not None else tuple(record.text.split(" "))
            return featurize_surface(tokens)

        return surface
    if name in ("structural", "linear"):
        if paradigm is None:
            raise LearnerError(f"{name} featurizer needs a paradigm")
        fn = featurize_structural if name == "structural" else featurize_linear

        def relational(record, member):
            if member is None:
                raise LearnerError(f"{name} featurizer needs derivation trees")
            return fn(member, paradigm)

        return relational
    raise LearnerError(f"unknown featurizer {name!r}")


FEATURIZER_NAMES = ("surface", "structural", "linear")


def vectorize(feature_dicts: Sequence[Mapping[int, float]], dim: int = HASH_DIM):
    """Stack sparse feature dicts into a CSR matrix."""
    indptr = [0]
    indices: list = []
    data: list = []
    for vec in feature_dicts:
        for bucket in sorted(vec):
            indices.append(bucket)
            data.append(vec[bucket])
        indptr.append(len(indices))
    return sparse.csr_matrix(
        (np.asarray(data, dtype=np.float64), np.asarray(indices, dtype=np.int64),
         np.asarray(indptr, dtype=np.int64)),
        shape=(len(feature_dicts), dim),
    )


# ---------------------------------------------------------------------------
# Logistic regression.


@dataclass(frozen=True)
class TrainConfig:
    learning_rate: float = 0.1
    epochs: int = 50
    batch_size: int = 32
    patience: int = 5
    seed: int = 0
    l2: float = 0.0
    dim: int = HASH_DIM


def logistic_loss_and_gradient(weights, bias, X, y, l2: float = 0.0):
    """Mean logistic loss and its analytic gradient.

    Accepts dense or CSR X; y is a 0/1 float array.
    """
    z = np.asarray(X @ weights).ravel() + bias
    loss = float(np.mean(np.logaddexp(0.0, z) - y * z))
    residual = _sigmoid(z) - y
    grad_w = np.asarray(X.T @ residual).ravel() / len(y)
    grad_b = float(np.mean(residual))
    if l2:
        loss += 0.5 * l2 * float(weights @ weights)
        grad_w = grad_w + l2 * weights
    return loss, grad_w, grad_b


def _sigmoid(z):
    out = np.empty_like(z)
    pos = z >= 0
    out[pos] = 1.0 / (1.0 + np.exp(-z[pos]))
    ez = np.exp(z[~pos])
    out[~pos] = ez / (1.0 + ez)
    return out


@dataclass
class LinearModel:
    """Thresholded linear scorer over hashed features."""

    weights: np.ndarray
    bias: float
    config: TrainConfig

    def decision(self, X):
        return np.asarray(X @ self.weights).ravel() + self.bias

    def predict(self, X):
        return self.decision(X) > 0.0

    def save(self, path) -> None:
        nonzero = np.nonzero(self.weights)[0]
        payload = {
            "kind": "linear-model",
            "dim": int(self.config.dim),
            "bias": float(self.bias),
            "indices": [int(i) for i in nonzero],
            "values": [float(self.weights[i]) for i in nonzero],
            "config": {
                "learning_rate": self.config.learning_rate,
                "epochs": self.config.epochs,
                "batch_size": self.config.batch_size,
                "patience": self.config.patience,
                "seed": self.config.seed,
                "l2": self.config.l2,
            },
        }
        with open(path, "w", encoding="utf-8") as handle:
            json.dump(payload, handle)
            handle.write("\n")

    @classmethod
    def load(cls, path) -> "LinearModel":
        with open(path, "r", encoding="utf-8") as handle:
            payload = json.load(handle)
        if payload.get("kind") != "linear-model":
            raise LearnerError(f"{path} is not a saved linear model")
        config = TrainConfig(dim=payload["dim"], **payload.get("config", {}))
        weights = np.zeros(payload["dim"], dtype=np.float64)
        weights[payload["indices"]] = payload["values"]
        return cls(weights=weights, bias=float(payload["bias"]), config=config)


def train(
    config: TrainConfig,
    X_train,
    y_train,
    X_dev=None,
    y_dev=None,
) -> LinearModel:
    """Mini-batch gradient descent on the logistic loss.

    Deterministic per seed (weight init and shuffling both come from it);
    stops after the configured epochs or once `patience` dev evaluations
    pass without improvement, keeping the best-dev weights.
    """
    n = X_train.shape[0]
    if n == 0:
        raise EmptyTrainingSetError("no training records")
    y_train = np.asarray(y_train, dtype=np.float64)

    rng = np.random.default_rng(config.seed)
    weights = rng.normal(0.0, 0.01, size=config.dim)
    bias = 0.0
    lr = config.learning_rate

    use_dev = X_dev is not None and y_dev is not None and X_dev.shape[0] > 0
    if use_dev:
        y_dev = np.asarray(y_dev, dtype=np.float64)
    best = None
    best_accuracy = -1.0
    stale = 0

    X_train = X_train.tocsr()
    for _ in range(config.epochs):
        order = rng.permutation(n)
        for start in range(0, n, config.batch_size):
            batch = order[start : start + config.batch_size]
            Xb = X_train[batch]
            z = np.asarray(Xb @ weights).ravel() + bias
            residual = (_sigmoid(z) - y_train[batch]) / len(batch)
            coo = Xb.tocoo()
            if config.l2:
                weights *= 1.0 - lr * config.l2
            np.subtract.at(weights, coo.col, lr * residual[coo.row] * coo.data)
            bias -= lr * float(residual.sum())
        if use_dev:
            accuracy = float(
                np.mean((np.asarray(X_dev @ weights).ravel() + bias > 0.0) == (y_dev > 0.5))
            )
            if accuracy > best_accuracy:
                best_accuracy = accuracy
                best = (weights.copy(), bias)
                stale = 0
            else:
                stale += 1
                if stale >= config.patience:
                    break
    if use_dev and best is not None:
        weights, bias = best
    return LinearModel(weights=weights, bias=bias, config=config)


# ---------------------------------------------------------------------------
# Minimal-pair evaluation.


@dataclass(frozen=True)
class PairDiagnosis:
    """How test-template pairs were classified, as fractions of all such pairs."""

    structural: float = 0.0
    linear: float = 0.0
    other: float = 0.0
    n_pairs: int = 0

    def to_dict(self) -> dict:
        return {
            "structural": self.structural,
            "linear": self.linear,
            "other": self.other,
            "n_pairs": self.n_pairs,
        }


@dataclass(frozen=True)
class SplitMetrics:
    split: str
    n_items: int
    item_accuracy: float
    n_pairs: int
    pair_accuracy: float
    n_train_pairs: int
    train_pair_accuracy: float
    n_test_pairs: int
    test_pair_accuracy: float
    diagnosis: PairDiagnosis

    def to_dict(self) -> dict:
        out = {
            "split": self.split,
            "n_items": self.n_items,
            "item_accuracy": self.item_accuracy,
            "n_pairs": self.n_pairs,
            "pair_accuracy": self.pair_accuracy,
            "n_train_pairs": self.n_train_pairs,
            "train_pair_accuracy": self.train_pair_accuracy,
            "n_test_pairs": self.n_test_pairs,
            "test_pair_accuracy": self.test_pair_accuracy,
            "diagnosis": self.diagnosis.to_dict(),
        }
        return out


def _ratio(hit: int, total: int) -> float:
    return hit / total if total else 0.0


def split_metrics(records: Sequence, predictions: Sequence[bool], split: str) -> SplitMetrics:
    """Item and minimal-pair accuracy plus the consistency diagnosis.

    Records must carry quad/cell metadata; members of one quad pair are
    matched on (quad_id, template_kind). Control records (cell="control")
    count toward item accuracy only.
    """
    if len(records) != len(predictions):
        raise LearnerError("records and predictions differ in length")

    correct_items = 0
    groups: dict = {}
    for record, prediction in zip(records, predictions):
        prediction = bool(prediction)
        if prediction == record.label:
            correct_items += 1
        if record.cell == "control":
            continue
        groups.setdefault((record.quad_id, record.template_kind), []).append(
            (record, prediction)
        )

    pair_hits = {"train": 0, "test": 0}
    pair_totals = {"train": 0, "test": 0}
    diag_structural = 0
    diag_linear = 0
    for (quad_id, kind), members in groups.items():
        if len(members) != 2:
            raise UnpairedRecordError(
                f"quad {quad_id} has {len(members)} {kind}-template record(s) in "
                f"{split!r}; minimal-pair metrics need exactly 2"
            )
        pair_totals[kind] += 1
        both_correct = all(pred == rec.label for rec, pred in members)
        if both_correct:
            pair_hits[kind] += 1
        if kind == "test":
            if both_correct:
                diag_structural += 1
            elif all(pred == rec.label_linear for rec, pred in members):
                diag_linear += 1

    n_items = len(records)
    n_pairs = pair_totals["train"] + pair_totals["test"]
    n_test_pairs = pair_totals["test"]
    diagnosis = PairDiagnosis(
        structural=_ratio(diag_structural, n_test_pairs),
        linear=_ratio(diag_linear, n_test_pairs),
        other=_ratio(n_test_pairs - diag_structural - diag_linear, n_test_pairs),
        n_pairs=n_test_pairs,
    )
    return SplitMetrics(
        split=split,
        n_items=n_items,
        item_accuracy=_ratio(correct_items, n_items),
        n_pairs=n_pairs,
        pair_accuracy=_ratio(pair_hits["train"] + pair_hits["test"], n_pairs),
        n_train_pairs=pair_totals["train"],
        train_pair_accuracy=_ratio(pair_hits["train"], pair_totals["train"]),
        n_test_pairs=n_test_pairs,
        test_pair_accuracy=_ratio(pair_hits["test"], n_test_pairs),
        diagnosis=diagnosis,
    )


@dataclass(frozen=True)
class EvalResult:
    """Per-split metrics for one trained model or predictor."""

    paradigm: str
    predictor: str
    seed: int
    splits: Mapping[str, SplitMetrics]

    def split(self, name: str) -> SplitMetrics:
        return self.splits[name]

    def to_dict(self) -> dict:
        return {
            "kind": "eval-result",
            "paradigm": self.paradigm,
            "predictor": self.predictor,
            "seed": self.seed,
            "splits": {name: m.to_dict() for name, m in self.splits.items()},
        }

    @classmethod
    def from_dict(cls, obj: Mapping) -> "EvalResult":
        splits = {}
        for name, raw in obj["splits"].items():
            diagnosis = PairDiagnosis(**raw.pop("diagnosis"))
            splits[name] = SplitMetrics(diagnosis=diagnosis, **raw)
        return cls(
            paradigm=obj["paradigm"],
            predictor=obj["predictor"],
            seed=int(obj.get("seed", 0)),
            splits=splits,
        )


@dataclass
class EvalSet:
    """One split ready for evaluation: records plus (optionally) features."""

    split: str
    records: list
    matrix: Optional[object] = None  # CSR; None for label-only predictors

    @property
    def labels(self):
        return np.asarray([r.label for r in self.records], dtype=np.float64)


def evaluate(model: LinearModel, eval_sets: Mapping[str, EvalSet], paradigm: str,
             predictor: str, seed: int = 0) -> EvalResult:
    splits = {}
    for name, eval_set in eval_sets.items():
        if eval_set.matrix is None:
            raise LearnerError(f"split {name!r} carries no feature matrix")
        predictions = model.predict(eval_set.matrix)
        splits[name] = split_metrics(eval_set.records, predictions, name)
    return EvalResult(paradigm=paradigm, predictor=predictor, seed=seed, splits=splits)


def evaluate_predictions(
    predictions_by_split: Mapping[str, Sequence[bool]],
    eval_sets: Mapping[str, EvalSet],
    paradigm: str,
    predictor: str,
    seed: int = 0,
) -> EvalResult:
    splits = {}
    for name, eval_set in eval_sets.items():
        splits[name] = split_metrics(eval_set.records, predictions_by_split[name], name)
    return EvalResult(paradigm=paradigm, predictor=predictor, seed=seed, splits=splits)


def oracle_predictions(records: Sequence, which: str):
    """Label-copy predictors: the two hypotheses as upper/lower bounds."""
    if which == "structural":
        return [record.label for record in records]
    if which == "linear":
        return [record.label_linear for record in records]
    raise LearnerError(f"unknown oracle {which!r}")


def random_predictions(records: Sequence, seed: int):
    import random as _random

    rng = _random.Random(seed)
    return [rng.random() < 0.5 for _ in records]


def train_and_evaluate(
    config: TrainConfig,
    eval_sets: Mapping[str, EvalSet],
    paradigm: str,
    predictor: str,
) -> EvalResult:
    train_set = eval_sets.get("train")
    if train_set is None or not train_set.records:
        raise EmptyTrainingSetError("no training records")
    dev_set = eval_sets.get("dev")
    model = train(
        config,
        train_set.matrix,
        train_set.labels,
        X_dev=dev_set.matrix if dev_set is not None else None,
        y_dev=dev_set.labels if dev_set is not None else None,
    )
    return evaluate(model, eval_sets, paradigm, predictor, seed=config.seed)


@dataclass(frozen=True)
class RestartSummary:
    results: tuple
    median_test_pair_accuracy: float
    min_test_pair_accuracy: float
    max_test_pair_accuracy: float

    def to_dict(self) -> dict:
        return {
            "n_restarts": len(self.results),
            "median_test_pair_accuracy": self.median_test_pair_accuracy,
            "min_test_pair_accuracy": self.min_test_pair_accuracy,
            "max_test_pair_accuracy": self.max_test_pair_accuracy,
        }


def run_restarts(
    config: TrainConfig,
    eval_sets: Mapping[str, EvalSet],
    paradigm: str,
    predictor: str,
    n_restarts: int,
) -> RestartSummary:
    """Independent train+evaluate runs differing only in the classifier seed."""
    if n_restarts < 1:
        raise LearnerError("n_restarts must be >= 1")
    results = []
    for restart in range(n_restarts):
        cfg = replace(config, seed=config.seed + restart)
        results.append(train_and_evaluate(cfg, eval_sets, paradigm, predictor))
    scores = [r.split("test").test_pair_accuracy for r in results]
    return RestartSummary(
        results=tuple(results),
        median_test_pair_accuracy=float(statistics.median(scores)),
        min_test_pair_accuracy=float(min(scores)),
        max_test_pair_accuracy=float(max(scores)),
    )


def chance_alignment_probability(n_domains: int, k_min: int, p_align: float) -> float:
    """Exact binomial tail P(X >= k_min) for X ~ Binomial(n_domains, p_align)."""
    if not isinstance(n_domains, int) or not isinstance(k_min, int):
        raise ValueError("domain counts must be integers")
    if n_domains < 0 or k_min < 0:
        raise ValueError("domain counts must be nonnegative")
    if not 0.0 <= p_align <= 1.0:
        raise ValueError("p_align must lie in [0, 1]")
    if k_min > n_domains:
        return 0.0
    total = 0.0
    for k in range(k_min, n_domains + 1):
        total += math.comb(n_domains, k) * p_align**k * (1.0 - p_align) ** (n_domains - k)
    return total
