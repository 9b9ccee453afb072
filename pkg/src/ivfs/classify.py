"""Claim-and-score classification with two symbolic nearest-neighbour scores.

A query is claimed by every class in turn: it is projected onto that class's
selected features and scored against the class's projected training
samples.  The class with the highest score wins (ties go to the earlier
class).

``c1``  nearest-neighbour kernel score, ``max_t ssk(query, t)``.
``c2``  nearest-neighbour mean feature agreement, averaging the interval
        Jaccard ratio with a ``1 / (1 + beta * gap)`` proximity.

Both are stand-ins for measures whose exact published form is not
available; see the README.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import List, Optional, Sequence, Tuple

import numpy as np

from ivfs.dataset import IntervalFeatureMatrix
from ivfs.exceptions import ConfigurationError, DimensionError, ValidationError
from ivfs.interval_core import as_bounds, ssk_to_many
from ivfs.selection import FeatureKnowledgebase, identity_knowledgebase

CLASSIFIERS = ("c1", "c2")
WFS, WOFS = "WFS", "WoFS"


@dataclass(frozen=True)
class ClassifierConfig:
    kind: str = "c2"
    beta: float = 1.0

    def __post_init__(self):
        kind = self.kind.lower()
        if kind not in CLASSIFIERS:
            raise ConfigurationError(f"classifier must be one of {CLASSIFIERS}, got {self.kind!r}")
        if not self.beta > 0:
            raise ConfigurationError(f"beta must be positive, got {self.beta}")
        object.__setattr__(self, "kind", kind)


@dataclass(frozen=True)
class ClassScore:
    class_id: str
    score: float


def _references(query, class_train) -> Tuple[np.ndarray, np.ndarray]:
    q = as_bounds(query)
    if isinstance(class_train, np.ndarray):
        refs = np.asarray(class_train, dtype=float)
    else:
        items = [as_bounds(t) for t in class_train]
        refs = np.stack(items) if items else np.empty((0,) + q.shape)
    if refs.shape[0] == 0:
        raise ConfigurationError("cannot score a class without training samples")
    if refs.shape[1:] != q.shape:
        raise DimensionError(f"query shape {q.shape} does not match training shape {refs.shape[1:]}")
    return q, refs


def c1_score(query_proj, class_train) -> float:
    q, refs = _references(query_proj, class_train)
    return float(ssk_to_many(q, refs).max())


def feature_agreement(q: np.ndarray, refs: np.ndarray, beta: float) -> np.ndarray:
    """Per-feature agreement in [0, 1] between ``q`` (L, 2) and ``refs`` (n, L, 2).

    The mean of two terms: the interval Jaccard ratio (two identical points
    count as 1), and a proximity that is 1 when the intervals intersect and
    ``1 / (1 + beta * gap)`` otherwise.  Overlaps thus score in [0.5, 1] and
    separated pairs in (0, 0.5), continuous at the point of contact.
    """
    inter = np.minimum(q[:, 1], refs[..., 1]) - np.maximum(q[:, 0], refs[..., 0])
    union = np.maximum(q[:, 1], refs[..., 1]) - np.minimum(q[:, 0], refs[..., 0])
    jaccard = np.divide(np.maximum(inter, 0.0), union, out=np.ones(inter.shape), where=union > 0)
    proximity = 1.0 / (1.0 + beta * np.maximum(-inter, 0.0))
    return (jaccard + proximity) / 2.0


def c2_score(query_proj, class_train, beta: float = 1.0) -> float:
    if not beta > 0:
        raise ConfigurationError(f"beta must be positive, got {beta}")
    q, refs = _references(query_proj, class_train)
    return float(feature_agreement(q, refs, beta).mean(axis=1).max())


def class_score(query_proj, class_train, cfg: ClassifierConfig) -> float:
    if cfg.kind == "c1":
        return c1_score(query_proj, class_train)
    return c2_score(query_proj, class_train, cfg.beta)


def project_query(query, kb: FeatureKnowledgebase, class_id: str) -> np.ndarray:
    """The query restricted to ``class_id``'s selected features, shape (K, 2)."""
    q = as_bounds(query)
    if q.shape[0] != kb.d:
        raise DimensionError(f"query has {q.shape[0]} features, knowledgebase expects {kb.d}")
    idx = np.asarray(kb.entry(class_id).indices) - 1
    return q[idx]


def _argmax(scores: Sequence[ClassScore]) -> ClassScore:
    best = scores[0]
    for s in scores[1:]:
        if s.score > best.score:
            best = s
    return best


def classify_sample(query, kb: FeatureKnowledgebase, train_wofs: Optional[IntervalFeatureMatrix] = None,
                    cfg: ClassifierConfig = ClassifierConfig(), mode: str = WFS,
                    ) -> Tuple[str, List[ClassScore]]:
    """Predict a class for one query; returns ``(label, scores in class order)``.

    ``mode="WoFS"`` ignores the selected indices and scores every class on
    all d features of ``train_wofs``.
    """
    if mode == WOFS:
        if train_wofs is None:
            raise ConfigurationError("WoFS classification needs the full training matrix")
        kb = identity_knowledgebase(train_wofs)
    elif mode != WFS:
        raise ConfigurationError(f"mode must be {WFS!r} or {WOFS!r}, got {mode!r}")
    scores = []
    for entry in kb.classes:
        q = project_query(query, kb, entry.label)
        scores.append(ClassScore(entry.label, class_score(q, entry.train_projections, cfg)))
    return _argmax(scores).class_id, scores


def predict(queries: np.ndarray, kb: FeatureKnowledgebase, cfg: ClassifierConfig = ClassifierConfig(),
            ) -> List[str]:
    """Labels for a ``(n, d, 2)`` stack of queries under ``kb``."""
    return [classify_sample(q, kb, cfg=cfg)[0] for q in np.asarray(queries, dtype=float)]


def accuracy(predictions: Sequence, truth: Sequence) -> float:
    """Fraction of predictions equal to the truth."""
    if len(predictions) != len(truth):
        raise ValidationError(f"{len(predictions)} predictions for {len(truth)} labels")
    if len(truth) == 0:
        raise ValidationError("accuracy of an empty prediction set is undefined")
    return sum(p == t for p, t in zip(predictions, truth)) / len(truth)
