"""Cluster representatives and the per-class feature knowledgebase.

Within a cluster, the representative is the feature with the highest mean
kernel value to all members (itself included).  Each class keeps the
representatives of its K clusters; the knowledgebase stores those 1-based
indices together with the class's training samples projected onto them.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from typing import Dict, List, Optional, Sequence, TextIO, Tuple

import numpy as np

from ivfs.clustering import ClusterModel, KMeansConfig, interval_kmeans
from ivfs.dataset import ClassSubMatrix, IntervalFeatureMatrix, transpose_by_class
from ivfs.exceptions import ConfigurationError, FormatError, ValidationError
from ivfs.interval_core import ssk_matrix

SCHEMA_VERSION = 1


@dataclass(frozen=True)
class SimilarityMatrix:
    values: np.ndarray  # (z, z)
    feature_ids: Tuple[int, ...]  # 1-based original indices


def similarity_matrix(cluster_features, ids: Sequence[int]) -> SimilarityMatrix:
    """Pairwise kernel values among the features of one cluster."""
    x = np.asarray(cluster_features, dtype=float)
    if x.ndim != 3 or x.shape[0] != len(ids) or x.shape[0] < 1:
        raise ValidationError(f"need z >= 1 features matching {len(ids)} ids, got shape {x.shape}")
    return SimilarityMatrix(ssk_matrix(x, x), tuple(int(i) for i in ids))


def average_similarity(sm: SimilarityMatrix) -> List[float]:
    z = len(sm.feature_ids)
    return [math.fsum(row) / z for row in sm.values.tolist()]


def cluster_representative(sm: SimilarityMatrix) -> int:
    """Original index of the feature with maximal average similarity.

    Ties go to the lowest original index.
    """
    asv = average_similarity(sm)
    best = max(asv)
    return min(fid for fid, v in zip(sm.feature_ids, asv) if v == best)


def representatives(sub: ClassSubMatrix, model: ClusterModel) -> List[int]:
    """One representative per cluster, in cluster order."""
    reps = []
    for q in range(model.k):
        rows = model.members(q)
        ids = [sub.original_feature_indices[r] for r in rows]
        reps.append(cluster_representative(similarity_matrix(sub.features[rows], ids)))
    return reps


def select_class_features(sub: ClassSubMatrix, cfg: KMeansConfig):
    """Cluster one class's features and return ``(indices, model)``."""
    model = interval_kmeans(sub, cfg)
    reps = representatives(sub, model)
    assert len(set(reps)) == len(reps), "representatives of a partition are distinct"
    return reps, model


@dataclass(frozen=True)
class ClassEntry:
    label: str
    indices: Tuple[int, ...]
    train_projections: np.ndarray  # (n_j, K, 2)
    converged: Optional[bool] = None


@dataclass(frozen=True)
class FeatureKnowledgebase:
    k: int
    d: int
    classes: Tuple[ClassEntry, ...]
    dataset_id: str = ""
    seed: int = 0
    schema_version: int = SCHEMA_VERSION

    def __post_init__(self):
        if len(self.classes) < 2:
            raise ValidationError("a knowledgebase needs at least two classes")
        labels = [c.label for c in self.classes]
        if len(set(labels)) != len(labels):
            raise ValidationError("duplicate class labels in knowledgebase")
        for c in self.classes:
            if len(c.indices) != self.k or len(set(c.indices)) != self.k:
                raise ValidationError(f"class {c.label!r} must have {self.k} distinct indices, got {c.indices}")
            if any(not 1 <= i <= self.d for i in c.indices):
                raise ValidationError(f"class {c.label!r} has indices outside 1..{self.d}: {c.indices}")
            p = c.train_projections
            if p.ndim != 3 or p.shape[0] < 1 or p.shape[1:] != (self.k, 2):
                raise ValidationError(f"class {c.label!r}: projections must have shape (n, {self.k}, 2)")

    @property
    def class_names(self) -> Tuple[str, ...]:
        return tuple(c.label for c in self.classes)

    def entry(self, label: str) -> ClassEntry:
        for c in self.classes:
            if c.label == label:
                return c
        raise ValidationError(f"unknown class {label!r}")

    def indices(self) -> Dict[str, Tuple[int, ...]]:
        return {c.label: c.indices for c in self.classes}

    def __eq__(self, other):
        if not isinstance(other, FeatureKnowledgebase):
            return NotImplemented
        head = (self.k, self.d, self.dataset_id, self.seed, self.schema_version)
        if head != (other.k, other.d, other.dataset_id, other.seed, other.schema_version):
            return False
        if len(self.classes) != len(other.classes):
            return False
        return all(a.label == b.label and a.indices == b.indices and a.converged == b.converged
                   and np.array_equal(a.train_projections, b.train_projections)
                   for a, b in zip(self.classes, other.classes))


def knowledgebase_from_indices(train: IntervalFeatureMatrix, indices: Dict[str, Sequence[int]],
                               seed: int = 0, converged: Optional[Dict[str, bool]] = None,
                               ) -> FeatureKnowledgebase:
    """Assemble a knowledgebase from given per-class index lists."""
    ks = {len(v) for v in indices.values()}
    if len(ks) != 1:
        raise ValidationError("every class must keep the same number of features")
    entries = []
    for label in train.class_names:
        idx = tuple(int(i) for i in indices[label])
        proj = train.class_data(label)[:, np.asarray(idx) - 1]
        entries.append(ClassEntry(label, idx, proj, None if converged is None else converged[label]))
    return FeatureKnowledgebase(ks.pop(), train.n_features, tuple(entries), train.name, seed)


def identity_knowledgebase(train: IntervalFeatureMatrix) -> FeatureKnowledgebase:
    """Every class keeps all d features (the no-selection baseline)."""
    full = tuple(range(1, train.n_features + 1))
    return knowledgebase_from_indices(train, {c: full for c in train.class_names})


def build_knowledgebase(train: IntervalFeatureMatrix, cfg: KMeansConfig) -> FeatureKnowledgebase:
    """Select K features per class and archive them with projected training data."""
    if cfg.k > train.n_features:
        raise ConfigurationError(f"k={cfg.k} exceeds the number of features ({train.n_features})")
    selected, converged = {}, {}
    for sub in transpose_by_class(train):
        reps, model = select_class_features(sub, cfg)
        selected[sub.class_id] = reps
        converged[sub.class_id] = model.converged
    return knowledgebase_from_indices(train, selected, cfg.seed, converged)


# --- persistence ----------------------------------------------------------

def knowledgebase_to_dict(kb: FeatureKnowledgebase) -> dict:
    return {
        "schema_version": kb.schema_version,
        "dataset_id": kb.dataset_id,
        "seed": kb.seed,
        "k": kb.k,
        "d": kb.d,
        "classes": [
            {
                "label": c.label,
                "indices": list(c.indices),
                "converged": c.converged,
                "train_projections": c.train_projections.tolist(),
            }
            for c in kb.classes
        ],
    }


def save_knowledgebase(kb: FeatureKnowledgebase, stream: TextIO) -> None:
    json.dump(knowledgebase_to_dict(kb), stream, indent=1)
    stream.write("\n")


def _require(obj, key, kind, where):
    if not isinstance(obj, dict) or key not in obj:
        raise FormatError(f"{where}: missing field {key!r}")
    value = obj[key]
    if not isinstance(value, kind) or isinstance(value, bool) and kind is not bool:
        raise FormatError(f"{where}: field {key!r} has the wrong type")
    return value


def load_knowledgebase(stream: TextIO) -> FeatureKnowledgebase:
    """Read a knowledgebase written by :func:`save_knowledgebase`.

    Malformed JSON or missing fields raise :class:`FormatError`; well-formed
    files that break an invariant (e.g. an index above d) raise
    :class:`ValidationError`.
    """
    try:
        doc = json.load(stream)
    except json.JSONDecodeError as exc:
        raise FormatError(f"knowledgebase is not valid JSON (line {exc.lineno}, column {exc.colno}): {exc.msg}") from None
    version = _require(doc, "schema_version", int, "knowledgebase")
    if version != SCHEMA_VERSION:
        raise FormatError(f"unsupported knowledgebase schema_version {version}")
    k = _require(doc, "k", int, "knowledgebase")
    d = _require(doc, "d", int, "knowledgebase")
    entries = []
    for n, c in enumerate(_require(doc, "classes", list, "knowledgebase")):
        where = f"classes[{n}]"
        label = _require(c, "label", str, where)
        idx = _require(c, "indices", list, where)
        if not all(isinstance(i, int) and not isinstance(i, bool) for i in idx):
            raise FormatError(f"{where}: indices must be integers")
        try:
            proj = np.asarray(_require(c, "train_projections", list, where), dtype=float)
        except ValueError:
            raise FormatError(f"{where}: train_projections is not a numeric array") from None
        if proj.ndim != 3 or proj.shape[-1] != 2:
            raise FormatError(f"{where}: train_projections must be a list of [[lo, hi], ...] samples")
        if np.any(proj[..., 0] > proj[..., 1]):
            raise ValidationError(f"{where}: projection with lo > hi")
        entries.append(ClassEntry(label, tuple(idx), proj, c.get("converged")))
    return FeatureKnowledgebase(k, d, tuple(entries), _require(doc, "dataset_id", str, "knowledgebase"),
                                _require(doc, "seed", int, "knowledgebase"), version)
