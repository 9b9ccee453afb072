"""Interval K-Means over the feature rows of one class.

Features are the objects being clustered: each is an interval vector with one
entry per class sample.  Affinity is :func:`ivfs.interval_core.ssk` (higher
is closer), centroids are component-wise means of lower and upper bounds,
and the loop stops at an assignment fixed point or after ``max_iterations``.

Cluster labels are 0-based positions into ``centroids``.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import List, Tuple

import numpy as np

from ivfs.dataset import ClassSubMatrix
from ivfs.exceptions import ConfigurationError, DimensionError
from ivfs.interval_core import IntervalVector, ssk_matrix

DEFAULT_MAX_ITERATIONS = 100


@dataclass(frozen=True)
class KMeansConfig:
    k: int
    max_iterations: int = DEFAULT_MAX_ITERATIONS
    seed: int = 0

    def __post_init__(self):
        if int(self.k) != self.k or self.k < 2:
            raise ConfigurationError(f"k must be an integer >= 2, got {self.k}")
        if int(self.max_iterations) != self.max_iterations or self.max_iterations < 1:
            raise ConfigurationError(f"max_iterations must be >= 1, got {self.max_iterations}")
        if self.seed < 0:
            raise ConfigurationError("seed must be non-negative")


@dataclass(frozen=True)
class ClusterModel:
    k: int
    centroids: np.ndarray  # (k, n_j, 2)
    assignments: np.ndarray  # (d,) cluster label per feature row
    iterations_run: int
    converged: bool
    initial_features: Tuple[int, ...] = ()  # 0-based rows used as seeds

    def members(self, q: int) -> np.ndarray:
        """0-based feature rows assigned to cluster ``q``."""
        return np.flatnonzero(self.assignments == q)

    def centroid(self, q: int) -> IntervalVector:
        return IntervalVector(self.centroids[q])


def _stack(features) -> np.ndarray:
    if isinstance(features, ClassSubMatrix):
        return features.features
    if isinstance(features, np.ndarray):
        return features
    return np.stack([IntervalVector(f).bounds for f in features])


def kmeans_init(sub, cfg: KMeansConfig) -> List[IntervalVector]:
    """Pick ``k`` distinct feature rows as initial centroids (seeded, uniform)."""
    return [IntervalVector(c) for c in _initial(_stack(sub), cfg)[1]]


def _initial(x: np.ndarray, cfg: KMeansConfig):
    d = x.shape[0]
    if cfg.k > d:
        raise ConfigurationError(f"k={cfg.k} exceeds the number of features ({d})")
    rng = np.random.default_rng(cfg.seed)
    rows = rng.choice(d, size=cfg.k, replace=False)
    return tuple(int(r) for r in rows), x[rows].copy()


def assign(features, centroids) -> np.ndarray:
    """Index of the most similar centroid for every feature (ties -> lowest)."""
    x, c = _stack(features), _stack(centroids)
    if x.shape[1:] != c.shape[1:]:
        raise DimensionError(f"features {x.shape[1:]} and centroids {c.shape[1:]} differ in shape")
    # np.argmax returns the first maximum, which is the tie rule.
    return np.argmax(ssk_matrix(x, c), axis=1)


def update_centroids(features, assignments, k: int, previous=None) -> np.ndarray:
    """Interval means per cluster.

    An empty cluster keeps its ``previous`` centroid when given, otherwise it
    is filled with zeros-width intervals at 0 so the caller can repair it.
    """
    x = _stack(features)
    assignments = np.asarray(assignments)
    out = np.zeros((k,) + x.shape[1:]) if previous is None else np.array(previous, dtype=float)
    for q in range(k):
        mask = assignments == q
        if mask.any():
            out[q] = x[mask].mean(axis=0)
    return out


def _repair_empty(x, centroids, assignments, k):
    """Give every empty cluster a member by moving the least-served feature.

    The moved feature is the one whose best similarity to the current
    centroids is lowest (lowest row breaks ties), drawn from clusters that
    would not become empty; it becomes the new centroid of the empty cluster.
    """
    assignments = assignments.copy()
    centroids = centroids.copy()
    for q in range(k):
        counts = np.bincount(assignments, minlength=k)
        if counts[q] > 0:
            continue
        best = ssk_matrix(x, centroids).max(axis=1)
        donors = counts[assignments] > 1
        candidate = np.flatnonzero(donors)[np.argmin(best[donors])]
        assignments[candidate] = q
        centroids[q] = x[candidate]
    return centroids, assignments


def interval_kmeans(sub, cfg: KMeansConfig) -> ClusterModel:
    """Cluster the feature rows of ``sub`` into ``cfg.k`` non-empty groups."""
    x = _stack(sub)
    init_rows, centroids = _initial(x, cfg)
    previous = None
    converged = False
    iterations = 0
    for iterations in range(1, cfg.max_iterations + 1):
        labels = assign(x, centroids)
        centroids, labels = _repair_empty(x, centroids, labels, cfg.k)
        centroids = update_centroids(x, labels, cfg.k, previous=centroids)
        if previous is not None and np.array_equal(labels, previous):
            converged = True
            break
        previous = labels
    return ClusterModel(cfg.k, centroids, labels, iterations, converged, init_rows)
