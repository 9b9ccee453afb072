"""Split and K sweeps comparing classification with and without selection.

Seeds: every random draw comes from numpy ``SeedSequence(master_seed,
spawn_key=...)``.  The split of cell ``(fraction, rep)`` uses spawn key
``(0, fraction_index, rep)`` and the clustering of cell ``(fraction, K, rep)``
uses ``(1, fraction_index, K, rep)``.  All K values of one ``(fraction, rep)``
therefore share a split, which is also the split of the WoFS baseline.
"""

from __future__ import annotations

import csv
import io
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Tuple

import numpy as np

from ivfs.classify import ClassifierConfig, accuracy, predict
from ivfs.clustering import DEFAULT_MAX_ITERATIONS, KMeansConfig
from ivfs.dataset import IntervalFeatureMatrix, load_dataset, stratified_split
from ivfs.exceptions import ConfigurationError
from ivfs.selection import build_knowledgebase, identity_knowledgebase

DEFAULT_FRACTIONS = (0.3, 0.4, 0.5, 0.6, 0.7)
SPLIT_STREAM, CLUSTER_STREAM = 0, 1


def derive_seed(master_seed: int, *key: int) -> int:
    """64-bit sub-seed for one stream/cell of an experiment."""
    state = np.random.SeedSequence(master_seed, spawn_key=key).generate_state(2, dtype=np.uint32)
    return int(state[0]) << 32 | int(state[1])


@dataclass(frozen=True)
class ExperimentConfig:
    dataset: str = "iris"
    classifier: str = "c2"
    beta: float = 1.0
    fractions: Tuple[float, ...] = DEFAULT_FRACTIONS
    k_min: Optional[int] = None
    k_max: Optional[int] = None
    repetitions: int = 1
    seed: int = 0
    max_iterations: int = DEFAULT_MAX_ITERATIONS

    def __post_init__(self):
        object.__setattr__(self, "fractions", tuple(float(f) for f in self.fractions))
        if not self.fractions:
            raise ConfigurationError("at least one train fraction is required")
        if any(not 0 < f < 1 for f in self.fractions):
            raise ConfigurationError(f"train fractions must lie in (0, 1): {self.fractions}")
        if len(set(self.fractions)) != len(self.fractions):
            raise ConfigurationError("train fractions must be distinct")
        if self.repetitions < 1:
            raise ConfigurationError("repetitions must be >= 1")
        if self.seed < 0:
            raise ConfigurationError("seed must be non-negative")
        ClassifierConfig(self.classifier, self.beta)

    def k_values(self, d: int) -> List[int]:
        """The K grid for a dataset with ``d`` features.

        Defaults to 2..d-1.  When that range is empty (d <= 2) and no bounds
        were given, the grid is ``[d]``: every feature is kept.
        """
        if self.k_min is None and self.k_max is None and d <= 2:
            return [d]
        lo = 2 if self.k_min is None else self.k_min
        hi = d - 1 if self.k_max is None else self.k_max
        if lo < 2 or hi > d - 1 or lo > hi:
            raise ConfigurationError(f"K range {lo}..{hi} must lie within 2..{d - 1} for d={d}")
        return list(range(lo, hi + 1))


@dataclass(frozen=True)
class CellResult:
    fraction: float
    k: int
    repetition: int
    split_seed: int
    kmeans_seed: int
    wfs_accuracy: float
    wofs_accuracy: float
    indices: Tuple[Tuple[int, ...], ...]
    converged: Tuple[bool, ...]


@dataclass(frozen=True)
class FractionSummary:
    fraction: float
    best_k: int
    wfs_mean: float
    wfs_best: float
    wofs_mean: float
    wofs_best: float


@dataclass
class ExperimentReport:
    dataset: str
    classifier: str
    beta: float
    n_features: int
    class_names: Tuple[str, ...]
    repetitions: int
    rows: List[CellResult] = field(default_factory=list)

    def cells(self, fraction: float) -> List[CellResult]:
        return [r for r in self.rows if r.fraction == fraction]

    @property
    def fractions(self) -> List[float]:
        return list(dict.fromkeys(r.fraction for r in self.rows))

    def summary(self) -> List[FractionSummary]:
        """Per fraction, the K with the highest mean WFS accuracy (smaller K on ties)."""
        out = []
        for f in self.fractions:
            cells = self.cells(f)
            by_k: Dict[int, List[float]] = {}
            for c in cells:
                by_k.setdefault(c.k, []).append(c.wfs_accuracy)
            best_k = max(sorted(by_k), key=lambda k: float(np.mean(by_k[k])))
            wofs = {c.repetition: c.wofs_accuracy for c in cells}
            out.append(FractionSummary(f, best_k, float(np.mean(by_k[best_k])), max(by_k[best_k]),
                                       float(np.mean(list(wofs.values()))), max(wofs.values())))
        return out


def run_experiment(cfg: ExperimentConfig, data: Optional[IntervalFeatureMatrix] = None) -> ExperimentReport:
    """Evaluate every (fraction, K, repetition) cell of ``cfg``.

    ``data`` overrides loading ``cfg.dataset`` (useful for in-memory tests).
    """
    ifm = load_dataset(cfg.dataset) if data is None else data
    clf = ClassifierConfig(cfg.classifier, cfg.beta)
    ks = cfg.k_values(ifm.n_features)
    report = ExperimentReport(ifm.name or cfg.dataset, clf.kind, clf.beta, ifm.n_features,
                              ifm.class_names, cfg.repetitions)
    for fi, fraction in enumerate(cfg.fractions):
        for rep in range(cfg.repetitions):
            split_seed = derive_seed(cfg.seed, SPLIT_STREAM, fi, rep)
            split = stratified_split(ifm, fraction, split_seed)
            truth = list(split.test.labels)
            wofs = accuracy(predict(split.test.data, identity_knowledgebase(split.train), clf), truth)
            for k in ks:
                kmeans_seed = derive_seed(cfg.seed, CLUSTER_STREAM, fi, k, rep)
                if k >= 2:
                    kb = build_knowledgebase(split.train, KMeansConfig(k, cfg.max_iterations, kmeans_seed))
                else:
                    kb = identity_knowledgebase(split.train)
                wfs = accuracy(predict(split.test.data, kb, clf), truth)
                converged = tuple(True if c.converged is None else c.converged for c in kb.classes)
                report.rows.append(CellResult(fraction, k, rep, split_seed, kmeans_seed, wfs, wofs,
                                              tuple(c.indices for c in kb.classes), converged))
    return report


# --- output ---------------------------------------------------------------

CSV_COLUMNS = ["dataset", "classifier", "beta", "train_fraction", "k", "repetition", "split_seed",
               "kmeans_seed", "n_features_wfs", "wfs_accuracy", "n_features_wofs", "wofs_accuracy",
               "converged", "selected_indices"]


def _split_label(fraction: float) -> str:
    train = round(fraction * 100)
    return f"{train}-{100 - train}"


def _pct(x: float) -> str:
    return f"{100 * x:.2f}"


def emit_report(report: ExperimentReport, fmt: str = "table") -> str:
    """Render as ``"table"`` (best K per fraction) or ``"csv"`` (every cell).

    CSV uses the standard ``csv`` dialect (comma separated, fields quoted
    only when needed).  ``converged`` holds one 0/1 flag per class joined by
    ``;`` and ``selected_indices`` one space-separated list per class joined
    by ``|``, both in class order.
    """
    if fmt == "csv":
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(CSV_COLUMNS)
        for r in report.rows:
            writer.writerow([
                report.dataset, report.classifier, repr(report.beta), repr(r.fraction), r.k,
                r.repetition, r.split_seed, r.kmeans_seed, r.k, repr(r.wfs_accuracy),
                report.n_features, repr(r.wofs_accuracy),
                ";".join("1" if c else "0" for c in r.converged),
                "|".join(" ".join(str(i) for i in idx) for idx in r.indices),
            ])
        return buf.getvalue()
    if fmt != "table":
        raise ConfigurationError(f"unknown report format {fmt!r}")
    header = ["Train-Test", "WFS #Features", "WFS Accuracy", "WFS Best",
              "WoFS #Features", "WoFS Accuracy", "WoFS Best"]
    body = [[_split_label(s.fraction), str(s.best_k), _pct(s.wfs_mean), _pct(s.wfs_best),
             str(report.n_features), _pct(s.wofs_mean), _pct(s.wofs_best)]
            for s in report.summary()]
    widths = [max(len(h), *(len(row[i]) for row in body)) for i, h in enumerate(header)]
    lines = [
        f"dataset={report.dataset} classifier={report.classifier.upper()} beta={report.beta:g} "
        f"repetitions={report.repetitions} (accuracy in %, mean over repetitions)",
        "  ".join(h.ljust(w) for h, w in zip(header, widths)),
        "  ".join("-" * w for w in widths),
    ]
    lines += ["  ".join(c.rjust(w) for c, w in zip(row, widths)) for row in body]
    return "\n".join(lines) + "\n"


def parse_fractions(text: str) -> Tuple[float, ...]:
    """``"0.3,0.5"`` or percentages ``"30,50"``."""
    try:
        vals = [float(v) for v in text.split(",") if v.strip()]
    except ValueError:
        raise ConfigurationError(f"cannot parse fractions {text!r}") from None
    return tuple(v / 100 if v > 1 else v for v in vals)
