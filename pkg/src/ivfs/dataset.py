"""Labeled interval feature matrices: CSV I/O, per-class transposition,
stratified splitting and a synthetic generator with planted features.

CSV layout: an optional header, then one row per sample holding
``f1_lo,f1_hi,...,fd_lo,fd_hi,label``.  Lines starting with ``#`` are
comments.  Class order is the order of first appearance.
"""

from __future__ import annotations

import csv
import io
import math
from dataclasses import dataclass, field
from fractions import Fraction
from importlib import resources
from typing import Dict, List, Optional, Sequence, TextIO, Tuple

import numpy as np

from ivfs.exceptions import ConfigurationError, FormatError, SplitError, ValidationError
from ivfs.interval_core import IntervalVector, validate_bounds

FIXTURES = {"iris": "iris_interval.csv"}


@dataclass(frozen=True)
class IntervalFeatureMatrix:
    """N labeled samples by d interval features.

    ``data`` has shape ``(N, d, 2)``; ``labels[i]`` is the class of sample i
    and ``class_names`` fixes the class order C_1..C_m.
    """

    data: np.ndarray
    labels: Tuple[str, ...]
    class_names: Tuple[str, ...] = ()
    name: str = ""

    def __post_init__(self):
        data = validate_bounds(self.data, "feature matrix")
        if data.ndim != 3 or data.shape[0] < 1 or data.shape[1] < 1:
            raise ValidationError(f"feature matrix must have shape (N, d, 2), got {data.shape}")
        data = np.array(data, copy=True)
        data.setflags(write=False)
        labels = tuple(str(y) for y in self.labels)
        if len(labels) != data.shape[0]:
            raise ValidationError(f"{len(labels)} labels for {data.shape[0]} samples")
        names = tuple(self.class_names) or tuple(dict.fromkeys(labels))
        if len(set(names)) != len(names):
            raise ValidationError("class names must be distinct")
        unknown = set(labels) - set(names)
        if unknown:
            raise ValidationError(f"labels not in class_names: {sorted(unknown)}")
        if len(names) < 2:
            raise ValidationError("a supervised matrix needs at least two classes")
        missing = [c for c in names if c not in labels]
        if missing:
            raise ValidationError(f"classes without samples: {missing}")
        object.__setattr__(self, "data", data)
        object.__setattr__(self, "labels", labels)
        object.__setattr__(self, "class_names", names)

    @property
    def n_samples(self) -> int:
        return self.data.shape[0]

    @property
    def n_features(self) -> int:
        return self.data.shape[1]

    @property
    def n_classes(self) -> int:
        return len(self.class_names)

    @property
    def samples(self) -> List[IntervalVector]:
        return [IntervalVector(row) for row in self.data]

    def class_mask(self, label: str) -> np.ndarray:
        return np.array([y == label for y in self.labels])

    def class_data(self, label: str) -> np.ndarray:
        """Samples of one class, shape ``(n_j, d, 2)``."""
        return self.data[self.class_mask(label)]

    def class_counts(self) -> Dict[str, int]:
        return {c: self.labels.count(c) for c in self.class_names}

    def subset(self, rows: Sequence[int]) -> "IntervalFeatureMatrix":
        rows = list(rows)
        return IntervalFeatureMatrix(self.data[rows], tuple(self.labels[i] for i in rows),
                                     self.class_names, self.name)


@dataclass(frozen=True)
class ClassSubMatrix:
    """The transposed samples of one class: d feature rows of length n_j."""

    class_id: str
    features: np.ndarray  # (d, n_j, 2)
    original_feature_indices: Tuple[int, ...] = field(default=())

    def __post_init__(self):
        if not self.original_feature_indices:
            object.__setattr__(self, "original_feature_indices",
                               tuple(range(1, self.features.shape[0] + 1)))

    @property
    def n_features(self) -> int:
        return self.features.shape[0]

    @property
    def n_class_samples(self) -> int:
        return self.features.shape[1]

    def feature(self, index: int) -> IntervalVector:
        """Feature row by its 1-based original index."""
        return IntervalVector(self.features[self.original_feature_indices.index(index)])


@dataclass(frozen=True)
class SplitPair:
    train: IntervalFeatureMatrix
    test: IntervalFeatureMatrix
    train_fraction: float
    seed: int
    train_rows: Tuple[int, ...] = ()
    test_rows: Tuple[int, ...] = ()


# --- parsing --------------------------------------------------------------

@dataclass(frozen=True)
class CsvSchema:
    """Column descriptor for interval CSV files.

    ``n_features=None`` infers d from the first data row.  ``has_header=None``
    detects a header from non-numeric leading fields.  With
    ``label_required=False`` rows of exactly 2d fields are accepted and get
    no label.
    """

    n_features: Optional[int] = None
    has_header: Optional[bool] = None
    label_required: bool = True


def _is_number(s: str) -> bool:
    try:
        float(s)
    except ValueError:
        return False
    return True


def read_interval_rows(stream: TextIO, schema: CsvSchema = CsvSchema()):
    """Read raw rows as ``(bounds (N, d, 2), labels or None per row)``.

    This is the permissive layer under :func:`parse_dataset`; it checks the
    layout and the interval invariants but not the class structure.
    """
    d = schema.n_features
    rows: List[List[float]] = []
    labels: List[Optional[str]] = []
    header_checked = schema.has_header is False
    reader = csv.reader(stream)
    for lineno, fields in enumerate(reader, start=1):
        if not fields or (len(fields) == 1 and not fields[0].strip()):
            continue
        if fields[0].lstrip().startswith("#"):
            continue
        fields = [f.strip() for f in fields]
        if not header_checked:
            header_checked = True
            if schema.has_header or not all(_is_number(f) for f in fields[:-1] or fields):
                continue
        n = len(fields)
        if d is None:
            if n < 2:
                raise FormatError(f"line {lineno}: too few fields ({n})")
            d = (n - 1) // 2 if schema.label_required or n % 2 == 1 else n // 2
            if d < 1:
                raise FormatError(f"line {lineno}: too few fields ({n})")
        if n == 2 * d + 1:
            label = fields[-1]
            if not label:
                raise FormatError(f"line {lineno}: empty class label")
            numeric = fields[:-1]
        elif n == 2 * d and not schema.label_required:
            label = None
            numeric = fields
        else:
            want = f"{2 * d + 1}" if schema.label_required else f"{2 * d} or {2 * d + 1}"
            raise FormatError(f"line {lineno}: expected {want} fields for d={d}, got {n}")
        try:
            values = [float(v) for v in numeric]
        except ValueError as exc:
            raise FormatError(f"line {lineno}: non-numeric bound ({exc})") from None
        for k in range(d):
            lo, hi = values[2 * k], values[2 * k + 1]
            if not (math.isfinite(lo) and math.isfinite(hi)):
                raise ValidationError(f"line {lineno}, feature {k + 1}: non-finite bound")
            if lo > hi:
                raise ValidationError(
                    f"line {lineno}, feature {k + 1}: lower bound {lo} exceeds upper bound {hi}")
        rows.append(values)
        labels.append(label)
    if not rows:
        raise FormatError("no data rows found")
    data = np.asarray(rows, dtype=float).reshape(len(rows), d, 2)
    return data, labels


def parse_dataset(stream: TextIO, schema: CsvSchema = CsvSchema(), name: str = "") -> IntervalFeatureMatrix:
    """Parse a labeled interval CSV stream into an :class:`IntervalFeatureMatrix`."""
    schema = CsvSchema(schema.n_features, schema.has_header, label_required=True)
    data, labels = read_interval_rows(stream, schema)
    try:
        return IntervalFeatureMatrix(data, tuple(labels), name=name)
    except ValidationError as exc:
        raise FormatError(str(exc)) from None


def load_dataset(path_or_name: str) -> IntervalFeatureMatrix:
    """Load a bundled fixture by name (``"iris"``) or a CSV file by path."""
    if path_or_name in FIXTURES:
        return load_fixture(path_or_name)
    with open(path_or_name, encoding="utf-8", newline="") as fh:
        return parse_dataset(fh, name=str(path_or_name))


def load_fixture(name: str) -> IntervalFeatureMatrix:
    try:
        filename = FIXTURES[name]
    except KeyError:
        raise ConfigurationError(f"unknown fixture {name!r}; available: {sorted(FIXTURES)}") from None
    text = resources.files("ivfs.data").joinpath(filename).read_text(encoding="utf-8")
    return parse_dataset(io.StringIO(text), name=name)


def serialize_dataset(ifm: IntervalFeatureMatrix, stream: TextIO, header: bool = True) -> None:
    """Write ``ifm`` in the CSV layout read by :func:`parse_dataset`.

    Bounds use ``repr`` so parsing the output reproduces the floats exactly.
    """
    writer = csv.writer(stream, lineterminator="\n")
    if header:
        cols = []
        for k in range(1, ifm.n_features + 1):
            cols += [f"f{k}_lo", f"f{k}_hi"]
        writer.writerow(cols + ["label"])
    for row, label in zip(ifm.data, ifm.labels):
        writer.writerow([repr(float(v)) for v in row.reshape(-1)] + [label])


# --- structure ------------------------------------------------------------

def transpose_by_class(ifm: IntervalFeatureMatrix) -> List[ClassSubMatrix]:
    """One ``d x n_j`` sub-matrix per class, in class order."""
    return [ClassSubMatrix(c, np.ascontiguousarray(ifm.class_data(c).transpose(1, 0, 2)))
            for c in ifm.class_names]


def round_half_up(x: Fraction) -> int:
    return math.floor(x + Fraction(1, 2))


def train_count(n_class: int, train_fraction: float) -> int:
    """Training samples taken from a class of size ``n_class``."""
    n = round_half_up(Fraction(str(train_fraction)) * n_class)
    return min(max(n, 1), n_class - 1)


def stratified_split(ifm: IntervalFeatureMatrix, train_fraction: float, seed: int) -> SplitPair:
    """Per-class random split; each class keeps at least one sample on each side.

    Uses numpy's PCG64 generator seeded with ``seed``; classes are visited
    in class order, and both halves keep the source row order.
    """
    if not 0 < train_fraction < 1:
        raise ConfigurationError(f"train_fraction must lie in (0, 1), got {train_fraction}")
    rng = np.random.default_rng(seed)
    train_rows: List[int] = []
    for c in ifm.class_names:
        rows = np.flatnonzero(ifm.class_mask(c))
        if rows.size < 2:
            raise SplitError(f"class {c!r} has {rows.size} sample(s); need at least 2 to split")
        chosen = rng.choice(rows, size=train_count(rows.size, train_fraction), replace=False)
        train_rows.extend(int(r) for r in chosen)
    train_rows.sort()
    picked = set(train_rows)
    test_rows = [i for i in range(ifm.n_samples) if i not in picked]
    return SplitPair(ifm.subset(train_rows), ifm.subset(test_rows), train_fraction, seed,
                     tuple(train_rows), tuple(test_rows))


# --- synthetic data -------------------------------------------------------

def synthesize_dataset(n_classes: int, n_per_class: int, d: int, informative_per_class: int,
                       separation: float, noise_width: float, seed: int,
                       background_scale: float = 1.0):
    """Generate a matrix whose classes each own a few informative features.

    For class j (0-based) its informative features are intervals of width
    ``noise_width`` centred near ``(j + 1) * separation`` (centre jitter is
    uniform within a quarter width).  All other cells come from one shared
    distribution: centres uniform in ``[-background_scale, background_scale]``
    and widths uniform in ``[background_scale, 2 * background_scale]``.

    Informative features are assigned by a seeded permutation of 1..d taken
    in consecutive blocks, so classes do not share them while
    ``n_classes * informative_per_class <= d``.

    Returns ``(matrix, planted)`` where ``planted`` maps each label to its
    sorted 1-based informative indices.
    """
    if n_classes < 2 or n_per_class < 1 or d < 1:
        raise ConfigurationError("need n_classes >= 2, n_per_class >= 1 and d >= 1")
    if not 1 <= informative_per_class <= d:
        raise ConfigurationError(f"informative_per_class must be in 1..{d}")
    if separation < 0 or noise_width < 0 or background_scale <= 0:
        raise ConfigurationError("separation and noise_width must be >= 0, background_scale > 0")
    rng = np.random.default_rng(seed)
    perm = rng.permutation(d)
    labels = [f"class{j + 1}" for j in range(n_classes)]
    planted: Dict[str, Tuple[int, ...]] = {}
    data = np.empty((n_classes * n_per_class, d, 2))
    s = background_scale
    for j, label in enumerate(labels):
        block = [int(perm[(j * informative_per_class + t) % d]) for t in range(informative_per_class)]
        planted[label] = tuple(sorted(i + 1 for i in block))
        rows = slice(j * n_per_class, (j + 1) * n_per_class)
        centres = rng.uniform(-s, s, size=(n_per_class, d))
        widths = rng.uniform(s, 2 * s, size=(n_per_class, d))
        jitter = rng.uniform(-noise_width / 4, noise_width / 4, size=(n_per_class, len(block)))
        centres[:, block] = (j + 1) * separation + jitter
        widths[:, block] = noise_width
        data[rows, :, 0] = centres - widths / 2
        data[rows, :, 1] = centres + widths / 2
    ys = tuple(lab for lab in labels for _ in range(n_per_class))
    return IntervalFeatureMatrix(data, ys, tuple(labels), name="synthetic"), planted


def write_planted(planted: Dict[str, Sequence[int]], stream: TextIO) -> None:
    """Sidecar record: one ``label: i,j,...`` line per class (1-based indices)."""
    stream.write("# class: planted informative feature indices (1-based)\n")
    for label, idx in planted.items():
        stream.write(f"{label}: {','.join(str(i) for i in idx)}\n")


def read_planted(stream: TextIO) -> Dict[str, Tuple[int, ...]]:
    out: Dict[str, Tuple[int, ...]] = {}
    for lineno, line in enumerate(stream, start=1):
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        label, sep, rest = line.rpartition(":")
        if not sep or not label.strip():
            raise FormatError(f"planted record line {lineno}: expected 'label: i,j,...'")
        try:
            out[label.strip()] = tuple(int(v) for v in rest.split(",") if v.strip())
        except ValueError:
            raise FormatError(f"planted record line {lineno}: non-integer index") from None
    return out
