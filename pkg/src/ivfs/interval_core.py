"""Intervals and the symbolic similarity kernel.

The per-dimension similarity ``Sim(a, b)`` is asymmetric: it measures how
much of ``b`` is covered by ``a``.  ``isv`` collects the per-dimension values
of two aligned interval vectors into an interval ``[min, max]`` and ``ssk``
averages the four endpoints of ``isv(a, b)`` and ``isv(b, a)``, which makes
it symmetric.

Everything works on float64 arrays of shape ``(..., L, 2)`` where the last
axis holds ``(lo, hi)``.  The scalar functions are thin wrappers around the
batched ones so both paths produce bit-identical results.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable, Iterator, Sequence, Union

import numpy as np

from ivfs.exceptions import DimensionError, ValidationError


@dataclass(frozen=True, order=True)
class Interval:
    """A closed real interval ``[lo, hi]``."""

    lo: float
    hi: float

    def __post_init__(self):
        lo, hi = float(self.lo), float(self.hi)
        if not (math.isfinite(lo) and math.isfinite(hi)):
            raise ValidationError(f"interval bounds must be finite, got [{lo}, {hi}]")
        if lo > hi:
            raise ValidationError(f"interval lower bound exceeds upper bound: [{lo}, {hi}]")
        object.__setattr__(self, "lo", lo)
        object.__setattr__(self, "hi", hi)

    @property
    def length(self) -> float:
        return self.hi - self.lo

    def contains(self, other: "Interval") -> bool:
        return self.lo <= other.lo and other.hi <= self.hi

    def overlap_length(self, other: "Interval") -> float:
        return max(0.0, min(self.hi, other.hi) - max(self.lo, other.lo))

    def __iter__(self):
        yield self.lo
        yield self.hi

    def __repr__(self):
        return f"[{self.lo:g}, {self.hi:g}]"


IntervalLike = Union[Interval, Sequence[float]]


def validate_bounds(bounds, what: str = "interval array") -> np.ndarray:
    """Check an array of ``(lo, hi)`` pairs and return it as float64.

    Raises :class:`ValidationError` on non-finite values or ``lo > hi``.
    """
    arr = np.asarray(bounds, dtype=float)
    if arr.ndim == 0 or arr.shape[-1] != 2:
        raise ValidationError(f"{what} must have a trailing axis of size 2, got shape {arr.shape}")
    if not np.all(np.isfinite(arr)):
        raise ValidationError(f"{what} contains non-finite bounds")
    bad = arr[..., 0] > arr[..., 1]
    if np.any(bad):
        where = tuple(int(i) for i in np.argwhere(bad)[0])
        raise ValidationError(f"{what} has lo > hi at position {where}")
    return arr


class IntervalVector:
    """An immutable, ordered sequence of intervals.

    Used both for a sample (one interval per feature) and for a feature
    observed across samples.  ``bounds`` is a read-only ``(L, 2)`` array.
    """

    __slots__ = ("_bounds",)

    def __init__(self, entries: Union["IntervalVector", np.ndarray, Iterable[IntervalLike]]):
        if isinstance(entries, IntervalVector):
            arr = entries._bounds
        elif isinstance(entries, np.ndarray):
            arr = validate_bounds(entries.reshape(-1, 2) if entries.ndim == 1 else entries,
                                  "interval vector")
        else:
            arr = validate_bounds([tuple(e) for e in entries], "interval vector")
        if arr.ndim != 2 or arr.shape[0] < 1:
            raise ValidationError("an interval vector needs at least one interval")
        arr = np.array(arr, dtype=float, copy=True)
        arr.setflags(write=False)
        self._bounds = arr

    @property
    def bounds(self) -> np.ndarray:
        return self._bounds

    def __len__(self) -> int:
        return self._bounds.shape[0]

    def __getitem__(self, i: int) -> Interval:
        lo, hi = self._bounds[i]
        return Interval(lo, hi)

    def __iter__(self) -> Iterator[Interval]:
        for lo, hi in self._bounds:
            yield Interval(lo, hi)

    def __eq__(self, other):
        if not isinstance(other, IntervalVector):
            return NotImplemented
        return self._bounds.shape == other._bounds.shape and bool(
            np.array_equal(self._bounds, other._bounds))

    def __hash__(self):
        return hash(self._bounds.tobytes())

    def project(self, indices: Sequence[int]) -> "IntervalVector":
        """Restrict to the given 1-based positions, keeping their order."""
        idx = np.asarray(indices, dtype=int) - 1
        if idx.size == 0 or idx.min() < 0 or idx.max() >= len(self):
            raise DimensionError(f"projection indices {list(indices)} out of range 1..{len(self)}")
        return IntervalVector(self._bounds[idx])

    def __repr__(self):
        return "IntervalVector(" + ", ".join(repr(iv) for iv in self) + ")"


def as_bounds(x) -> np.ndarray:
    """Return the ``(L, 2)`` bounds array for an IntervalVector or array-like."""
    if isinstance(x, IntervalVector):
        return x.bounds
    return IntervalVector(x).bounds


# --- batched kernel -------------------------------------------------------

def sim_arrays(a_lo, a_hi, b_lo, b_hi) -> np.ndarray:
    """Element-wise ``Sim(a, b)`` on broadcastable bound arrays.

    Containment is tested first, so a point ``b`` inside ``a`` gives 1.
    Otherwise the covered fraction of ``b``; zero-length overlaps give 0.
    """
    contains = (b_lo >= a_lo) & (b_hi <= a_hi)
    overlap = np.minimum(a_hi, b_hi) - np.maximum(a_lo, b_lo)
    length_b = b_hi - b_lo
    positive = overlap > 0
    ratio = np.divide(overlap, length_b, out=np.zeros(np.shape(overlap)), where=positive)
    return np.where(contains, 1.0, ratio)


def _combine(s_ab: np.ndarray, s_ba: np.ndarray) -> np.ndarray:
    # Grouping the two directions keeps the result bit-symmetric.
    return ((s_ab.min(axis=-1) + s_ab.max(axis=-1)) + (s_ba.min(axis=-1) + s_ba.max(axis=-1))) / 4.0


def ssk_matrix(x, y) -> np.ndarray:
    """Pairwise kernel between two stacks of interval vectors.

    ``x`` has shape ``(n, L, 2)`` and ``y`` shape ``(m, L, 2)``; the result
    has shape ``(n, m)`` with ``out[i, j] == ssk(x[i], y[j])`` exactly.
    """
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    if x.ndim != 3 or y.ndim != 3 or x.shape[1:] != y.shape[1:]:
        raise DimensionError(f"incompatible interval stacks {x.shape} and {y.shape}")
    xl, xh = x[:, None, :, 0], x[:, None, :, 1]
    yl, yh = y[None, :, :, 0], y[None, :, :, 1]
    return _combine(sim_arrays(xl, xh, yl, yh), sim_arrays(yl, yh, xl, xh))


def _paired(x, y):
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    if x.ndim != 3 or x.shape != y.shape:
        raise DimensionError(f"paired stacks must share shape (n, L, 2), got {x.shape} and {y.shape}")
    return x, y


def isv_pairs(x, y) -> np.ndarray:
    """Row-wise ``isv(x[i], y[i])`` as an ``(n, 2)`` array."""
    x, y = _paired(x, y)
    s = sim_arrays(x[..., 0], x[..., 1], y[..., 0], y[..., 1])
    return np.stack([s.min(axis=-1), s.max(axis=-1)], axis=-1)


def ssk_pairs(x, y) -> np.ndarray:
    """Row-wise ``ssk(x[i], y[i])`` for two ``(n, L, 2)`` stacks."""
    x, y = _paired(x, y)
    xl, xh, yl, yh = x[..., 0], x[..., 1], y[..., 0], y[..., 1]
    return _combine(sim_arrays(xl, xh, yl, yh), sim_arrays(yl, yh, xl, xh))


def ssk_to_many(query, refs) -> np.ndarray:
    """``ssk(query, r)`` for every ``r`` in a ``(n, L, 2)`` stack."""
    q = as_bounds(query)
    return ssk_matrix(q[None], refs)[0]


# --- scalar API -----------------------------------------------------------

def sim_pair(a: Interval, b: Interval) -> float:
    """Similarity of ``b`` to ``a``: 1 on containment, covered fraction of ``b`` otherwise."""
    return float(sim_arrays(a.lo, a.hi, b.lo, b.hi))


def _aligned(a, b):
    ab, bb = as_bounds(a), as_bounds(b)
    if ab.shape != bb.shape:
        raise DimensionError(f"interval vectors differ in length: {len(ab)} vs {len(bb)}")
    return ab, bb


def isv(a, b) -> Interval:
    """Interval similarity value ``[min_k Sim(a_k, b_k), max_k Sim(a_k, b_k)]``."""
    ab, bb = _aligned(a, b)
    s = sim_arrays(ab[:, 0], ab[:, 1], bb[:, 0], bb[:, 1])
    return Interval(s.min(), s.max())


def ssk(a, b) -> float:
    """Symbolic similarity kernel between two aligned interval vectors."""
    ab, bb = _aligned(a, b)
    return float(ssk_matrix(ab[None], bb[None])[0, 0])
