"""Bin-scheme vocabulary: schemes, cycle layouts, assignments, tallies and
proportion vectors.

A bin scheme casts ``bins`` equal-width bins per cycle along the positive axis,
starting at ``start`` with cycle-0 width ``width``.  Between cycles the width is
multiplied by an inflation factor, either a constant or an explicit vector.
Bins are half-open ``[lo, hi)``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Iterator, Mapping, Sequence, Union

import numpy as np

__all__ = [
    "Constant",
    "Vector",
    "Expansion",
    "BinSchemeSpec",
    "CycleLayout",
    "BinAssignment",
    "BelowRange",
    "AboveRange",
    "BinTally",
    "ProportionVector",
    "ValidationResult",
    "validate_scheme",
    "layout",
    "SchemeError",
    "EmptyDataError",
]

PROPORTION_SUM_TOL = 1e-9


class SchemeError(ValueError):
    """Raised for invalid schemes, out-of-domain values or cycle indices."""


class EmptyDataError(ValueError):
    """Raised when there is no in-range data to form proportions from."""


@dataclass(frozen=True)
class Constant:
    factor: float

    def describe(self) -> dict:
        return {"type": "constant", "factor": self.factor}


@dataclass(frozen=True)
class Vector:
    factors: tuple[float, ...]

    def __init__(self, factors: Sequence[float]):
        object.__setattr__(self, "factors", tuple(float(f) for f in factors))

    def describe(self) -> dict:
        return {"type": "vector", "factors": list(self.factors)}


Expansion = Union[Constant, Vector]


@dataclass(frozen=True)
class BinSchemeSpec:
    bins: int
    expansion: Expansion
    start: float = 0.0
    width: float = 0.0005

    @classmethod
    def constant(cls, bins: int, factor: float, start: float = 0.0,
                 width: float = 0.0005) -> "BinSchemeSpec":
        return cls(bins, Constant(float(factor)), float(start), float(width))

    @classmethod
    def vector(cls, bins: int, factors: Sequence[float], start: float = 0.0,
               width: float = 0.0005) -> "BinSchemeSpec":
        return cls(bins, Vector(factors), float(start), float(width))

    @property
    def is_constant(self) -> bool:
        return isinstance(self.expansion, Constant)

    @property
    def n_cycles(self) -> int | None:
        """Number of cycles, or None when unbounded (constant expansion)."""
        if isinstance(self.expansion, Vector):
            return len(self.expansion.factors) + 1
        return None

    def describe(self) -> dict:
        return {
            "bins": self.bins,
            "expansion": self.expansion.describe(),
            "start": self.start,
            "width": self.width,
        }

    def _vector_edges(self) -> tuple[np.ndarray, np.ndarray]:
        # Cached per instance; the dataclass is frozen so bypass __setattr__.
        cached = self.__dict__.get("_edges")
        if cached is None:
            cached = _materialize_vector(self)
            object.__setattr__(self, "_edges", cached)
        return cached


@dataclass(frozen=True)
class ValidationResult:
    violations: tuple[str, ...] = ()

    @property
    def ok(self) -> bool:
        return not self.violations

    def __bool__(self) -> bool:
        return self.ok


def validate_scheme(spec: BinSchemeSpec) -> ValidationResult:
    """Check a scheme against its invariants; violations are returned, not raised."""
    problems = []
    if not isinstance(spec.bins, (int, np.integer)) or spec.bins < 1:
        problems.append("bins ≥ 1")
    if not (math.isfinite(spec.width) and spec.width > 0):
        problems.append("width > 0")
    if not (math.isfinite(spec.start) and spec.start >= 0):
        problems.append("start ≥ 0")
    if isinstance(spec.expansion, Constant):
        factors: Sequence[float] = (spec.expansion.factor,)
    elif isinstance(spec.expansion, Vector):
        factors = spec.expansion.factors
    else:
        problems.append("expansion is Constant or Vector")
        factors = ()
    if not all(math.isfinite(f) and f > 0 for f in factors):
        problems.append("every factor > 0")
    return ValidationResult(tuple(problems))


def require_valid(spec: BinSchemeSpec) -> None:
    result = validate_scheme(spec)
    if not result.ok:
        raise SchemeError("invalid bin scheme: " + "; ".join(result.violations))


@dataclass(frozen=True)
class CycleLayout:
    cycle_index: int
    cycle_start: float
    bin_width: float

    def edges(self, bins: int) -> list[float]:
        return [self.cycle_start + r * self.bin_width for r in range(bins + 1)]


def growth(factor: float, c):
    """(F**c - 1) / (F - 1) for scalar or array ``c``; accurate near F = 1 and
    exact for integer F.  Shared by layout() and the vectorized assigner so
    both produce bit-identical cycle edges."""
    c = np.asarray(c)
    if factor == 1.0:
        return c.astype(float)
    with np.errstate(over="ignore"):
        if factor == round(factor) or abs(factor - 1.0) >= 0.5:
            return (np.power(factor, c.astype(float)) - 1.0) / (factor - 1.0)
        return np.expm1(c * np.log1p(factor - 1.0)) / (factor - 1.0)


def cycle_width(spec: "BinSchemeSpec", c):
    with np.errstate(over="ignore"):
        return spec.width * np.power(spec.expansion.factor, np.asarray(c).astype(float))


def _materialize_vector(spec: BinSchemeSpec) -> tuple[np.ndarray, np.ndarray]:
    """Cycle starts (length M+2, last is the end of the scheme) and widths (M+1)."""
    factors = spec.expansion.factors  # type: ignore[union-attr]
    widths = [spec.width]
    for f in factors:
        widths.append(widths[-1] * f)
    starts = [spec.start]
    for w in widths:
        starts.append(starts[-1] + spec.bins * w)
    return np.array(starts), np.array(widths)


def layout(spec: BinSchemeSpec, cycle_index: int) -> CycleLayout:
    """Start and bin width of cycle ``cycle_index``."""
    require_valid(spec)
    c = int(cycle_index)
    if c < 0:
        raise SchemeError(f"cycle index must be ≥ 0, got {c}")
    if isinstance(spec.expansion, Vector):
        starts, widths = spec._vector_edges()
        if c >= len(widths):
            raise SchemeError(
                f"cycle index {c} beyond vector scheme with {len(widths)} cycles")
        return CycleLayout(c, float(starts[c]), float(widths[c]))
    start = spec.start + spec.bins * spec.width * growth(spec.expansion.factor, c)
    return CycleLayout(c, float(start), float(cycle_width(spec, c)))


@dataclass(frozen=True)
class BinAssignment:
    cycle_index: int
    rank: int


class _OutOfRange:
    __slots__ = ()

    def __repr__(self) -> str:
        return type(self).__name__


class _Below(_OutOfRange):
    pass


class _Above(_OutOfRange):
    pass


BelowRange = _Below()
AboveRange = _Above()


@dataclass(frozen=True, eq=False)
class BinTally:
    """Counts per (cycle, rank) plus out-of-range and exclusion counts.

    ``cycles`` holds the sorted indices of non-empty cycles and ``counts`` the
    matching ``(len(cycles), bins)`` integer matrix.
    """

    scheme: BinSchemeSpec
    cycles: np.ndarray
    counts: np.ndarray
    below_range: int = 0
    above_range: int = 0
    excluded_nonpositive: int = 0

    def __post_init__(self):
        cycles = np.asarray(self.cycles, dtype=np.int64).reshape(-1)
        counts = np.asarray(self.counts, dtype=np.int64).reshape(len(cycles), self.scheme.bins)
        if len(cycles) > 1 and np.any(np.diff(cycles) <= 0):
            raise ValueError("cycles must be strictly increasing")
        if np.any(counts < 0):
            raise ValueError("counts must be nonnegative")
        cycles.flags.writeable = False
        counts.flags.writeable = False
        object.__setattr__(self, "cycles", cycles)
        object.__setattr__(self, "counts", counts)

    @classmethod
    def from_mapping(cls, scheme: BinSchemeSpec, per_cycle: Mapping[int, Sequence[int]],
                     **extra) -> "BinTally":
        keys = sorted(per_cycle)
        counts = np.array([list(per_cycle[k]) for k in keys], dtype=np.int64)
        return cls(scheme, np.array(keys, dtype=np.int64),
                   counts.reshape(len(keys), scheme.bins), **extra)

    @property
    def per_cycle_counts(self) -> dict[int, tuple[int, ...]]:
        return {int(c): tuple(int(v) for v in row) for c, row in zip(self.cycles, self.counts)}

    @property
    def rank_totals(self) -> np.ndarray:
        return self.counts.sum(axis=0) if len(self.cycles) else np.zeros(self.scheme.bins, np.int64)

    @property
    def in_range(self) -> int:
        return int(self.counts.sum())

    @property
    def total(self) -> int:
        return self.in_range + self.below_range + self.above_range + self.excluded_nonpositive

    @property
    def coverage(self) -> float:
        """Fraction of positive values that landed inside the scheme."""
        positive = self.total - self.excluded_nonpositive
        return self.in_range / positive if positive else 0.0

    def merge(self, other: "BinTally") -> "BinTally":
        if other.scheme != self.scheme:
            raise SchemeError("cannot merge tallies taken under different schemes")
        cycles = np.union1d(self.cycles, other.cycles)
        counts = np.zeros((len(cycles), self.scheme.bins), dtype=np.int64)
        counts[np.searchsorted(cycles, self.cycles)] += self.counts
        counts[np.searchsorted(cycles, other.cycles)] += other.counts
        return BinTally(
            self.scheme, cycles, counts,
            self.below_range + other.below_range,
            self.above_range + other.above_range,
            self.excluded_nonpositive + other.excluded_nonpositive,
        )

    __add__ = merge

    def __eq__(self, other) -> bool:
        if not isinstance(other, BinTally):
            return NotImplemented
        return (self.scheme == other.scheme
                and np.array_equal(self.cycles, other.cycles)
                and np.array_equal(self.counts, other.counts)
                and self.below_range == other.below_range
                and self.above_range == other.above_range
                and self.excluded_nonpositive == other.excluded_nonpositive)


@dataclass(frozen=True)
class ProportionVector:
    values: tuple[float, ...] = field()

    def __init__(self, values: Sequence[float]):
        vals = tuple(float(v) for v in values)
        if not vals:
            raise ValueError("proportion vector must be nonempty")
        if any(not math.isfinite(v) or v < 0 for v in vals):
            raise ValueError(f"proportions must be finite and nonnegative: {vals}")
        if abs(math.fsum(vals) - 1.0) > PROPORTION_SUM_TOL:
            raise ValueError(f"proportions must sum to 1, got {math.fsum(vals)!r}")
        object.__setattr__(self, "values", vals)

    @classmethod
    def from_counts(cls, counts: Sequence[int]) -> "ProportionVector":
        total = int(np.sum(counts))
        if total <= 0:
            raise EmptyDataError("no in-range values")
        return cls([int(c) / total for c in counts])

    def __len__(self) -> int:
        return len(self.values)

    def __iter__(self) -> Iterator[float]:
        return iter(self.values)

    def __getitem__(self, i):
        return self.values[i]

    def as_array(self) -> np.ndarray:
        return np.array(self.values)
