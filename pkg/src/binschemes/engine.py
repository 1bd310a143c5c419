"""Assigning values to (cycle, rank) and tallying data sets under a scheme."""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from functools import reduce
from typing import NamedTuple, Sequence

import numpy as np

from .bin_model import (
    AboveRange,
    BelowRange,
    BinAssignment,
    BinSchemeSpec,
    BinTally,
    EmptyDataError,
    ProportionVector,
    SchemeError,
    Vector,
    cycle_width,
    growth,
    require_valid,
)

__all__ = [
    "assign",
    "assign_many",
    "tally",
    "proportions",
    "per_cycle_proportions",
    "scale_data",
    "CycleProportions",
    "DEFAULT_MIN_COUNT",
]

DEFAULT_MIN_COUNT = 100

# Status codes returned by assign_many alongside cycle/rank arrays.
IN_RANGE, BELOW, ABOVE = 0, 1, 2

_MAX_CYCLE = 2 ** 62


def _constant_starts(spec: BinSchemeSpec, c: np.ndarray) -> np.ndarray:
    return spec.start + spec.bins * spec.width * growth(spec.expansion.factor, c)


def _assign_constant(spec: BinSchemeSpec, x: np.ndarray):
    D, W, S, F = spec.bins, spec.width, spec.start, spec.expansion.factor
    status = np.full(x.shape, IN_RANGE, dtype=np.int8)
    status[x < S] = BELOW
    u = (x - S) / (D * W)
    with np.errstate(divide="ignore", invalid="ignore"):
        if F == 1.0:
            est = np.floor(u)
        else:
            arg = u * (F - 1.0)
            if F < 1.0:
                # Shrinking cycles accumulate to a finite limit S + D*W/(1-F).
                status[(status == IN_RANGE) & (arg <= -1.0)] = ABOVE
            est = np.floor(np.log1p(arg) / math.log(F))
    live = status == IN_RANGE
    est = np.where(live & np.isfinite(est), est, 0.0)
    if np.any(est > _MAX_CYCLE):
        raise SchemeError("value too far right for this scheme: cycle index overflows")
    c = np.maximum(est.astype(np.int64), 0)
    # Closed-form estimate can be off by one from rounding; settle against edges.
    for _ in range(8):
        lo = _constant_starts(spec, c)
        hi = _constant_starts(spec, c + 1)
        down = live & (x < lo) & (c > 0)
        up = live & (x >= hi)
        if not (down.any() or up.any()):
            break
        c = c - down + up
    else:  # pragma: no cover - guards against a pathological float layout
        raise SchemeError("cycle search failed to settle")
    return status, c, _constant_starts(spec, c), cycle_width(spec, c)


def _assign_vector(spec: BinSchemeSpec, x: np.ndarray):
    starts, widths = spec._vector_edges()
    status = np.full(x.shape, IN_RANGE, dtype=np.int8)
    c = np.searchsorted(starts, x, side="right") - 1
    status[c < 0] = BELOW
    status[c >= len(widths)] = ABOVE
    c = np.clip(c, 0, len(widths) - 1).astype(np.int64)
    return status, c, starts[c], widths[c]


def assign_many(spec: BinSchemeSpec, values) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Vectorized assignment of strictly positive values.

    Returns ``(status, cycle, rank)`` arrays; ``status`` is 0 for in-range,
    1 for below the scheme start and 2 beyond the last cycle.  Cycle and rank
    are only meaningful where status is 0.
    """
    require_valid(spec)
    x = np.asarray(values, dtype=float).reshape(-1)
    if not np.all(np.isfinite(x)):
        raise SchemeError("values must be finite")
    if np.any(x <= 0):
        raise SchemeError("values must be > 0; exclude nonpositive values first")
    if isinstance(spec.expansion, Vector):
        status, c, start, width = _assign_vector(spec, x)
    else:
        status, c, start, width = _assign_constant(spec, x)
    D = spec.bins
    with np.errstate(invalid="ignore", over="ignore"):
        rank = np.floor((x - start) / width).astype(np.int64) + 1
    rank = np.clip(rank, 1, D)
    # Rank edges are start + r*width, identical to CycleLayout.edges.
    for _ in range(4):
        lower = start + (rank - 1) * width
        upper = start + rank * width
        down = (x < lower) & (rank > 1)
        up = (x >= upper) & (rank < D)
        if not (down.any() or up.any()):
            break
        rank = rank - down + up
    return status, np.where(status == IN_RANGE, c, -1), np.where(status == IN_RANGE, rank, 0)


def assign(spec: BinSchemeSpec, x: float):
    """Return the (cycle, rank) whose half-open bin holds ``x``.

    Values below ``spec.start`` give ``BelowRange``; values beyond the final
    cycle of a vector scheme give ``AboveRange``.
    """
    if not (isinstance(x, (int, float, np.floating, np.integer)) and x > 0 and math.isfinite(x)):
        raise SchemeError(f"assign requires a finite value > 0, got {x!r}")
    status, c, r = assign_many(spec, [x])
    if status[0] == BELOW:
        return BelowRange
    if status[0] == ABOVE:
        return AboveRange
    return BinAssignment(int(c[0]), int(r[0]))


def _tally_chunk(spec: BinSchemeSpec, x: np.ndarray) -> BinTally:
    positive = x > 0
    excluded = int(x.size - np.count_nonzero(positive))
    x = x[positive]
    status, c, r = assign_many(spec, x)
    ok = status == IN_RANGE
    cycles, inverse = np.unique(c[ok], return_inverse=True)
    D = spec.bins
    flat = np.bincount(inverse * D + (r[ok] - 1), minlength=len(cycles) * D)
    return BinTally(
        spec,
        cycles,
        flat.reshape(len(cycles), D),
        below_range=int(np.count_nonzero(status == BELOW)),
        above_range=int(np.count_nonzero(status == ABOVE)),
        excluded_nonpositive=excluded,
    )


def tally(spec: BinSchemeSpec, data: Sequence[float], *, chunk_size: int | None = None,
          workers: int | None = None) -> BinTally:
    """Tally a data set under ``spec``.

    Values ≤ 0 are counted in ``excluded_nonpositive`` rather than binned.
    With ``chunk_size`` the data is tallied in pieces (optionally on
    ``workers`` threads) and merged; the result equals the sequential tally.
    """
    require_valid(spec)
    x = np.asarray(data, dtype=float).reshape(-1)
    if np.any(np.isnan(x)) or np.any(np.isinf(x)):
        raise SchemeError("data must be finite")
    if not chunk_size or chunk_size >= x.size:
        return _tally_chunk(spec, x)
    chunks = [x[i:i + chunk_size] for i in range(0, x.size, chunk_size)]
    if workers and workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            parts = list(pool.map(lambda ch: _tally_chunk(spec, ch), chunks))
    else:
        parts = [_tally_chunk(spec, ch) for ch in chunks]
    return reduce(BinTally.merge, parts)


def proportions(t: BinTally) -> ProportionVector:
    """Share of in-range values at each rank, aggregated over all cycles."""
    if t.in_range == 0:
        raise EmptyDataError("no in-range values in tally")
    return ProportionVector.from_counts(t.rank_totals)


class CycleProportions(NamedTuple):
    cycle_index: int
    proportions: ProportionVector
    count: int


def per_cycle_proportions(t: BinTally, min_count: int = DEFAULT_MIN_COUNT) -> list[CycleProportions]:
    """Rank proportions within each cycle holding at least ``min_count`` values."""
    if min_count < 1:
        raise ValueError("min_count must be ≥ 1")
    out = []
    for c, row in zip(t.cycles, t.counts):
        n = int(row.sum())
        if n >= min_count:
            out.append(CycleProportions(int(c), ProportionVector.from_counts(row), n))
    return out


def scale_data(data: Sequence[float], K: float) -> np.ndarray:
    if not (K > 0 and math.isfinite(K)):
        raise SchemeError(f"scale factor must be > 0, got {K!r}")
    return np.asarray(data, dtype=float) * K
