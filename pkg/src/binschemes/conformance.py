"""Empirical vs theoretical proportions, logarithmic-ness verdicts, and
significant-digit extraction for cross-checking bin results."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from enum import Enum
from typing import NamedTuple, Sequence

import numpy as np

from .bin_model import BinSchemeSpec, BinTally, Constant, ProportionVector, Vector
from .engine import proportions
from . import theory

__all__ = [
    "DEFAULT_THRESHOLD",
    "Metrics",
    "compare",
    "Verdict",
    "classify",
    "SourceKind",
    "TheorySource",
    "ConformanceReport",
    "theory_for_scheme",
    "build_report",
    "first_significant_digit",
    "second_significant_digit",
    "significant_digits",
    "digit_proportions",
    "second_order_scheme",
    "f_avg",
]

DEFAULT_THRESHOLD = 0.010

F_AVG_CAVEAT = ("varying-factor scheme compared against the constant-factor law at the "
                "mean factor; this comparison has no derivation behind it")

# Significands within this relative distance below a digit boundary snap upward.
_SNAP = 2.0 ** -48


class Metrics(NamedTuple):
    mad: float
    max_abs_dev: float
    ssd: float


def compare(empirical: Sequence[float], theoretical: Sequence[float]) -> Metrics:
    e = np.asarray(list(empirical), dtype=float)
    t = np.asarray(list(theoretical), dtype=float)
    if e.shape != t.shape:
        raise ValueError(f"length mismatch: {e.size} vs {t.size}")
    diff = np.abs(e - t)
    return Metrics(float(diff.mean()), float(diff.max()), float(np.sum(diff ** 2)))


class Verdict(str, Enum):
    Conforming = "Conforming"
    NonConforming = "NonConforming"


def classify(mad: float, threshold: float = DEFAULT_THRESHOLD) -> Verdict:
    if not threshold > 0:
        raise ValueError("threshold must be > 0")
    return Verdict.Conforming if mad <= threshold else Verdict.NonConforming


class SourceKind(str, Enum):
    GeneralLaw = "GeneralLaw"
    BenfordFirst = "BenfordFirst"
    BenfordSecond = "BenfordSecond"
    FlatLimit = "FlatLimit"
    Custom = "Custom"


@dataclass(frozen=True)
class TheorySource:
    kind: SourceKind
    params: dict = field(default_factory=dict)

    def to_dict(self) -> dict:
        return {"kind": self.kind.value, **self.params}


def theory_for_scheme(scheme: BinSchemeSpec) -> tuple[ProportionVector, TheorySource, str | None]:
    """The law an empirical tally under ``scheme`` should be compared with.

    Vector schemes get the constant-factor law at the mean factor plus a caveat.
    """
    D = scheme.bins
    if isinstance(scheme.expansion, Constant):
        F = scheme.expansion.factor
        if F == 1.0:
            return theory.flat_limit(D), TheorySource(SourceKind.FlatLimit, {"D": D}), None
        return (theory.general_law_vector(D, F),
                TheorySource(SourceKind.GeneralLaw, {"D": D, "F": F}), None)
    factors = scheme.expansion.factors
    if not factors:
        return (theory.flat_limit(D), TheorySource(SourceKind.FlatLimit, {"D": D}), None)
    Fa = f_avg(factors)
    src = TheorySource(SourceKind.GeneralLaw, {"D": D, "F": Fa, "f_avg": True})
    return theory.general_law_vector(D, Fa), src, F_AVG_CAVEAT


@dataclass(frozen=True)
class ConformanceReport:
    scheme: BinSchemeSpec
    empirical: ProportionVector
    theoretical: ProportionVector
    theoretical_source: TheorySource
    metrics: Metrics
    verdict: Verdict
    threshold: float
    sample_size: int
    coverage: float
    caveat: str | None = None

    @property
    def mad(self) -> float:
        return self.metrics.mad

    @property
    def max_abs_dev(self) -> float:
        return self.metrics.max_abs_dev

    @property
    def ssd(self) -> float:
        return self.metrics.ssd


def build_report(t: BinTally, threshold: float = DEFAULT_THRESHOLD,
                 theoretical: ProportionVector | None = None,
                 source: TheorySource | None = None) -> ConformanceReport:
    empirical = proportions(t)
    caveat = None
    if theoretical is None:
        theoretical, source, caveat = theory_for_scheme(t.scheme)
    elif source is None:
        source = TheorySource(SourceKind.Custom)
    m = compare(empirical, theoretical)
    return ConformanceReport(
        scheme=t.scheme,
        empirical=empirical,
        theoretical=theoretical,
        theoretical_source=source,
        metrics=m,
        verdict=classify(m.mad, threshold),
        threshold=threshold,
        sample_size=t.total,
        coverage=t.coverage,
        caveat=caveat,
    )


def _check_base(base: int) -> None:
    if int(base) != base or base < 2:
        raise ValueError(f"base must be an integer ≥ 2, got {base!r}")


def _significands(x: np.ndarray, base: int) -> np.ndarray:
    """Significand in [1, base) by exponent normalization."""
    e = np.floor(np.log(x) / math.log(base)).astype(np.int64)
    # Scale by an exact integer power where possible: multiply for negative
    # exponents, divide for positive ones.
    pos = np.power(float(base), np.abs(e).astype(float))
    with np.errstate(over="ignore"):
        m = np.where(e >= 0, x / pos, x * pos)
    m = np.where(m >= base, m / base, m)
    m = np.where(m < 1, m * base, m)
    # Just below a power of the base counts as that power.
    return np.where(m * (1 + _SNAP) >= base, 1.0, m)


def significant_digits(values, base: int = 10, order: int = 1) -> np.ndarray:
    """Digit at position ``order`` (1 = leading) of each value's significand."""
    _check_base(base)
    x = np.asarray(values, dtype=float).reshape(-1)
    if np.any(~np.isfinite(x)) or np.any(x <= 0):
        raise ValueError("significant digits require finite values > 0")
    m = _significands(x, base)
    scaled = np.floor(m * float(base) ** (order - 1) * (1 + _SNAP))
    return (scaled % base).astype(np.int64)


def first_significant_digit(x: float, base: int = 10) -> int:
    if not (x > 0 and math.isfinite(x)):
        raise ValueError(f"first significant digit requires a finite value > 0, got {x!r}")
    return int(significant_digits([x], base, 1)[0])


def second_significant_digit(x: float, base: int = 10) -> int:
    if not (x > 0 and math.isfinite(x)):
        raise ValueError(f"second significant digit requires a finite value > 0, got {x!r}")
    return int(significant_digits([x], base, 2)[0])


def digit_proportions(values, base: int = 10, order: int = 1) -> ProportionVector:
    """Frequencies of first digits 1..base-1 (order 1) or of digits 0..base-1."""
    x = np.asarray(values, dtype=float)
    digits = significant_digits(x[x > 0], base, order)
    counts = np.bincount(digits, minlength=base)
    return ProportionVector.from_counts(counts[1:] if order == 1 else counts)


def second_order_scheme(base: int, cycles: int, start: float = 0.0,
                        width: float = 0.0005) -> BinSchemeSpec:
    """Vector scheme whose ranks track the second significant digit.

    Per period: base-2 flat steps then one expansion by ``base``, repeated
    ``cycles`` times over ``base`` bins.  Launched at ``start = base * width``
    the cycles are exactly the first-digit intervals and rank r holds second
    digit r - 1; other starts only approximate that.
    """
    _check_base(base)
    if base < 3:
        raise ValueError("second-order scheme needs base ≥ 3")
    if int(cycles) != cycles or cycles < 1:
        raise ValueError("cycles must be an integer ≥ 1")
    period = [1.0] * (base - 2) + [float(base)]
    return BinSchemeSpec(base, Vector(period * int(cycles)), float(start), float(width))


def f_avg(factors: Sequence[float]) -> float:
    vals = [float(f) for f in factors]
    if not vals:
        raise ValueError("f_avg needs at least one factor")
    return math.fsum(vals) / len(vals)
