"""Analytic bin proportions for the k/x density.

The finite-cycle sequence ``series_SN`` gives the rank-``d`` share of k/x
launched at ``w`` and covered by ``N`` expanding cycles; its limit in ``N`` is
:func:`general_law`.  Every quantity is independent of ``w``.
"""

from __future__ import annotations

import math
from typing import NamedTuple, Sequence

import numpy as np

from .bin_model import ProportionVector

__all__ = [
    "general_law",
    "general_law_vector",
    "flat_limit",
    "benford",
    "benford_vector",
    "benford_second_order",
    "non_expanding",
    "once_expanding",
    "twice_expanding",
    "series_SN",
    "series_vector",
    "series_table",
    "kx_segment_proportions",
    "convergence_profile",
    "ConvergenceResult",
    "DEFAULT_N_CAP",
]

DEFAULT_N_CAP = 10_000

# Beyond this exponent F**j no longer fits comfortably in a double.
_LOG_OVERFLOW = 600.0


def _check(D: int, F: float, d: int | None = None) -> None:
    if int(D) != D or D < 1:
        raise ValueError(f"bin count D must be an integer ≥ 1, got {D!r}")
    if not (F > 0 and math.isfinite(F)):
        raise ValueError(f"inflation factor F must be > 0, got {F!r}")
    if d is not None and (int(d) != d or not 1 <= d <= D):
        raise ValueError(f"rank d must be in [1, {D}], got {d!r}")


def general_law(D: int, F: float, d: int) -> float:
    """Limit share of rank ``d`` for k/x under infinitely many cycles.

    ``ln((D + d(F-1)) / (D + (d-1)(F-1))) / ln F``, and exactly ``1/D`` at F = 1.
    """
    _check(D, F, d)
    if F == 1.0:
        return 1.0 / D
    g = F - 1.0
    num = math.log1p(d * g / D) - math.log1p((d - 1) * g / D)
    return num / math.log1p(g)


def general_law_vector(D: int, F: float) -> ProportionVector:
    return ProportionVector([general_law(D, F, d) for d in range(1, D + 1)])


def flat_limit(D: int) -> ProportionVector:
    return general_law_vector(D, 1.0)


def benford(base: int, d: int) -> float:
    """First-digit probability ``log_base(1 + 1/d)``."""
    if int(base) != base or base < 2:
        raise ValueError(f"base must be an integer ≥ 2, got {base!r}")
    if int(d) != d or not 1 <= d <= base - 1:
        raise ValueError(f"digit must be in [1, {base - 1}], got {d!r}")
    return math.log1p(1.0 / d) / math.log(base)


def benford_vector(base: int) -> ProportionVector:
    return ProportionVector([benford(base, d) for d in range(1, base)])


def benford_second_order(base: int) -> ProportionVector:
    """Distribution of the second significant digit 0..base-1."""
    if int(base) != base or base < 2:
        raise ValueError(f"base must be an integer ≥ 2, got {base!r}")
    ln_b = math.log(base)
    return ProportionVector([
        math.fsum(math.log1p(1.0 / (f * base + s)) for f in range(1, base)) / ln_b
        for s in range(base)
    ])


def non_expanding(D: int, d: int) -> float:
    _check(D, 1.0, d)
    return math.log(1 + 1 / d) / math.log(D + 1)


def once_expanding(D: int, F: float, d: int) -> float:
    """Rank share for k/x over one cycle of width w plus one of width Fw."""
    _check(D, F, d)
    num = math.log(1 + 1 / d) + math.log((1 + D + d * F) / (1 + D + (d - 1) * F))
    return num / math.log(1 + D + D * F)


def twice_expanding(D: int, F: float, d: int) -> float:
    _check(D, F, d)
    num = (math.log(1 + 1 / d)
           + math.log((1 + D + d * F) / (1 + D + (d - 1) * F))
           + math.log((1 + D + D * F + d * F ** 2) / (1 + D + D * F + (d - 1) * F ** 2)))
    return num / math.log(1 + D + D * F + D * F ** 2)


def _cycle_terms(D: int, F: float, n: int) -> np.ndarray:
    """Matrix ``T[j, d-1]`` = log share of rank d within cycle j, j < n.

    Cycle j of a k/x scheme launched at w begins at ``w * p_j`` with
    ``p_j = 1 + D (F**j - 1)/(F - 1)`` and has bins of width ``w F**j``, so
    ``T[j, d-1] = ln((p_j + d F**j) / (p_j + (d-1) F**j))``.  Once ``F**j``
    would overflow the ratio is evaluated as ``(A + E f**j)/(B + E f**j)``
    with ``f = 1/F`` which stays bounded.
    """
    j = np.arange(n, dtype=float)
    d = np.arange(1, D + 1, dtype=float)
    if F == 1.0:
        lo = D * j[:, None] + d[None, :]
        return np.log1p(1.0 / lo)
    g = F - 1.0
    lnF = math.log1p(g)
    jl = j * lnF
    out = np.empty((n, D))
    small = jl <= _LOG_OVERFLOW
    if small.any():
        js = j[small]
        Fj = np.exp(js * lnF)
        p = 1.0 + D * (np.expm1(js * lnF) / g)
        # ln(1 + F^j / (p + (d-1) F^j))
        out[small] = np.log1p(Fj[:, None] / (p[:, None] + (d[None, :] - 1.0) * Fj[:, None]))
    if (~small).any():
        # Only reached for F > 1, where f**j underflows harmlessly to 0.
        fj = np.exp(-j[~small] * lnF)
        C = D / g
        E = 1.0 - C
        A = C + d
        B = C + d - 1.0
        out[~small] = (np.log(A[None, :] + E * fj[:, None])
                       - np.log(B[None, :] + E * fj[:, None]))
    return out


def _log_total(D: int, F: float, N: np.ndarray) -> np.ndarray:
    """ln(p_N) = ln(1 + D (F**N - 1)/(F - 1)), the log of the covered range."""
    N = np.asarray(N, dtype=float)
    if F == 1.0:
        return np.log1p(D * N)
    g = F - 1.0
    lnF = math.log1p(g)
    out = np.empty_like(N)
    small = N * lnF <= _LOG_OVERFLOW
    out[small] = np.log1p(D * np.expm1(N[small] * lnF) / g)
    C = D / g
    E = 1.0 - C
    Nb = N[~small]
    out[~small] = Nb * lnF + np.log(C + E * np.exp(-Nb * lnF))
    return out


def series_SN(D: int, F: float, d: int, N: int) -> float:
    """Rank-``d`` share of k/x covered by exactly ``N`` cycles (N = 1: no expansion)."""
    _check(D, F, d)
    if int(N) != N or N < 1:
        raise ValueError(f"cycle count N must be an integer ≥ 1, got {N!r}")
    terms = _cycle_terms(D, F, int(N))[:, d - 1]
    return math.fsum(terms) / float(_log_total(D, F, np.array([N]))[0])


def series_vector(D: int, F: float, N: int) -> ProportionVector:
    return ProportionVector([series_SN(D, F, d, N) for d in range(1, D + 1)])


def series_table(D: int, F: float, n_max: int) -> np.ndarray:
    """Row ``N-1`` holds the series vector for N cycles, N = 1..n_max."""
    _check(D, F)
    if n_max < 1:
        raise ValueError("n_max must be ≥ 1")
    terms = _cycle_terms(D, F, n_max)
    num = np.cumsum(terms, axis=0)
    den = _log_total(D, F, np.arange(1, n_max + 1))
    return num / den[:, None]


def kx_segment_proportions(a: float, b: float, cuts: Sequence[float]) -> ProportionVector:
    """Share of a k/x density on (a, b) falling between consecutive cuts."""
    c = [float(v) for v in cuts]
    if not (a > 0 and b > a):
        raise ValueError(f"need 0 < a < b, got a={a!r}, b={b!r}")
    if len(c) < 2 or c[0] != a or c[-1] != b:
        raise ValueError("cuts must begin at a and end at b")
    if any(v <= 0 for v in c) or any(hi <= lo for lo, hi in zip(c, c[1:])):
        raise ValueError("cuts must be positive and strictly increasing")
    total = math.log(b / a)
    shares = [math.log(hi / lo) / total for lo, hi in zip(c, c[1:])]
    # Absorb rounding so the vector sums to one.
    shares[-1] = max(0.0, 1.0 - math.fsum(shares[:-1]))
    return ProportionVector(shares)


class ConvergenceResult(NamedTuple):
    n_reached: int
    max_abs_gap: float
    converged: bool


def convergence_profile(D: int, F: float, tolerance: float,
                        n_max: int = DEFAULT_N_CAP) -> ConvergenceResult:
    """Smallest N ≤ n_max whose series vector is within ``tolerance`` of the limit."""
    if not tolerance > 0:
        raise ValueError("tolerance must be > 0")
    n_max = int(n_max)
    limit = np.array(general_law_vector(D, F).values)
    gaps = np.abs(series_table(D, F, n_max) - limit).max(axis=1)
    hit = np.flatnonzero(gaps <= tolerance)
    if hit.size:
        return ConvergenceResult(int(hit[0]) + 1, float(gaps[hit[0]]), True)
    return ConvergenceResult(n_max, float(gaps[-1]), False)
