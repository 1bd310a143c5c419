"""Seedable synthetic data sources used to reproduce the bin tables.

All random families draw from numpy's PCG64 bit generator seeded with the
given 64-bit seed, so a :class:`GeneratorSpec` fully determines its output.
"""

from __future__ import annotations

from dataclasses import asdict, dataclass, field
from enum import Enum
from pathlib import Path
from typing import Mapping

import numpy as np

__all__ = [
    "Family",
    "GeneratorSpec",
    "GeneratorError",
    "PRNG_ALGORITHM",
    "sample_kx",
    "sample_lognormal",
    "exp_growth",
    "sample_log_triangular",
    "sample_chain_uniform",
    "sample_uniform",
    "sample_normal_positive",
    "generate",
    "write_values",
]

PRNG_ALGORITHM = "numpy.random.PCG64"


class GeneratorError(ValueError):
    pass


class Family(str, Enum):
    KOverX = "kx"
    Lognormal = "lognormal"
    ExpGrowth = "exp-growth"
    LogTriangular = "log-triangular"
    ChainUniform = "chain-uniform"
    Uniform = "uniform"
    NormalPositive = "normal-positive"


def _rng(seed: int) -> np.random.Generator:
    return np.random.Generator(np.random.PCG64(int(seed) & (2 ** 64 - 1)))


def _check_n(n: int) -> int:
    if int(n) != n or n < 1:
        raise GeneratorError(f"sample count must be an integer ≥ 1, got {n!r}")
    return int(n)


def _unit_open_low(rng: np.random.Generator, n: int) -> np.ndarray:
    """Uniform draws on (0, 1]."""
    return 1.0 - rng.random(n)


def sample_kx(A: float, B: float, n: int, seed: int) -> np.ndarray:
    """Draws from the density k/x on (10**A, 10**B) by inverse CDF."""
    n = _check_n(n)
    if A > B:
        raise GeneratorError(f"need A ≤ B, got A={A!r}, B={B!r}")
    u = _rng(seed).random(n)
    return np.power(10.0, A + u * (B - A))


def sample_lognormal(location: float, shape: float, n: int, seed: int) -> np.ndarray:
    """``location`` and ``shape`` are the mean and sd of ln(x)."""
    n = _check_n(n)
    if not shape > 0:
        raise GeneratorError(f"lognormal shape must be > 0, got {shape!r}")
    return _rng(seed).lognormal(location, shape, n)


def exp_growth(base: float, growth_factor: float, n: int) -> np.ndarray:
    """``base * growth_factor**i`` for i = 0..n-1; no randomness."""
    n = _check_n(n)
    if not base > 0:
        raise GeneratorError(f"base must be > 0, got {base!r}")
    if not growth_factor > 1:
        raise GeneratorError(f"growth factor must be > 1, got {growth_factor!r}")
    return base * np.power(float(growth_factor), np.arange(n, dtype=float))


def sample_log_triangular(lo: float, mode: float, hi: float, n: int, seed: int) -> np.ndarray:
    """``10**T`` with T triangular on (lo, hi) peaking at ``mode``."""
    n = _check_n(n)
    if not lo < mode < hi:
        raise GeneratorError(f"need lo < mode < hi, got {lo!r}, {mode!r}, {hi!r}")
    return np.power(10.0, _rng(seed).triangular(lo, mode, hi, n))


def sample_chain_uniform(depth: int, top: float, n: int, seed: int) -> np.ndarray:
    """Nested uniforms: b0 = top, b_k ~ U(0, b_{k-1}); returns b_depth."""
    n = _check_n(n)
    if int(depth) != depth or depth < 1:
        raise GeneratorError(f"chain depth must be an integer ≥ 1, got {depth!r}")
    if not top > 0:
        raise GeneratorError(f"top bound must be > 0, got {top!r}")
    rng = _rng(seed)
    b = np.full(n, float(top))
    for _ in range(int(depth)):
        b = b * _unit_open_low(rng, n)
    return b


def sample_uniform(a: float, b: float, n: int, seed: int) -> np.ndarray:
    n = _check_n(n)
    if not (0 <= a < b):
        raise GeneratorError(f"need 0 ≤ a < b, got a={a!r}, b={b!r}")
    return a + (b - a) * _unit_open_low(_rng(seed), n)


def sample_normal_positive(mean: float, sd: float, n: int, seed: int) -> np.ndarray:
    """Normal draws with nonpositive values rejected and redrawn."""
    n = _check_n(n)
    if not sd > 0:
        raise GeneratorError(f"sd must be > 0, got {sd!r}")
    if mean <= -8 * sd:
        raise GeneratorError("mean too far below zero for rejection sampling")
    rng = _rng(seed)
    out = np.empty(0)
    while out.size < n:
        draw = rng.normal(mean, sd, n)
        out = np.concatenate([out, draw[draw > 0]])
    return out[:n]


# family -> (callable, ordered parameter names, uses seed)
_DISPATCH = {
    Family.KOverX: (sample_kx, ("A", "B"), True),
    Family.Lognormal: (sample_lognormal, ("location", "shape"), True),
    Family.ExpGrowth: (exp_growth, ("base", "growth_factor"), False),
    Family.LogTriangular: (sample_log_triangular, ("lo", "mode", "hi"), True),
    Family.ChainUniform: (sample_chain_uniform, ("depth", "top"), True),
    Family.Uniform: (sample_uniform, ("a", "b"), True),
    Family.NormalPositive: (sample_normal_positive, ("mean", "sd"), True),
}


@dataclass(frozen=True)
class GeneratorSpec:
    family: Family
    parameters: Mapping[str, float]
    count: int
    seed: int = 0
    label: str = field(default="", compare=False)

    def __post_init__(self):
        object.__setattr__(self, "family", Family(self.family))
        object.__setattr__(self, "parameters", dict(self.parameters))
        names = _DISPATCH[self.family][1]
        missing = [p for p in names if p not in self.parameters]
        extra = [p for p in self.parameters if p not in names]
        if missing or extra:
            raise GeneratorError(
                f"{self.family.value} takes parameters {names}; "
                f"missing {missing}, unexpected {extra}")

    def metadata(self) -> dict:
        meta = asdict(self)
        meta["family"] = self.family.value
        meta["n"] = meta.pop("count")
        meta["prng"] = PRNG_ALGORITHM
        if not _DISPATCH[self.family][2]:
            meta["seed"] = None
        if not self.label:
            meta.pop("label")
        return meta


def generate(spec: GeneratorSpec) -> np.ndarray:
    fn, names, seeded = _DISPATCH[spec.family]
    args = [spec.parameters[p] for p in names]
    if spec.family is Family.ChainUniform:
        args[0] = int(args[0])
    if seeded:
        return fn(*args, spec.count, spec.seed)
    return fn(*args, spec.count)


def write_values(path: str | Path, values) -> None:
    """One value per line, round-trippable repr."""
    with open(path, "w") as fh:
        for v in np.asarray(values, dtype=float):
            fh.write(repr(float(v)))
            fh.write("\n")

