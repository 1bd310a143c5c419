"""Synthetic re-runs of the published bin tables.

Each table pairs a bin scheme with the simulable data rows (generators) and
lists the rows that need external data with a note instead of values.  Row
seeds are spawned from one base seed with ``numpy.random.SeedSequence`` so a
(figure, seed, n) triple reproduces the table exactly.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from . import theory
from .bin_model import BinSchemeSpec, ProportionVector
from .conformance import F_AVG_CAVEAT, compare, f_avg, second_order_scheme
from .engine import proportions, tally
from .generators import Family, GeneratorSpec, generate

__all__ = [
    "FIGURES",
    "FIG5_FACTORS",
    "FIG6_FACTORS",
    "LOG_ROWS",
    "CONTRAST_ROWS",
    "Row",
    "Table",
    "reproduce",
    "row_seed",
]

NOT_REPRODUCIBLE = "not reproducible — requires external data"

FIG5_FACTORS = (2, 3, 4, 2, 5, 3, 6, 3, 5, 7, 4, 2, 3, 2, 7, 8, 9, 7, 3, 6)
FIG6_FACTORS = (2.37, 3.08, 1.55, 4.17, 1.18, 2.35, 1.82, 5.07, 3.39, 2.04,
                4.82, 7.07, 2.33, 6.67, 3.01, 1.67, 2.97, 3.33, 6.08, 2.25)


@dataclass(frozen=True)
class RowSource:
    label: str
    family: Family
    params: dict
    fixed_n: int | None = None


LOG_ROWS = (
    RowSource("LOG Symmetrical Triangular (1, 3, 5)", Family.LogTriangular,
              {"lo": 1, "mode": 3, "hi": 5}),
    RowSource("k/x over (1, 1000000)", Family.KOverX, {"A": 0, "B": 6}),
    RowSource("Exponential Growth, B=1.5, F=1.01", Family.ExpGrowth,
              {"base": 1.5, "growth_factor": 1.01}, fixed_n=10_000),
    RowSource("Lognormal, Location=5, Shape=1", Family.Lognormal,
              {"location": 5, "shape": 1}),
    RowSource("Lognormal, Location=9.3, Shape=1.7", Family.Lognormal,
              {"location": 9.3, "shape": 1.7}),
    RowSource("Chain U(U(U(U(U(0, 5666)))))", Family.ChainUniform,
              {"depth": 5, "top": 5666}),
)

CONTRAST_ROWS = (
    RowSource("(NON-Logarithmic) Normal(177, 40)", Family.NormalPositive,
              {"mean": 177, "sd": 40}),
    RowSource("(NON-Logarithmic) Uniform(5, 78000)", Family.Uniform, {"a": 5, "b": 78000}),
    RowSource("(NON-Logarithmic) k/x over (1, 10)", Family.KOverX, {"A": 0, "B": 1}),
)

_REAL_ROWS = ("Time Between Earthquakes", "USA Population Centers")
_VARIED = "Varied Data - Hill's Model"
_REAL_CONTRAST = ("(NON-Logarithmic) US County Area", "(NON-Logarithmic) Payroll Data")


def row_seed(seed: int, index: int) -> int:
    child = np.random.SeedSequence(seed).spawn(index + 1)[index]
    return int(child.generate_state(1, np.uint64)[0])


@dataclass
class Row:
    label: str
    values: tuple[float, ...] | None
    mad: float | None = None
    max_abs_dev: float | None = None
    note: str = ""
    meta: dict = field(default_factory=dict)


@dataclass
class Table:
    figure: str
    title: str
    columns: list[str]
    rows: list[Row]
    law_label: str
    law: tuple[float, ...] | None
    notes: list[str] = field(default_factory=list)

    def simulated(self, contrast: bool = False) -> list[Row]:
        return [r for r in self.rows if r.values is not None
                and r.label.startswith("(NON") == contrast and r.label != "Average"]

    def to_dict(self) -> dict:
        return {
            "figure": self.figure,
            "title": self.title,
            "columns": self.columns,
            "rows": [
                {"label": r.label, "values": list(r.values) if r.values else None,
                 "mad": r.mad, "max_abs_dev": r.max_abs_dev, "note": r.note, "meta": r.meta}
                for r in self.rows
            ],
            "law": {"label": self.law_label, "values": list(self.law) if self.law else None},
            "notes": self.notes,
        }


def _sample(src: RowSource, n: int, seed: int) -> tuple[np.ndarray, GeneratorSpec]:
    spec = GeneratorSpec(src.family, src.params, src.fixed_n or n, seed, label=src.label)
    return generate(spec), spec


def _measure(label: str, values: ProportionVector, law) -> Row:
    row = Row(label, tuple(values.values))
    if law is not None:
        m = compare(values, law)
        row.mad, row.max_abs_dev = m.mad, m.max_abs_dev
    return row


def _scheme_table(figure: str, title: str, scheme: BinSchemeSpec, law, law_label: str,
                  seed: int, n: int, *, contrast: bool = False,
                  real_rows=_REAL_ROWS) -> Table:
    cols = [f"Bin {chr(ord('A') + i)}" for i in range(scheme.bins)]
    rows: list[Row] = [Row(label, None, note=NOT_REPRODUCIBLE) for label in real_rows]
    sources = list(LOG_ROWS) + (list(CONTRAST_ROWS) if contrast else [])
    for i, src in enumerate(sources):
        data, gspec = _sample(src, n, row_seed(seed, i))
        t = tally(scheme, data)
        row = _measure(src.label, proportions(t), law)
        row.meta = {**gspec.metadata(), "coverage": t.coverage}
        if src in LOG_ROWS and src is LOG_ROWS[-1]:
            rows.append(Row(_VARIED, None, note=NOT_REPRODUCIBLE))
        rows.append(row)
    if contrast:
        rows.extend(Row(label, None, note=NOT_REPRODUCIBLE) for label in _REAL_CONTRAST)
    table = Table(figure, title, cols, rows, law_label, tuple(law) if law is not None else None)
    logs = table.simulated()
    avg = np.mean([r.values for r in logs], axis=0)
    avg_row = _measure("Average", ProportionVector(avg / avg.sum()), law)
    table.rows.append(avg_row)
    return table


def _gl(D, F):
    return theory.general_law_vector(D, F).values


def _fig1(seed, n):
    s = BinSchemeSpec.constant(4, 8, 0, 0.0008)
    return _scheme_table("fig1", "Four-bin scheme, D=4 F=8 S=0 W=0.0008", s, _gl(4, 8),
                         "General R.Q. Law D=4 F=8", seed, n)


def _fig2(seed, n):
    s = BinSchemeSpec.constant(7, 3, 0, 0.0008)
    return _scheme_table("fig2", "Seven-bin scheme, D=7 F=3 S=0 W=0.0008", s, _gl(7, 3),
                         "General R.Q. Law D=7 F=3", seed, n)


def _fig3(seed, n):
    s = BinSchemeSpec.constant(9, 10, 0.033, 0.07)
    return _scheme_table("fig3", "Nine-bin scheme F=10, S=0.033 W=0.07", s, _gl(9, 10),
                         "General R.Q. Law D=9 F=10", seed, n)


def _fig4(seed, n):
    s = BinSchemeSpec.constant(9, 10, 5, 311)
    return _scheme_table("fig4", "Nine-bin scheme F=10, S=5 W=311 (too coarse)", s, _gl(9, 10),
                         "General R.Q. Law D=9 F=10", seed, n)


def _vector_fig(figure, D, factors, width, seed, n):
    s = BinSchemeSpec.vector(D, factors, 0, width)
    Fa = f_avg(factors)
    t = _scheme_table(figure, f"{D}-bin scheme, varying F (S=0 W={width})", s, _gl(D, Fa),
                      f"General R.Q. Law D={D} F_AVG={Fa:.4g}", seed, n, contrast=True)
    t.notes.append(F_AVG_CAVEAT)
    return t


def _fig5(seed, n):
    return _vector_fig("fig5", 5, FIG5_FACTORS, 0.007, seed, n)


def _fig6(seed, n):
    return _vector_fig("fig6", 6, FIG6_FACTORS, 0.037, seed, n)


def _fig7(seed, n):
    src = LOG_ROWS[4]
    data, gspec = _sample(src, n, row_seed(seed, 0))
    rows = []
    for F in range(1, 13):
        s = BinSchemeSpec.constant(7, F, 0, 0.0039)
        row = _measure(f"F={F}", proportions(tally(s, data)), _gl(7, F))
        rows.append(row)
    cols = [f"Bin {chr(ord('A') + i)}" for i in range(7)]
    t = Table("fig7", "Seven-bin schemes, S=0 W=0.0039, F = 1..12", cols, rows,
              "General R.Q. Law D=7 at each row's F", None)
    t.notes.append(f"data: {src.label} stands in for US Population Centers ({NOT_REPRODUCIBLE})")
    t.notes.append(f"generator: {gspec.metadata()}")
    return t


def _summary(fig: Callable, figure: str, D: int, F: float):
    def build(seed, n):
        full = fig(seed, n)
        avg = next(r for r in full.rows if r.label == "Average")
        rows = [Row("Average of simulable data sets", avg.values, avg.mad, avg.max_abs_dev)]
        t = Table(figure, full.title, full.columns, rows,
                  f"Limit of k/x infinitely expanded D={D} F={F}", tuple(_gl(D, F)))
        t.notes.append(f"averaged over {len(full.simulated())} generator rows; "
                       f"real-data rows omitted ({NOT_REPRODUCIBLE})")
        return t
    return build


SECOND_ORDER_RUNS = ((0.5, 0.07), (0.0, 0.30), (0.63, 0.00045))


def _second_order(seed, n):
    data, gspec = _sample(LOG_ROWS[1], n, row_seed(seed, 0))
    law = theory.benford_second_order(10).values
    rows = []
    for S, W in SECOND_ORDER_RUNS:
        s = second_order_scheme(10, 14, S, W)
        rows.append(_measure(f"Starting at {S}, initial width {W}",
                             proportions(tally(s, data)), law))
    cols = [f"Bin {i}" for i in range(10)]
    t = Table("second_order", "Ten-bin scheme, factors {1 x8, 10} repeated", cols, rows,
              "Digital BL 2nd Order Distribution", tuple(law))
    t.notes.append(f"data: {LOG_ROWS[1].label} stands in for US Population Centers")
    return t


FIGURES: dict[str, Callable[[int, int], Table]] = {
    "fig1": _fig1,
    "fig2": _fig2,
    "fig3": _fig3,
    "fig4": _fig4,
    "fig5": _fig5,
    "fig6": _fig6,
    "fig7": _fig7,
    "schemeA": _summary(_fig1, "schemeA", 4, 8),
    "schemeB": _summary(_fig2, "schemeB", 7, 3),
    "second_order": _second_order,
}


def reproduce(figure: str, seed: int = 0, n: int = 100_000) -> Table:
    try:
        build = FIGURES[figure]
    except KeyError:
        raise ValueError(f"unknown figure {figure!r}; choose from {', '.join(FIGURES)}") from None
    return build(seed, n)
