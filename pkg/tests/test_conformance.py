import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from binschemes import theory
from binschemes.bin_model import BinSchemeSpec, BinTally
from binschemes.conformance import (
    DEFAULT_THRESHOLD,
    SourceKind,
    Verdict,
    build_report,
    classify,
    compare,
    digit_proportions,
    f_avg,
    first_significant_digit,
    second_order_scheme,
    second_significant_digit,
    significant_digits,
    theory_for_scheme,
)
from binschemes.engine import tally
from binschemes.generators import sample_kx


def test_compare_metrics():
    m = compare([0.5, 0.5], [0.4, 0.6])
    assert m.mad == pytest.approx(0.1)
    assert m.max_abs_dev == pytest.approx(0.1)
    assert m.ssd == pytest.approx(0.02)
    with pytest.raises(ValueError):
        compare([1.0], [0.5, 0.5])


def test_classify_boundary():
    assert classify(DEFAULT_THRESHOLD) is Verdict.Conforming
    assert classify(0.0101) is Verdict.NonConforming
    with pytest.raises(ValueError):
        classify(0.001, 0)


def test_theory_selection():
    _, src, caveat = theory_for_scheme(BinSchemeSpec.constant(4, 8))
    assert src.kind is SourceKind.GeneralLaw and caveat is None
    _, src, _ = theory_for_scheme(BinSchemeSpec.constant(4, 1))
    assert src.kind is SourceKind.FlatLimit
    vec, src, caveat = theory_for_scheme(BinSchemeSpec.vector(5, [2, 4]))
    assert src.params["f_avg"] is True and src.params["F"] == 3.0 and caveat
    assert vec == theory.general_law_vector(5, 3.0)


def test_report_on_kx():
    spec = BinSchemeSpec.constant(9, 10, 0, 0.0005)
    rep = build_report(tally(spec, sample_kx(0, 5, 50_000, 0)))
    assert rep.verdict is Verdict.Conforming
    assert rep.sample_size == 50_000 and rep.coverage == 1.0


def test_report_custom_theory():
    t = BinTally.from_mapping(BinSchemeSpec.constant(2, 2), {0: [3, 1]})
    rep = build_report(t, theoretical=theory.flat_limit(2))
    assert rep.theoretical_source.kind is SourceKind.Custom
    assert rep.mad == pytest.approx(0.25) and rep.verdict is Verdict.NonConforming


@pytest.mark.parametrize("x,d1", [(0.00502, 5), (999.9, 9), (1000.0, 1), (999.9999999999999, 1),
                                  (1.0, 1), (9.999, 9), (1e-300, 1), (7e300, 7), (314.0, 3)])
def test_first_digit(x, d1):
    assert first_significant_digit(x) == d1


@pytest.mark.parametrize("x,d2", [(0.29, 9), (314.0, 1), (1000.0, 0), (0.0105, 0), (19.9, 9)])
def test_second_digit(x, d2):
    assert second_significant_digit(x) == d2


def test_other_bases():
    assert first_significant_digit(255, 16) == 15
    assert first_significant_digit(8, 2) == 1
    assert second_significant_digit(0b110, 2) == 1


@pytest.mark.parametrize("bad", [0.0, -3.0, math.inf, math.nan])
def test_digit_domain(bad):
    with pytest.raises(ValueError):
        first_significant_digit(bad)


@given(st.floats(1e-200, 1e200))
def test_first_digit_matches_string_form(x):
    mantissa = f"{x:.15e}"
    # Only compare when the decimal form is not at a rounding boundary.
    if "999999" in mantissa[:12]:
        return
    assert first_significant_digit(x) == int(mantissa[0])


def test_digit_proportions_on_kx():
    p = digit_proportions(sample_kx(0, 6, 200_000, 1)).values
    assert max(abs(a - b) for a, b in zip(p, theory.benford_vector(10).values)) < 0.005
    p2 = digit_proportions(sample_kx(0, 6, 200_000, 1), order=2).values
    assert max(abs(a - b) for a, b in zip(p2, theory.benford_second_order(10).values)) < 0.005


def test_second_order_scheme_shape():
    s = second_order_scheme(10, 3, 0, 0.001)
    assert s.bins == 10 and s.expansion.factors == tuple([1.0] * 8 + [10.0]) * 3
    with pytest.raises(ValueError):
        second_order_scheme(2, 3)


def test_second_order_scheme_ranks_are_second_digits():
    # Launched at S = 10W the cycles are first digits 1..9, ranks are second digits + 1.
    s = second_order_scheme(10, 4, 10.0, 1.0)
    x = np.array([10.0, 15.5, 23.0, 99.9, 100.0, 170.0, 995.0])
    t = tally(s, x)
    got = []
    for v in x:
        one = tally(s, [v])
        got.append(int(np.flatnonzero(one.rank_totals)[0]))  # rank - 1
    assert got == list(significant_digits(x, 10, 2))
    assert t.in_range == len(x)


def test_f_avg():
    assert f_avg([2, 3, 4]) == 3.0
    with pytest.raises(ValueError):
        f_avg([])
