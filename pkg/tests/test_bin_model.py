import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from binschemes.bin_model import (
    BinSchemeSpec,
    BinTally,
    EmptyDataError,
    ProportionVector,
    SchemeError,
    Vector,
    layout,
    require_valid,
    validate_scheme,
)


def test_defaults():
    s = BinSchemeSpec.constant(9, 10)
    assert (s.start, s.width) == (0.0, 0.0005)
    assert s.is_constant and s.n_cycles is None


def test_vector_cycle_count():
    s = BinSchemeSpec.vector(5, [2, 3, 4])
    assert not s.is_constant
    assert s.n_cycles == 4


@pytest.mark.parametrize("spec,violation", [
    (BinSchemeSpec.constant(0, 2), "bins ≥ 1"),
    (BinSchemeSpec.constant(3, 2, 0, 0), "width > 0"),
    (BinSchemeSpec.constant(3, 2, -1, 1), "start ≥ 0"),
    (BinSchemeSpec.constant(3, 0), "every factor > 0"),
    (BinSchemeSpec.vector(3, [2, -1]), "every factor > 0"),
])
def test_validation_reports(spec, violation):
    res = validate_scheme(spec)
    assert not res.ok
    assert violation in res.violations
    with pytest.raises(SchemeError):
        require_valid(spec)


def test_valid_scheme():
    assert validate_scheme(BinSchemeSpec.constant(4, 8, 0, 0.0008)).ok


def test_layout_closed_form():
    s = BinSchemeSpec.constant(4, 8, 0, 0.0008)
    lay = layout(s, 2)
    assert lay.cycle_start == pytest.approx(4 * 0.0008 * (1 + 8))
    assert lay.bin_width == pytest.approx(0.0008 * 64)


def test_layout_flat():
    s = BinSchemeSpec.constant(3, 1, 2, 0.5)
    assert layout(s, 4).cycle_start == pytest.approx(2 + 4 * 3 * 0.5)
    assert layout(s, 4).bin_width == 0.5


def test_layout_rejects_bad_cycle():
    with pytest.raises(SchemeError):
        layout(BinSchemeSpec.constant(3, 2), -1)
    with pytest.raises(SchemeError):
        layout(BinSchemeSpec.vector(3, [2, 2]), 3)


def test_vector_layout_matches_cumulative_widths():
    s = BinSchemeSpec.vector(2, [2, 3, 0.5], 1.0, 1.0)
    widths = [layout(s, c).bin_width for c in range(4)]
    assert widths == [1.0, 2.0, 6.0, 3.0]
    assert layout(s, 3).cycle_start == pytest.approx(1 + 2 * (1 + 2 + 6))


@settings(max_examples=200, deadline=None)
@given(D=st.integers(1, 12), F=st.floats(0.2, 20), S=st.floats(0, 100),
       W=st.floats(1e-4, 10), c=st.integers(0, 30))
def test_constant_cycles_are_contiguous(D, F, S, W, c):
    s = BinSchemeSpec.constant(D, F, S, W)
    a, b = layout(s, c), layout(s, c + 1)
    end = a.cycle_start + D * a.bin_width
    assert math.isclose(end, b.cycle_start, rel_tol=1e-12, abs_tol=1e-12 * W)
    assert b.bin_width == pytest.approx(a.bin_width * F, rel=1e-12)


@settings(max_examples=100, deadline=None)
@given(D=st.integers(1, 8), fs=st.lists(st.floats(0.1, 12), min_size=1, max_size=25),
       W=st.floats(1e-3, 5))
def test_vector_cycles_are_contiguous(D, fs, W):
    s = BinSchemeSpec.vector(D, fs, 0, W)
    for c in range(len(fs)):
        a, b = layout(s, c), layout(s, c + 1)
        assert a.edges(D)[-1] == pytest.approx(b.cycle_start, rel=1e-12)


def test_edges_strictly_increase():
    e = layout(BinSchemeSpec.constant(7, 3, 0, 0.0008), 5).edges(7)
    assert len(e) == 8 and np.all(np.diff(e) > 0)


def test_tally_properties_and_merge():
    s = BinSchemeSpec.constant(2, 2)
    a = BinTally.from_mapping(s, {0: [1, 2], 3: [4, 0]}, below_range=1)
    b = BinTally.from_mapping(s, {3: [1, 1], 5: [0, 2]}, excluded_nonpositive=2)
    m = a + b
    assert m.per_cycle_counts == {0: (1, 2), 3: (5, 1), 5: (0, 2)}
    assert m.in_range == 11 and m.total == 14
    assert m.coverage == pytest.approx(11 / 12)
    assert list(m.rank_totals) == [6, 5]
    assert m == b + a


def test_tally_merge_needs_same_scheme():
    a = BinTally.from_mapping(BinSchemeSpec.constant(2, 2), {0: [1, 1]})
    b = BinTally.from_mapping(BinSchemeSpec.constant(2, 3), {0: [1, 1]})
    with pytest.raises(SchemeError):
        a.merge(b)


def test_tally_is_immutable():
    t = BinTally.from_mapping(BinSchemeSpec.constant(2, 2), {0: [1, 1]})
    with pytest.raises(ValueError):
        t.counts[0, 0] = 5


def test_proportion_vector_checks():
    assert ProportionVector.from_counts([1, 3]).values == (0.25, 0.75)
    with pytest.raises(EmptyDataError):
        ProportionVector.from_counts([0, 0])
    with pytest.raises(ValueError):
        ProportionVector([0.5, 0.6])
    with pytest.raises(ValueError):
        ProportionVector([1.5, -0.5])


def test_vector_factors_normalized():
    assert Vector([2, 3]).factors == (2.0, 3.0)
