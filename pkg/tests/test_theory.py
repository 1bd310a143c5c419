import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy import integrate

from binschemes import theory

# Frozen oracle values, evaluated once with mpmath at 30 digits.
GL_4_8 = [0.4864772062124324, 0.23683112760167171, 0.15797706277747078, 0.1187146034084251]
SECOND_ORDER_10 = [0.11967926859688077, 0.11389010340755644, 0.10882149900550837,
                   0.10432956023095946, 0.10030820226757935, 0.09667723580232253,
                   0.09337473578303612, 0.09035198926960337, 0.0875700535788614,
                   0.0849973520576922]


def test_general_law_frozen():
    got = [theory.general_law(4, 8, d) for d in range(1, 5)]
    assert got == pytest.approx(GL_4_8, abs=1e-13)


def test_general_law_fractional_factor():
    assert theory.general_law(5, 4.55, 2) == pytest.approx(0.2292, abs=5e-5)


@settings(max_examples=200, deadline=None)
@given(D=st.integers(1, 30), F=st.floats(0.05, 1e6))
def test_general_law_normalized_and_monotone(D, F):
    v = theory.general_law_vector(D, F).values
    assert math.fsum(v) == pytest.approx(1.0, abs=1e-12)
    diffs = np.diff(v)
    if F > 1:
        assert np.all(diffs <= 1e-15)
    elif F < 1:
        assert np.all(diffs >= -1e-15)


@settings(max_examples=100, deadline=None)
@given(D=st.integers(1, 20), eps=st.floats(1e-12, 1e-6))
def test_flat_continuity(D, eps):
    for F in (1 + eps, 1 - eps):
        v = theory.general_law_vector(D, F).values
        assert max(abs(p - 1 / D) for p in v) < 1e-5


@pytest.mark.parametrize("base", range(2, 17))
def test_benford_is_law_at_D_plus_one(base):
    for d in range(1, base):
        assert theory.benford(base, d) == pytest.approx(
            theory.general_law(base - 1, base, d), abs=1e-14)


def test_benford_second_order_frozen():
    assert list(theory.benford_second_order(10).values) == pytest.approx(SECOND_ORDER_10, abs=1e-12)


def test_second_order_by_counting_digits():
    # Sum the exact first-two-digit probabilities directly.
    expect = [sum(math.log10(1 + 1 / (10 * a + b)) for a in range(1, 10)) for b in range(10)]
    assert list(theory.benford_second_order(10).values) == pytest.approx(expect, abs=1e-14)


@pytest.mark.parametrize("bad", [(0, 2, 1), (3, 0, 1), (3, -1, 1), (3, 2, 4), (3, 2, 0)])
def test_general_law_domain(bad):
    with pytest.raises(ValueError):
        theory.general_law(*bad)


def _quad_series(D, F, n):
    mass = np.zeros(D)
    start, width = 1.0, 1.0
    for _ in range(n):
        for r in range(D):
            lo = start + r * width
            mass[r] += integrate.quad(lambda x: 1 / x, lo, lo + width, epsabs=0, epsrel=1e-13)[0]
        start += D * width
        width *= F
    return mass / mass.sum()


@pytest.mark.parametrize("D,F,n", [(2, 5, 6), (3, 0.7, 5), (6, 3.36, 4), (5, 1.0, 7)])
def test_series_against_quadrature(D, F, n):
    got = theory.series_vector(D, F, n).values
    assert list(got) == pytest.approx(list(_quad_series(D, F, n)), abs=1e-10)


def test_series_stable_for_large_N():
    v = theory.series_vector(4, 8, 10_000).values
    assert all(math.isfinite(p) for p in v)
    assert max(abs(a - b) for a, b in zip(v, GL_4_8)) < 1e-5


def test_series_table_matches_pointwise():
    table = theory.series_table(7, 3, 40)
    for N in (1, 2, 17, 40):
        assert list(table[N - 1]) == pytest.approx(
            [theory.series_SN(7, 3, d, N) for d in range(1, 8)], abs=1e-14)


@settings(max_examples=40, deadline=None)
@given(D=st.integers(1, 12), F=st.floats(1.01, 50), N=st.integers(1, 400))
def test_series_normalized(D, F, N):
    assert math.fsum(theory.series_vector(D, F, N).values) == pytest.approx(1, abs=1e-12)


def test_series_benford_invariant_in_N():
    for N in (1, 5, 50, 500):
        assert list(theory.series_vector(9, 10, N).values) == pytest.approx(
            list(theory.benford_vector(10).values), abs=1e-12)


@pytest.mark.parametrize("D,F,tol,expected", [(7, 3, 1e-3, 227), (9, 10, 1e-9, 1),
                                              (10, 1.05, 1e-3, 9990)])
def test_convergence_profile_frozen(D, F, tol, expected):
    res = theory.convergence_profile(D, F, tol)
    assert res.converged and res.n_reached == expected
    assert res.max_abs_gap <= tol


def test_convergence_profile_cap():
    res = theory.convergence_profile(10, 1.05, 1e-3, n_max=500)
    assert not res.converged and res.n_reached == 500 and res.max_abs_gap > 1e-3


def test_kx_segments():
    seg = theory.kx_segment_proportions(1, 100, [1, 10, 100]).values
    assert seg == pytest.approx((0.5, 0.5), abs=1e-15)
    with pytest.raises(ValueError):
        theory.kx_segment_proportions(1, 100, [1, 50, 40, 100])
    with pytest.raises(ValueError):
        theory.kx_segment_proportions(1, 100, [2, 100])


# A D=10 constant-factor law that happens to sit near the second-digit law.
# Observation only: there is no derivation, so this is not an API guarantee.
SECOND_ORDER_LOOKALIKE_F = 1.49106


def test_second_order_lookalike_factor():
    a = theory.general_law_vector(10, SECOND_ORDER_LOOKALIKE_F).values
    b = theory.benford_second_order(10).values
    assert max(abs(x - y) for x, y in zip(a, b)) < 1.5e-3
