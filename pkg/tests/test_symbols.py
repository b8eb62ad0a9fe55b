from __future__ import annotations

import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st
from scipy.integrate import quad

from orlicz_toeplitz.errors import SymbolError
from orlicz_toeplitz.symbols import (BumpFunction, PiecewiseC1, TrigPoly, bump_infimum, fejer_mean,
                                     fourier_coefficient, local_distance, make_bump, stechkin_bound,
                                     symbol_from_json, total_variation)

SAW = {"kind": "piecewise", "pieces": [{"from": -math.pi, "to": math.pi, "expr": "theta"}]}
HAT = {"kind": "piecewise", "pieces": [{"from": -math.pi, "to": 0.0, "expr": "-theta"},
                                       {"from": 0.0, "to": math.pi, "expr": "theta"}]}


def coeff_oracle(f, k):
    re = quad(lambda t: (f(t) * np.exp(-1j * k * t)).real, -math.pi, math.pi, limit=200)[0]
    im = quad(lambda t: (f(t) * np.exp(-1j * k * t)).imag, -math.pi, math.pi, limit=200)[0]
    return complex(re, im) / (2 * math.pi)


def test_chi_coefficients():
    a = TrigPoly.chi(3)
    assert fourier_coefficient(a, 3) == 1 and fourier_coefficient(a, 2) == 0
    cos2 = TrigPoly({1: 1.0, -1: 1.0})
    assert np.allclose(cos2.evaluate(np.array([0.0, 1.0])), 2 * np.cos([0.0, 1.0]))


def test_sawtooth_coefficients():
    saw = symbol_from_json(SAW)
    for k in (1, 2, 3, -4, 7):
        assert fourier_coefficient(saw, k) == pytest.approx(1j * (-1) ** k / k, abs=1e-10)
    assert fourier_coefficient(saw, 0) == pytest.approx(0, abs=1e-12)


def test_piecewise_coefficients_against_quadrature():
    hat = symbol_from_json(HAT)
    for k in range(-3, 4):
        assert fourier_coefficient(hat, k) == pytest.approx(coeff_oracle(np.abs, k), abs=1e-10)


def test_total_variation():
    assert total_variation(TrigPoly.constant(2.0)) == 0.0
    assert total_variation(TrigPoly.chi(1)) == pytest.approx(2 * math.pi, rel=1e-10)
    # sawtooth: 2 pi of slope plus a jump of 2 pi at the wrap
    assert total_variation(symbol_from_json(SAW)) == pytest.approx(4 * math.pi, rel=1e-10)
    assert total_variation(symbol_from_json(HAT)) == pytest.approx(2 * math.pi, rel=1e-10)


@given(st.floats(-math.pi, math.pi), st.floats(0.05, 3.0), st.floats(0.05, 0.95))
def test_bump_structure(tau, w, frac):
    f = make_bump(tau, w, frac * w)
    assert f.evaluate(tau) == pytest.approx(1.0)
    assert f.evaluate(tau + w + 0.5 * (math.pi - w)) == pytest.approx(0.0, abs=1e-15)
    assert total_variation(f) == pytest.approx(2.0, abs=1e-9)
    assert stechkin_bound(f) == pytest.approx(3.0, abs=1e-9)


def test_bump_rejects_bad_widths():
    with pytest.raises(SymbolError):
        BumpFunction(0.0, 0.5, 0.6)


def test_stechkin_examples():
    assert stechkin_bound(TrigPoly.constant(1.0), 2.5) == pytest.approx(2.5)
    assert stechkin_bound(TrigPoly.chi(1), 1.0) == pytest.approx(1 + 2 * math.pi, rel=1e-10)


def test_fejer_mean():
    assert fejer_mean(TrigPoly.chi(1), 1).coeffs[1] == pytest.approx(0.5)
    c = TrigPoly.constant(3.0)
    assert fejer_mean(c, 4).coeffs == {0: 3.0}


@given(st.integers(0, 2 ** 31), st.integers(3, 12))
def test_fejer_sup_error_bound(seed, n):
    a = TrigPoly.random(np.random.default_rng(seed), 3)
    bound = sum(abs(c) * abs(k) for k, c in a.coeffs.items()) / (n + 1)
    th = np.linspace(-math.pi, math.pi, 2001)
    err = np.max(np.abs(fejer_mean(a, n).evaluate(th) - a.evaluate(th)))
    assert err <= bound + 1e-12


def test_local_distance_examples():
    a = TrigPoly.random(np.random.default_rng(1), 3)
    assert local_distance(a, a, 0.3).value == 0.0
    # equal on a neighbourhood of tau, different elsewhere
    b = PiecewiseC1.from_exprs([(-math.pi, 1.0, "theta"), (1.0, math.pi, "theta + 5")])
    c = PiecewiseC1.from_exprs([(-math.pi, math.pi, "theta")])
    assert local_distance(b, c, 0.0).value == 0.0
    # jump of height 2 at tau = 0.5, compared with the right-hand value
    step = PiecewiseC1.from_exprs([(-math.pi, 0.5, "0"), (0.5, math.pi, "2")])
    assert local_distance(step, TrigPoly.constant(2.0), 0.5).value == pytest.approx(2.0, abs=1e-9)
    assert bump_infimum(step, TrigPoly.constant(2.0), 0.5).value == pytest.approx(2.0, abs=1e-9)


def test_local_distance_wraps():
    saw = symbol_from_json(SAW)
    d = local_distance(saw, TrigPoly.constant(math.pi), -math.pi).value
    assert d == pytest.approx(2 * math.pi, abs=1e-6)


def test_bump_refinement_never_increases_infimum():
    a = TrigPoly.random(np.random.default_rng(4), 2)
    b = TrigPoly.constant(0.0)
    coarse = bump_infimum(a, b, 0.7, widths=[1.0, 0.5])
    fine = bump_infimum(a, b, 0.7, widths=[1.0, 0.5, 0.1, 0.01])
    assert fine.value <= coarse.value


def test_partition_property():
    f1, f2 = make_bump(0.0, 1.0, 0.6), make_bump(0.2, 1.5, 0.8)
    f = make_bump(0.1, 0.2, 0.1)
    th = np.linspace(-math.pi, math.pi, 20001)
    for g in (f1, f2):
        assert np.allclose(g.evaluate(th) * f.evaluate(th), f.evaluate(th), atol=1e-15)


def test_json_round_trip_and_errors():
    a = TrigPoly({0: 1.0, 2: 0.5 - 0.25j})
    b = symbol_from_json(a.to_json())
    assert b.coeffs == a.coeffs
    saw = symbol_from_json(SAW)
    assert symbol_from_json(saw.to_json()).evaluate(0.4) == pytest.approx(0.4)
    with pytest.raises(SymbolError):
        symbol_from_json({"kind": "piecewise", "pieces": [{"from": -math.pi, "to": math.pi, "expr": "__import__('os')"}]})
    with pytest.raises(SymbolError):
        symbol_from_json({"kind": "piecewise", "pieces": [{"from": -math.pi, "to": 0, "expr": "1"}]})
    with pytest.raises(SymbolError):
        symbol_from_json({"kind": "nope"})
