from __future__ import annotations

import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st
from scipy.optimize import brentq

from orlicz_toeplitz.errors import DomainError, RangeError
from orlicz_toeplitz.nfunction import (Composite, Power, PowerLog, TabulatedConcaveInverse,
                                       nfunction_from_json, verify_nfunction)


def test_power_values():
    assert Power(2)(2.0) == pytest.approx(4.0, rel=1e-15)
    assert Power(2).inverse(9.0) == pytest.approx(3.0, rel=1e-14)


def test_powerlog_closed_form():
    assert PowerLog(2, 1)(1.0) == pytest.approx(math.log(2), rel=1e-14)
    t = np.array([1e-5, 0.3, 7.0, 1e4])
    assert np.allclose(PowerLog(1.5, 0.5)(t), t ** 1.5 * np.log1p(t) ** 0.5, rtol=1e-13)


def test_zero_maps_to_zero():
    for phi in (Power(2), PowerLog(2, 1), PowerLog(3, 2)):
        assert phi(0.0) == 0.0
        assert phi.inverse(0.0) == 0.0


def test_powerlog_inverse_against_brentq():
    phi = PowerLog(2, 1)
    assert phi.inverse(math.log(2)) == pytest.approx(1.0, abs=1e-10)
    for y in (1e-6, 0.5, 3.0, 1e5):
        ref = brentq(lambda t: t * t * math.log1p(t) - y, 1e-9, 1e6, xtol=1e-15, rtol=1e-15)
        assert phi.inverse(y) == pytest.approx(ref, rel=1e-10)


def test_negative_argument_rejected():
    with pytest.raises(DomainError):
        Power(2)(-1.0)


def test_tabulated_range_error_above_table():
    tab = TabulatedConcaveInverse(np.log([1.0, 2.0, 4.0]), np.log([1.0, 4.0, 16.0]))
    assert tab(3.0) == pytest.approx(9.0, rel=1e-12)
    with pytest.raises(RangeError) as exc:
        tab(10.0)
    assert exc.value.value == pytest.approx(10.0)


@given(st.floats(min_value=-6, max_value=6), st.floats(min_value=1.1, max_value=6))
def test_power_round_trip(ly, p):
    y = 10.0 ** ly
    phi = Power(p)
    assert phi(phi.inverse(y)) == pytest.approx(y, rel=1e-12)


@given(st.floats(min_value=1e-3, max_value=1e3), st.floats(min_value=1e-3, max_value=1e3))
def test_power_homogeneity(s, t):
    phi = Power(2.5)
    assert phi(s * t) == pytest.approx(s ** 2.5 * phi(t), rel=1e-13)


def test_inverse_monotone_on_grid():
    y = np.geomspace(1e-8, 1e8, 400)
    for phi in (PowerLog(2, 1), PowerLog(1.5, 0.5)):
        assert np.all(np.diff(phi.inverse(y)) > 0)


@pytest.mark.parametrize("phi", [Power(2), PowerLog(2, 1), PowerLog(3, 2)])
def test_verify_passes(phi):
    rep = verify_nfunction(phi)
    assert rep.passed, rep.failed


def test_verify_flags_concave_input():
    rep = verify_nfunction(Composite(np.sqrt, name="sqrt"))
    assert "midpoint_convex" in rep.failed


def test_json_round_trip():
    phi = nfunction_from_json({"family": "power_log", "p": 2.0, "q": 1.0})
    assert isinstance(phi, PowerLog)
    assert nfunction_from_json(phi.to_json())(3.0) == pytest.approx(phi(3.0))
    with pytest.raises(DomainError):
        nfunction_from_json({"family": "unknown"})
