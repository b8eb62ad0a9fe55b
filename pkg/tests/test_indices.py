from __future__ import annotations

import math

import numpy as np
import pytest

from orlicz_toeplitz.indices import (dilation, dilation_exponents, dilation_limits, inverse_log_function,
                                     matuszewska_orlicz_indices)
from orlicz_toeplitz.nfunction import Composite, Power, PowerLog, TabulatedConcaveInverse


def brute_dilation(f, t, lo=-20, hi=20, n=200001):
    u = np.logspace(lo, hi, n)
    return float(np.max(f(t * u) / f(u)))


def test_power_dilation_is_constant():
    for t in (0.01, 0.5, 3.0, 100.0):
        assert dilation(Power(2.5), t).value == pytest.approx(t ** 2.5, rel=1e-10)


def test_dilation_at_one():
    assert dilation(PowerLog(2, 1), 1.0).value == pytest.approx(1.0, abs=1e-14)


def test_powerlog_dilation_against_brute_force():
    f = lambda x: x * x * np.log1p(x)  # noqa: E731
    v = dilation(PowerLog(2, 1), 10.0).value
    assert 100.0 <= v <= 1000.0 * (1 + 1e-9)
    assert v == pytest.approx(brute_dilation(f, 10.0), rel=1e-6)


def test_dilation_limits():
    lim = dilation_limits(Power(3), 2.0)
    assert lim.m0 == pytest.approx(8.0) and lim.m_inf == pytest.approx(8.0)
    lim = dilation_limits(PowerLog(2, 1), 2.0)
    f = lambda u: (2 * u) ** 2 * math.log1p(2 * u) / (u * u * math.log1p(u))  # noqa: E731
    assert lim.m0 == pytest.approx(f(1e-8), rel=1e-6)
    assert lim.m_inf == pytest.approx(4.0, rel=0.01)
    one = dilation_limits(PowerLog(2, 1), 1.0)
    assert (one.m0, one.m_inf) == pytest.approx((1.0, 1.0))


def test_power_indices():
    rep = matuszewska_orlicz_indices(Power(2.5))
    for v in (rep.alpha, rep.beta, rep.alpha0, rep.beta0, rep.alpha_inf, rep.beta_inf):
        assert v == pytest.approx(2.5, abs=0.01)
    assert matuszewska_orlicz_indices(Power(2)).reflexive


@pytest.mark.parametrize("p,q", [(2, 0), (2, 1), (1.5, 0.5), (3, 2)])
def test_powerlog_indices_and_chain(p, q):
    rep = matuszewska_orlicz_indices(PowerLog(p, q))
    assert rep.alpha == pytest.approx(p, abs=0.05)
    assert rep.beta == pytest.approx(p + q, abs=0.05)
    assert rep.chain_holds(slack=0.01)


def test_scaling_invariance():
    ref = matuszewska_orlicz_indices(Power(3))
    scaled = matuszewska_orlicz_indices(Composite(lambda t: 7.0 * t ** 3, inverse=lambda y: (y / 7.0) ** (1 / 3)))
    assert scaled.alpha == pytest.approx(ref.alpha, abs=1e-6)
    assert scaled.beta == pytest.approx(ref.beta, abs=1e-6)


def test_inverse_exponents():
    e = dilation_exponents(inverse_log_function(Power(4)))
    assert (e.gamma, e.delta) == pytest.approx((0.25, 0.25), abs=1e-6)
    e = dilation_exponents(inverse_log_function(PowerLog(2, 1)))
    assert e.gamma == pytest.approx(1 / 3, abs=0.05)
    assert e.delta == pytest.approx(1 / 2, abs=0.05)


def test_inverse_index_duality():
    for phi in (PowerLog(2, 1), PowerLog(1.5, 0.5), PowerLog(3, 2)):
        rep = matuszewska_orlicz_indices(phi)
        e = dilation_exponents(inverse_log_function(phi))
        assert e.gamma == pytest.approx(1 / rep.beta, abs=0.02)
        assert e.delta == pytest.approx(1 / rep.alpha, abs=0.02)


def test_constant_slope_table():
    x = np.linspace(-20, 20, 81)
    tab = TabulatedConcaveInverse(x, 2.5 * x)
    e = dilation_exponents(inverse_log_function(tab))
    assert (e.gamma, e.delta) == pytest.approx((0.4, 0.4), abs=1e-9)
