from __future__ import annotations

from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from orlicz_toeplitz.acceptance import brute_force_majorant
from orlicz_toeplitz.errors import DomainError, IndicesOutOfRangeError
from orlicz_toeplitz.indices import IndexReport, matuszewska_orlicz_indices
from orlicz_toeplitz.majorant import (build_phi_theta, default_theta, exponent_transform_check,
                                      least_concave_majorant, psi_theta, theta_range)
from orlicz_toeplitz.nfunction import Power, PowerLog


def _report(alpha, beta):
    unc = {k: 0.0 for k in ("alpha", "beta", "alpha0", "beta0", "alpha_inf", "beta_inf")}
    return IndexReport(alpha, beta, alpha, beta, alpha, beta, None, None, unc, True, False)


def test_theta_range_formula():
    assert theta_range(_report(3, 3))[1] == pytest.approx(2 / 3)
    assert theta_range(_report(2, 2))[1] == pytest.approx(1.0)
    assert theta_range(_report(2, 3))[1] == pytest.approx(2 / 3)
    with pytest.raises(IndicesOutOfRangeError):
        theta_range(_report(1.0, 2.0))


def test_psi_theta_values():
    assert psi_theta(Power(4), 0.25, 64.0) == pytest.approx(2.0, rel=1e-13)
    phi = PowerLog(2, 1)
    assert psi_theta(phi, 0.3, 1.0) == pytest.approx(phi.inverse(1.0) ** (1 / 0.7), rel=1e-12)
    t = np.geomspace(1e-4, 1e4, 9)
    assert np.allclose(psi_theta(Power(2), 0.6, t), np.sqrt(t), rtol=1e-12)
    assert psi_theta(Power(2), 0.6, 0.0) == 0.0
    with pytest.raises(DomainError):
        psi_theta(Power(2), 1.2, 1.0)


def test_envelope_of_concave_samples_is_identity():
    t = np.geomspace(1e-2, 1e2, 50)
    env = least_concave_majorant((t, np.sqrt(t)))
    assert np.allclose(env(t), np.sqrt(t), rtol=1e-14)


def test_envelope_chord_example():
    env = least_concave_majorant([(Fraction(0), Fraction(0)), (Fraction(1), Fraction(1, 10)), (Fraction(2), Fraction(2))])
    assert env.exact(Fraction(1)) == 1
    assert Fraction(1) not in env.breakpoints


def test_envelope_rejects_bad_input():
    with pytest.raises(DomainError):
        least_concave_majorant([(2.0, 1.0), (1.0, 2.0)])
    with pytest.raises(DomainError):
        least_concave_majorant([(1.0, -1.0)])


samples = st.lists(st.tuples(st.integers(1, 60), st.integers(1, 60)), min_size=1, max_size=12,
                   unique_by=lambda p: p[0]).map(lambda xs: sorted(xs))


@given(samples)
def test_envelope_matches_brute_force(pts):
    ts = [Fraction(t) for t, _ in pts]
    vs = [Fraction(v) for _, v in pts]
    env = least_concave_majorant(list(zip(ts, vs)))
    for t in ts + [Fraction(1, 3)] + [(a + b) / 2 for a, b in zip(ts, ts[1:])]:
        if t <= ts[-1]:
            assert env.exact(t) == brute_force_majorant(ts, vs, t)


@given(samples)
def test_envelope_idempotent(pts):
    env = least_concave_majorant([(Fraction(t), Fraction(v)) for t, v in pts])
    again = least_concave_majorant(list(zip(env.breakpoints, env.values)))
    assert again.breakpoints == env.breakpoints and again.values == env.values


def test_fixed_point_t_squared():
    pt = build_phi_theta(Power(2), 0.5)
    t = np.geomspace(1e-4, 1e4, 500)
    assert np.max(np.abs(pt.phi_theta(t) / t ** 2 - 1)) <= 1e-3
    assert pt.c_interp == pytest.approx(2.0, rel=1e-9)


def test_power_law_exponent():
    pt = build_phi_theta(Power(4), 0.25)
    t = np.geomspace(1e-4, 1e4, 500)
    assert np.max(np.abs(pt.phi_theta(t) / t ** 6 - 1)) <= 1e-3


def test_envelope_dominates_and_round_trip():
    pt = build_phi_theta(PowerLog(2, 1), 0.3)
    env = pt.envelope(pt.s)
    ratio = env / pt.psi
    assert ratio.min() >= 1 - 1e-12
    assert pt.c1 <= ratio.min() * (1 + 1e-9) and ratio.max() <= pt.c2 * (1 + 1e-9)
    # table is log-log interpolated, envelope linear between breakpoints
    t = np.geomspace(1e-3, 1e3, 50)
    assert np.allclose(pt.envelope(pt.phi_theta(t)), t, rtol=1e-4)
    rep = pt.index_report
    assert 1 < rep.alpha <= rep.beta + 1e-6 and np.isfinite(rep.beta)


def test_default_theta_is_midpoint():
    rep = matuszewska_orlicz_indices(PowerLog(2, 1))
    assert default_theta(rep) == pytest.approx(theta_range(rep)[1] / 2)


def test_exponent_transform_examples():
    rep = exponent_transform_check(Power(2), 0.4)
    assert rep.gamma_psi == pytest.approx(0.5, abs=1e-6) and rep.gamma_pred == pytest.approx(0.5, abs=1e-6)
    rep = exponent_transform_check(Power(4), 0.25)
    assert rep.gamma_psi == pytest.approx(1 / 6, abs=1e-6)
    phi = PowerLog(2, 1)
    rep = exponent_transform_check(phi, 0.3, pt=build_phi_theta(phi, 0.3))
    assert rep.passed
