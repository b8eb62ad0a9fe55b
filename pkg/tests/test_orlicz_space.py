from __future__ import annotations

import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st
from scipy.optimize import brentq

from orlicz_toeplitz.errors import DomainError
from orlicz_toeplitz.majorant import build_phi_theta
from orlicz_toeplitz.nfunction import Power, PowerLog
from orlicz_toeplitz.orlicz_space import (AscentConfig, FiniteSequence, calderon_factorize,
                                          calderon_postconditions, interpolation_bound_check,
                                          lattice_operator_bound, luxemburg_norm, modular,
                                          multiplier_inclusion_check, operator_norm_lower_bounds, p_norm)
from orlicz_toeplitz.symbols import TrigPoly


def brute_norm(phi, vals):
    """Luxemburg norm by root finding on the modular.

    Convexity brackets the root: the modular exceeds 1 at ``max|a| / (2 c)``
    and is at most 1 at ``sum|a| / c`` where ``c = Phi^{-1}(1)``.
    """
    a = np.abs(vals)
    c = phi.inverse(1.0)
    return brentq(lambda lam: float(np.sum(phi(a / lam))) - 1.0, a.max() / (2 * c), 2 * a.sum() / c,
                  xtol=1e-300, rtol=1e-15)


def test_finite_sequence_normalises():
    f = FiniteSequence([3, -1, 2], [1.0, 0.0, 2j])
    assert list(f.support) == [2, 3]
    assert f.size == 2
    with pytest.raises(DomainError):
        FiniteSequence([1, 1], [1.0, 2.0])
    g = FiniteSequence.from_json([[0, 1.0, 0.0], [5, 0.0, -2.0]])
    assert FiniteSequence.from_json(g.to_json()).size == 2


def test_modular_examples():
    assert modular(Power(2), FiniteSequence([0], [3.0]), 1.0) == pytest.approx(9.0)
    assert modular(PowerLog(2, 1), FiniteSequence([0, 1], [1.0, 1.0]), 1.0) == pytest.approx(2 * math.log(2))
    assert modular(Power(2), FiniteSequence([], []), 1.0) == 0.0
    with pytest.raises(DomainError):
        modular(Power(2), FiniteSequence([0], [1.0]), 0.0)


def test_norm_examples():
    assert luxemburg_norm(Power(2), FiniteSequence([0, 1], [1.0, 1.0])) == pytest.approx(math.sqrt(2), rel=1e-14)
    assert luxemburg_norm(Power(3.5), FiniteSequence([0], [1.0])) == pytest.approx(1.0, rel=1e-14)
    phi = PowerLog(2, 1)
    assert luxemburg_norm(phi, FiniteSequence([0], [1.0])) == pytest.approx(1 / phi.inverse(1.0), abs=1e-10)
    assert luxemburg_norm(phi, FiniteSequence([], [])) == 0.0


def test_norm_modular_is_one(rng):
    phi = PowerLog(2, 1)
    for _ in range(50):
        x = rng.standard_normal(int(rng.integers(1, 30))) * 10.0 ** rng.uniform(-4, 4)
        n = luxemburg_norm(phi, x)
        assert 1 - 1e-10 <= modular(phi, x, n) <= 1 + 1e-12
        assert n == pytest.approx(brute_norm(phi, x), rel=1e-10)


vectors = st.lists(st.floats(-1e3, 1e3, allow_nan=False), min_size=1, max_size=20).filter(
    lambda v: max(abs(x) for x in v) > 1e-6)


@given(vectors, st.floats(1e-3, 1e3), st.sampled_from([2.0, 3.0]))
def test_power_norm_is_p_norm_and_homogeneous(v, c, p):
    phi = Power(p)
    n = luxemburg_norm(phi, v)
    assert n == pytest.approx(p_norm(v, p), rel=1e-10)
    assert luxemburg_norm(phi, np.array(v) * c) == pytest.approx(c * n, rel=1e-12)


@given(vectors, vectors)
def test_triangle_and_lattice(u, v):
    phi = PowerLog(2, 1)
    m = min(len(u), len(v))
    a, b = np.array(u[:m]), np.array(v[:m])
    assert luxemburg_norm(phi, a + b) <= (luxemburg_norm(phi, a) + luxemburg_norm(phi, b)) * (1 + 1e-12)
    assert luxemburg_norm(phi, 0.5 * a) <= luxemburg_norm(phi, a)


def test_rearrangement_invariance(rng):
    phi = PowerLog(1.5, 0.5)
    x = rng.standard_normal(17) + 1j * rng.standard_normal(17)
    base = luxemburg_norm(phi, FiniteSequence(np.arange(17), x))
    perm = rng.permutation(17)
    assert luxemburg_norm(phi, FiniteSequence(np.arange(17) * 3 - 40, x[perm])) == pytest.approx(base, rel=1e-13)


def test_calderon_trivial_case():
    fac = calderon_factorize(Power(2), Power(2), 0.5, FiniteSequence([0], [1.0]), phi=Power(2))
    assert fac.lam == pytest.approx(1.0)
    assert np.allclose(fac.y.values, [1.0]) and np.allclose(fac.z.values, [1.0])
    with pytest.raises(DomainError):
        calderon_factorize(Power(2), Power(2), 0.5, FiniteSequence([], []), phi=Power(2))


def test_calderon_power_example():
    theta = 0.3
    pt = build_phi_theta(Power(2), theta)
    x = FiniteSequence([0, 1], [1.0, 1.0])
    fac = calderon_factorize(pt.phi_theta, Power(2), theta, x, phi=Power(2), c1=pt.c1)
    post = calderon_postconditions(fac, pt.phi_theta, Power(2), theta, x)
    assert post["y_unit_ball"] and post["z_unit_ball"] and post["pointwise"]


@given(st.lists(st.floats(-1e2, 1e2, allow_nan=False), min_size=1, max_size=15).filter(lambda v: max(map(abs, v)) > 1e-3))
def test_calderon_property(v):
    phi = PowerLog(2, 1)
    pt = _pt_powerlog()
    fac = calderon_factorize(pt.phi_theta, Power(2), pt.theta, v, phi=phi, c1=pt.c1)
    post = calderon_postconditions(fac, pt.phi_theta, Power(2), pt.theta, v)
    assert post["y_unit_ball"] and post["z_unit_ball"] and post["pointwise"]


_CACHE = {}


def _pt_powerlog():
    if "pt" not in _CACHE:
        _CACHE["pt"] = build_phi_theta(PowerLog(2, 1), 0.3)
    return _CACHE["pt"]


def test_ascent_matches_spectral_norm_for_l2(rng):
    M = rng.standard_normal((6, 6)) + 1j * rng.standard_normal((6, 6))
    lb = operator_norm_lower_bounds(Power(2), M, seed=1, config=AscentConfig(starts=4, steps=50))
    assert lb == pytest.approx(np.linalg.norm(M, 2), rel=1e-10)


def test_lattice_bound_is_upper_bound_on_l1_and_linf(rng):
    M = rng.standard_normal((5, 5))
    up = lattice_operator_bound(M)
    assert up >= np.abs(M).sum(axis=0).max() - 1e-12 and up >= np.abs(M).sum(axis=1).max() - 1e-12


def test_interpolation_identity_and_l2_case():
    pt = _pt_powerlog()
    rep = interpolation_bound_check(np.eye(4), PowerLog(2, 1), pt, ascent=AscentConfig(starts=4, steps=20))
    assert float(rep.lhs_lower) == pytest.approx(1.0, rel=1e-9)
    assert float(rep.rhs) == pytest.approx(pt.c_interp)
    assert rep.violations == 0
    pt2 = build_phi_theta(Power(2), 0.4)
    M = np.random.default_rng(3).standard_normal((3, 8, 8))
    rep = interpolation_bound_check(M, Power(2), pt2, ascent=AscentConfig(starts=8, steps=60))
    assert rep.violations == 0


def test_multiplier_inclusion():
    pt = _pt_powerlog()
    one = multiplier_inclusion_check(TrigPoly.constant(1.0), PowerLog(2, 1), pt, Ns=(4, 8))
    assert all(r["lhs_lower"] == pytest.approx(1.0, rel=1e-9) for r in one["rows"])
    chi = multiplier_inclusion_check(TrigPoly.chi(1), PowerLog(2, 1), pt, Ns=(4, 8))
    assert all(r["l2"] == pytest.approx(1.0) for r in chi["rows"])
    a = TrigPoly.random(np.random.default_rng(5), 3)
    assert multiplier_inclusion_check(a, PowerLog(2, 1), pt, Ns=(8, 16, 32, 64))["violations"] == 0
