from __future__ import annotations

import math

import numpy as np
import pytest

from orlicz_toeplitz.acceptance import _nonvanishing_winding_zero, winding_by_roots
from orlicz_toeplitz.errors import CoverError
from orlicz_toeplitz.localisation import (LocalAssignment, LocalEntry, cover_and_partition_check,
                                          equivalence_bound, fredholm_certificate, localise, winding_number)
from orlicz_toeplitz.majorant import build_phi_theta
from orlicz_toeplitz.nfunction import PowerLog
from orlicz_toeplitz.symbols import PiecewiseC1, TrigPoly

PHI = PowerLog(2, 1)
TAUS8 = -math.pi + 2 * math.pi * np.arange(8) / 8


@pytest.fixture(scope="module")
def pt():
    return build_phi_theta(PHI, 0.3)


def test_certificates():
    c = fredholm_certificate(TrigPoly.constant(2.0) + TrigPoly.chi(1))
    assert c.verdict == "Fredholm" and c.winding == 0
    c = fredholm_certificate(TrigPoly.chi(1))
    assert (c.verdict, c.winding, c.index) == ("Fredholm", 1, -1)
    assert c.evidence["adjoint_min_residual"] == 0.0
    assert fredholm_certificate(TrigPoly.constant(1.0) + TrigPoly.chi(1)).verdict == "not-Fredholm"
    step = PiecewiseC1.from_exprs([(-math.pi, 0.0, "1"), (0.0, math.pi, "2")])
    c = fredholm_certificate(step)
    assert c.verdict == "inconclusive" and "sigma_min" in c.evidence


@pytest.mark.parametrize("seed", range(6))
def test_winding_against_root_count(seed):
    rng = np.random.default_rng(seed)
    a = TrigPoly.random(rng, 4)
    assert winding_number(a) == winding_by_roots(a)


def test_equivalence_bound_examples(pt):
    a = TrigPoly.random(np.random.default_rng(1), 3)
    for tau in (-math.pi, -1.0, 0.0, 2.5):
        assert equivalence_bound(a, a, tau, pt).value == 0.0
    c = 0.7
    eb = equivalence_bound(a + TrigPoly.constant(c), a, 0.4, pt, c_space=2.0)
    expected = pt.c_interp * (3 * 2.0 * c) ** (1 - pt.theta) * c ** pt.theta
    assert eb.value == pytest.approx(expected, rel=1e-9)


def test_equivalence_bound_symmetric(pt):
    rng = np.random.default_rng(2)
    a, b = TrigPoly.random(rng, 2), TrigPoly.random(rng, 2)
    assert equivalence_bound(a, b, 0.3, pt).value == pytest.approx(equivalence_bound(b, a, 0.3, pt).value, rel=1e-9)


def test_cover():
    rep = cover_and_partition_check([-math.pi, -math.pi / 2, 0.0, math.pi / 2], w=0.9 * math.pi / 2, u=math.pi / 4)
    assert rep.g_min >= 1.0 and rep.g_max <= 4
    rep = cover_and_partition_check(TAUS8)
    assert rep.passed and math.isfinite(rep.inv_g_deriv_max)
    with pytest.raises(CoverError, match="do not localise the circle"):
        cover_and_partition_check([0.0])
    with pytest.raises(CoverError):
        cover_and_partition_check([0.0, 1.0], w=0.5, u=0.3)


def test_localise_continuous_symbol():
    a = _nonvanishing_winding_zero(np.random.default_rng(7))
    rep = localise(a, PHI, LocalAssignment.pointwise_constant(a, TAUS8))
    assert rep.verdict == "Fredholm" and rep.exit_code == 0
    assert all(r["dist_zero"] and r["bound"] == 0.0 for r in rep.rows)


def test_localise_shift():
    chi = TrigPoly.chi(1)
    rep = localise(chi, PHI, LocalAssignment(tuple(LocalEntry(float(t), chi) for t in TAUS8)))
    assert rep.verdict == "Fredholm"
    assert rep.rows[0]["certificate"]["winding"] == 1


def test_localise_zero_symbol_withheld():
    a = TrigPoly.constant(1.0) + TrigPoly.chi(1)
    rep = localise(a, PHI, LocalAssignment.pointwise_constant(a, TAUS8))
    assert rep.verdict == "withheld" and rep.exit_code == 2
    bad = [r for r in rep.rows if r["certificate"]["verdict"] == "not-Fredholm"]
    assert bad and bad[0]["tau"] == pytest.approx(-math.pi)


def test_localise_wrong_representative_withheld():
    a = TrigPoly.constant(3.0) + TrigPoly.chi(1)
    entries = [LocalEntry(float(t), TrigPoly.constant(3.0)) for t in TAUS8]
    rep = localise(a, PHI, LocalAssignment(tuple(entries)))
    assert rep.verdict == "withheld" and all(r["bound"] > 0 for r in rep.rows)


def test_localise_jump_inconclusive():
    step = PiecewiseC1.from_exprs([(-math.pi, 0.0, "1"), (0.0, math.pi, "2")])
    rep = localise(step, PHI, LocalAssignment(tuple(LocalEntry(float(t), step) for t in TAUS8)))
    assert rep.verdict == "inconclusive" and rep.exit_code == 3


def test_assignment_json():
    data = [{"tau": 0.0, "theta": 0.25, "rep": {"kind": "trigpoly", "coeffs": [[0, 1.0, 0.0]]}},
            {"tau": 2.0, "rep": {"kind": "trigpoly", "coeffs": [[0, 1.0]]}}]
    asg = LocalAssignment.from_json(data)
    assert asg.taus == (0.0, 2.0) and asg.entries[0].theta == 0.25 and asg.entries[1].theta is None
