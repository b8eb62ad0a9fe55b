"""The acceptance battery.

Each ``criterion_*`` function runs one experiment with fixed seeds and
returns a :class:`CriterionResult`.  :func:`run_suite` runs them all.
"""

from __future__ import annotations

import math
import time
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from .indices import dilation_exponents, inverse_log_function, matuszewska_orlicz_indices
from .localisation import LocalAssignment, LocalEntry, fredholm_certificate, localise
from .majorant import build_phi_theta, exponent_transform_check, least_concave_majorant, theta_range
from .nfunction import Power, PowerLog
from .operators import l2_multiplier_consistency, shift_invariance_residual, toeplitz, widom_residual
from .orlicz_space import (FiniteSequence, calderon_factorize, calderon_postconditions,
                           interpolation_bound_check, luxemburg_norms, p_norm)
from .symbols import BumpFunction, PiecewiseC1, TrigPoly, bump_infimum, local_distance

BASE_SEED = 20240


@dataclass
class CriterionResult:
    number: int
    name: str
    passed: bool
    detail: dict = field(default_factory=dict)
    seconds: float = 0.0

    def line(self) -> str:
        return f"[{'PASS' if self.passed else 'FAIL'}] {self.number:2d} {self.name} ({self.seconds:.1f} s)"

    def to_json(self):
        return {"criterion": self.number, "name": self.name, "passed": bool(self.passed),
                "seconds": round(self.seconds, 3), "detail": self.detail}


def _timed(number, name):
    def deco(fn):
        def run(*args, **kwargs):
            t0 = time.perf_counter()
            passed, detail = fn(*args, **kwargs)
            return CriterionResult(number, name, bool(passed), detail, time.perf_counter() - t0)
        run.__name__ = fn.__name__
        run.__doc__ = fn.__doc__
        run.number = number
        return run
    return deco


# -- 1-4: indices and Phi_theta ---------------------------------------------------

INDEX_CASES = ((2, 0), (2, 1), (1.5, 0.5), (3, 2))


@_timed(1, "index recovery")
def criterion_index_recovery(tol=0.05, time_limit=5.0):
    rows, ok = [], True
    for p, q in INDEX_CASES:
        t0 = time.perf_counter()
        rep = matuszewska_orlicz_indices(PowerLog(p, q))
        dt = time.perf_counter() - t0
        good = abs(rep.alpha - p) <= tol and abs(rep.beta - (p + q)) <= tol and dt < time_limit
        ok &= good
        rows.append({"p": p, "q": q, "alpha": rep.alpha, "beta": rep.beta, "seconds": dt, "ok": good})
    return ok, {"cases": rows}


def _phi_theta_error(p, theta, lo=1e-4, hi=1e4, n=2001):
    pt = build_phi_theta(Power(p), theta)
    t = np.geomspace(lo, hi, n)
    p_theta = 1.0 / ((1.0 / p - theta / 2) / (1 - theta))
    got = pt.phi_theta(t)
    return float(np.max(np.abs(got / t ** p_theta - 1.0))), p_theta


@_timed(2, "Phi_theta fixed point for t^2")
def criterion_fixed_point(tol=1e-3):
    rows = []
    for theta in (0.1, 0.3, 0.5, 0.7, 0.9):
        err, _ = _phi_theta_error(2.0, theta)
        rows.append({"theta": theta, "max_rel_err": err})
    return all(r["max_rel_err"] <= tol for r in rows), {"cases": rows}


@_timed(3, "Phi_theta power law")
def criterion_power_law(tol=1e-3):
    rows = []
    for p in (1.5, 2.5, 4.0):
        hi = theta_range(matuszewska_orlicz_indices(Power(p)))[1]
        for frac in (0.25, 0.5, 0.75):
            theta = frac * hi
            err, p_theta = _phi_theta_error(p, theta)
            rows.append({"p": p, "theta": theta, "p_theta": p_theta, "max_rel_err": err})
    return all(r["max_rel_err"] <= tol for r in rows), {"cases": rows}


TRANSFORM_FAMILIES = (("power", 1.5, 0), ("power", 2, 0), ("power", 4, 0),
                      ("powerlog", 2, 1), ("powerlog", 1.5, 0.5), ("powerlog", 3, 2))


@_timed(4, "exponent transform")
def criterion_exponent_transform(tol=0.05):
    rows = []
    for kind, p, q in TRANSFORM_FAMILIES:
        phi = Power(p) if kind == "power" else PowerLog(p, q)
        hi = theta_range(matuszewska_orlicz_indices(phi))[1]
        for frac in (0.25, 0.5, 0.75):
            theta = frac * hi
            pt = build_phi_theta(phi, theta)
            rep = exponent_transform_check(phi, theta, tol=tol, pt=pt)
            rows.append({"family": kind, "p": p, "q": q, **rep.to_json()})
    return all(r["passed"] for r in rows), {"cases": rows}


# -- 5-7: operators ---------------------------------------------------------------

@_timed(5, "Widom identity")
def criterion_widom(tol=1e-12, pairs=100, time_limit=10.0):
    rng = np.random.default_rng(BASE_SEED + 5)
    worst = 0.0
    for _ in range(pairs):
        a = TrigPoly.random(rng, int(rng.integers(0, 6)))
        b = TrigPoly.random(rng, int(rng.integers(0, 6)))
        worst = max(worst, widom_residual(a, b, N=40, window=20))
    return worst <= tol, {"pairs": pairs, "max_residual": worst}


@_timed(6, "shift invariance")
def criterion_shift(tol=1e-13, seeds=50):
    worst = {"toeplitz": 0.0, "laurent": 0.0}
    for s in range(seeds):
        rng = np.random.default_rng(BASE_SEED + 600 + s)
        a = TrigPoly.random(rng, int(rng.integers(0, 5)))
        for n in (1, 2, 3):
            res = shift_invariance_residual(a, n, N=24, window=12)
            for k in worst:
                worst[k] = max(worst[k], res[k])
    return max(worst.values()) <= tol, {"max_residual": worst, "seeds": seeds}


@_timed(7, "l2 multiplier norm")
def criterion_l2(gap=0.01, count=20):
    rows = []
    for s in range(count):
        rng = np.random.default_rng(BASE_SEED + 700 + s)
        a = TrigPoly.random(rng, int(rng.integers(1, 4)))
        rep = l2_multiplier_consistency(a)
        rows.append({"seed": s, "final_gap": rep.final_gap, "monotone": rep.toeplitz_monotone,
                     "bounded": rep.bounded, "ok": rep.passed(gap)})
    return all(r["ok"] for r in rows), {"cases": rows}


# -- 8-10: Orlicz space --------------------------------------------------------------

def _random_sequences(rng, count, max_len=24):
    lens = rng.integers(1, max_len + 1, size=count)
    X = rng.standard_normal((count, max_len)) + 1j * rng.standard_normal((count, max_len))
    X *= 10.0 ** rng.uniform(-3, 3, size=(count, 1))
    X[np.arange(max_len)[None, :] >= lens[:, None]] = 0
    return X


@_timed(8, "Luxemburg norm properties")
def criterion_norm_properties(count=10_000, homog_tol=1e-12, pnorm_tol=1e-10):
    rows = []
    for name, phi, p in (("t^2", Power(2), 2.0), ("t^3", Power(3), 3.0), ("PowerLog(2,1)", PowerLog(2, 1), None)):
        rng = np.random.default_rng(BASE_SEED + 8)
        F = _random_sequences(rng, count)
        G = _random_sequences(rng, count)
        c = (rng.standard_normal(count) + 1j * rng.standard_normal(count)) * 10.0 ** rng.uniform(-3, 3, count)
        shrink = rng.uniform(0, 1, F.shape)
        nf, ng = luxemburg_norms(phi, F), luxemburg_norms(phi, G)
        homog = np.abs(luxemburg_norms(phi, c[:, None] * F) - np.abs(c) * nf) / (np.abs(c) * nf)
        tri = luxemburg_norms(phi, F + G) <= (nf + ng) * (1 + 1e-12)
        lat = luxemburg_norms(phi, F * shrink) <= nf * (1 + 1e-12)
        row = {"phi": name, "max_homogeneity_err": float(homog.max()),
               "triangle_failures": int(np.sum(~tri)), "lattice_failures": int(np.sum(~lat))}
        ok = row["max_homogeneity_err"] <= homog_tol and tri.all() and lat.all()
        if p is not None:
            pn = np.array([p_norm(f, p) for f in F])
            row["max_pnorm_rel_err"] = float(np.max(np.abs(nf - pn) / pn))
            ok &= row["max_pnorm_rel_err"] <= pnorm_tol
        row["ok"] = bool(ok)
        rows.append(row)
    return all(r["ok"] for r in rows), {"cases": rows, "count": count}


@_timed(9, "interpolation inequality")
def criterion_interpolation(count=1000, max_N=32, theta=0.3):
    phi = PowerLog(2, 1)
    pt = build_phi_theta(phi, theta)
    rng = np.random.default_rng(BASE_SEED + 9)
    Ns = rng.integers(2, max_N + 1, size=count)
    mats = [toeplitz(TrigPoly.random(rng, int(rng.integers(0, 4))), int(N)) for N in Ns]
    violations, worst = 0, 0.0
    for N in np.unique(Ns):
        idx = np.flatnonzero(Ns == N)
        rep = interpolation_bound_check(np.stack([mats[i] for i in idx]), phi, pt, seed=BASE_SEED + int(N))
        violations += rep.violations
        worst = max(worst, rep.max_ratio)
    return violations == 0, {"count": count, "violations": violations, "max_lhs_over_rhs": worst,
                             "c_interp": pt.c_interp, "theta": theta}


@_timed(10, "Calderon factorization")
def criterion_calderon(count=1000, theta=0.3):
    phi = PowerLog(2, 1)
    pt = build_phi_theta(phi, theta)
    phi0, phi1 = pt.phi_theta, Power(2)
    rng = np.random.default_rng(BASE_SEED + 10)
    fails, worst = 0, 0.0
    for _ in range(count):
        n = int(rng.integers(1, 25))
        x = FiniteSequence.from_dense((rng.standard_normal(n) + 1j * rng.standard_normal(n))
                                      * 10.0 ** rng.uniform(-3, 3), start=int(rng.integers(-50, 50)))
        if x.size == 0:
            continue
        fac = calderon_factorize(phi0, phi1, theta, x, phi=phi, c1=pt.c1)
        post = calderon_postconditions(fac, phi0, phi1, theta, x)
        fails += not (post["y_unit_ball"] and post["z_unit_ball"] and post["pointwise"])
        worst = max(worst, post["max_ratio"], post["norm_y"], post["norm_z"])
    return fails == 0, {"count": count, "failures": fails, "max_of_checked_ratios": worst}


# -- 11-12: localisation -------------------------------------------------------------

def winding_by_roots(a: TrigPoly) -> int:
    """Winding number of a nonvanishing trigonometric polynomial from the
    zeros of ``z**m a(z)`` inside the unit disc (argument principle)."""
    lo = min(a.coeffs)
    hi = max(a.coeffs)
    poly = [a.coeffs.get(k, 0) for k in range(hi, lo - 1, -1)]
    roots = np.roots(poly) if len(poly) > 1 else np.array([])
    return int(np.sum(np.abs(roots) < 1)) + lo


def _nonvanishing_winding_zero(rng):
    a = TrigPoly.random(rng, int(rng.integers(1, 4)))
    total = sum(abs(v) for k, v in a.coeffs.items() if k != 0)
    return a + TrigPoly.constant((1.5 + rng.uniform()) * max(total, 0.1))


@_timed(11, "localisation end-to-end")
def criterion_localisation(count=10, grid=64, time_limit=30.0):
    phi = PowerLog(2, 1)
    taus = -math.pi + 2 * math.pi * np.arange(grid) / grid
    rng = np.random.default_rng(BASE_SEED + 11)
    t0 = time.perf_counter()
    rows = []
    for _ in range(count):
        a = _nonvanishing_winding_zero(rng)
        rep = localise(a, phi, LocalAssignment.pointwise_constant(a, taus))
        rows.append({"verdict": rep.verdict, "oracle_winding": winding_by_roots(a),
                     "ok": rep.verdict == "Fredholm" and winding_by_roots(a) == 0})
    elapsed = time.perf_counter() - t0
    chi = fredholm_certificate(TrigPoly.chi(1), evidence=False)
    # zero at a grid point: a = 1 + chi_1 vanishes at -pi
    z = TrigPoly.constant(1) + TrigPoly.chi(1)
    zrep = localise(z, phi, LocalAssignment(tuple(LocalEntry(float(t), z) for t in taus)))
    ok = all(r["ok"] for r in rows) and chi.winding == 1 and zrep.verdict == "withheld" and elapsed < time_limit
    return ok, {"symbols": rows, "seconds_for_symbols": elapsed, "chi1_winding": chi.winding,
                "zero_symbol_verdict": zrep.verdict}


def _step(tau, c):
    """``0`` on ``[-pi, tau)`` and ``c`` on ``[tau, pi)``."""
    zero = lambda t: np.zeros(np.shape(t), dtype=complex)  # noqa: E731
    const = lambda t: np.full(np.shape(t), c, dtype=complex)  # noqa: E731
    return PiecewiseC1.from_callables([(-math.pi, tau, zero, zero), (tau, math.pi, const, zero)])


@_timed(12, "bump family")
def criterion_bumps(count=20, v_tol=1e-9, dist_tol=1e-6):
    rng = np.random.default_rng(BASE_SEED + 12)
    worst_v, worst_d, rows = 0.0, 0.0, []
    for i in range(count):
        tau = float(rng.uniform(-math.pi, math.pi))
        w = float(rng.uniform(0.1, 3.0))
        f = BumpFunction(tau, w, float(rng.uniform(0.1, 0.9)) * w)
        worst_v = max(worst_v, abs(f.total_variation() - 2.0))
        a = TrigPoly.random(rng, int(rng.integers(1, 4)))
        tau_in = float(rng.uniform(-math.pi + 0.5, math.pi - 0.5))
        rep = TrigPoly.constant(complex(a.evaluate(tau_in)))
        if i % 2:
            # representative with a jump at tau: both quantities tend to the jump size
            rep = rep + _step(tau_in, complex(rng.standard_normal(), rng.standard_normal()))
        d = local_distance(a, rep, tau_in).value
        b = bump_infimum(a, rep, tau_in).value
        worst_d = max(worst_d, abs(d - b))
        rows.append({"tau": tau_in, "dist": d, "inf_bumps": b, "jump": bool(i % 2)})
    ok = worst_v <= v_tol and worst_d <= dist_tol
    return ok, {"max_tv_error": worst_v, "max_dist_gap": worst_d, "cases": rows}


# -- 13: hull -----------------------------------------------------------------------

def brute_force_majorant(ts, vs, t):
    """``sup`` over convex combinations of two samples (or the origin) at ``t``."""
    pts = [(0 * ts[0], 0 * vs[0])] + list(zip(ts, vs))
    best = None
    for ta, va in pts:
        if ta > t:
            continue
        if ta == t:
            best = va if best is None else max(best, va)
            continue
        for tb, vb in pts:
            if tb > t:
                v = va + (vb - va) * (t - ta) / (tb - ta)
                best = v if best is None else max(best, v)
    return best


def random_fraction_samples(rng, n=20):
    ts = sorted({Fraction(int(k), int(rng.integers(1, 8))) for k in rng.integers(1, 400, size=4 * n)})
    ts = ts[:n]
    vs = [Fraction(int(rng.integers(1, 1000)), int(rng.integers(1, 20))) for _ in ts]
    return ts, vs


@_timed(13, "hull oracle")
def criterion_hull(count=100):
    rng = np.random.default_rng(BASE_SEED + 13)
    mismatches = 0
    for _ in range(count):
        ts, vs = random_fraction_samples(rng)
        env = least_concave_majorant(list(zip(ts, vs)))
        probes = list(ts) + [(a + b) / 2 for a, b in zip(ts, ts[1:])] + [ts[0] / 3]
        mismatches += sum(env.exact(t) != brute_force_majorant(ts, vs, t) for t in probes)
    return mismatches == 0, {"sample_sets": count, "mismatches": mismatches}


CRITERIA = (
    criterion_index_recovery, criterion_fixed_point, criterion_power_law,
    criterion_exponent_transform, criterion_widom, criterion_shift, criterion_l2,
    criterion_norm_properties, criterion_interpolation, criterion_calderon,
    criterion_localisation, criterion_bumps, criterion_hull,
)


def run_suite(only=None, echo=None) -> list:
    """Run the criteria (all, or the numbers in ``only``) in order."""
    out = []
    for fn in CRITERIA:
        if only and fn.number not in only:
            continue
        res = fn()
        if echo:
            echo(res.line())
        out.append(res)
    return out
