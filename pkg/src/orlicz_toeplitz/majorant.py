"""The auxiliary function Psi_theta, its least concave majorant and Phi_theta.

For an N-function ``Phi`` with ``1 < alpha <= beta < inf`` and admissible
``theta`` we form

    Psi_theta(t) = (Phi^{-1}(t) * t**(-theta/2)) ** (1/(1-theta)),

take its least concave majorant ``Psi~_theta`` and set
``Phi_theta = (Psi~_theta)^{-1}``.  The majorant is equivalent to
``Psi_theta`` with constants ``c1 <= c2`` estimated on the sample grid.
"""

from __future__ import annotations

import bisect
import math
import weakref
from dataclasses import dataclass, field

import numpy as np

from .errors import DegenerateError, DomainError, IndexDivergedError, IndicesOutOfRangeError, RangeError
from .indices import (
    DEFAULT_CONFIG,
    IndexConfig,
    IndexReport,
    LogFunction,
    dilation_exponents,
    inverse_log_function,
    matuszewska_orlicz_indices,
)
from .nfunction import NFunction, TabulatedConcaveInverse, log_grid

LN10 = math.log(10.0)


def theta_range(report: IndexReport) -> tuple:
    """Admissible open interval ``(0, 2 min{1/beta, 1 - 1/alpha})``."""
    a, b = report.alpha, report.beta
    if not (a > 1 and math.isfinite(b) and a <= b + max(report.uncertainty.values(), default=0.0)):
        raise IndicesOutOfRangeError(f"need 1 < alpha <= beta < inf, got alpha={a}, beta={b}")
    hi = 2.0 * min(1.0 / b, 1.0 - 1.0 / a)
    return (0.0, min(hi, 1.0))


_RANGE_CACHE: "weakref.WeakKeyDictionary" = weakref.WeakKeyDictionary()


def _admissible(phi: NFunction):
    try:
        return _RANGE_CACHE[phi]
    except (KeyError, TypeError):
        pass
    rng = theta_range(matuszewska_orlicz_indices(phi))
    try:
        _RANGE_CACHE[phi] = rng
    except TypeError:
        pass
    return rng


def _check_theta(phi, theta, bounds=None):
    lo, hi = bounds if bounds is not None else _admissible(phi)
    if not lo < theta < hi:
        raise DomainError(f"theta={theta} is outside the admissible range ({lo:g}, {hi:.6g})")


def log_psi_theta(phi: NFunction, theta: float, x):
    """``log Psi_theta(exp(x))``."""
    x = np.asarray(x, dtype=float)
    return (np.asarray(phi.log_inverse(x), dtype=float) - 0.5 * theta * x) / (1.0 - theta)


def psi_theta_function(phi: NFunction, theta: float) -> LogFunction:
    dom = inverse_log_function(phi).log_domain
    return LogFunction(lambda x: log_psi_theta(phi, theta, x), dom, f"psi_theta[{theta:g}]")


def psi_theta(phi: NFunction, theta: float, t, bounds=None):
    """Evaluate ``Psi_theta(t) = (Phi^{-1}(t) t**(-theta/2))**(1/(1-theta))``.

    ``bounds`` may carry a precomputed admissible range; otherwise it is
    derived from the indices of ``phi`` (cached per N-function).
    """
    _check_theta(phi, theta, bounds)
    t_arr = np.asarray(t, dtype=float)
    if np.any(t_arr < 0):
        raise DomainError("Psi_theta needs t >= 0")
    out = np.zeros_like(t_arr, dtype=float)
    pos = t_arr > 0
    out[pos] = np.exp(log_psi_theta(phi, theta, np.log(t_arr[pos])))
    return float(out) if np.ndim(t) == 0 else out


# -- least concave majorant ---------------------------------------------------

@dataclass(frozen=True)
class PiecewiseConcaveEnvelope:
    """Concave piecewise-linear function through ``(breakpoints, values)``.

    Values are whatever numeric type was supplied (floats or Fractions);
    :meth:`exact` evaluates without converting, :meth:`__call__` in floats.
    """

    breakpoints: tuple
    values: tuple
    source_t: tuple
    source_v: tuple

    def slopes(self):
        t, v = self.breakpoints, self.values
        return [(v[i + 1] - v[i]) / (t[i + 1] - t[i]) for i in range(len(t) - 1)]

    def exact(self, t):
        bp = self.breakpoints
        if t < bp[0] or t > bp[-1]:
            raise RangeError(f"t={float(t):g} is outside the envelope range", float(t))
        i = bisect.bisect_left(bp, t)
        if bp[i] == t:
            return self.values[i]
        ta, tb = bp[i - 1], bp[i]
        va, vb = self.values[i - 1], self.values[i]
        return va + (vb - va) * (t - ta) / (tb - ta)

    def __call__(self, t):
        t_arr = np.asarray(t, dtype=float)
        bp = np.asarray(self.breakpoints, dtype=float)
        if np.any(t_arr > bp[-1] * (1 + 1e-12)) or np.any(t_arr < bp[0]):
            bad = t_arr[(t_arr > bp[-1] * (1 + 1e-12)) | (t_arr < bp[0])].reshape(-1)[0]
            raise RangeError(f"t={bad:g} is outside the envelope range", float(bad))
        out = np.interp(t_arr, bp, np.asarray(self.values, dtype=float))
        return float(out) if np.ndim(t) == 0 else out


def _validate_samples(ts, vs):
    if len(ts) != len(vs) or len(ts) == 0:
        raise DomainError("samples need matching, nonempty t and value lists")
    for i, (t, v) in enumerate(zip(ts, vs)):
        if t < 0 or v < 0:
            raise DomainError("samples must have t >= 0 and values >= 0")
        if i and not ts[i - 1] < t:
            raise DomainError("sample t-values must be strictly increasing")
        if v == 0 and t != 0:
            raise DomainError(f"value 0 is only allowed at t=0 (got t={t})")


def least_concave_majorant(samples) -> PiecewiseConcaveEnvelope:
    """Upper concave hull of the sample points together with the origin.

    ``samples`` is a sequence of ``(t, value)`` pairs or a pair of arrays.
    Comparisons use slopes only, so exact rationals stay exact.
    """
    if isinstance(samples, tuple) and len(samples) == 2 and np.ndim(samples[0]) == 1:
        ts, vs = list(samples[0]), list(samples[1])
    else:
        ts = [p[0] for p in samples]
        vs = [p[1] for p in samples]
    if isinstance(ts[0] if ts else 0, np.generic):
        ts, vs = [float(t) for t in ts], [float(v) for v in vs]
    _validate_samples(ts, vs)
    pts_t = ts if ts[0] == 0 else [0 * ts[0]] + ts
    pts_v = vs if ts[0] == 0 else [0 * vs[0]] + vs

    ht, hv = [], []
    for t, v in zip(pts_t, pts_v):
        while len(ht) >= 2:
            ta, tb, va, vb = ht[-2], ht[-1], hv[-2], hv[-1]
            # drop b unless it lies strictly above the chord from a to the new point
            if (vb - va) / (tb - ta) <= (v - vb) / (t - tb):
                ht.pop()
                hv.pop()
            else:
                break
        ht.append(t)
        hv.append(v)
    return PiecewiseConcaveEnvelope(tuple(ht), tuple(hv), tuple(ts), tuple(vs))


# -- Phi_theta ----------------------------------------------------------------

@dataclass(frozen=True)
class GridSpec:
    per_decade: int = 65
    min_decades: float = 24.0
    max_decades: float = 240.0
    # Phi_theta should be tabulated at least on [10**-target, 10**target]
    target_decades: float = 8.0
    refine: int = 4


@dataclass(frozen=True)
class PhiTheta:
    theta: float
    s: np.ndarray = field(repr=False)
    psi: np.ndarray = field(repr=False)
    envelope: PiecewiseConcaveEnvelope = field(repr=False)
    phi_theta: TabulatedConcaveInverse = field(repr=False)
    c1: float
    c2: float
    c_interp: float
    index_report: IndexReport | None = None
    theta_bounds: tuple = (0.0, 1.0)
    notes: tuple = ()

    def to_json(self, include_table=True) -> dict:
        out = {
            "theta": self.theta,
            "theta_range": list(self.theta_bounds),
            "c1": self.c1,
            "c2": self.c2,
            "c_interp": self.c_interp,
            "n_breakpoints": len(self.envelope.breakpoints),
            "notes": list(self.notes),
            "indices": self.index_report.to_json() if self.index_report else None,
        }
        if include_table:
            out["breakpoints"] = [float(t) for t in self.envelope.breakpoints]
            out["values"] = [float(v) for v in self.envelope.values]
        return out


def _sample_range(phi: NFunction, theta: float, grid: GridSpec):
    """log10 range of s so that Psi_theta(s) covers the target decades."""
    dom = inverse_log_function(phi).log_domain
    if dom is not None:
        lo = max(dom[0] / LN10, -grid.max_decades)
        hi = min(dom[1] / LN10, grid.max_decades)
        return lo, hi
    d = grid.min_decades
    while True:
        ends = log_psi_theta(phi, theta, np.array([-d, d]) * LN10) / LN10
        if (ends[0] <= -grid.target_decades and ends[1] >= grid.target_decades) or d >= grid.max_decades:
            return -d, d
        d = min(2 * d, grid.max_decades)


def build_phi_theta(phi: NFunction, theta: float, grid: GridSpec = GridSpec(),
                    report: IndexReport | None = None, check_indices: bool = True,
                    index_config: IndexConfig = DEFAULT_CONFIG) -> PhiTheta:
    """Build ``Phi_theta`` together with the equivalence constants.

    Parameters
    ----------
    phi : NFunction
        Source N-function with nontrivial indices.
    theta : float
        Interpolation parameter in the admissible range.
    grid : GridSpec
        Sampling density; the range grows until ``Phi_theta`` is tabulated
        over ``grid.target_decades`` decades on each side of 1.
    check_indices : bool
        Run the index estimator on the result and require
        ``1 < alpha <= beta < inf``.

    Returns
    -------
    PhiTheta
        ``c1``/``c2`` are min/max of ``Psi~_theta / Psi_theta`` on the
        sample grid refined by ``grid.refine`` interior points per cell,
        so they estimate (not bound) the true constants.
    """
    if report is None:
        report = matuszewska_orlicz_indices(phi, index_config)
    bounds = theta_range(report)
    _check_theta(phi, theta, bounds)

    lo, hi = _sample_range(phi, theta, grid)
    s = log_grid(10.0 ** lo, 10.0 ** hi, grid.per_decade)
    log_psi = log_psi_theta(phi, theta, np.log(s))
    psi = np.exp(log_psi)
    if not np.all(np.isfinite(psi)) or np.any(psi <= 0):
        raise DegenerateError("Psi_theta left the float range on the sample grid")
    env = least_concave_majorant((s, psi))
    env_at_s = env(s)
    table = TabulatedConcaveInverse(np.log(env_at_s), np.log(s))

    # ratio on a refined grid, using the tabulated inverse actually used downstream
    k = grid.refine + 1
    ls = np.log(s)
    fine = (ls[:-1, None] + np.diff(ls)[:, None] * (np.arange(k) / k)[None, :]).ravel()
    fine = np.append(fine, ls[-1])
    ratio = np.exp(table.log_inverse(fine) - log_psi_theta(phi, theta, fine))
    c1, c2 = float(ratio.min()), float(ratio.max())
    c_interp = 2.0 * (c2 / c1) ** (1.0 - theta)

    notes = ["c1, c2 are grid estimates of the equivalence constants"]
    rep = None
    if check_indices:
        try:
            rep = matuszewska_orlicz_indices(table, index_config)
        except IndexDivergedError as exc:
            raise DegenerateError(f"index estimation of Phi_theta failed: {exc}") from None
        if not rep.alpha > 1:
            raise DegenerateError(f"Phi_theta has alpha={rep.alpha:.4g} <= 1")
        if not math.isfinite(rep.beta):
            raise DegenerateError("Phi_theta has beta = inf")
        if rep.alpha > rep.beta + max(rep.uncertainty.values()):
            raise DegenerateError(f"Phi_theta has alpha={rep.alpha:.4g} > beta={rep.beta:.4g}")
    return PhiTheta(theta, s, psi, env, table, c1, c2, c_interp, rep, bounds, tuple(notes))


def default_theta(report: IndexReport) -> float:
    """Midpoint of the admissible range."""
    return 0.5 * theta_range(report)[1]


@dataclass(frozen=True)
class ExponentTransformReport:
    theta: float
    gamma_psi: float
    delta_psi: float
    gamma_pred: float
    delta_pred: float
    uncertainty: float
    tol: float
    gamma_env: float | None = None
    delta_env: float | None = None

    @property
    def max_deviation(self) -> float:
        devs = [abs(self.gamma_psi - self.gamma_pred), abs(self.delta_psi - self.delta_pred)]
        if self.gamma_env is not None:
            devs += [abs(self.gamma_env - self.gamma_pred), abs(self.delta_env - self.delta_pred)]
        return max(devs)

    @property
    def in_unit_interval(self) -> bool:
        return 0.0 < self.gamma_psi <= self.delta_psi + self.uncertainty and self.delta_psi < 1.0

    @property
    def passed(self) -> bool:
        return self.max_deviation <= self.tol and self.in_unit_interval

    def to_json(self):
        return {k: getattr(self, k) for k in (
            "theta", "gamma_psi", "delta_psi", "gamma_pred", "delta_pred",
            "gamma_env", "delta_env", "uncertainty", "tol", "max_deviation",
            "in_unit_interval", "passed")}


def exponent_transform_check(phi: NFunction, theta: float, tol: float = 0.05,
                             pt: PhiTheta | None = None,
                             config: IndexConfig = DEFAULT_CONFIG) -> ExponentTransformReport:
    """Compare the dilation exponents of ``Psi_theta`` with the affine image
    of those of ``Phi^{-1}``.

    If a built ``pt`` is passed, the exponents of its concave envelope
    (``Phi_theta^{-1}``) are measured as a second, independent route.
    """
    _check_theta(phi, theta, pt.theta_bounds if pt is not None else None)
    inv = dilation_exponents(inverse_log_function(phi), config)
    psi = dilation_exponents(psi_theta_function(phi, theta), config)
    gp = (inv.gamma - theta / 2) / (1 - theta)
    dp = (inv.delta - theta / 2) / (1 - theta)
    unc = psi.gamma_err + psi.delta_err + (inv.gamma_err + inv.delta_err) / (1 - theta)
    ge = de = None
    if pt is not None:
        env = dilation_exponents(inverse_log_function(pt.phi_theta), config)
        ge, de = env.gamma, env.delta
        unc += env.gamma_err + env.delta_err
    return ExponentTransformReport(theta, psi.gamma, psi.delta, gp, dp, unc, tol, ge, de)
