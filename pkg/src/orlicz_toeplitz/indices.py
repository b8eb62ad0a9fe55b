"""Dilation functions, Matuszewska-Orlicz indices and dilation exponents.

For a positive function ``psi`` the dilation function is
``M(t, psi) = sup_u psi(t u) / psi(u)``; ``M0`` and ``Minf`` restrict the
supremum to ``u -> 0`` and ``u -> inf``.  The lower indices are the limits of
``log M(t) / log t`` as ``t -> 0`` and the upper ones the limits as
``t -> inf``.

Everything is computed on an integer log grid ``u = 10**(j / per_decade)``.
The ``t`` grid uses multiples of ``t_step`` grid steps, so ``t u`` falls on
the same grid and each function is evaluated exactly once.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, NamedTuple

import numpy as np

from .errors import DilationInfiniteError, IndexDivergedError
from .nfunction import DEFAULT_DOMAIN, NFunction

LN10 = math.log(10.0)


@dataclass(frozen=True)
class IndexConfig:
    """Grid and tolerance settings for the index estimators."""

    t_decades: float = 6.0
    per_decade: int = 32
    t_step: int = 8
    # cap on the u range for functions known only on a bounded domain
    u_decades: float = 240.0
    # u range for closed-form families evaluated in the log domain
    analytic_u_decades: float = 240.0
    divergence_tol: float = 0.5
    infinite_slope: float = 50.0
    growth_tol: float = 0.5


DEFAULT_CONFIG = IndexConfig()


@dataclass(frozen=True)
class LogFunction:
    """A positive function given through ``x -> log psi(exp(x))``."""

    log_eval: Callable
    log_domain: tuple | None = None
    name: str = "psi"


def as_log_function(obj, name=None) -> LogFunction:
    if isinstance(obj, LogFunction):
        return obj
    if isinstance(obj, NFunction):
        return LogFunction(obj.log_eval, obj.log_domain, name or obj.family)
    if hasattr(obj, "log_eval"):
        return LogFunction(obj.log_eval, getattr(obj, "log_domain", None), name or "psi")
    if callable(obj):
        def log_eval(x, f=obj):
            with np.errstate(divide="ignore"):
                return np.log(np.asarray(f(np.exp(x)), dtype=float))
        dom = (math.log(DEFAULT_DOMAIN[0]), math.log(DEFAULT_DOMAIN[1]))
        return LogFunction(log_eval, dom, name or getattr(obj, "__name__", "psi"))
    raise TypeError(f"cannot evaluate {obj!r} as a positive function")


def inverse_log_function(phi: NFunction) -> LogFunction:
    """The inverse ``phi^{-1}`` as a :class:`LogFunction`."""
    if phi.analytic:
        dom = None
    else:
        lo, hi = phi.log_domain
        dom = (float(phi.log_eval(np.array([lo]))[0]), float(phi.log_eval(np.array([hi]))[0]))
    return LogFunction(phi.log_inverse, dom, f"{phi.family}^-1")


def _grid_bounds(lf: LogFunction, config: IndexConfig):
    pd = config.per_decade
    if lf.log_domain is None:
        lo10, hi10 = -config.analytic_u_decades, config.analytic_u_decades
    else:
        lo10 = max(-config.u_decades, lf.log_domain[0] / LN10)
        hi10 = min(config.u_decades, lf.log_domain[1] / LN10)
    j0 = math.ceil(lo10 * pd - 1e-9)
    j1 = math.floor(hi10 * pd + 1e-9)
    if j1 - j0 < 2 * pd:
        raise IndexDivergedError(f"{lf.name}: domain spans fewer than two decades")
    return j0, j1


@dataclass(frozen=True)
class DilationProfile:
    """``log M``, ``log M0`` and ``log Minf`` on the grid ``t = 10**(k*t_step/per_decade)``.

    ``shifts`` holds the integer grid shifts ``s`` (``t = 10**(s/per_decade)``).
    """

    shifts: np.ndarray
    log_m: np.ndarray
    log_m0: np.ndarray
    log_minf: np.ndarray
    possibly_infinite: np.ndarray
    per_decade: int
    u_range: tuple

    @property
    def t(self):
        return 10.0 ** (self.shifts / self.per_decade)


def _shift_ratios(L, s):
    """``log psi(t u) - log psi(u)`` for the pairs on the grid, indexed by u."""
    if s > 0:
        return L[s:] - L[:-s]
    if s < 0:
        return L[:s] - L[-s:]
    return np.zeros_like(L)


def _boundary_growth(d, pd):
    """Flag a running sup that is still growing at either grid edge."""
    if d.size <= pd:
        return False
    k = int(np.argmax(d))
    if k >= d.size - 1 - pd // 4:
        return bool(d[-1] - d[-1 - pd] > 0)
    if k <= pd // 4:
        return bool(d[0] - d[pd] > 0)
    return False


def dilation_profile(psi_like, config: IndexConfig = DEFAULT_CONFIG) -> DilationProfile:
    lf = as_log_function(psi_like)
    pd, step = config.per_decade, config.t_step
    j0, j1 = _grid_bounds(lf, config)
    x = np.arange(j0, j1 + 1) * (LN10 / pd)
    L = np.asarray(lf.log_eval(x), dtype=float)
    if not np.all(np.isfinite(L)):
        raise IndexDivergedError(f"{lf.name}: non-finite values on the u grid")
    k_max = min(int(config.t_decades * pd / step), (j1 - j0 - 2 * pd) // step)
    shifts = np.arange(-k_max, k_max + 1) * step
    log_m = np.empty(shifts.size)
    log_m0 = np.empty(shifts.size)
    log_minf = np.empty(shifts.size)
    flags = np.zeros(shifts.size, dtype=bool)
    for i, s in enumerate(shifts):
        d = _shift_ratios(L, int(s))
        log_m[i] = d.max()
        log_m0[i] = d[: pd + 1].max()
        log_minf[i] = d[-(pd + 1):].max()
        if s != 0:
            growth = _boundary_growth(d, pd)
            edge = d[-1] - d[-1 - pd] if np.argmax(d) > d.size // 2 else d[0] - d[pd]
            flags[i] = growth and edge > config.growth_tol
    return DilationProfile(shifts, log_m, log_m0, log_minf, flags, pd,
                           (10.0 ** (j0 / pd), 10.0 ** (j1 / pd)))


class DilationValue(NamedTuple):
    value: float
    log_value: float
    possibly_infinite: bool
    argmax_u: float


def dilation(psi_like, t: float, config: IndexConfig = DEFAULT_CONFIG) -> DilationValue:
    """Grid supremum of ``psi(t u) / psi(u)`` (log-domain arithmetic).

    Parameters
    ----------
    psi_like : NFunction, LogFunction or callable
        The positive function.
    t : float
        Dilation factor, ``t > 0``.

    Returns
    -------
    DilationValue
        ``possibly_infinite`` is set when the running supremum is still
        growing appreciably at the edge of the u grid.
    """
    if not t > 0:
        raise ValueError("dilation needs t > 0")
    lf = as_log_function(psi_like)
    pd = config.per_decade
    j0, j1 = _grid_bounds(lf, config)
    x = np.arange(j0, j1 + 1) * (LN10 / pd)
    lt = math.log(t)
    if lf.log_domain is not None:
        lo, hi = np.log(10.0) * j0 / pd, np.log(10.0) * j1 / pd
        x = x[(x + lt >= lo - 1e-12) & (x + lt <= hi + 1e-12)]
    d = np.asarray(lf.log_eval(x + lt), dtype=float) - np.asarray(lf.log_eval(x), dtype=float)
    k = int(np.argmax(d))
    flag = False
    if d.size > pd:
        if k >= d.size - 1 - pd // 4:
            flag = d[-1] - d[-1 - pd] > config.growth_tol
        elif k <= pd // 4:
            flag = d[0] - d[pd] > config.growth_tol
    return DilationValue(float(math.exp(d[k])), float(d[k]), bool(flag), float(math.exp(x[k])))


class LimitValues(NamedTuple):
    m0: float
    m_inf: float
    trend0: tuple
    trend_inf: tuple


def dilation_limits(phi, t: float, config: IndexConfig = DEFAULT_CONFIG) -> LimitValues:
    """Estimate ``M0(t)`` and ``Minf(t)`` from the extreme decade windows of u.

    ``trend0`` lists the window suprema over the three smallest decades
    (smallest first) and ``trend_inf`` over the three largest (largest
    last), so convergence can be read off.
    """
    lf = as_log_function(phi)
    pd = config.per_decade
    j0, j1 = _grid_bounds(lf, config)
    x = np.arange(j0, j1 + 1) * (LN10 / pd)
    lt = math.log(t)
    if lf.log_domain is not None:
        lo, hi = LN10 * j0 / pd, LN10 * j1 / pd
        x = x[(x + lt >= lo - 1e-12) & (x + lt <= hi + 1e-12)]
    d = np.asarray(lf.log_eval(x + lt), dtype=float) - np.asarray(lf.log_eval(x), dtype=float)
    n_win = d.size // pd
    windows = [d[i * pd:(i + 1) * pd + 1].max() for i in range(n_win)]
    trend0 = tuple(float(math.exp(w)) for w in windows[:3])
    trend_inf = tuple(float(math.exp(w)) for w in windows[-3:])
    return LimitValues(trend0[0], trend_inf[-1], trend0, trend_inf)


def _slope_estimates(profile: DilationProfile, log_values, side):
    """Endpoint estimate of ``log v(t)/log t`` plus a one-decade difference."""
    pd = profile.per_decade
    shifts = profile.shifts
    step = int(shifts[1] - shifts[0]) if shifts.size > 1 else pd
    per_dec = max(pd // step, 1)
    if side == "low":
        order = np.where(shifts < 0)[0][::-1]  # t decreasing
    else:
        order = np.where(shifts > 0)[0]
    if order.size == 0:
        raise IndexDivergedError("t grid is empty")
    last = order[-1]
    prev = order[-1 - per_dec] if order.size > per_dec else order[max(order.size // 2 - 1, 0)]
    lt = shifts * (LN10 / pd)
    r_last = log_values[last] / lt[last]
    r_prev = log_values[prev] / lt[prev]
    return float(r_last), float(abs(r_last - r_prev))


class Exponents(NamedTuple):
    gamma: float
    delta: float
    gamma_err: float
    delta_err: float


def dilation_exponents(psi_like, config: IndexConfig = DEFAULT_CONFIG) -> Exponents:
    """Lower and upper dilation exponents of a positive function.

    Raises :class:`DilationInfiniteError` when ``M(t, psi)`` looks infinite.
    """
    prof = dilation_profile(psi_like, config)
    if prof.possibly_infinite.any():
        bad = prof.t[prof.possibly_infinite][0]
        raise DilationInfiniteError(f"dilation function appears infinite at t={bad:g}")
    g, ge = _slope_estimates(prof, prof.log_m, "low")
    d, de = _slope_estimates(prof, prof.log_m, "high")
    for name, err in (("gamma", ge), ("delta", de)):
        if err > config.divergence_tol:
            raise IndexDivergedError(f"{name} slope failed to stabilise (spread {err:.3g})")
    return Exponents(g, d, ge, de)


INDEX_NAMES = ("alpha", "beta", "alpha0", "beta0", "alpha_inf", "beta_inf", "gamma", "delta")


@dataclass(frozen=True)
class IndexReport:
    """Matuszewska-Orlicz indices of ``Phi`` plus the dilation exponents
    ``gamma``/``delta`` of its inverse ``Phi^{-1}``.

    ``uncertainty`` maps each name to the half-width estimate from the last
    decade of the slope sequence.
    """

    alpha: float
    beta: float
    alpha0: float
    beta0: float
    alpha_inf: float
    beta_inf: float
    gamma: float
    delta: float
    uncertainty: dict = field(default_factory=dict)
    reflexive: bool = False
    diverged: tuple = ()

    def to_json(self) -> dict:
        out = {name: _finite_or_str(getattr(self, name)) for name in INDEX_NAMES}
        out["uncertainty"] = {k: float(v) for k, v in sorted(self.uncertainty.items())}
        out["reflexive"] = bool(self.reflexive)
        out["diverged"] = list(self.diverged)
        return out

    def chain_holds(self, slack: float = 0.0) -> bool:
        """The ordering ``alpha <= min(alpha0, alpha_inf) <= max(beta0, beta_inf) <= beta``."""
        u = self.uncertainty
        tol = slack + max(u.values(), default=0.0)
        return (
            self.alpha <= min(self.alpha0, self.alpha_inf) + tol
            and min(self.alpha0, self.alpha_inf) <= max(self.beta0, self.beta_inf) + tol
            and max(self.beta0, self.beta_inf) <= self.beta + tol
            and self.alpha0 <= self.beta0 + tol
            and self.alpha_inf <= self.beta_inf + tol
        )


def _finite_or_str(v):
    return float(v) if math.isfinite(v) else "inf"


def matuszewska_orlicz_indices(phi: NFunction, config: IndexConfig = DEFAULT_CONFIG) -> IndexReport:
    """All six Matuszewska-Orlicz indices of ``phi`` from log-slopes of the
    dilation functions at the ends of the t grid.

    Raises :class:`IndexDivergedError` if a slope moves by more than
    ``config.divergence_tol`` across the last decade.
    """
    prof = dilation_profile(phi, config)
    values, unc = {}, {}
    pairs = (("alpha", prof.log_m, "low"), ("beta", prof.log_m, "high"),
             ("alpha0", prof.log_m0, "low"), ("beta0", prof.log_m0, "high"),
             ("alpha_inf", prof.log_minf, "low"), ("beta_inf", prof.log_minf, "high"))
    diverged = []
    for name, logs, side in pairs:
        v, e = _slope_estimates(prof, logs, side)
        if e > config.divergence_tol:
            raise IndexDivergedError(f"{name} slope failed to stabilise (spread {e:.3g})")
        if v > config.infinite_slope:
            diverged.append(name)
            v = math.inf
        values[name], unc[name] = v, e
    try:
        inv = dilation_exponents(inverse_log_function(phi), config)
        values["gamma"], values["delta"] = inv.gamma, inv.delta
        unc["gamma"], unc["delta"] = inv.gamma_err, inv.delta_err
    except (IndexDivergedError, DilationInfiniteError):
        values["gamma"] = values["delta"] = math.nan
        diverged.append("gamma/delta")
    reflexive = (values["alpha0"] - unc["alpha0"] > 1.0
                 and values["beta0"] + unc["beta0"] < config.infinite_slope)
    return IndexReport(uncertainty=unc, reflexive=bool(reflexive),
                       diverged=tuple(diverged), **values)
