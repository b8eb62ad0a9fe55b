"""N-functions: convex Orlicz generators with forward and inverse evaluation.

Every family evaluates ``Phi`` on linear arguments (``phi(t)``) and also in
the log domain (``phi.log_eval(x) == log(phi(exp(x)))``).  The log form is
what the index estimators use, because dilation ratios such as
``Phi(t u) / Phi(u)`` quickly leave the float range in linear form.

Families
--------
``Power``                 Phi(t) = t**p
``PowerLog``              Phi(t) = t**p * log(1 + t)**q
``TabulatedConcaveInverse``
                          log-log linear interpolation of (t, Phi(t)) pairs,
                          typically produced from a concave inverse
``Composite``             any vectorised callable supplied by the user
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

import numpy as np
from scipy.special import expit

from .errors import DomainError, RangeError

DEFAULT_DOMAIN = (1e-9, 1e9)
INVERSE_LOG_TOL = 1e-13
INVERSE_MAXITER = 200


def _log_softplus(x):
    """``log(log1p(exp(x)))`` without underflow for very negative ``x``."""
    x = np.asarray(x, dtype=float)
    with np.errstate(divide="ignore"):
        out = np.log(np.logaddexp(0.0, x))
    # log1p(e^x) == e^x to double precision there, so the log is x itself
    return np.where(x < -700.0, x, out)


def _bisect_log(log_eval, ly, tol=INVERSE_LOG_TOL, maxiter=INVERSE_MAXITER):
    """Solve ``log_eval(x) == ly`` elementwise for increasing ``log_eval``."""
    ly = np.atleast_1d(np.asarray(ly, dtype=float))
    lo = np.full_like(ly, -1.0)
    hi = np.full_like(ly, 1.0)
    with np.errstate(over="ignore", invalid="ignore"):
        for _ in range(40):
            bad = log_eval(lo) > ly
            if not bad.any():
                break
            lo = np.where(bad, 2.0 * lo, lo)
        for _ in range(40):
            bad = log_eval(hi) < ly
            if not bad.any():
                break
            hi = np.where(bad, 2.0 * hi, hi)
        for _ in range(maxiter):
            if np.max(hi - lo) < tol:
                break
            mid = 0.5 * (lo + hi)
            above = log_eval(mid) > ly
            hi = np.where(above, mid, hi)
            lo = np.where(above, lo, mid)
    return 0.5 * (lo + hi)


def _scalar_or_array(values, like):
    if np.ndim(like) == 0:
        return float(np.asarray(values).reshape(-1)[0])
    return values


@dataclass(frozen=True)
class ValidationReport:
    """Outcome of :func:`verify_nfunction`; failures are entries, not errors."""

    family: str
    checks: dict
    grid: tuple
    notes: tuple = ()

    @property
    def passed(self) -> bool:
        return all(self.checks.values())

    @property
    def failed(self) -> list:
        return [name for name, ok in self.checks.items() if not ok]


class NFunction:
    """Base class.  Subclasses implement ``log_eval`` and ``_eval``."""

    family = "abstract"
    #: closed forms are valid on all of (0, inf) in the log domain
    analytic = False

    def __init__(self, domain=DEFAULT_DOMAIN):
        lo, hi = float(domain[0]), float(domain[1])
        if not 0.0 < lo < hi:
            raise DomainError(f"invalid domain hint {domain!r}")
        self.domain = (lo, hi)

    # -- log domain ---------------------------------------------------------
    def log_eval(self, x):
        raise NotImplementedError

    def log_inverse(self, ly):
        return _bisect_log(self.log_eval, ly)

    def log_slope(self, x):
        """``d log Phi(e^x) / dx``, i.e. ``t Phi'(t) / Phi(t)``."""
        x = np.asarray(x, dtype=float)
        h = 1e-6
        return (self.log_eval(x + h) - self.log_eval(x - h)) / (2 * h)

    def log_eval_slope(self, x):
        """``(log_eval(x), log_slope(x))`` in one pass."""
        return self.log_eval(x), self.log_slope(x)

    @property
    def log_domain(self):
        """Natural-log range over which ``log_eval`` is trusted, or None."""
        if self.analytic:
            return None
        return (np.log(self.domain[0]), np.log(self.domain[1]))

    # -- linear domain ------------------------------------------------------
    def _eval(self, t):
        with np.errstate(divide="ignore"):
            return np.exp(self.log_eval(np.log(t)))

    def __call__(self, t):
        t_arr = np.asarray(t, dtype=float)
        if np.any(t_arr < 0) or np.any(np.isnan(t_arr)):
            bad = t_arr[(t_arr < 0) | np.isnan(t_arr)].reshape(-1)[0]
            raise DomainError(f"N-function evaluated at negative argument t={bad!r}")
        if np.any(t_arr > self.domain[1]):
            bad = t_arr[t_arr > self.domain[1]].reshape(-1)[0]
            raise RangeError(f"t={bad:g} exceeds domain hint {self.domain[1]:g}", bad)
        flat = t_arr.reshape(-1)
        out = np.zeros_like(flat)
        pos = flat > 0
        if pos.any():
            out[pos] = self._eval(flat[pos])
        if not np.all(np.isfinite(out)):
            bad = flat[~np.isfinite(out)][0]
            raise RangeError(f"Phi({bad:g}) overflows", bad)
        return _scalar_or_array(out.reshape(t_arr.shape), t)

    def _inverse(self, y):
        with np.errstate(divide="ignore"):
            return np.exp(self.log_inverse(np.log(y)))

    def inverse(self, y):
        """Return ``t`` with ``Phi(t) == y``."""
        y_arr = np.asarray(y, dtype=float)
        if np.any(y_arr < 0) or np.any(np.isnan(y_arr)):
            raise DomainError("inverse of an N-function needs y >= 0")
        ymax = self.max_value()
        if np.any(y_arr > ymax):
            bad = y_arr[y_arr > ymax].reshape(-1)[0]
            raise RangeError(f"y={bad:g} is beyond Phi(domain hint)={ymax:g}", bad)
        flat = y_arr.reshape(-1)
        out = np.zeros_like(flat)
        pos = flat > 0
        if pos.any():
            out[pos] = self._inverse(flat[pos])
        return _scalar_or_array(out.reshape(y_arr.shape), y)

    def max_value(self) -> float:
        with np.errstate(over="ignore"):
            return float(np.exp(self.log_eval(np.array([np.log(self.domain[1])]))[0]))

    def derivative(self, t):
        """Phi'(t), from the log slope."""
        t = np.asarray(t, dtype=float)
        out = np.zeros_like(t)
        pos = t > 0
        x = np.log(t[pos])
        out[pos] = np.exp(self.log_eval(x)) * self.log_slope(x) / t[pos]
        return out

    def params(self) -> dict:
        return {}

    def to_json(self) -> dict:
        raise DomainError(f"family {self.family!r} has no JSON form")

    def __repr__(self):
        args = ", ".join(f"{k}={v!r}" for k, v in self.params().items())
        return f"{type(self).__name__}({args})"


class Power(NFunction):
    """``Phi(t) = t**p`` with ``p > 1``."""

    family = "power"
    analytic = True

    def __init__(self, p: float, domain=DEFAULT_DOMAIN):
        super().__init__(domain)
        if not p > 1:
            raise DomainError(f"t**p is an N-function only for p > 1, got p={p}")
        self.p = float(p)

    def log_eval(self, x):
        return self.p * np.asarray(x, dtype=float)

    def log_inverse(self, ly):
        return np.asarray(ly, dtype=float) / self.p

    def log_slope(self, x):
        return np.full_like(np.asarray(x, dtype=float), self.p)

    def _eval(self, t):
        return t**self.p

    def _inverse(self, y):
        return y ** (1.0 / self.p)

    def derivative(self, t):
        t = np.asarray(t, dtype=float)
        return self.p * t ** (self.p - 1.0)

    def params(self):
        return {"p": self.p}

    def to_json(self):
        return {"family": "power", "p": self.p}


class PowerLog(NFunction):
    """``Phi(t) = t**p * log(1 + t)**q`` with ``p > 1`` and ``q >= 0``.

    Its Matuszewska-Orlicz indices are ``alpha = p`` and ``beta = p + q``.
    """

    family = "power_log"
    analytic = True

    def __init__(self, p: float, q: float, domain=DEFAULT_DOMAIN):
        super().__init__(domain)
        if not p > 1 or q < 0:
            raise DomainError(f"need p > 1 and q >= 0, got p={p}, q={q}")
        self.p = float(p)
        self.q = float(q)

    def log_eval(self, x):
        x = np.asarray(x, dtype=float)
        if self.q == 0.0:
            return self.p * x
        return self.p * x + self.q * _log_softplus(x)

    def log_slope(self, x):
        return self.log_eval_slope(x)[1]

    def log_eval_slope(self, x):
        x = np.asarray(x, dtype=float)
        if self.q == 0.0:
            return self.p * x, np.full_like(x, self.p)
        sp = np.logaddexp(0.0, x)
        with np.errstate(divide="ignore", invalid="ignore"):
            lsp = np.log(sp)
            # d/dx log log1p(e^x) = sigmoid(x) / log1p(e^x)
            ratio = expit(x) / sp
        tiny = x < -700.0
        lsp = np.where(tiny, x, lsp)
        ratio = np.where(tiny, 1.0, ratio)
        return self.p * x + self.q * lsp, self.p + self.q * ratio

    def _eval(self, t):
        if self.q == 0.0:
            return t**self.p
        return t**self.p * np.log1p(t) ** self.q

    def derivative(self, t):
        t = np.asarray(t, dtype=float)
        p, q = self.p, self.q
        lg = np.log1p(t)
        out = p * t ** (p - 1.0) * lg**q
        if q:
            with np.errstate(invalid="ignore", divide="ignore"):
                extra = q * t**p * lg ** (q - 1.0) / (1.0 + t)
            out = out + np.where(t > 0, extra, 0.0)
        return out

    def params(self):
        return {"p": self.p, "q": self.q}

    def to_json(self):
        return {"family": "power_log", "p": self.p, "q": self.q}


class TabulatedConcaveInverse(NFunction):
    """N-function given by a table of ``(log t, log Phi(t))`` pairs.

    Interpolation is linear in log-log coordinates, hence exact for powers.
    Below the table a power law (the secant slope over the first decade) is continued (so that the
    modular of sequences with tiny entries stays finite and ``Phi(t)/t -> 0``);
    above the table a :class:`RangeError` is raised.
    """

    family = "tabulated"

    def __init__(self, log_t, log_phi):
        log_t = np.asarray(log_t, dtype=float)
        log_phi = np.asarray(log_phi, dtype=float)
        if log_t.ndim != 1 or log_t.shape != log_phi.shape or log_t.size < 2:
            raise DomainError("table needs two equally long 1-d arrays (>= 2 points)")
        if np.any(np.diff(log_t) <= 0) or np.any(np.diff(log_phi) <= 0):
            raise DomainError("tabulated N-function must be strictly increasing")
        self.log_t = log_t
        self.log_phi = log_phi
        super().__init__((float(np.exp(log_t[0])), float(np.exp(log_t[-1]))))
        # secant over (up to) the first decade: a single segment carries the
        # rounding noise of the table, which long extrapolations would amplify
        k = int(np.searchsorted(log_t, log_t[0] + np.log(10.0)))
        k = min(max(k, 1), log_t.size - 1)
        self._slope0 = (log_phi[k] - log_phi[0]) / (log_t[k] - log_t[0])

    @property
    def log_domain(self):
        return (float(self.log_t[0]), float(self.log_t[-1]))

    def log_eval(self, x):
        x = np.asarray(x, dtype=float)
        if np.any(x > self.log_t[-1] + 1e-12):
            bad = float(np.exp(x[x > self.log_t[-1] + 1e-12].reshape(-1)[0]))
            raise RangeError(f"t={bad:g} is above the tabulated range", bad)
        out = np.interp(x, self.log_t, self.log_phi)
        below = x < self.log_t[0]
        if np.any(below):
            out = np.where(below, self.log_phi[0] + self._slope0 * (x - self.log_t[0]), out)
        return out

    def log_inverse(self, ly):
        ly = np.asarray(ly, dtype=float)
        if np.any(ly > self.log_phi[-1] + 1e-12):
            bad = float(np.exp(ly[ly > self.log_phi[-1] + 1e-12].reshape(-1)[0]))
            raise RangeError(f"y={bad:g} is above the tabulated range", bad)
        out = np.interp(ly, self.log_phi, self.log_t)
        below = ly < self.log_phi[0]
        if np.any(below):
            out = np.where(below, self.log_t[0] + (ly - self.log_phi[0]) / self._slope0, out)
        return out

    def max_value(self):
        return float(np.exp(self.log_phi[-1]))

    def log_slope(self, x):
        x = np.asarray(x, dtype=float)
        seg = np.clip(np.searchsorted(self.log_t, x) - 1, 0, self.log_t.size - 2)
        return (np.diff(self.log_phi) / np.diff(self.log_t))[seg]

    def params(self):
        return {"points": int(self.log_t.size)}

    def to_json(self):
        return {
            "family": "tabulated",
            "log_t": [float(v) for v in self.log_t],
            "log_phi": [float(v) for v in self.log_phi],
        }


@dataclass(eq=False)
class _Callables:
    func: Callable
    inverse: Callable | None = None
    derivative: Callable | None = None


class Composite(NFunction):
    """Wrap an arbitrary vectorised callable as a candidate N-function.

    No property is assumed; use :func:`verify_nfunction` to test it.
    """

    family = "composite"

    def __init__(self, func, name="composite", domain=DEFAULT_DOMAIN,
                 inverse=None, derivative=None):
        super().__init__(domain)
        self._fns = _Callables(func, inverse, derivative)
        self.name = name

    def log_eval(self, x):
        x = np.asarray(x, dtype=float)
        with np.errstate(divide="ignore"):
            return np.log(np.asarray(self._fns.func(np.exp(x)), dtype=float))

    def _eval(self, t):
        return np.asarray(self._fns.func(t), dtype=float)

    def _inverse(self, y):
        if self._fns.inverse is not None:
            return np.asarray(self._fns.inverse(y), dtype=float)
        return super()._inverse(y)

    def derivative(self, t):
        if self._fns.derivative is not None:
            return np.asarray(self._fns.derivative(np.asarray(t, dtype=float)), dtype=float)
        return super().derivative(t)

    def params(self):
        return {"name": self.name}


def nfunction_from_json(data: dict) -> NFunction:
    """Build an N-function from ``{"family": "power_log", "p": 2.0, "q": 1.0}``."""
    if not isinstance(data, dict) or "family" not in data:
        raise DomainError("N-function JSON must be an object with a 'family' key")
    family = data["family"]
    domain = tuple(data.get("domain", DEFAULT_DOMAIN))
    try:
        if family == "power":
            return Power(float(data["p"]), domain=domain)
        if family == "power_log":
            return PowerLog(float(data["p"]), float(data.get("q", 0.0)), domain=domain)
        if family == "tabulated":
            return TabulatedConcaveInverse(data["log_t"], data["log_phi"])
    except KeyError as exc:
        raise DomainError(f"N-function JSON for family {family!r} lacks key {exc}") from None
    raise DomainError(f"unknown N-function family {family!r}")


def log_grid(lo: float, hi: float, per_decade: int) -> np.ndarray:
    """Log-spaced grid from ``lo`` to ``hi`` with ``per_decade`` steps per decade."""
    a, b = np.log10(lo), np.log10(hi)
    n = max(int(round((b - a) * per_decade)), 1)
    return 10.0 ** np.linspace(a, b, n + 1)


def verify_nfunction(phi: NFunction, lo=1e-8, hi=1e8, per_decade=16,
                     rtol=1e-9) -> ValidationReport:
    """Check the N-function axioms on a log grid.

    Checks: ``Phi(0) == 0``, strict monotonicity, midpoint convexity at
    several strides, and the two limit conditions, read off as monotone
    trends of ``Phi(t)/t`` over the three extreme decades at each end.
    """
    notes = []
    dlo, dhi = phi.domain
    if not phi.analytic and (lo < dlo or hi > dhi):
        lo, hi = max(lo, dlo), min(hi, dhi)
        notes.append(f"grid clipped to the tabulated range [{lo:.3g}, {hi:.3g}]")
    t = log_grid(lo, hi, per_decade)
    v = np.asarray(phi(t))
    checks = {}
    checks["zero_at_zero"] = bool(phi(0.0) == 0.0)
    checks["strictly_increasing"] = bool(np.all(np.diff(v) > 0) and v[0] > 0)

    convex = True
    for stride in (1, 4, 16, 64):
        if stride >= t.size:
            break
        s, u = t[:-stride], t[stride:]
        mid = np.asarray(phi(0.5 * (s + u)))
        chord = 0.5 * (np.asarray(phi(s)) + np.asarray(phi(u)))
        if np.any(mid > chord * (1 + rtol)):
            convex = False
            break
    checks["midpoint_convex"] = convex

    decades = np.log10(t)
    k_lo = np.ceil(decades[0])
    k_hi = np.floor(decades[-1])
    low_pts = 10.0 ** np.arange(k_lo, min(k_lo + 3, k_hi) + 1)
    high_pts = 10.0 ** np.arange(max(k_hi - 2, k_lo), k_hi + 1)
    r_low = np.asarray(phi(low_pts)) / low_pts
    r_high = np.asarray(phi(high_pts)) / high_pts
    checks["limit_at_zero"] = bool(low_pts.size >= 2 and np.all(np.diff(r_low) > 0))
    checks["limit_at_infinity"] = bool(high_pts.size >= 2 and np.all(np.diff(r_high) > 0))
    return ValidationReport(phi.family, checks, (float(lo), float(hi), per_decade), tuple(notes))
