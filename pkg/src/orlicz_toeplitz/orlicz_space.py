"""Luxemburg norms on finitely supported sequences, the Calderon
factorization and the interpolation-inequality experiments.

The norm ``||f|| = inf{lam > 0 : sum Phi(|f_n| / lam) <= 1}`` is found by a
safeguarded Newton iteration on ``s = log lam`` for the convex map
``s -> log rho(f e^{-s})``, evaluated entirely in the log domain.  The
solver is vectorised over leading axes, so many sequences (rows) are
handled at once.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
from scipy.special import logsumexp

from .errors import DomainError
from .nfunction import NFunction

NEWTON_MAXITER = 100
REL_TOL = 2e-16


@dataclass(frozen=True)
class FiniteSequence:
    """Finitely supported complex sequence on the integers.

    ``support`` is sorted and unique and no stored value is zero.
    """

    support: np.ndarray
    values: np.ndarray

    def __post_init__(self):
        sup = np.asarray(self.support, dtype=np.int64).reshape(-1)
        val = np.asarray(self.values, dtype=complex).reshape(-1)
        if sup.shape != val.shape:
            raise DomainError("support and values differ in length")
        order = np.argsort(sup, kind="stable")
        sup, val = sup[order], val[order]
        if sup.size and np.any(np.diff(sup) == 0):
            raise DomainError("support indices must be unique")
        keep = val != 0
        object.__setattr__(self, "support", sup[keep])
        object.__setattr__(self, "values", val[keep])

    @classmethod
    def from_dense(cls, values, start: int = 0) -> "FiniteSequence":
        values = np.asarray(values, dtype=complex)
        return cls(np.arange(start, start + values.size), values)

    @classmethod
    def from_json(cls, data) -> "FiniteSequence":
        """From ``[[index, re, im], ...]`` (``im`` optional)."""
        if not isinstance(data, list):
            raise DomainError("sequence JSON must be a list of [index, re, im]")
        idx, vals = [], []
        for row in data:
            if not isinstance(row, (list, tuple)) or len(row) not in (2, 3):
                raise DomainError(f"bad sequence entry {row!r}")
            idx.append(int(row[0]))
            vals.append(complex(float(row[1]), float(row[2]) if len(row) == 3 else 0.0))
        return cls(np.array(idx, dtype=np.int64), np.array(vals, dtype=complex))

    def to_json(self):
        return [[int(k), float(v.real), float(v.imag)] for k, v in zip(self.support, self.values)]

    @property
    def size(self) -> int:
        return int(self.support.size)

    def __abs__(self):
        return FiniteSequence(self.support, np.abs(self.values))

    def dense(self, lo: int, hi: int) -> np.ndarray:
        """Entries on the index window ``lo..hi`` inclusive."""
        out = np.zeros(hi - lo + 1, dtype=complex)
        m = (self.support >= lo) & (self.support <= hi)
        out[self.support[m] - lo] = self.values[m]
        return out


def _abs_values(f) -> np.ndarray:
    if isinstance(f, FiniteSequence):
        return np.abs(f.values)
    return np.abs(np.asarray(f))


def modular(phi: NFunction, f, lam: float = 1.0) -> float:
    """``sum_n Phi(|f_n| / lam)``."""
    if not lam > 0:
        raise DomainError(f"modular needs lambda > 0, got {lam}")
    a = _abs_values(f).reshape(-1)
    a = a[a > 0]
    if a.size == 0:
        return 0.0
    return float(np.sum(phi(a / lam)))


@dataclass
class _NormState:
    s: np.ndarray
    g: np.ndarray
    w: np.ndarray = field(repr=False)
    slope: np.ndarray = field(repr=False)


def _log_abs(a):
    with np.errstate(divide="ignore"):
        return np.log(a)


def _eval_g(phi, la, s):
    """``log rho(|f| e^{-s})``, the weights ``Phi(a_j)/rho`` and log slopes."""
    x = la - s[..., None]
    finite = np.isfinite(x)
    xs = np.where(finite, x, 0.0)
    le, slope = phi.log_eval_slope(xs)
    le = np.where(finite, le, -np.inf)
    top = le.max(axis=-1, keepdims=True)
    e = np.exp(le - top)
    tot = e.sum(axis=-1)
    g = np.log(tot) + top[..., 0]
    w = e / tot[..., None]
    slope = np.where(finite, slope, 0.0)
    return g, w, slope


def _bracket_offsets(phi, n):
    """``log phi^{-1}(1)`` and ``log phi^{-1}(1/n)`` for integer counts ``n``."""
    uniq, inv = np.unique(n, return_inverse=True)
    vals = np.asarray(phi.log_inverse(np.concatenate([[0.0], -np.log(uniq.astype(float))])))
    return vals[0], vals[1:][inv].reshape(n.shape)


def _solve_log_norm(phi: NFunction, la: np.ndarray, s0=None, rel_tol=REL_TOL,
                    feasible=True) -> _NormState:
    """Newton-bisection for ``s`` with ``log rho(|f| e^{-s}) = 0`` along the last axis.

    Every row must have at least one finite entry of ``la = log|f|``.  The
    bracket ``[m / phi^{-1}(1), m / phi^{-1}(1/n)]`` (``m`` the largest
    entry, ``n`` the support size) always contains the norm.
    """
    m = la.max(axis=-1)
    n = np.isfinite(la).sum(axis=-1)
    off_lo, off_hi = _bracket_offsets(phi, n)
    lo = m - off_lo
    hi = m - off_hi
    if s0 is None:
        s = 0.5 * (lo + hi)
    else:
        s = np.clip(s0, lo, hi)
    for _ in range(NEWTON_MAXITER):
        g, w, slope = _eval_g(phi, la, s)
        # g is decreasing in s; g > 0 means lam is too small
        lo = np.where(g > 0, s, lo)
        hi = np.where(g <= 0, s, hi)
        dg = -(w * slope).sum(axis=-1)
        with np.errstate(divide="ignore", invalid="ignore"):
            step = -g / dg
        s_new = s + step
        bad = ~np.isfinite(s_new) | (s_new <= lo) | (s_new >= hi)
        s_new = np.where(bad, 0.5 * (lo + hi), s_new)
        scale = rel_tol * np.maximum(1.0, np.abs(s))
        if feasible:
            done = (np.abs(step) <= 4 * scale) | (hi - lo <= scale) | (g == 0)
        else:
            # Newton is quadratic: a step below sqrt(tol) leaves an error below tol
            done = (np.abs(step) <= np.sqrt(scale)) | (hi - lo <= scale)
        if np.all(done):
            break
        s = np.where(done, s, s_new)
    if not feasible:
        polish = np.isfinite(step) & (np.abs(step) <= np.sqrt(scale))
        return _NormState(np.where(polish, s + np.where(polish, step, 0.0), s), g, w, slope)
    # land on the feasible side: rho(f / lam) <= 1
    for _ in range(8):
        over = g > 0
        if not over.any():
            break
        s = np.where(over, s + np.maximum(np.abs(g / dg), 4 * REL_TOL * np.maximum(1.0, np.abs(s))), s)
        g, w, slope = _eval_g(phi, la, s)
        dg = -(w * slope).sum(axis=-1)
    return _NormState(s, g, w, slope)


def luxemburg_norms(phi: NFunction, X) -> np.ndarray:
    """Row-wise Luxemburg norms of a 2-d (or n-d) array of sequences."""
    A = np.abs(np.asarray(X))
    if A.ndim == 1:
        A = A[None, :]
    out = np.zeros(A.shape[:-1])
    nz = A.max(axis=-1) > 0
    if nz.any():
        st = _solve_log_norm(phi, _log_abs(A[nz]))
        out[nz] = np.exp(st.s)
    return out


def luxemburg_norm(phi: NFunction, f) -> float:
    """Luxemburg norm of a finite sequence (``FiniteSequence`` or array).

    Returns the smallest representable ``lam`` found with
    ``rho(f / lam) <= 1``; the modular at the returned value lies within a
    few ulps of 1.
    """
    a = _abs_values(f).reshape(-1)
    a = a[a > 0]
    if a.size == 0:
        return 0.0
    return float(luxemburg_norms(phi, a[None, :])[0])


def _norm_and_gradient(phi, V, s0=None, rel_tol=REL_TOL):
    """Norms of the rows of ``V`` and the complex gradient ``d||v|| / d conj(v)``.

    With ``a = |v| / ||v||`` the implicit-function rule gives
    ``d||v|| / d|v_j| = Phi'(a_j) / sum_k Phi'(a_k) a_k``.
    """
    A = np.abs(V)
    la = _log_abs(A)
    zero_rows = ~np.isfinite(la.max(axis=-1))
    la = np.where(zero_rows[..., None], 0.0, la)
    st = _solve_log_norm(phi, la, s0, rel_tol, feasible=rel_tol <= REL_TOL)
    norms = np.exp(st.s)
    ws = st.w * st.slope
    denom = ws.sum(axis=-1, keepdims=True)
    with np.errstate(divide="ignore", invalid="ignore"):
        d_abs = np.where(A > 0, ws / (denom * A / norms[..., None]), 0.0)
        phase = np.where(A > 0, V / np.where(A > 0, A, 1.0), 0.0)
    grad = d_abs * phase
    norms = np.where(zero_rows, 0.0, norms)
    grad = np.where(zero_rows[..., None], 0.0, grad)
    return norms, grad, st.s


@dataclass(frozen=True)
class AscentConfig:
    starts: int = 64
    steps: int = 200
    init_step: float = 0.5
    grow: float = 1.25
    shrink: float = 0.5
    # relative tolerance of the norm solves during the search only
    search_tol: float = 1e-9
    stall_window: int = 10
    stall_tol: float = 1e-9


def operator_norm_lower_bounds(phi: NFunction, M, seed=0, config: AscentConfig = AscentConfig()):
    """Lower bounds for ``||M||`` on ``l^Phi`` by gradient ascent of
    ``||M x|| / ||x||`` from random starts.

    ``M`` may carry leading batch axes (``(..., N, N)``); each matrix gets
    ``config.starts`` starts, one of them its top right singular vector.
    Returns an array of the batch shape.  The values are attained ratios,
    hence valid lower bounds.
    """
    M = np.asarray(M, dtype=complex)
    squeeze = M.ndim == 2
    if squeeze:
        M = M[None]
    batch, n = M.shape[:-2], M.shape[-1]
    Mf = M.reshape((-1, n, n))
    B, S = Mf.shape[0], config.starts
    rng = np.random.default_rng(seed)
    X = rng.standard_normal((B, S, n)) + 1j * rng.standard_normal((B, S, n))
    _, _, vh = np.linalg.svd(Mf)
    X[:, 0, :] = vh[:, 0, :].conj()
    X = X.reshape(B * S, n)
    owner = np.repeat(np.arange(B), S)

    def ratio(idx, Xs, sx=None, sy=None, tol=config.search_tol):
        Ms = Mf[owner[idx]]
        nx, gx, sx = _norm_and_gradient(phi, Xs, sx, tol)
        Y = np.einsum("kij,kj->ki", Ms, Xs)
        ny, gy, sy = _norm_and_gradient(phi, Y, sy, tol)
        with np.errstate(divide="ignore", invalid="ignore"):
            r = np.where(nx > 0, ny / nx, 0.0)
        grad = np.einsum("ki,kij->kj", gy, Ms.conj()) / nx[:, None] - (r / nx)[:, None] * gx
        return r, grad, sx, sy

    everything = np.arange(B * S)
    r, grad, sx, sy = ratio(everything, X)
    eta = np.full(r.shape, config.init_step)
    r_check = r.copy()
    active = everything
    for step in range(1, config.steps + 1):
        a = active
        gn = np.linalg.norm(grad[a], axis=-1, keepdims=True)
        xn = np.linalg.norm(X[a], axis=-1, keepdims=True)
        with np.errstate(divide="ignore", invalid="ignore"):
            direction = np.where(gn > 0, grad[a] / gn, 0.0)
        Xn = X[a] + (eta[a, None] * xn) * direction
        rn, gradn, sxn, syn = ratio(a, Xn, sx[a], sy[a])
        acc = rn > r[a]
        hit = a[acc]
        X[hit], grad[hit], r[hit] = Xn[acc], gradn[acc], rn[acc]
        sx[hit], sy[hit] = sxn[acc], syn[acc]
        eta[a] = np.where(acc, eta[a] * config.grow, eta[a] * config.shrink)
        keep = eta[a] >= 1e-10
        if step % config.stall_window == 0:
            # retire starts that stopped improving
            keep &= r[a] - r_check[a] > config.stall_tol * np.abs(r[a])
            r_check[a] = r[a]
        active = a[keep]
        if active.size == 0:
            break
    # X holds each start's best point; re-evaluate it at full precision
    final = ratio(everything, X, sx, sy, REL_TOL)[0]
    out = final.reshape(B, S).max(axis=-1).reshape(batch)
    return float(out[0]) if squeeze else out


def lattice_operator_bound(M) -> np.ndarray:
    """``max(max column abs sum, max row abs sum)``.

    An upper bound for the operator norm on every rearrangement-invariant
    sequence space with the Fatou property (in particular all Orlicz
    spaces), because such spaces are exact interpolation spaces between
    ``l^1`` and ``l^inf``.
    """
    A = np.abs(np.asarray(M))
    return np.maximum(A.sum(axis=-2).max(axis=-1), A.sum(axis=-1).max(axis=-1))


def spectral_norm(M) -> np.ndarray:
    return np.linalg.norm(np.asarray(M), ord=2, axis=(-2, -1))


# -- Calderon factorization -------------------------------------------------

@dataclass(frozen=True)
class CalderonFactorization:
    y: FiniteSequence
    z: FiniteSequence
    lam: float
    x_norm: float
    # log|y_j|, log|z_j| on the support of x (entries may underflow in y, z)
    log_y: np.ndarray = field(default=None, repr=False)
    log_z: np.ndarray = field(default=None, repr=False)


def calderon_factorize(phi0: NFunction, phi1: NFunction, theta: float, x, *,
                       phi: NFunction, c1: float = 1.0) -> CalderonFactorization:
    """Explicit factorization ``|x| <= lam |y|**(1-theta) |z|**theta``.

    ``y_j = phi0^{-1}(Phi(|x_j| / ||x||))`` and likewise ``z`` with
    ``phi1``; ``lam = ||x||_Phi / c1**(1-theta)`` where ``c1`` is the lower
    equivalence constant of the concave majorant.  The compositions are
    evaluated in the log domain so that tiny entries do not underflow.
    """
    if not 0 < theta < 1:
        raise DomainError("theta must lie in (0, 1)")
    if not isinstance(x, FiniteSequence):
        x = FiniteSequence.from_dense(x)
    if x.size == 0:
        raise DomainError("cannot factorize the zero sequence")
    nx = luxemburg_norm(phi, x)
    log_u = np.minimum(phi.log_eval(np.log(np.abs(x.values)) - np.log(nx)), 0.0)
    log_y = np.asarray(phi0.log_inverse(log_u), dtype=float)
    log_z = np.asarray(phi1.log_inverse(log_u), dtype=float)
    y = FiniteSequence(x.support, np.exp(log_y))
    z = FiniteSequence(x.support, np.exp(log_z))
    return CalderonFactorization(y, z, nx / c1 ** (1.0 - theta), nx, log_y, log_z)


def calderon_postconditions(fac: CalderonFactorization, phi0, phi1, theta, x, rtol=1e-9) -> dict:
    """The three conditions: ``||y||_0 <= 1``, ``||z||_1 <= 1`` and the pointwise bound.

    The pointwise bound is compared in logs over the support of ``x``.
    """
    if not isinstance(x, FiniteSequence):
        x = FiniteSequence.from_dense(x)
    ny = luxemburg_norm(phi0, fac.y)
    nz = luxemburg_norm(phi1, fac.z)
    log_rhs = np.log(fac.lam) + (1 - theta) * fac.log_y + theta * fac.log_z
    gap = np.log(np.abs(x.values)) - log_rhs
    return {
        "y_unit_ball": bool(ny <= 1 + rtol),
        "z_unit_ball": bool(nz <= 1 + rtol),
        "pointwise": bool(np.all(gap <= np.log1p(rtol))),
        "norm_y": ny,
        "norm_z": nz,
        "max_ratio": float(np.exp(np.max(gap))),
    }


# -- interpolation inequality ------------------------------------------------

@dataclass(frozen=True)
class InterpolationReport:
    lhs_lower: np.ndarray
    rhs: np.ndarray
    phi_theta_upper: np.ndarray
    l2_norm: np.ndarray
    c_interp: float
    theta: float

    @property
    def violations(self) -> int:
        return int(np.sum(self.lhs_lower > self.rhs))

    @property
    def max_ratio(self) -> float:
        return float(np.max(self.lhs_lower / self.rhs))

    def to_json(self):
        return {
            "theta": self.theta,
            "c_interp": self.c_interp,
            "violations": self.violations,
            "max_lhs_over_rhs": self.max_ratio,
            "lhs_lower": np.atleast_1d(self.lhs_lower).tolist(),
            "rhs": np.atleast_1d(self.rhs).tolist(),
        }


def interpolation_bound_check(matrix, phi: NFunction, pt, seed=0,
                              ascent: AscentConfig = AscentConfig()) -> InterpolationReport:
    """Compare a sampled lower bound for ``||M||_Phi`` against
    ``C * (upper bound for ||M||_{Phi_theta})**(1-theta) * ||M||_2**theta``.

    ``matrix`` may be a single square matrix or a stack of them.
    """
    M = np.asarray(matrix, dtype=complex)
    lhs = operator_norm_lower_bounds(phi, M, seed=seed, config=ascent)
    up = lattice_operator_bound(M)
    l2 = spectral_norm(M)
    rhs = pt.c_interp * up ** (1 - pt.theta) * l2 ** pt.theta
    return InterpolationReport(np.asarray(lhs), np.asarray(rhs), np.asarray(up),
                               np.asarray(l2), pt.c_interp, pt.theta)


def multiplier_inclusion_check(a, phi: NFunction, pt, Ns=(8, 16, 32, 64),
                               c_space: float = 1.0, seed=0,
                               ascent: AscentConfig = AscentConfig(starts=16, steps=100)) -> dict:
    """Sampled ``||L_N(a)||_Phi`` lower bounds against
    ``C * (Stechkin bound)**(1-theta) * ||a||_inf**theta`` for each ``N``."""
    from .operators import build
    from .symbols import stechkin_bound

    sup = a.sup_norm()
    rhs = pt.c_interp * stechkin_bound(a, c_space) ** (1 - pt.theta) * sup ** pt.theta
    rows = []
    for N in Ns:
        L = build(a, "laurent", N).matrix
        lhs = operator_norm_lower_bounds(phi, L, seed=seed, config=ascent)
        rows.append({"N": int(N), "lhs_lower": float(lhs), "l2": float(spectral_norm(L)),
                     "rhs": float(rhs), "violation": bool(lhs > rhs)})
    return {"rows": rows, "violations": sum(r["violation"] for r in rows),
            "c_space": c_space, "c_interp": pt.c_interp, "sup_norm": sup}


def p_norm(f, p: float) -> float:
    a = _abs_values(f).reshape(-1)
    if a.size == 0:
        return 0.0
    m = a.max()
    if m == 0:
        return 0.0
    return float(m * np.sum((a / m) ** p) ** (1.0 / p))


__all__ = [
    "FiniteSequence", "modular", "luxemburg_norm", "luxemburg_norms",
    "operator_norm_lower_bounds", "lattice_operator_bound", "spectral_norm",
    "AscentConfig", "CalderonFactorization", "calderon_factorize",
    "calderon_postconditions", "InterpolationReport", "interpolation_bound_check",
    "multiplier_inclusion_check", "p_norm",
]
