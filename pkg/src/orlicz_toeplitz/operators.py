"""Finite truncations of Laurent, Toeplitz and Hankel operators.

Entry formulas (``a_k`` are the Fourier coefficients of the symbol):

* Laurent ``L(a)`` on ``-N..N`` and Toeplitz ``T(a)`` on ``0..N-1``: ``a_{j-k}``
* Hankel ``H(a)`` on ``0..N-1``: ``a_{j+k+1}``
* Hankel ``H(a~)`` on ``0..N-1``: ``a_{-j-k-1}``
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
from scipy import linalg

from .errors import ConvergenceError, SizeGuardError, SymbolError
from .symbols import Symbol, TrigPoly, fejer_mean, partial_sum

ROLES = {
    "laurent": "laurent",
    "toeplitz": "toeplitz",
    "hankel": "hankel_plus",
    "hankel_plus": "hankel_plus",
    "hankel_minus": "hankel_minus",
    "hankel_tilde": "hankel_minus",
}


@dataclass(frozen=True)
class OperatorTruncation:
    role: str
    window: tuple
    matrix: np.ndarray = field(repr=False)
    N: int
    symbol: object = field(default=None, repr=False)

    @property
    def indices(self) -> np.ndarray:
        return np.arange(self.window[0], self.window[1] + 1)


def _coeffs(a: Symbol, lo: int, hi: int) -> dict:
    return dict(zip(range(lo, hi + 1), a.fourier_coefficients(lo, hi)))


def build(a: Symbol, role: str, N: int) -> OperatorTruncation:
    """Dense truncation of ``L(a)``, ``T(a)``, ``H(a)`` or ``H(a~)``."""
    if N < 1:
        raise SizeGuardError("truncation size N must be at least 1")
    try:
        role = ROLES[role]
    except KeyError:
        raise SymbolError(f"unknown operator role {role!r}") from None
    if role == "laurent":
        size, window = 2 * N + 1, (-N, N)
    else:
        size, window = N, (0, N - 1)
    if role in ("laurent", "toeplitz"):
        c = _coeffs(a, -(size - 1), size - 1)
        col = np.array([c[j] for j in range(size)])
        row = np.array([c[-k] for k in range(size)])
        mat = linalg.toeplitz(col, row)
        # entry (j, k) must be a_{j-k}
        assert mat[-1, 0] == c[size - 1] and mat[0, -1] == c[-(size - 1)]
    else:
        sign = 1 if role == "hankel_plus" else -1
        c = _coeffs(a, 1, 2 * size - 1) if sign > 0 else _coeffs(a, -(2 * size - 1), -1)
        seq = np.array([c[sign * (m + 1)] for m in range(2 * size - 1)])
        mat = linalg.hankel(seq[:size], seq[size - 1:])
    return OperatorTruncation(role, window, np.ascontiguousarray(mat, dtype=complex), int(N), a)


def toeplitz(a, N):
    return build(a, "toeplitz", N).matrix


def laurent(a, N):
    return build(a, "laurent", N).matrix


def hankel(a, N):
    return build(a, "hankel_plus", N).matrix


def hankel_tilde(a, N):
    return build(a, "hankel_minus", N).matrix


def _require_trigpoly(*syms):
    for s in syms:
        if not isinstance(s, TrigPoly):
            raise SymbolError("exact identity checks need trigonometric polynomials")


@dataclass(frozen=True)
class WidomParts:
    t_ab: np.ndarray
    t_a_t_b: np.ndarray
    h_a_h_b_tilde: np.ndarray

    @property
    def residual(self) -> float:
        r = self.t_ab - self.t_a_t_b - self.h_a_h_b_tilde
        return float(np.max(np.abs(r))) if r.size else 0.0


def widom_parts(a: TrigPoly, b: TrigPoly, N: int, window: int) -> WidomParts:
    """The three terms of ``T(ab) = T(a)T(b) + H(a)H(b~)`` on the window."""
    _require_trigpoly(a, b)
    need = window + a.degree + b.degree + 1
    if N < need:
        raise SizeGuardError(f"N={N} truncates the window; need N >= {need}")
    w = slice(0, window)
    t_ab = toeplitz(a * b, N)
    prod = toeplitz(a, N) @ toeplitz(b, N)
    hank = hankel(a, N) @ hankel_tilde(b, N)
    return WidomParts(t_ab[w, w], prod[w, w], hank[w, w])


def widom_residual(a: TrigPoly, b: TrigPoly, N: int, window: int) -> float:
    """Max-abs residual of ``T(ab) - T(a)T(b) - H(a)H(b~)`` on ``0..window-1``."""
    return widom_parts(a, b, N, window).residual


def shift_invariance_residual(a: TrigPoly, n: int, N: int, window: int) -> dict:
    """Residuals of ``T(chi_-n) T(a) T(chi_n) = T(a)`` and the Laurent analogue.

    The Toeplitz check uses indices ``0..window-1`` and the Laurent check
    ``-window..window``.
    """
    _require_trigpoly(a)
    if n < 1:
        raise SizeGuardError("shift n must be positive")
    need = window + n + a.degree
    if N < need:
        raise SizeGuardError(f"N={N} truncates the window; need N >= {need}")
    left, right = TrigPoly.chi(-n), TrigPoly.chi(n)
    T = toeplitz(a, N)
    conj = toeplitz(left, N) @ T @ toeplitz(right, N)
    w = slice(0, window)
    res_t = float(np.max(np.abs(conj[w, w] - T[w, w])))
    L = laurent(a, N)
    conj_l = laurent(left, N) @ L @ laurent(right, N)
    c = slice(N - window, N + window + 1)
    res_l = float(np.max(np.abs(conj_l[c, c] - L[c, c])))
    return {"toeplitz": res_t, "laurent": res_l}


def flip_conjugation_residual(a: Symbol, N: int) -> float:
    """``H(a~)`` built directly against ``J Q L(a) P`` compressed to ``0..N-1``.

    ``P`` keeps indices ``>= 0``, ``Q = I - P`` and ``(J f)_n = f_{-n-1}``.
    """
    L = laurent(a, N)
    idx = np.arange(-N, N + 1)
    P = np.diag((idx >= 0).astype(float))
    Q = np.eye(idx.size) - P
    J = np.zeros((idx.size, idx.size))
    for r, n in enumerate(idx):
        src = -n - 1
        if -N <= src <= N:
            J[r, src + N] = 1.0
    full = J @ Q @ L @ P
    rows = cols = slice(N, 2 * N)
    return float(np.max(np.abs(full[rows, cols] - hankel_tilde(a, N))))


def power_iteration_norm(M, seed=0, maxiter=1000, tol=1e-12) -> float:
    """Largest singular value by power iteration on ``M^H M``."""
    M = np.asarray(M, dtype=complex)
    if not np.any(M):
        return 0.0
    rng = np.random.default_rng(seed)
    v = rng.standard_normal(M.shape[1]) + 1j * rng.standard_normal(M.shape[1])
    v /= np.linalg.norm(v)
    prev = 0.0
    for _ in range(maxiter):
        w = M.conj().T @ (M @ v)
        lam = float(np.real(np.vdot(v, w)))
        nw = np.linalg.norm(w)
        if nw == 0:
            return 0.0
        v = w / nw
        if abs(lam - prev) <= tol * max(lam, 1e-300):
            return float(np.sqrt(lam))
        prev = lam
    raise ConvergenceError(f"power iteration did not settle in {maxiter} steps")


def l2_norm(m, method: str = "svd") -> float:
    """Largest singular value of a truncation (or plain matrix)."""
    M = m.matrix if isinstance(m, OperatorTruncation) else np.asarray(m)
    if M.size == 0:
        return 0.0
    if method == "power":
        return power_iteration_norm(M)
    return float(linalg.svdvals(M)[0])


@dataclass(frozen=True)
class ConsistencyReport:
    Ns: tuple
    laurent: tuple
    toeplitz: tuple
    sup_norm: float

    def _monotone(self, vals, rtol=1e-12):
        return all(b >= a * (1 - rtol) for a, b in zip(vals, vals[1:]))

    @property
    def toeplitz_monotone(self):
        return self._monotone(self.toeplitz)

    @property
    def laurent_monotone(self):
        return self._monotone(self.laurent)

    @property
    def bounded(self):
        top = self.sup_norm * (1 + 1e-9)
        return max(self.laurent + self.toeplitz) <= top

    @property
    def final_gap(self):
        return 1.0 - self.toeplitz[-1] / self.sup_norm if self.sup_norm else 0.0

    def passed(self, gap=0.01):
        return self.toeplitz_monotone and self.laurent_monotone and self.bounded and self.final_gap <= gap

    def to_json(self):
        return {"N": list(self.Ns), "laurent": list(self.laurent), "toeplitz": list(self.toeplitz),
                "sup_norm": self.sup_norm, "final_gap": self.final_gap,
                "monotone": self.toeplitz_monotone and self.laurent_monotone, "bounded": self.bounded}


def l2_multiplier_consistency(a: Symbol, Ns=(8, 16, 32, 64, 128, 256, 512)) -> ConsistencyReport:
    """``sigma_max`` of ``L_N(a)`` and ``T_N(a)`` along a schedule of ``N``."""
    Ns = tuple(int(n) for n in Ns)
    lv = tuple(l2_norm(laurent(a, n)) for n in Ns)
    tv = tuple(l2_norm(toeplitz(a, n)) for n in Ns)
    return ConsistencyReport(Ns, lv, tv, a.sup_norm())


def hankel_fejer_decay(a: Symbol, ns=(1, 2, 4, 8, 16, 32), N: int = 64,
                       approximant: str = "fejer") -> list:
    """``sigma_max(H_N(a) - H_N(a_n))`` and the same for ``H(a~)``, per ``n``.

    ``a_n`` is the Fejer mean (default) or the partial Fourier sum.
    """
    if not a.is_continuous(tol=1e-9):
        raise SymbolError("symbol not continuous")
    approx = {"fejer": fejer_mean, "partial": partial_sum}[approximant]
    H, Ht = hankel(a, N), hankel_tilde(a, N)
    rows = []
    for n in ns:
        an = approx(a, int(n))
        rows.append({
            "n": int(n),
            "hankel": l2_norm(H - hankel(an, N)),
            "hankel_tilde": l2_norm(Ht - hankel_tilde(an, N)),
        })
    return rows
