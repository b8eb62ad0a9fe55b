"""Localisation pipeline: per-point equivalence bounds, Fredholm
certificates for the local representatives, and the aggregated verdict.

For each point ``tau`` the user supplies a local representative ``a_tau``
and optionally ``theta(tau)``.  A row is accepted when

* the equivalence bound
  ``C (3 c_space (||d||_inf + V(d)))**(1-theta) (inf_f ||d f||_inf)**theta``
  with ``d = a - a_tau`` vanishes, and
* ``T(a_tau)`` carries a Fredholm certificate.

The global verdict is Fredholm only if every row is accepted.  The
constants ``C`` and ``c_space`` only matter through "bound is zero or not".
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from scipy import optimize

from .errors import CoverError, DomainError
from .majorant import PhiTheta, build_phi_theta, theta_range
from .indices import matuszewska_orlicz_indices
from .nfunction import NFunction
from .operators import toeplitz
from .symbols import BumpFunction, Symbol, bump_infimum, local_distance, symbol_from_json, wrap

ZERO_TOL = 1e-8
EXIT_CODES = {"Fredholm": 0, "withheld": 2, "not-Fredholm": 2, "inconclusive": 3}


# -- Fredholm certificates ----------------------------------------------------

@dataclass(frozen=True)
class FredholmCertificate:
    method: str
    min_abs: float
    winding: int | None
    index: int | None
    verdict: str
    evidence: dict = field(default_factory=dict)

    def to_json(self):
        return {"method": self.method, "min_abs": self.min_abs, "winding": self.winding,
                "index": self.index, "verdict": self.verdict, "evidence": self.evidence}


def winding_number(a: Symbol, n: int = 4096, max_n: int = 2 ** 20) -> int:
    """Net change of ``arg a`` over ``[-pi, pi]`` divided by ``2 pi``.

    The grid is refined until no step turns the argument by more than
    ``pi/4``, so the accumulated phase cannot skip a turn.
    """
    while True:
        th = np.linspace(-math.pi, math.pi, n + 1)
        vals = a.evaluate(th)
        # close the loop with the one-sided limit at pi
        vals[-1] = a.one_sided(-math.pi)[0]
        steps = np.angle(vals[1:] / vals[:-1])
        if np.max(np.abs(steps)) < math.pi / 4 or n >= max_n:
            return int(round(float(np.sum(steps)) / (2 * math.pi)))
        n *= 4


def _min_abs(a: Symbol, n: int = 8192) -> float:
    th = np.linspace(-math.pi, math.pi, n + 1)
    vals = np.abs(a.evaluate(th))
    i = int(np.argmin(vals))
    best = float(vals[i])
    h = 2 * math.pi / n
    res = optimize.minimize_scalar(lambda t: float(np.abs(a.evaluate(np.array([t])))[0]),
                                   bounds=(th[i] - h, th[i] + h), method="bounded",
                                   options={"xatol": 1e-13})
    best = min(best, float(res.fun))
    for b in a.breakpoints:
        best = min(best, *(abs(v) for v in a.one_sided(b)))
    return best


def sigma_min_trend(a: Symbol, Ns=(8, 16, 32)) -> dict:
    out = {}
    for N in Ns:
        out[str(N)] = float(np.linalg.svd(toeplitz(a, N), compute_uv=False)[-1])
    return out


def fredholm_certificate(a_tau: Symbol, n_grid: int = 8192, zero_tol: float = 1e-10,
                         evidence: bool = True) -> FredholmCertificate:
    """Classical criterion for a continuous symbol: ``T(a)`` is Fredholm iff
    ``a`` has no zero, and then its index is minus the winding number.

    Symbols with jumps get ``inconclusive`` with finite-section evidence.
    """
    scale = max(1.0, a_tau.sup_norm())
    m = _min_abs(a_tau, n_grid)
    ev = {"sigma_min": sigma_min_trend(a_tau)} if evidence else {}
    if not a_tau.is_continuous(tol=1e-9):
        return FredholmCertificate("finite-section", m, None, None, "inconclusive", ev)
    if m <= zero_tol * scale:
        return FredholmCertificate("winding", m, None, None, "not-Fredholm", ev)
    w = winding_number(a_tau)
    if evidence and w > 0:
        # T(a)^H then has a kernel; its finite sections show a vector with tiny image
        T = toeplitz(a_tau, 32).conj().T
        ev["adjoint_min_residual"] = float(np.linalg.svd(T, compute_uv=False)[-1])
    return FredholmCertificate("winding", m, w, -w, "Fredholm", ev)


# -- cover ---------------------------------------------------------------------

def default_bump_params(taus):
    """Half-widths ``(w, u)`` so that the ``u``-intervals cover the circle."""
    pts = np.sort(wrap(np.asarray(taus, dtype=float)))
    if pts.size == 0:
        raise CoverError("tau points do not localise the circle: no points given")
    gaps = np.diff(np.concatenate([pts, [pts[0] + 2 * math.pi]]))
    u = 0.5 * float(gaps.max()) * (1 + 1e-9)
    if u >= math.pi:
        raise CoverError("tau points do not localise the circle: a single point cannot be covered by a bump")
    w = u + min(u, 0.5 * (math.pi - u))
    return w, u


@dataclass(frozen=True)
class CoverReport:
    taus: tuple
    w: float
    u: float
    g_min: float
    g_max: float
    inv_g_max: float
    inv_g_deriv_max: float

    @property
    def passed(self) -> bool:
        return self.g_min >= 1.0 - 1e-12 and self.g_max <= len(self.taus) + 1e-12

    def to_json(self):
        return {"n_taus": len(self.taus), "w": self.w, "u": self.u, "g_min": self.g_min,
                "g_max": self.g_max, "inv_g_max": self.inv_g_max,
                "inv_g_deriv_max": self.inv_g_deriv_max, "passed": self.passed}


def cover_and_partition_check(taus, w=None, u=None, n_grid: int = 16384) -> CoverReport:
    """Evaluate ``g = sum_j f_{tau_j}`` on a dense grid; require ``g >= 1``.

    Also reports ``max 1/g`` and ``max |(1/g)'|`` so that boundedness of
    ``g^{-1}`` and its derivative can be read off.
    """
    taus = tuple(float(t) for t in taus)
    if w is None or u is None:
        dw, du = default_bump_params(taus)
        w = dw if w is None else w
        u = min(du, 0.999 * w) if u is None else u
    try:
        bumps = [BumpFunction(t, w, u) for t in taus]
    except Exception as exc:
        raise CoverError(f"tau points do not localise the circle: {exc}") from None
    th = np.linspace(-math.pi, math.pi, n_grid + 1)
    extra = np.concatenate([np.asarray(f.breakpoints) for f in bumps])
    th = np.sort(np.concatenate([th, extra]))
    g = sum(f.evaluate(th).real for f in bumps)
    dg = sum(f.derivative(th).real for f in bumps)
    g_min = float(g.min())
    with np.errstate(divide="ignore", invalid="ignore"):
        inv = 1.0 / g
        dinv = np.abs(dg) / g ** 2
    rep = CoverReport(taus, float(w), float(u), g_min, float(g.max()), float(inv.max()), float(dinv.max()))
    if g_min < 1.0 - 1e-12:
        raise CoverError(f"tau points do not localise the circle: sum of bumps drops to {g_min:.4g}")
    return rep


# -- equivalence bound -----------------------------------------------------------

@dataclass(frozen=True)
class EquivalenceBound:
    value: float
    inf_term: float
    inf_raw: float
    inf_width: float
    stechkin: float
    c_interp: float
    theta: float
    zero_tol: float

    @property
    def is_zero(self) -> bool:
        return self.value == 0.0

    def to_json(self):
        return {"bound": self.value, "inf_over_bumps": self.inf_raw, "inf_term": self.inf_term,
                "bump_width": self.inf_width, "stechkin": self.stechkin,
                "c_interp": self.c_interp, "theta": self.theta, "zero_tol": self.zero_tol}


def equivalence_bound(a: Symbol, a_tau: Symbol, tau: float, pt: PhiTheta, c_space: float = 1.0,
                      widths=None, zero_tol: float = ZERO_TOL) -> EquivalenceBound:
    """``C (3 c_space (||d||_inf + V(d)))**(1-theta) (inf_f ||d f||_inf)**theta``, ``d = a - a_tau``.

    The infimum over the bump family is estimated by shrinking the bump
    width; it is set to 0 once it is below ``zero_tol * ||a||_inf``.
    """
    d = a - a_tau
    tol = zero_tol * max(a.sup_norm(), 1e-300)
    inf = bump_infimum(a, a_tau, tau, widths=widths, stop_below=0.1 * tol)
    inf_term = 0.0 if inf.value <= tol else inf.value
    st = c_space * (d.sup_norm() + d.total_variation())
    theta = pt.theta
    value = 0.0 if inf_term == 0.0 else pt.c_interp * (3.0 * st) ** (1 - theta) * inf_term ** theta
    return EquivalenceBound(float(value), inf_term, float(inf.value), inf.width, float(st),
                            pt.c_interp, theta, zero_tol)


# -- assignments and the pipeline ------------------------------------------------

@dataclass(frozen=True)
class LocalEntry:
    tau: float
    rep: Symbol
    theta: float | None = None
    tag: str = "user"


@dataclass(frozen=True)
class LocalAssignment:
    entries: tuple

    @property
    def taus(self):
        return tuple(e.tau for e in self.entries)

    @classmethod
    def from_json(cls, data) -> "LocalAssignment":
        if not isinstance(data, list) or not data:
            raise DomainError("assignment JSON must be a nonempty list")
        out = []
        for i, row in enumerate(data):
            if not isinstance(row, dict) or "tau" not in row or "rep" not in row:
                raise DomainError(f"assignment entry {i} needs 'tau' and 'rep'")
            theta = row.get("theta")
            out.append(LocalEntry(float(row["tau"]), symbol_from_json(row["rep"]),
                                  None if theta is None else float(theta), str(row.get("class", "user"))))
        return cls(tuple(out))

    @classmethod
    def pointwise_constant(cls, a: Symbol, taus, theta=None) -> "LocalAssignment":
        from .symbols import TrigPoly

        return cls(tuple(LocalEntry(float(t), TrigPoly.constant(complex(a.evaluate(float(t)))), theta, "constant")
                         for t in taus))


@dataclass(frozen=True)
class LocalisationConfig:
    c_space: float = 1.0
    zero_tol: float = ZERO_TOL
    widths: tuple | None = None
    evidence: bool = False


@dataclass(frozen=True)
class LocalisationReport:
    rows: tuple
    verdict: str
    cover: CoverReport
    constants: dict

    @property
    def exit_code(self) -> int:
        return EXIT_CODES[self.verdict]

    def to_json(self):
        return {"verdict": self.verdict, "exit_code": self.exit_code, "cover": self.cover.to_json(),
                "constants": self.constants, "rows": list(self.rows)}


def localise(a: Symbol, phi: NFunction, assignment: LocalAssignment,
             config: LocalisationConfig = LocalisationConfig()) -> LocalisationReport:
    """Run the local principle on a finite set of points.

    Raises :class:`CoverError` when the bumps at the supplied points do
    not sum to at least 1 on the circle.
    """
    cover = cover_and_partition_check(assignment.taus)
    report = matuszewska_orlicz_indices(phi)
    lo, hi = theta_range(report)
    mid = 0.5 * hi
    pts: dict = {}
    certs: dict = {}
    rows = []
    tol = config.zero_tol * max(a.sup_norm(), 1e-300)
    for e in assignment.entries:
        theta = mid if e.theta is None else e.theta
        if not lo < theta < hi:
            raise DomainError(f"theta({e.tau:.6g}) = {theta} is outside ({lo:g}, {hi:.6g})")
        if theta not in pts:
            pts[theta] = build_phi_theta(phi, theta, report=report)
        pt = pts[theta]
        dist = local_distance(a, e.rep, e.tau, widths=config.widths, stop_below=0.1 * tol)
        eb = equivalence_bound(a, e.rep, e.tau, pt, config.c_space, config.widths, config.zero_tol)
        key = id(e.rep)
        if key not in certs:
            certs[key] = fredholm_certificate(e.rep, evidence=config.evidence)
        cert = certs[key]
        ok = cert.verdict == "Fredholm" and eb.is_zero
        rows.append({
            "tau": e.tau, "theta": theta, "class": e.tag,
            "dist": dist.value, "dist_width": dist.width, "dist_zero": dist.value <= tol,
            **eb.to_json(), "certificate": cert.to_json(), "accepted": ok,
        })
    if any(r["certificate"]["verdict"] == "not-Fredholm" or r["bound"] > 0 for r in rows):
        verdict = "withheld"
    elif any(r["certificate"]["verdict"] == "inconclusive" for r in rows):
        verdict = "inconclusive"
    else:
        verdict = "Fredholm"
    constants = {
        "c_space": config.c_space,
        "c_interp": {f"{t:.12g}": p.c_interp for t, p in sorted(pts.items())},
        "zero_tol": config.zero_tol,
        "theta_range": [lo, hi],
        "note": "constants are grid estimates; the verdict depends only on whether each bound is zero",
    }
    return LocalisationReport(tuple(rows), verdict, cover, constants)
