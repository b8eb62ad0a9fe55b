"""2pi-periodic symbols: trigonometric polynomials, piecewise-C1 functions,
bump functions and their combinations.

Every symbol lives on ``[-pi, pi)`` and is evaluated modulo ``2 pi``.  A
symbol is smooth between its ``breakpoints``; at a breakpoint the two
one-sided branches may differ (a jump) or only their derivatives (a kink).
Generic algorithms (Fourier coefficients, total variation, sup norm, local
distance) work segment by segment from that description.
"""

from __future__ import annotations

import functools
import math
from dataclasses import dataclass

import numpy as np
from scipy import integrate, optimize

from .errors import ConvergenceError, SymbolError

TWO_PI = 2.0 * math.pi
QUAD_ABS_TOL = 1e-10
SUP_GRID = 4096


def wrap(theta):
    """Map angles into ``[-pi, pi)``."""
    out = np.mod(np.asarray(theta, dtype=float) + math.pi, TWO_PI) - math.pi
    return float(out) if np.ndim(theta) == 0 else out


def _quad(f, lo, hi, **kw):
    val, err = integrate.quad(f, lo, hi, epsabs=QUAD_ABS_TOL * 1e-2, epsrel=1e-12,
                              limit=400, **kw)
    if err > QUAD_ABS_TOL:
        raise ConvergenceError(f"quadrature on [{lo:.6g}, {hi:.6g}] reached only {err:.2e}")
    return val


class Symbol:
    """Base class; subclasses provide ``evaluate``, ``derivative`` and
    ``branch`` (the analytic continuation of the piece active at ``mid``)."""

    name = "symbol"

    # -- interface ----------------------------------------------------------
    def evaluate(self, theta):
        raise NotImplementedError

    def derivative(self, theta):
        raise NotImplementedError

    @property
    def breakpoints(self) -> tuple:
        """Points of ``[-pi, pi)`` where the symbol may fail to be C1."""
        return ()

    def branch(self, theta, mid):
        """Values of the smooth piece containing ``mid``, continued to ``theta``."""
        return self.evaluate(theta)

    def branch_derivative(self, theta, mid):
        return self.derivative(theta)

    # -- conveniences -------------------------------------------------------
    def __call__(self, theta):
        return self.evaluate(theta)

    def __add__(self, other):
        return combine("+", self, as_symbol(other))

    def __radd__(self, other):
        return combine("+", as_symbol(other), self)

    def __sub__(self, other):
        return combine("-", self, as_symbol(other))

    def __rsub__(self, other):
        return combine("-", as_symbol(other), self)

    def __mul__(self, other):
        return combine("*", self, as_symbol(other))

    def __rmul__(self, other):
        return combine("*", as_symbol(other), self)

    def __neg__(self):
        return combine("*", TrigPoly.constant(-1.0), self)

    def segments(self):
        """Consecutive ``(lo, hi)`` pairs covering ``[-pi, pi]``."""
        pts = sorted(set([-math.pi] + [float(b) for b in self.breakpoints if -math.pi < b < math.pi] + [math.pi]))
        return list(zip(pts[:-1], pts[1:]))

    def one_sided(self, b):
        """``(a(b-), a(b+))`` at a point, with the wrap at ``+-pi``."""
        b = wrap(b)
        eps = 1e-9
        left_anchor = b if b > -math.pi else math.pi
        left = complex(self.branch(np.array([left_anchor]), left_anchor - eps)[0])
        right = complex(self.branch(np.array([b]), b + eps)[0])
        return left, right

    def jumps(self) -> list:
        """``[(b, |a(b+) - a(b-)|)]`` for every breakpoint and the wrap point."""
        out = []
        for b in sorted(set([-math.pi] + [wrap(x) for x in self.breakpoints])):
            left, right = self.one_sided(b)
            out.append((b, abs(right - left)))
        return out

    def is_continuous(self, tol=1e-12) -> bool:
        scale = max(1.0, self.sup_norm())
        return all(j <= tol * scale for _, j in self.jumps())

    # -- calculus -----------------------------------------------------------
    def fourier_coefficient(self, k: int) -> complex:
        cache = self.__dict__.setdefault("_fourier_cache", {})
        k = int(k)
        if k not in cache:
            cache[k] = self._fourier(k)
        return cache[k]

    def fourier_coefficients(self, lo: int, hi: int) -> np.ndarray:
        """Coefficients for ``k = lo..hi`` inclusive."""
        return np.array([self.fourier_coefficient(k) for k in range(lo, hi + 1)], dtype=complex)

    def _fourier(self, k):
        total = 0.0 + 0.0j
        for lo, hi in self.segments():
            mid = 0.5 * (lo + hi)

            def re(t, m=mid):
                return float(np.real(self.branch(np.array([t]), m)[0]))

            def im(t, m=mid):
                return float(np.imag(self.branch(np.array([t]), m)[0]))

            if k == 0:
                total += complex(_quad(re, lo, hi), _quad(im, lo, hi))
            else:
                # a e^{-ik t} = (u + iv)(cos kt - i sin kt)
                uc = _quad(re, lo, hi, weight="cos", wvar=k)
                us = _quad(re, lo, hi, weight="sin", wvar=k)
                vc = _quad(im, lo, hi, weight="cos", wvar=k)
                vs = _quad(im, lo, hi, weight="sin", wvar=k)
                total += complex(uc + vs, vc - us)
        return total / TWO_PI

    def total_variation(self) -> float:
        if "_tv" not in self.__dict__:
            self.__dict__["_tv"] = self._total_variation()
        return self.__dict__["_tv"]

    def _total_variation(self):
        tv = 0.0
        for lo, hi in self.segments():
            mid = 0.5 * (lo + hi)
            tv += _quad(lambda t, m=mid: float(abs(self.branch_derivative(np.array([t]), m)[0])), lo, hi)
        return tv + sum(j for _, j in self.jumps())

    def sup_norm(self) -> float:
        if "_sup" not in self.__dict__:
            self.__dict__["_sup"] = grid_sup(self, lambda th: np.abs(self.evaluate(th)), -math.pi, math.pi)
        return self.__dict__["_sup"]


def grid_sup(sym: Symbol, absf, lo, hi, n=SUP_GRID, one_sided=None) -> float:
    """Sup of ``absf`` over ``[lo, hi]``: a dense grid, one-sided limits at
    breakpoints, and a bounded local refinement around the best grid point."""
    grid = np.linspace(lo, hi, n + 1)
    bps = [b for b in _unwrapped_breakpoints(sym, lo, hi)]
    if bps:
        # x4 refinement next to breakpoints
        h = (hi - lo) / n
        extra = np.concatenate([b + h * np.linspace(-1, 1, 9) for b in bps])
        grid = np.concatenate([grid, extra[(extra >= lo) & (extra <= hi)]])
    vals = np.asarray(absf(grid), dtype=float)
    best = float(vals.max())
    if one_sided is None:
        one_sided = lambda b: [abs(v) for v in sym.one_sided(b)]  # noqa: E731
    for b in bps:
        best = max(best, *one_sided(b))
    i = int(np.argmax(vals))
    h = (hi - lo) / n
    a, c = max(lo, grid[i] - h), min(hi, grid[i] + h)
    if c > a:
        res = optimize.minimize_scalar(lambda t: -float(absf(np.array([t]))[0]),
                                       bounds=(a, c), method="bounded",
                                       options={"xatol": 1e-12})
        best = max(best, -float(res.fun))
    return best


def _unwrapped_breakpoints(sym, lo, hi):
    """Breakpoints (and the wrap point) of ``sym`` shifted into ``[lo, hi]``."""
    out = []
    for b in set([-math.pi] + [wrap(x) for x in sym.breakpoints]):
        k0 = math.floor((lo - b) / TWO_PI)
        for k in range(k0, k0 + 3):
            x = b + k * TWO_PI
            if lo <= x <= hi:
                out.append(x)
    return sorted(out)


# -- trigonometric polynomials ------------------------------------------------

class TrigPoly(Symbol):
    """``sum_k c_k e^{i k theta}`` with finitely many nonzero ``c_k``."""

    name = "trigpoly"

    def __init__(self, coeffs):
        if isinstance(coeffs, dict):
            items = coeffs.items()
        else:
            items = ((int(k), complex(v)) for k, v in coeffs)
        clean = {}
        for k, v in items:
            v = complex(v)
            if v != 0:
                clean[int(k)] = clean.get(int(k), 0) + v
        self.coeffs = {k: v for k, v in sorted(clean.items()) if v != 0}
        self.degree = max((abs(k) for k in self.coeffs), default=0)

    @classmethod
    def constant(cls, c):
        return cls({0: c})

    @classmethod
    def chi(cls, m: int):
        return cls({int(m): 1.0})

    @classmethod
    def from_array(cls, c, offset):
        """Coefficients ``c[j]`` at index ``j - offset``."""
        return cls({j - offset: v for j, v in enumerate(c)})

    @classmethod
    def random(cls, rng, degree: int, scale=1.0):
        ks = range(-degree, degree + 1)
        return cls({k: scale * complex(rng.standard_normal(), rng.standard_normal()) for k in ks})

    def coefficient_array(self, n=None):
        n = self.degree if n is None else n
        out = np.zeros(2 * n + 1, dtype=complex)
        for k, v in self.coeffs.items():
            if abs(k) <= n:
                out[k + n] = v
        return out

    def evaluate(self, theta):
        th = np.asarray(theta, dtype=float)
        n = self.degree
        z = np.exp(1j * th)
        poly = self.coefficient_array()[::-1]
        out = np.polyval(poly, z) * z ** (-n) if n else np.full(th.shape, self.coefficient_array()[0])
        return complex(out) if np.ndim(theta) == 0 else out

    def derivative(self, theta):
        d = TrigPoly({k: 1j * k * v for k, v in self.coeffs.items()})
        return d.evaluate(theta)

    def fourier_coefficient(self, k):
        return self.coeffs.get(int(k), 0j)

    def _total_variation(self):
        # the constant term does not matter, so a - c shares the value of a
        key = tuple(sorted((k, v) for k, v in self.coeffs.items() if k != 0 and v != 0))
        return _trigpoly_tv(key)

    def tilde(self):
        """``a(-theta)``."""
        return TrigPoly({-k: v for k, v in self.coeffs.items()})

    def __add__(self, other):
        if isinstance(other, (int, float, complex)):
            other = TrigPoly.constant(other)
        if isinstance(other, TrigPoly):
            out = dict(self.coeffs)
            for k, v in other.coeffs.items():
                out[k] = out.get(k, 0) + v
            return TrigPoly(out)
        return super().__add__(other)

    __radd__ = __add__

    def __neg__(self):
        return TrigPoly({k: -v for k, v in self.coeffs.items()})

    def __sub__(self, other):
        if isinstance(other, (int, float, complex, TrigPoly)):
            return self + (-as_symbol(other))
        return super().__sub__(other)

    def __rsub__(self, other):
        return as_symbol(other) + (-self)

    def __mul__(self, other):
        if isinstance(other, (int, float, complex)):
            return TrigPoly({k: other * v for k, v in self.coeffs.items()})
        if isinstance(other, TrigPoly):
            out = {}
            for k, v in self.coeffs.items():
                for j, w in other.coeffs.items():
                    out[k + j] = out.get(k + j, 0) + v * w
            return TrigPoly(out)
        return super().__mul__(other)

    __rmul__ = __mul__

    def to_json(self):
        return {"kind": "trigpoly",
                "coeffs": [[k, v.real, v.imag] for k, v in self.coeffs.items()]}

    def __repr__(self):
        return f"TrigPoly(degree={self.degree}, terms={len(self.coeffs)})"


def as_symbol(x) -> Symbol:
    if isinstance(x, Symbol):
        return x
    if isinstance(x, (int, float, complex, np.number)):
        return TrigPoly.constant(complex(x))
    raise SymbolError(f"cannot use {x!r} as a symbol")


@functools.lru_cache(maxsize=4096)
def _trigpoly_tv(key) -> float:
    if not key:
        return 0.0
    d = TrigPoly({k: 1j * k * v for k, v in key})
    return _quad(lambda t: float(abs(d.evaluate(t))), -math.pi, math.pi)


# -- piecewise C1 -------------------------------------------------------------

@dataclass(frozen=True)
class Piece:
    start: float
    end: float
    func: object
    deriv: object
    expr: str | None = None


_ALLOWED_FUNCS = ("exp", "cos", "sin", "sqrt", "Abs", "log")


def _compile_expr(expr: str):
    import sympy

    theta = sympy.Symbol("theta", real=True)
    local = {"theta": theta, "t": theta, "I": sympy.I, "i": sympy.I, "pi": sympy.pi,
             "E": sympy.E}
    local.update({name: getattr(sympy, name) for name in _ALLOWED_FUNCS})
    local["abs"] = sympy.Abs
    try:
        e = sympy.parse_expr(expr.replace("^", "**"), local_dict=local,
                             global_dict={"__builtins__": {}, "Integer": sympy.Integer,
                                          "Float": sympy.Float, "Rational": sympy.Rational,
                                          "Symbol": sympy.Symbol})
    except Exception as exc:  # sympy raises many types on bad input
        raise SymbolError(f"cannot parse expression {expr!r}: {exc}") from None
    if not isinstance(e, sympy.Expr) or e.free_symbols - {theta}:
        raise SymbolError(f"expression {expr!r} may only depend on theta")
    for f in e.atoms(sympy.Function):
        if type(f).__name__ not in _ALLOWED_FUNCS:
            raise SymbolError(f"function {type(f).__name__} is not allowed in {expr!r}")
    d = sympy.diff(e, theta)
    f_num = sympy.lambdify(theta, e, "numpy")
    d_num = sympy.lambdify(theta, d, "numpy")

    def vec(fn):
        def call(t):
            t = np.asarray(t, dtype=float)
            return np.broadcast_to(np.asarray(fn(t), dtype=complex), t.shape).copy()
        return call

    return vec(f_num), vec(d_num)


class PiecewiseC1(Symbol):
    """Finitely many C1 pieces ``[start, end)`` tiling ``[-pi, pi)``."""

    name = "piecewise"

    def __init__(self, pieces):
        pieces = sorted(pieces, key=lambda p: p.start)
        if not pieces:
            raise SymbolError("a piecewise symbol needs at least one piece")
        if abs(pieces[0].start + math.pi) > 1e-12 or abs(pieces[-1].end - math.pi) > 1e-12:
            raise SymbolError("pieces must start at -pi and end at pi")
        for p, q in zip(pieces, pieces[1:]):
            if abs(p.end - q.start) > 1e-12:
                raise SymbolError(f"pieces leave a gap or overlap at {p.end}")
        for p in pieces:
            if not p.start < p.end:
                raise SymbolError("each piece needs start < end")
        self.pieces = tuple(pieces)
        self._starts = np.array([p.start for p in pieces])

    @classmethod
    def from_exprs(cls, data):
        """``[(start, end, "expr"), ...]``"""
        pieces = []
        for lo, hi, expr in data:
            f, d = _compile_expr(expr)
            pieces.append(Piece(float(lo), float(hi), f, d, expr))
        return cls(pieces)

    @classmethod
    def from_callables(cls, data):
        """``[(start, end, func, derivative), ...]`` with vectorised callables."""
        return cls([Piece(float(lo), float(hi), f, d) for lo, hi, f, d in data])

    @property
    def breakpoints(self):
        return tuple(p.start for p in self.pieces[1:])

    def _index(self, theta):
        return np.clip(np.searchsorted(self._starts, theta, side="right") - 1, 0, len(self.pieces) - 1)

    def _apply(self, theta, attr):
        th = wrap(np.atleast_1d(np.asarray(theta, dtype=float)))
        idx = self._index(th)
        out = np.zeros(th.shape, dtype=complex)
        for i, p in enumerate(self.pieces):
            m = idx == i
            if m.any():
                out[m] = getattr(p, attr)(th[m])
        return out

    def evaluate(self, theta):
        out = self._apply(theta, "func")
        return complex(out[0]) if np.ndim(theta) == 0 else out.reshape(np.shape(theta))

    def derivative(self, theta):
        out = self._apply(theta, "deriv")
        return complex(out[0]) if np.ndim(theta) == 0 else out.reshape(np.shape(theta))

    def _piece_at(self, mid):
        return self.pieces[int(self._index(np.array([wrap(mid)]))[0])]

    def _local(self, theta, mid):
        """``theta`` expressed in the same 2pi-window as the piece holding ``mid``."""
        p = self._piece_at(mid)
        th = np.asarray(theta, dtype=float)
        inside = (th >= p.start - 1e-12) & (th <= p.end + 1e-12)
        shifted = mid + np.mod(th - mid + math.pi, TWO_PI) - math.pi
        return p, np.where(inside, th, shifted)

    def branch(self, theta, mid):
        p, th = self._local(theta, mid)
        return np.asarray(p.func(th), dtype=complex)

    def branch_derivative(self, theta, mid):
        p, th = self._local(theta, mid)
        return np.asarray(p.deriv(th), dtype=complex)

    def to_json(self):
        if any(p.expr is None for p in self.pieces):
            raise SymbolError("piecewise symbol built from callables has no JSON form")
        return {"kind": "piecewise",
                "pieces": [{"from": p.start, "to": p.end, "expr": p.expr} for p in self.pieces]}

    def __repr__(self):
        return f"PiecewiseC1(pieces={len(self.pieces)})"


# -- bumps --------------------------------------------------------------------

def smoothstep(x):
    x = np.clip(x, 0.0, 1.0)
    return x * x * (3.0 - 2.0 * x)


class BumpFunction(Symbol):
    """Equal to 1 on ``|theta - tau| <= u``, 0 for ``|theta - tau| >= w``
    (distances taken modulo 2pi), with monotone cubic smoothstep ramps."""

    name = "bump"

    def __init__(self, tau: float, w: float, u: float):
        if not 0 < u < w < math.pi:
            raise SymbolError(f"bump needs 0 < u < w < pi, got u={u}, w={w}")
        self.tau, self.w, self.u = wrap(tau), float(w), float(u)

    def _offset(self, theta):
        return wrap(np.asarray(theta, dtype=float) - self.tau)

    def evaluate(self, theta):
        d = np.abs(self._offset(theta))
        x = (d - self.u) / (self.w - self.u)
        out = (1.0 - smoothstep(x)).astype(complex)
        return complex(out) if np.ndim(theta) == 0 else out

    def derivative(self, theta):
        off = self._offset(theta)
        x = np.clip((np.abs(off) - self.u) / (self.w - self.u), 0.0, 1.0)
        ds = 6.0 * x * (1.0 - x) / (self.w - self.u)
        out = (-ds * np.sign(off)).astype(complex)
        return complex(out) if np.ndim(theta) == 0 else out

    @property
    def breakpoints(self):
        return tuple(sorted(wrap(self.tau + s) for s in (-self.w, -self.u, self.u, self.w)))

    def sup_norm(self):
        return 1.0

    def to_json(self):
        return {"kind": "bump", "tau": self.tau, "w": self.w, "u": self.u}

    def __repr__(self):
        return f"BumpFunction(tau={self.tau:.6g}, w={self.w:.3g}, u={self.u:.3g})"


def make_bump(tau: float, w: float, u: float) -> BumpFunction:
    return BumpFunction(tau, w, u)


# -- combinations -------------------------------------------------------------

class CombinedSymbol(Symbol):
    """Pointwise ``a + b``, ``a - b`` or ``a * b``."""

    name = "combined"

    def __init__(self, op, a: Symbol, b: Symbol):
        if op not in "+-*":
            raise SymbolError(f"unknown operation {op!r}")
        self.op, self.a, self.b = op, a, b

    def _combine(self, va, vb):
        if self.op == "+":
            return va + vb
        if self.op == "-":
            return va - vb
        return va * vb

    def evaluate(self, theta):
        return self._combine(self.a.evaluate(theta), self.b.evaluate(theta))

    def derivative(self, theta):
        da, db = self.a.derivative(theta), self.b.derivative(theta)
        if self.op == "*":
            return da * self.b.evaluate(theta) + self.a.evaluate(theta) * db
        return self._combine(da, db)

    @property
    def breakpoints(self):
        return tuple(sorted(set(self.a.breakpoints) | set(self.b.breakpoints)))

    def branch(self, theta, mid):
        return self._combine(np.asarray(self.a.branch(theta, mid)), np.asarray(self.b.branch(theta, mid)))

    def branch_derivative(self, theta, mid):
        da = np.asarray(self.a.branch_derivative(theta, mid))
        db = np.asarray(self.b.branch_derivative(theta, mid))
        if self.op == "*":
            return da * self.b.branch(theta, mid) + self.a.branch(theta, mid) * db
        return self._combine(da, db)

    def __repr__(self):
        return f"({self.a!r} {self.op} {self.b!r})"


def combine(op, a, b) -> Symbol:
    return CombinedSymbol(op, a, b)


# -- JSON ---------------------------------------------------------------------

def symbol_from_json(data) -> Symbol:
    if not isinstance(data, dict) or "kind" not in data:
        raise SymbolError("symbol JSON must be an object with a 'kind' key")
    kind = data["kind"]
    try:
        if kind == "trigpoly":
            rows = data["coeffs"]
            coeffs = {}
            for row in rows:
                if len(row) not in (2, 3):
                    raise SymbolError(f"bad coefficient entry {row!r}")
                k = int(row[0])
                coeffs[k] = coeffs.get(k, 0) + complex(float(row[1]), float(row[2]) if len(row) == 3 else 0.0)
            return TrigPoly(coeffs)
        if kind == "piecewise":
            return PiecewiseC1.from_exprs([(float(p["from"]), float(p["to"]), str(p["expr"]))
                                           for p in data["pieces"]])
        if kind == "bump":
            return BumpFunction(float(data["tau"]), float(data["w"]), float(data["u"]))
    except (KeyError, TypeError, ValueError) as exc:
        raise SymbolError(f"malformed {kind!r} symbol: {exc}") from None
    raise SymbolError(f"unknown symbol kind {kind!r}")


# -- operations ---------------------------------------------------------------

def fourier_coefficient(a: Symbol, k: int) -> complex:
    return a.fourier_coefficient(k)


def total_variation(a: Symbol) -> float:
    return a.total_variation()


def stechkin_bound(a: Symbol, c_space: float = 1.0) -> float:
    """``c_space * (||a||_inf + V(a))``, an upper bound for the multiplier norm."""
    if not c_space > 0:
        raise SymbolError("c_space must be positive")
    return c_space * (a.sup_norm() + a.total_variation())


def fejer_mean(a: Symbol, n: int) -> TrigPoly:
    """``sigma_n(a)``: coefficients ``c_k (1 - |k|/(n+1))`` for ``|k| <= n``."""
    if n < 0:
        raise SymbolError("Fejer index must be nonnegative")
    return TrigPoly({k: a.fourier_coefficient(k) * (1.0 - abs(k) / (n + 1.0))
                     for k in range(-n, n + 1)})


def partial_sum(a: Symbol, n: int) -> TrigPoly:
    return TrigPoly({k: a.fourier_coefficient(k) for k in range(-n, n + 1)})


def default_widths(start=math.pi / 2, stop=1e-12, ratio=0.25):
    n = int(math.ceil(math.log(stop / start) / math.log(ratio))) + 1
    return start * ratio ** np.arange(n)


@dataclass(frozen=True)
class LocalDistance:
    value: float
    width: float
    history: tuple


def local_distance(a: Symbol, b: Symbol, tau: float, widths=None, stop_below=None) -> LocalDistance:
    """Estimate ``dist_tau(a, b) = inf_{u ni tau} sup_u |a - b|``.

    Half-widths ``h`` shrink geometrically; for each, the grid sup on
    ``[tau - h, tau + h]`` (including one-sided limits at breakpoints) is
    computed and the running minimum kept.  ``stop_below`` ends the
    schedule once the estimate is that small.
    """
    d = a - b
    widths = default_widths() if widths is None else widths
    best, hist, width = math.inf, [], float(widths[0])
    for h in widths:
        v = grid_sup(d, lambda th: np.abs(d.evaluate(th)), tau - h, tau + h)
        if v < best:
            best, width = v, float(h)
        hist.append((float(h), float(best)))
        if stop_below is not None and best <= stop_below:
            break
    return LocalDistance(best, width, tuple(hist))


def bump_infimum(a: Symbol, b: Symbol, tau: float, widths=None, stop_below=None) -> LocalDistance:
    """``inf_f ||(a - b) f||_inf`` over the bumps ``f`` centred at ``tau``
    with ``W = h`` and ``U = h/2``, for the shrinking schedule of ``h``."""
    d = a - b
    widths = default_widths() if widths is None else widths
    best, hist, width = math.inf, [], float(widths[0])
    for h in widths:
        f = BumpFunction(tau, h, 0.5 * h)
        prod = d * f

        def one_sided(x, prod=prod):
            return [abs(v) for v in prod.one_sided(x)]

        v = grid_sup(prod, lambda th: np.abs(d.evaluate(th) * f.evaluate(th)).real,
                     tau - h, tau + h, one_sided=one_sided)
        if v < best:
            best, width = v, float(h)
        hist.append((float(h), float(best)))
        if stop_below is not None and best <= stop_below:
            break
    return LocalDistance(best, width, tuple(hist))
