"""Slowly varying functions and their de Haan integrals.

Four parametric families are supported, all shifted by e so they are
positive and smooth on [0, inf):

    const(c)        L(x) = c
    logpow(a)       L(x) = (log(e+x))^a
    loglogpow(a)    L(x) = (log(e+log(e+x)))^a
    explogpow(b)    L(x) = exp((log(e+x))^b),  0 < b < 1

On top of the evaluator the module provides the two de Haan integrals

    ell(n)      = int_1^n L(u)/u du        (truncated-mean scale, grows)
    ell_star(n) = int_n^inf L(u)/u du      (finite-mean remainder, shrinks)

together with the summation identities and increment bounds used by the
ladder-epoch and renewal analyses.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable

import numpy as np
from scipy.integrate import quad

from .errors import DivergenceError, DomainError, RegimeError

_E = math.e

FAMILIES = ("const", "logpow", "loglogpow", "explogpow")


@dataclass(frozen=True)
class SlowVaryFn:
    """One member of the supported slowly varying families."""

    family: str
    param: float

    def __post_init__(self):
        if self.family not in FAMILIES:
            raise DomainError(f"unknown family {self.family!r}, expected one of {FAMILIES}")
        if self.family == "const" and self.param <= 0:
            raise DomainError("const family requires a positive constant")
        if self.family == "explogpow" and not 0 < self.param < 1:
            raise DomainError("explogpow exponent must lie in (0, 1)")

    # -- evaluation ---------------------------------------------------------

    def __call__(self, x):
        """L(x) for scalar or array x >= 0 (vectorized)."""
        x = np.asarray(x, dtype=float)
        if np.any(x < 0):
            raise DomainError("L(x) requires x >= 0")
        a = self.param
        if self.family == "const":
            out = np.full_like(x, a)
        elif self.family == "logpow":
            out = np.log(_E + x) ** a
        elif self.family == "loglogpow":
            out = np.log(_E + np.log(_E + x)) ** a
        else:  # explogpow
            out = np.exp(np.log(_E + x) ** a)
        return out if out.ndim else float(out)

    # -- convergence classification ----------------------------------------

    @property
    def ell_diverges(self) -> bool:
        """True when int^inf L(u)/u du = inf, i.e. ell(n) -> inf."""
        if self.family == "const":
            return True
        if self.family == "logpow":
            return self.param >= -1
        if self.family == "loglogpow":
            return True
        return True  # explogpow grows

    @property
    def recip_sum_converges(self) -> bool:
        """Convergence of sum 1/(n L(n)), the transience criterion scale."""
        if self.family == "const":
            return False
        if self.family == "logpow":
            return self.param > 1
        if self.family == "loglogpow":
            return False  # (log log n)^a never beats the log needed
        return True  # explogpow: substitute w=log u, integrand exp(-w^b)

    def to_json(self) -> dict:
        return {"family": self.family, "param": self.param}

    @staticmethod
    def from_json(obj: dict) -> "SlowVaryFn":
        return SlowVaryFn(str(obj["family"]), float(obj["param"]))


def const(c: float) -> SlowVaryFn:
    return SlowVaryFn("const", c)


def logpow(a: float) -> SlowVaryFn:
    return SlowVaryFn("logpow", a)


def loglogpow(a: float) -> SlowVaryFn:
    return SlowVaryFn("loglogpow", a)


def explogpow(b: float) -> SlowVaryFn:
    return SlowVaryFn("explogpow", b)


# ---------------------------------------------------------------------------
# quadrature helpers
# ---------------------------------------------------------------------------


def _quad_decades(func, a: float, b: float, rel: float = 1e-12) -> float:
    """Adaptive quadrature of func over [a, b], split per decade.

    quad alone loses accuracy when the range spans many orders of
    magnitude; geometric subdivision keeps each panel well conditioned.
    """
    if b <= a:
        return 0.0
    total = 0.0
    lo = a
    while lo < b:
        hi = min(b, lo * 10.0) if lo > 0 else min(b, 1.0)
        if hi <= lo:
            hi = b
        val, _ = quad(func, lo, hi, epsabs=0.0, epsrel=rel, limit=200)
        total += val
        lo = hi
    return total


def _logpow_correction(a: float, lo: float, hi: float) -> float:
    # residual of du/u = dw + e*du/(u(e+u)) under w = log(e+u)
    def g(u):
        return math.log(_E + u) ** a / (u * (_E + u))

    if math.isinf(hi):
        val, _ = quad(g, lo, np.inf, epsabs=1e-300, epsrel=1e-12, limit=400)
        return _E * val
    return _E * _quad_decades(g, lo, hi)


# ---------------------------------------------------------------------------
# de Haan integrals
# ---------------------------------------------------------------------------


def ell(f: SlowVaryFn, n: float) -> float:
    """ell(n) = int_1^n L(u)/u du, exact closed forms where available."""
    if n < 1:
        raise DomainError("ell requires n >= 1")
    if n == 1:
        return 0.0
    a = f.param
    if f.family == "const":
        return a * math.log(n)
    if f.family == "logpow":
        w1, w2 = math.log(_E + 1.0), math.log(_E + n)
        if a == -1:
            main = math.log(w2) - math.log(w1)
        else:
            main = (w2 ** (a + 1) - w1 ** (a + 1)) / (a + 1)
        return main + _logpow_correction(a, 1.0, n)
    return _quad_decades(lambda u: f(u) / u, 1.0, n)


def ell_star(f: SlowVaryFn, n: float) -> float:
    """ell_star(n) = int_n^inf L(u)/u du; raises when the tail diverges."""
    if n < 1:
        raise DomainError("ell_star requires n >= 1")
    if f.ell_diverges:
        raise DivergenceError(f"tail integral of L/u diverges for {f.family}({f.param})")
    a = f.param  # only logpow with a < -1 reaches here
    w = math.log(_E + n)
    main = w ** (a + 1) / (-(a + 1))
    return main + _logpow_correction(a, n, math.inf)


def ell_grid(f: SlowVaryFn, ks: np.ndarray) -> np.ndarray:
    """Vectorized ell over a sorted integer/float grid."""
    ks = np.asarray(ks, dtype=float)
    a = f.param
    if f.family == "const":
        return a * np.log(ks)
    if f.family == "logpow":
        w1, w2 = math.log(_E + 1.0), np.log(_E + ks)
        if a == -1:
            main = np.log(w2) - math.log(w1)
        else:
            main = (w2 ** (a + 1) - w1 ** (a + 1)) / (a + 1)
        # correction converges; evaluated exactly at a coarse subgrid and
        # interpolated (error below e*L(k)/k, far under comparison tolerances)
        anchors = np.unique(np.concatenate([ks[:: max(1, len(ks) // 32)], ks[-1:]]))
        corr = np.array([_logpow_correction(a, 1.0, k) for k in anchors])
        return main + np.interp(ks, anchors, corr)
    # slow path for the two exotic families
    out = np.empty(len(ks))
    prev_k, acc = 1.0, 0.0
    for i, k in enumerate(ks):
        acc += _quad_decades(lambda u: f(u) / u, prev_k, k)
        out[i] = acc
        prev_k = k
    return out


def ell_star_grid(f: SlowVaryFn, ks: np.ndarray) -> np.ndarray:
    """Vectorized ell_star over a sorted grid (logpow a < -1 only)."""
    ks = np.asarray(ks, dtype=float)
    if f.ell_diverges:
        raise DivergenceError(f"tail integral of L/u diverges for {f.family}({f.param})")
    a = f.param
    w = np.log(_E + ks)
    main = w ** (a + 1) / (-(a + 1))
    anchors = np.unique(np.concatenate([ks[:: max(1, len(ks) // 32)], ks[-1:]]))
    corr = np.array([_logpow_correction(a, k, math.inf) for k in anchors])
    return main + np.interp(ks, anchors, corr)


# ---------------------------------------------------------------------------
# de Haan summation identity
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class HaanSum:
    """Result of the sum-vs-integral comparison.

    value       direct sum (certified head summation plus bracketed blocks)
    prediction  the integral the identity says the sum is asymptotic to
    diverges    True when the classification says both sides blow up;
                value/prediction are then partial quantities up to n
    err         half-width of the bracket on `value`
    k_start     first index included in partial sums
    """

    value: float
    prediction: float
    diverges: bool
    err: float
    k_start: int


_HEAD_TERMS = 1 << 21


def _integral_converges(g: Callable[[float], float], lo: float) -> tuple[bool, float]:
    """Classify int_lo^inf g by per-decade increments.

    Increments of a regularly varying integrand decay geometrically in
    decades exactly when the integral converges; the remainder is then the
    geometric extrapolation (exact for pure powers).
    """
    total = 0.0
    prev = math.inf
    hi = lo
    for _ in range(16):
        nxt = hi * 10.0
        inc = _quad_decades(g, hi, nxt, rel=1e-10)
        total += inc
        if inc <= 1e-13 * max(total, 1e-300) or inc < 1e-250:
            return True, total
        ratio = inc / prev if prev < math.inf else 0.0
        prev = inc
        hi = nxt
    if ratio >= 0.98:
        return False, total
    return True, total + inc * ratio / (1.0 - ratio)


def _integral_converges_at_zero(g: Callable[[float], float]) -> tuple[bool, float]:
    """Same classification for int_0^1 g (singularity allowed at 0)."""
    total = 0.0
    prev = math.inf
    hi = 1.0
    for _ in range(16):
        lo = hi / 10.0
        inc = _quad_decades(g, lo, hi, rel=1e-10)
        total += inc
        if inc <= 1e-13 * max(total, 1e-300):
            return True, total
        ratio = inc / prev if prev < math.inf else 0.0
        prev = inc
        hi = lo
    if ratio >= 0.98:
        return False, total
    return True, total + inc * ratio / (1.0 - ratio)


def _sum_with_brackets(h: Callable[[np.ndarray], np.ndarray], lo: int, hi: float) -> tuple[float, float]:
    """sum_{k=lo}^{hi} h(k) for nonincreasing h, certified by monotone blocks.

    The first _HEAD_TERMS indices are summed exactly; beyond that each
    geometric block is bracketed between shifted integrals of h.  A
    half-open hi=inf tail is integrated after substituting u = e^w, which
    turns the slowly decaying integrand into a well-behaved one.
    """

    def h1(u: float) -> float:
        return float(h(np.array([u]))[0])

    head_hi = min(hi, lo + _HEAD_TERMS - 1)
    ks = np.arange(lo, int(head_hi) + 1, dtype=float)
    total = float(h(ks).sum())
    err = 0.0
    blo = int(head_hi) + 1
    if math.isinf(hi):
        if blo < 1e18:
            inner = _integral_log_tail(h1, float(blo))
            total += inner + 0.5 * h1(float(blo))
            err += 0.5 * h1(float(blo))
        return total, err
    while blo <= hi:
        bhi = min(hi, blo * 2.0)
        inner = _quad_decades(h1, float(blo), bhi, rel=1e-10)
        lower = inner + _quad_decades(h1, bhi, bhi + 1.0, rel=1e-10)
        upper = h1(float(blo)) + inner
        total += 0.5 * (lower + upper)
        err += 0.5 * (upper - lower)
        blo = int(bhi) + 1
    return total, err


def _integral_log_tail(h1: Callable[[float], float], lo: float) -> float:
    """int_lo^inf h(u) du as int h(e^w) e^w dw, robust to log-slow decay."""

    def g(w: float) -> float:
        if w > 690.0:
            return 0.0
        u = math.exp(w)
        return h1(u) * u

    val, _ = quad(g, math.log(lo), np.inf, epsabs=1e-300, epsrel=1e-10, limit=400)
    return val


def haan_sum(f: SlowVaryFn, mode: str, g: Callable, n: int) -> HaanSum:
    """Compare sum_k L(k)/k g(ell(k)) with its predicted integral.

    mode 'infinite-mean' uses ell and classifies by int_1^inf g;
    mode 'finite-mean' uses ell_star and classifies by int_0^1 g.
    Convergent case: both sides are tails from n. Divergent case: both
    sides are partial sums/integrals up to n, flagged diverges=True.
    """
    if n < 2:
        raise DomainError("haan_sum requires n >= 2")
    if mode not in ("infinite-mean", "finite-mean"):
        raise DomainError(f"unknown mode {mode!r}")

    if mode == "infinite-mean":
        if not f.ell_diverges:
            raise RegimeError("infinite-mean mode requires ell(n) -> inf")
        scale = lambda ks: ell_grid(f, ks)
        converged, _ = _integral_converges(g, 1.0)
        edge = ell(f, n)
    else:
        _ = ell_star(f, n)  # raises DivergenceError when inapplicable
        scale = lambda ks: ell_star_grid(f, ks)
        converged, _ = _integral_converges_at_zero(g)
        edge = ell_star(f, n)

    def h(ks: np.ndarray) -> np.ndarray:
        return f(ks) / ks * np.array([g(t) for t in np.atleast_1d(scale(ks))])

    if converged:
        # tail sum from n against the integral beyond the edge
        value, err = _sum_with_brackets(h, n, math.inf)
        if mode == "infinite-mean":
            _, pred = _integral_converges(g, edge)
        else:
            pred = _quad_decades(g, edge * 1e-14, edge)
        return HaanSum(value, pred, False, err, n)

    # divergent classification: partial sums
    k_start = _first_index_with_scale_one(f, mode)
    ks = np.arange(k_start, n + 1, dtype=float)
    if len(ks) <= _HEAD_TERMS:
        value = float(h(ks).sum())
        err = 0.0
    else:
        value, err = _sum_with_brackets(h, k_start, n)
    if mode == "infinite-mean":
        pred = _quad_decades(g, 1.0, max(edge, 1.0 + 1e-12))
    else:
        pred = _quad_decades(g, edge, 1.0)
    return HaanSum(value, pred, True, err, k_start)


def _first_index_with_scale_one(f: SlowVaryFn, mode: str) -> int:
    k = 2
    while k < 10**9:
        v = ell(f, k) if mode == "infinite-mean" else ell_star(f, k)
        if (mode == "infinite-mean" and v >= 1.0) or (mode == "finite-mean" and v <= 1.0):
            return k
        k *= 2
    raise RegimeError("could not locate the unit scale index")


# ---------------------------------------------------------------------------
# increment bound and composition lemma checks
# ---------------------------------------------------------------------------


def increment_bound_check(f: SlowVaryFn, u: float, v: float, delta: float) -> tuple[float, float]:
    """(ell(v)-ell(u))/L(u) against the shape (v/u)^delta.

    The quotient of the two is the constant the increment bound asserts is
    finite; fit_increment_constant scans a grid for its supremum.
    """
    if u < 1 or v < u:
        raise DomainError("need 1 <= u <= v")
    if delta <= 0:
        raise DomainError("delta must be positive")
    lhs = (ell(f, v) - ell(f, u)) / float(f(u))
    rhs = (v / u) ** delta
    return lhs, rhs


def fit_increment_constant(f: SlowVaryFn, delta: float, grid: np.ndarray) -> float:
    """sup over u<=v in grid of lhs/rhs from increment_bound_check."""
    best = 0.0
    ells = {float(u): ell(f, float(u)) for u in grid}
    for u in grid:
        lu = float(f(u))
        for v in grid:
            if v < u:
                continue
            lhs = (ells[float(v)] - ells[float(u)]) / lu
            best = max(best, lhs / (v / u) ** delta)
    return best


def lemma_ell_check(f: SlowVaryFn, n: int, a_n: float) -> float:
    """ratio ell(n * ell(a_n)) / ell(a_n); tends to 1 along n."""
    if n < 2 or a_n <= 1:
        raise DomainError("need n >= 2 and a_n > 1")
    la = ell(f, a_n)
    return ell(f, n * la) / la
