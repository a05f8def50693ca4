"""Scaling sequence a_n, centering b_n and the associated inverse solvers.

a_n is taken as the exact positive root of L(a) a^-alpha = 1/n rather than
any asymptotic stand-in, so downstream numbers are reproducible bit for
bit.  b_n follows the alpha-case split: 0 below alpha=1, n*mu above, and
n*mu(a_n) in the Cauchy case.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

from scipy.optimize import brentq

from .errors import DivergenceError, DomainError, RegimeError
from .slowvary import SlowVaryFn, ell
from .steplaw import StepLaw


@dataclass
class ScalingTable:
    """Memoized a_n / b_n evaluator for one step law."""

    law: StepLaw
    _a: dict = field(default_factory=dict, repr=False)
    _b: dict = field(default_factory=dict, repr=False)

    def an(self, n: int) -> float:
        """Exact root of L(a) a^-alpha = 1/n (bisection tol 1e-13 relative)."""
        if n < 1:
            raise DomainError("n >= 1 required")
        if n not in self._a:
            self._a[n] = _solve_an(self.law.L, self.law.alpha, n)
        return self._a[n]

    def bn(self, n: int) -> float:
        if n < 1:
            raise DomainError("n >= 1 required")
        if n not in self._b:
            alpha = self.law.alpha
            if alpha < 1:
                val = 0.0
            elif alpha > 1:
                mi = self.law.mean()
                if not mi.is_finite:
                    raise RegimeError("alpha > 1 requires a finite mean")
                val = n * mi.value
            else:
                val = n * self.law.truncated_mean(self.an(n))
            self._b[n] = val
        return self._b[n]

    def kx(self, x: float) -> int:
        """Least integer k with |b_k| >= x (requires |b_n| -> inf)."""
        law = self.law
        drifting = (law.alpha > 1 and law.mean().value != 0) or (
            law.alpha == 1 and abs(law.p - law.q) > 1e-15
        )
        if not drifting:
            raise RegimeError("k_x needs |b_n| -> inf (alpha=1 with p != q, or mu != 0)")
        if abs(self.bn(1)) >= x:
            return 1
        hi = 2
        while abs(self.bn(hi)) < x:
            hi *= 2
            if hi > 1 << 60:
                raise RegimeError("b_n did not reach x; regime mismatch")
        lo = hi // 2
        while hi - lo > 1:
            mid = (lo + hi) // 2
            if abs(self.bn(mid)) >= x:
                hi = mid
            else:
                lo = mid
        return hi


def _solve_an(L: SlowVaryFn, alpha: float, n: int) -> float:
    if L.family == "const":
        return (L.param * n) ** (1.0 / alpha)

    def h(loga: float) -> float:
        a = math.exp(loga)
        return math.log(float(L(a))) - alpha * loga + math.log(n)

    lo, hi = math.log(1e-9), math.log(10.0)
    while h(hi) > 0:
        hi += math.log(10.0)
        if hi > 200:
            raise DomainError("a_n root escaped the search range")
    return math.exp(brentq(h, lo, hi, xtol=1e-15, rtol=1e-14, maxiter=300))


# ---------------------------------------------------------------------------
# b-tilde: the smooth inverse of t = int dx / ell(x)
# ---------------------------------------------------------------------------


def _ell_anchor(f: SlowVaryFn) -> float:
    """Point x* with ell(x*) = L(x*), the natural origin for the time change.

    The printed lower limit 1 makes int_1 dx/ell(x) diverge (ell(1) = 0);
    anchoring at x* keeps the integral finite and shifts t by O(1) only.
    """
    lo, hi = 1.0 + 1e-9, 2.0
    g = lambda x: ell(f, x) - float(f(x))
    while g(hi) < 0:
        hi *= 2
        if hi > 1e12:
            raise DivergenceError("ell never reaches L; family too slow")
    return brentq(g, lo, hi, rtol=1e-13)


def btilde(f: SlowVaryFn, t: float) -> float:
    """Solve int_{x*}^{b} dx/ell(x) = t; satisfies d(btilde)/dt = ell(btilde).

    Requires the infinite-mean regime (ell unbounded).  For t -> 0+ the
    solution tends to the anchor x*.
    """
    if not f.ell_diverges:
        raise DivergenceError("btilde requires ell(n) -> inf")
    if t < 0:
        raise DomainError("t >= 0 required")
    x_star = _ell_anchor(f)
    if t == 0:
        return x_star

    from scipy.integrate import quad

    def time_of(b: float) -> float:
        # integrand 1/ell is smooth and decreasing past the anchor
        total, lo = 0.0, x_star
        while lo < b:
            hi = min(b, lo * 4.0)
            total += quad(lambda u: 1.0 / ell(f, u), lo, hi, epsrel=1e-11, limit=200)[0]
            lo = hi
        return total

    hi = x_star * 2.0
    while time_of(hi) < t:
        hi *= 4.0
        if hi > 1e300:
            raise DomainError("btilde out of floating range")
    return brentq(lambda b: time_of(b) - t, x_star, hi, rtol=1e-11, maxiter=200)
