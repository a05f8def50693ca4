"""Lattice step distributions with exact regularly varying tails.

A StepLaw has pmf

    P(X = x)  = p * alpha * L(x) * x^-(1+alpha)   for x >= t0,
    P(X = -x) = q * alpha * L(x) * x^-(1+alpha)   for x >= t0,

with the remaining mass placed on explicit body sites inside (-t0, t0).
The power-weight form holds with equality, not just asymptotically, so the
local tail hypotheses of the deviation theorems carry zero modeling error.

Tail sums use the Hurwitz zeta function when L is constant and exact head
summation plus a bracketed integral remainder otherwise; every returned
quantity is either exact or carries a certified bound.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Mapping

import mpmath
import numpy as np
from scipy.integrate import quad
from scipy.special import digamma, zeta as hurwitz_zeta

from .errors import ConstructionError, DomainError
from .slowvary import SlowVaryFn, _quad_decades

_EULER = 0.5772156649015328606
_HEAD_CUTOFF = 10**7


@lru_cache(maxsize=64)
def _zeta_const(s: float) -> float:
    return float(mpmath.zeta(s))


def _power_sum_tail(s: float, a: int) -> float:
    """sum_{x>=a} x^-s for s > 1, exact via Hurwitz zeta."""
    return float(hurwitz_zeta(s, a))


def _power_sum_range(s: float, a: int, b: int) -> float:
    """sum_{x=a}^{b} x^-s, any s > 0, machine precision.

    Uses digamma for s=1, Hurwitz differences for s>1 and Euler-Maclaurin
    beyond the head cutoff for s < 1.
    """
    if b < a:
        return 0.0
    if s == 1.0:
        return float(digamma(b + 1) - digamma(a))
    if s > 1.0:
        return float(hurwitz_zeta(s, a) - hurwitz_zeta(s, b + 1))
    # s < 1: partial sums diverge, use zeta(s) + Euler-Maclaurin for the head
    return _em_partial(s, b) - _em_partial(s, a - 1)


def _em_partial(s: float, n: int) -> float:
    """sum_{x=1}^{n} x^-s for 0 < s < 1 (Euler-Maclaurin past the cutoff)."""
    if n <= 0:
        return 0.0
    if n <= _HEAD_CUTOFF:
        xs = np.arange(1, n + 1, dtype=float)
        return float(np.sum(xs**-s))
    z = _zeta_const(s)
    return (
        n ** (1 - s) / (1 - s)
        + z
        + 0.5 * n**-s
        - s / 12.0 * n ** (-s - 1)
        + s * (s + 1) * (s + 2) / 720.0 * n ** (-s - 3)
    )


def _weighted_tail_sum(f: SlowVaryFn, s: float, a: int) -> tuple[float, float]:
    """(value, err) for sum_{x>=a} L(x) x^-s with s > 1.

    Exact head to the cutoff, monotone integral bracket beyond.
    """
    if f.family == "const":
        return f.param * _power_sum_tail(s, a), 0.0
    cut = max(a, _HEAD_CUTOFF)
    xs = np.arange(a, cut + 1, dtype=float)
    head = float(np.sum(f(xs) * xs**-s))

    def h(u):
        return float(f(u)) * u**-s

    def h_log(w):  # u = e^w turns the slow power decay into exponential
        if w > 690.0:
            return 0.0
        u = math.exp(w)
        return float(f(u)) * u ** (1.0 - s)

    inner = quad(h_log, math.log(cut + 1.0), np.inf, epsabs=1e-300, epsrel=1e-11, limit=400)[0]
    lower, upper = inner, inner + h(cut + 1.0)
    return head + 0.5 * (lower + upper), 0.5 * (upper - lower)


def _weighted_range_sum(f: SlowVaryFn, s: float, a: int, b: int) -> tuple[float, float]:
    """(value, err) for sum_{x=a}^{b} L(x) x^-s, any s."""
    if b < a:
        return 0.0, 0.0
    if f.family == "const":
        return f.param * _power_sum_range(s, a, b), 0.0
    if b - a <= _HEAD_CUTOFF:
        xs = np.arange(a, b + 1, dtype=float)
        return float(np.sum(f(xs) * xs**-s)), 0.0
    xs = np.arange(a, a + _HEAD_CUTOFF, dtype=float)
    head = float(np.sum(f(xs) * xs**-s))
    cut = a + _HEAD_CUTOFF

    def h(u):
        return float(f(u)) * u**-s

    inner = _quad_decades(h, float(cut), float(b), rel=1e-11)
    ext = _quad_decades(h, float(b), float(b + 1), rel=1e-11)
    lower, upper = inner + ext, inner + h(float(cut))
    return head + 0.5 * (lower + upper), 0.5 * (upper - lower)


@dataclass(frozen=True)
class MeanInfo:
    """Classification of E[X]: kind in {finite, +inf, -inf, undefined}."""

    kind: str
    value: float = math.nan

    @property
    def is_finite(self) -> bool:
        return self.kind == "finite"


@dataclass(frozen=True)
class StepLaw:
    """Lattice law with exact power tails outside (-t0, t0)."""

    alpha: float
    p: float
    L: SlowVaryFn
    t0: int
    body: Mapping[int, float] = field(default_factory=dict)
    name: str = ""

    @property
    def q(self) -> float:
        return 1.0 - self.p

    # -- support ------------------------------------------------------------

    @property
    def min_support(self) -> float:
        """Lowest lattice point carrying mass (-inf for a live left tail)."""
        if self.q > 0:
            return -math.inf
        neg = [x for x, m in self.body.items() if m > 0 and x < 0]
        return min(neg) if neg else min((x for x, m in self.body.items() if m > 0), default=0)

    @property
    def max_support(self) -> float:
        if self.p > 0:
            return math.inf
        pos = [x for x, m in self.body.items() if m > 0]
        return max(pos) if pos else 0

    @property
    def is_symmetric(self) -> bool:
        if abs(self.p - 0.5) > 1e-15:
            return False
        return all(
            abs(m - self.body.get(-x, 0.0)) <= 1e-15 for x, m in self.body.items()
        )

    # -- pointwise queries ----------------------------------------------------

    def _tail_weight(self, x: np.ndarray) -> np.ndarray:
        return self.alpha * self.L(x) * np.asarray(x, dtype=float) ** -(1.0 + self.alpha)

    def pmf(self, x: int) -> float:
        if x >= self.t0:
            return self.p * float(self._tail_weight(np.array([float(x)]))[0])
        if x <= -self.t0:
            return self.q * float(self._tail_weight(np.array([float(-x)]))[0])
        return float(self.body.get(x, 0.0))

    def pmf_window(self, lo: int, hi: int) -> np.ndarray:
        """Dense pmf vector on [lo, hi] (vectorized)."""
        out = np.zeros(hi - lo + 1)
        xs = np.arange(lo, hi + 1)
        right = xs >= self.t0
        if right.any():
            out[right] = self.p * self._tail_weight(xs[right].astype(float))
        left = xs <= -self.t0
        if left.any():
            out[left] = self.q * self._tail_weight((-xs[left]).astype(float))
        for site, m in self.body.items():
            if lo <= site <= hi:
                out[site - lo] = m
        return out

    def tail_prob(self, x: float, side: str = "right") -> float:
        """P(X > x) or P(X < -x); exact head plus certified remainder."""
        if side not in ("right", "left"):
            raise DomainError("side must be 'right' or 'left'")
        weight = self.p if side == "right" else self.q
        a = max(self.t0, math.floor(x) + 1)
        body_part = 0.0
        for site, m in self.body.items():
            z = site if side == "right" else -site
            if z > x:
                body_part += m
        if weight == 0.0:
            return body_part
        val, _ = _weighted_tail_sum(self.L, 1.0 + self.alpha, a)
        return body_part + weight * self.alpha * val

    def truncated_mean(self, y: float) -> float:
        """mu(y) = E[X 1{|X| <= y}]."""
        if y < 0:
            raise DomainError("truncated_mean requires y >= 0")
        total = sum(x * m for x, m in self.body.items() if abs(x) <= y)
        b = math.floor(y)
        if b >= self.t0:
            val, _ = _weighted_range_sum(self.L, self.alpha, self.t0, b)
            total += (self.p - self.q) * self.alpha * val
        return total

    def mean(self) -> MeanInfo:
        """E[X] with infinity flags per the tail-side dominance."""
        body_part = sum(x * m for x, m in self.body.items())
        if self.alpha > 1:
            val, _ = _weighted_tail_sum(self.L, self.alpha, self.t0)
            return MeanInfo("finite", body_part + (self.p - self.q) * self.alpha * val)
        integrable = self.alpha == 1 and not self.L.ell_diverges
        if integrable:
            val, _ = _weighted_tail_sum(self.L, self.alpha, self.t0)
            return MeanInfo("finite", body_part + (self.p - self.q) * self.alpha * val)
        if self.p > self.q:
            return MeanInfo("+inf", math.inf)
        if self.p < self.q:
            return MeanInfo("-inf", -math.inf)
        return MeanInfo("undefined")

    # -- serialization --------------------------------------------------------

    def to_json(self) -> dict:
        return {
            "alpha": self.alpha,
            "p": self.p,
            "L": self.L.to_json(),
            "t0": self.t0,
            "body": {str(k): v for k, v in self.body.items()},
            "name": self.name,
        }

    @staticmethod
    def from_json(obj: dict) -> "StepLaw":
        body = obj.get("body", "zero")
        policy = body if isinstance(body, str) else "explicit"
        explicit = {int(k): float(v) for k, v in body.items()} if isinstance(body, dict) else None
        return build_step_law(
            alpha=float(obj["alpha"]),
            p=float(obj["p"]),
            L=SlowVaryFn.from_json(obj["L"]),
            t0=int(obj["t0"]),
            body_policy=policy,
            body=explicit,
            name=str(obj.get("name", "")),
        )


def tail_mass(alpha: float, L: SlowVaryFn, t0: int) -> float:
    """Total mass assigned to both power tails from t0 on (p+q = 1)."""
    val, _ = _weighted_tail_sum(L, 1.0 + alpha, t0)
    return alpha * val


def build_step_law(
    alpha: float,
    p: float,
    L: SlowVaryFn,
    t0: int,
    body_policy: str = "zero",
    body: Mapping[int, float] | None = None,
    name: str = "",
) -> StepLaw:
    """Construct a normalized StepLaw, placing leftover mass per policy.

    body_policy 'zero' puts all leftover mass at the origin, 'symmetric'
    splits it over +-(t0-1) to keep exact symmetry when p = q, 'explicit'
    takes the provided body map and checks it against the leftover.
    """
    if not 0 < alpha < 2:
        raise ConstructionError("alpha must lie in (0, 2)")
    if not 0 <= p <= 1:
        raise ConstructionError("p must lie in [0, 1]")
    if t0 < 1:
        raise ConstructionError("t0 must be a positive integer")
    tm = tail_mass(alpha, L, t0)
    if tm > 1.0 + 1e-9:
        raise ConstructionError(
            f"tail mass {tm:.6f} > 1 at t0={t0}; raise t0 to shrink the tails"
        )
    leftover = max(0.0, 1.0 - tm)
    if body_policy == "zero":
        sites = {0: leftover}
    elif body_policy == "symmetric":
        s = t0 - 1
        sites = {0: leftover} if s == 0 else {-s: leftover / 2, s: leftover / 2}
    elif body_policy == "explicit":
        sites = {int(k): float(v) for k, v in (body or {}).items()}
        if any(v < 0 for v in sites.values()):
            raise ConstructionError("explicit body has negative mass")
        if any(abs(k) >= t0 for k in sites):
            raise ConstructionError("explicit body sites must lie inside (-t0, t0)")
        got = sum(sites.values())
        if abs(got - leftover) > 1e-9:
            raise ConstructionError(
                f"explicit body mass {got:.12f} != leftover {leftover:.12f}"
            )
        # absorb rounding into the largest site so the total is exactly 1
        if sites:
            kmax = max(sites, key=lambda k: sites[k])
            sites[kmax] += leftover - got
    else:
        raise ConstructionError(f"unknown body policy {body_policy!r}")
    return StepLaw(alpha=alpha, p=p, L=L, t0=t0, body=sites, name=name)


@dataclass(frozen=True)
class BoundedLaw:
    """Explicit finite-support lattice law, for oracles and renewal tests.

    Exposes the same query surface as StepLaw (pmf, pmf_window, tail_prob,
    truncated_mean, mean) so the distribution engine accepts either.
    """

    sites: Mapping[int, float]
    name: str = ""

    def __post_init__(self):
        total = sum(self.sites.values())
        if abs(total - 1.0) > 1e-12:
            raise ConstructionError(f"bounded law mass {total} != 1")
        if any(m < 0 for m in self.sites.values()):
            raise ConstructionError("negative mass")

    @property
    def min_support(self) -> float:
        return min(x for x, m in self.sites.items() if m > 0)

    @property
    def max_support(self) -> float:
        return max(x for x, m in self.sites.items() if m > 0)

    @property
    def is_symmetric(self) -> bool:
        return all(abs(m - self.sites.get(-x, 0.0)) <= 1e-15 for x, m in self.sites.items())

    def pmf(self, x: int) -> float:
        return float(self.sites.get(x, 0.0))

    def pmf_window(self, lo: int, hi: int) -> np.ndarray:
        out = np.zeros(hi - lo + 1)
        for site, m in self.sites.items():
            if lo <= site <= hi:
                out[site - lo] = m
        return out

    def tail_prob(self, x: float, side: str = "right") -> float:
        if side == "right":
            return sum(m for s, m in self.sites.items() if s > x)
        return sum(m for s, m in self.sites.items() if s < -x)

    def truncated_mean(self, y: float) -> float:
        return sum(s * m for s, m in self.sites.items() if abs(s) <= y)

    def mean(self) -> MeanInfo:
        return MeanInfo("finite", float(sum(s * m for s, m in self.sites.items())))
