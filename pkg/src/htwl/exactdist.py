"""Exact finite-n distribution engine.

Distributions of S_n are computed as n-fold convolutions over a fixed
lattice window via FFT binary exponentiation.  Mass leaving the window is
never silently dropped: it accumulates in directional escape counters that
feed certified error brackets.  Escaped mass can only re-enter the window
by making a large jump back, so the brackets are sharpened by rigorous
climb/descent probability bounds (union bound on one oversized step plus a
Bennett bound on the capped remainder).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace

import numpy as np
from scipy import fft

from .errors import BudgetExceededError, DomainError, RegimeError

_EPS = np.finfo(float).eps
_FFT_ERR_C = 8.0  # safety constant in the eps*log2(N) FFT error model


@dataclass
class LatticeDist:
    """Sub-probability mass vector on a lattice window.

    offset is the lattice coordinate of slot 0.  escaped_below/above hold
    mass that left through the window edges (cumulatively, including the
    escape bookkeeping of all convolution inputs).  err_fft is a certified
    bound on accumulated FFT round-off, clamped counts zeroed negatives.
    """

    offset: int
    mass: np.ndarray
    escaped_below: float = 0.0
    escaped_above: float = 0.0
    err_fft: float = 0.0
    clamped: float = 0.0

    @property
    def lo(self) -> int:
        return self.offset

    @property
    def hi(self) -> int:
        return self.offset + len(self.mass) - 1

    @property
    def inner_mass(self) -> float:
        return float(self.mass.sum())

    @property
    def total(self) -> float:
        return self.inner_mass + self.escaped_below + self.escaped_above

    @property
    def escaped(self) -> float:
        return self.escaped_below + self.escaped_above

    def prob_at(self, x: int) -> float:
        if self.lo <= x <= self.hi:
            return float(self.mass[x - self.offset])
        return 0.0

    def tail_geq(self, x: int) -> float:
        """In-window mass at sites >= x (escapes handled by the caller)."""
        if x <= self.lo:
            return self.inner_mass
        if x > self.hi:
            return 0.0
        return float(self.mass[x - self.offset :].sum())

    def shifted(self, d: int) -> "LatticeDist":
        return replace(self, offset=self.offset + d)


def truncate(law, lo: int, hi: int) -> LatticeDist:
    """Restriction of the step pmf to [lo, hi] with escapes recorded."""
    if lo > 0 or hi < 0:
        raise DomainError("window must contain the origin")
    mass = law.pmf_window(lo, hi)
    return LatticeDist(
        offset=lo,
        mass=mass,
        escaped_below=law.tail_prob(-lo, side="left"),
        escaped_above=law.tail_prob(hi, side="right"),
    )


def _crop(raw: np.ndarray, raw_offset: int, lo: int, hi: int) -> tuple[np.ndarray, int, float, float]:
    i0 = lo - raw_offset
    i1 = hi - raw_offset + 1
    below = float(raw[: max(i0, 0)].sum()) if i0 > 0 else 0.0
    above = float(raw[min(i1, len(raw)) :].sum()) if i1 < len(raw) else 0.0
    kept = raw[max(i0, 0) : min(i1, len(raw))]
    off = raw_offset + max(i0, 0)
    return kept, off, below, above


def convolve(a: LatticeDist, b: LatticeDist, lo: int, hi: int) -> LatticeDist:
    """Linear convolution cropped to [lo, hi], with escape propagation."""
    n_out = len(a.mass) + len(b.mass) - 1
    nfft = fft.next_fast_len(n_out)
    fa = fft.rfft(a.mass, nfft)
    fb = fft.rfft(b.mass, nfft)
    raw = fft.irfft(fa * fb, nfft)[:n_out]

    neg = raw < 0.0
    clamped = float(-raw[neg].sum()) if neg.any() else 0.0
    if neg.any():
        raw[neg] = 0.0

    kept, off, below, above = _crop(raw, a.offset + b.offset, lo, hi)
    sa, sb = a.inner_mass, b.inner_mass
    ta, tb = a.total, b.total
    # parent escapes combine against the partner's full mass; the tiny
    # below*above cross terms are split evenly between the two directions
    cross = a.escaped_below * b.escaped_above + a.escaped_above * b.escaped_below
    eb = below + a.escaped_below * (sb + b.escaped_below) + b.escaped_below * sa + 0.5 * cross
    ea = above + a.escaped_above * (sb + b.escaped_above) + b.escaped_above * sa + 0.5 * cross
    step_err = _FFT_ERR_C * _EPS * math.log2(max(nfft, 2)) * sa * sb
    return LatticeDist(
        offset=off,
        mass=kept.copy(),
        escaped_below=eb,
        escaped_above=ea,
        err_fft=a.err_fft * tb + b.err_fft * ta + step_err + clamped,
        clamped=a.clamped + b.clamped + clamped,
    )


def convolve_power(d: LatticeDist, n: int, lo: int | None = None, hi: int | None = None,
                   budget: float | None = None) -> LatticeDist:
    """n-fold convolution of d restricted to [lo, hi] (binary exponentiation).

    Cumulative escaped mass upper-bounds the total-variation error of the
    restriction.  When a budget is given, exceeding it raises with the mass
    accounting attached.
    """
    if n < 1:
        raise DomainError("n >= 1 required")
    if lo is None:
        lo = d.lo
    if hi is None:
        hi = d.hi
    out: LatticeDist | None = None
    base = d
    k = n
    while True:
        if k & 1:
            out = base if out is None else convolve(out, base, lo, hi)
        k >>= 1
        if k == 0:
            break
        base = convolve(base, base, lo, hi)
    assert out is not None
    if budget is not None and out.escaped + out.err_fft > budget:
        raise BudgetExceededError(
            f"escaped={out.escaped:.3e} err_fft={out.err_fft:.3e} exceeds budget {budget:.3e}"
        )
    return out


# ---------------------------------------------------------------------------
# certified jump-back bounds
# ---------------------------------------------------------------------------


def _capped_moment(law, z: float, side: str) -> float:
    """E[(X^+ wedge z)] or E[(X^- wedge z)]."""
    base = law.truncated_mean(z)
    if side == "up":
        neg_part = _one_side_trunc(law, z, "left")
        pos_part = base + neg_part
        return pos_part + z * law.tail_prob(z, "right")
    pos_part = _one_side_trunc(law, z, "right")
    neg_part = pos_part - base
    return neg_part + z * law.tail_prob(z, "left")


def _one_side_trunc(law, z: float, side: str) -> float:
    """E[X^+ 1{X<=z}] (side=right) or E[X^- 1{X>=-z}] (side=left)."""
    total = 0.0
    if hasattr(law, "body"):
        items = law.body.items()
    else:
        items = law.sites.items()
    for s, m in items:
        v = s if side == "right" else -s
        if 0 < v <= z:
            total += v * m
    if hasattr(law, "L"):
        from .steplaw import _weighted_range_sum

        weight = law.p if side == "right" else law.q
        b = math.floor(z)
        if weight > 0 and b >= law.t0:
            val, _ = _weighted_range_sum(law.L, law.alpha, law.t0, b)
            total += weight * law.alpha * val
    return total


def _bennett(D: float, z: float, n_m: float) -> float:
    """P(sum of n iid nonneg vars capped at z >= D), Chernoff form."""
    if D <= 0:
        return 1.0
    if n_m <= 0:
        return 0.0
    ratio = D / n_m
    if ratio <= math.e:
        return 1.0
    return math.exp(-(D / z) * (math.log(ratio) - 1.0 + n_m / D))


def move_probability_bound(law, n: int, D: float, direction: str, cap: float | None = None) -> float:
    """Rigorous bound on P(total climb (or descent) >= D within n steps).

    direction 'up' bounds sums of positive parts, 'down' of negative parts.
    With cap=c the steps are known to be bounded by c on that side (the
    M_n <= y restriction); otherwise a union bound covers one oversized
    jump and Bennett covers the capped remainder.
    """
    if D <= 0:
        return 1.0
    side = "right" if direction == "up" else "left"
    if direction == "up" and law.max_support < math.inf and law.max_support * n < D:
        return 0.0
    if direction == "down" and law.min_support > -math.inf and -law.min_support * n < D:
        return 0.0
    if direction == "down" and law.min_support >= 0:
        return 0.0
    if direction == "up" and law.max_support <= 0:
        return 0.0
    if cap is not None and cap < D:
        m = _capped_moment(law, cap, "up" if direction == "up" else "down")
        return min(1.0, _bennett(D, cap, n * m))
    z = D / 2.0
    m = _capped_moment(law, z, "up" if direction == "up" else "down")
    return min(1.0, n * law.tail_prob(z, side) + _bennett(D, z, n * m))


def _point_err(law, dist: LatticeDist, x: int, n: int, cap: float | None = None) -> float:
    """Certified bound on the deficiency of dist.mass at site x."""
    back_in = move_probability_bound(law, n, dist.hi - x, "down")
    fwd_in = move_probability_bound(law, n, x - dist.lo, "up", cap=cap)
    return dist.escaped_above * back_in + dist.escaped_below * fwd_in + dist.err_fft


# ---------------------------------------------------------------------------
# public queries
# ---------------------------------------------------------------------------


def point_prob(law, n: int, x: int, lo: int, hi: int) -> tuple[float, float]:
    """(P(S_n = x), certified error bound)."""
    d = convolve_power(truncate(law, lo, hi), n, lo, hi)
    return d.prob_at(x), _point_err(law, d, x, n)


def distribution(law, n: int, lo: int, hi: int) -> LatticeDist:
    """Law of S_n on the window (convenience wrapper)."""
    return convolve_power(truncate(law, lo, hi), n, lo, hi)


def tail_prob_dist(law, dist: LatticeDist, n: int, x: int, cap: float | None = None) -> tuple[float, float]:
    """(P(S_n >= x) from a computed dist, certified error).

    In-window mass below x is exact up to deficiency; escaped-above mass
    belongs to the tail unless it fell back, escaped-below mass joins only
    by climbing back past x.
    """
    val = dist.tail_geq(x) + dist.escaped_above
    err = (
        dist.escaped_above * move_probability_bound(law, n, dist.hi - x, "down")
        + dist.escaped_below * move_probability_bound(law, n, x - dist.lo, "up", cap=cap)
        + dist.err_fft
    )
    return val, err


def constrained_dist(law, n: int, y: float, lo: int, hi: int) -> LatticeDist:
    """Law of S_n on {M_n <= y}: convolution of the y-capped sub-pmf."""
    if y < law.min_support:
        raise DomainError("cap y below the lowest support point")
    step = truncate(law, lo, hi)
    cut = math.floor(y)
    if cut < step.hi:
        keep = step.mass[: cut - step.lo + 1]
        step = LatticeDist(step.offset, keep, step.escaped_below, 0.0)
    return convolve_power(step, n, lo, hi)


def constrained_tail(law, n: int, x: int, y: float, lo: int, hi: int) -> tuple[float, float]:
    """(P(S_n >= x; M_n <= y), certified error); recentering is the caller's."""
    d = constrained_dist(law, n, y, lo, hi)
    return tail_prob_dist(law, d, n, x, cap=y)


def constrained_point(law, n: int, x: int, y: float, lo: int, hi: int) -> tuple[float, float]:
    d = constrained_dist(law, n, y, lo, hi)
    return d.prob_at(x), _point_err(law, d, x, n, cap=y)


# ---------------------------------------------------------------------------
# half-line survival DP
# ---------------------------------------------------------------------------


@dataclass
class SurvivalBrackets:
    """Brackets for P(T_- > k), k = 0..n.

    Above-window mass sits at height > W; it surely survives unless it
    descends by more than W, so the lower bracket credits it with the
    complementary probability instead of discarding it outright.
    """

    lower: np.ndarray
    upper: np.ndarray

    @property
    def width(self) -> float:
        return float(np.max(self.upper - self.lower))


def survival_halfline(law, n: int, W: int, width_budget: float | None = None) -> SurvivalBrackets:
    """DP for P(S_1 >= 0, ..., S_k >= 0): convolve, kill the negative part."""
    if n < 1 or W < 1:
        raise DomainError("need n >= 1 and window W >= 1")
    step = truncate(law, -W, W)
    step_esc = step.escaped_above  # a jump below -W kills; above W escapes
    death = move_probability_bound(law, n, float(W), "down")

    cur = np.zeros(W + 1)
    cur[0] = 1.0
    esc_cum = 0.0
    err_fft = 0.0
    lower = np.ones(n + 1)
    upper = np.ones(n + 1)
    bare_step = LatticeDist(step.offset, step.mass)
    for k in range(1, n + 1):
        alive_mass = float(cur.sum())
        nxt = convolve(LatticeDist(0, cur), bare_step, -W, 2 * W)
        i0 = -nxt.offset  # index of lattice point 0
        cur = nxt.mass[i0 : i0 + W + 1].copy()
        esc_cum += float(nxt.mass[i0 + W + 1 :].sum()) + alive_mass * step_esc
        err_fft += nxt.err_fft
        inner = float(cur.sum())
        lower[k] = max(0.0, inner + esc_cum * (1.0 - death) - err_fft)
        upper[k] = min(1.0, inner + esc_cum + err_fft)
    out = SurvivalBrackets(lower, upper)
    if width_budget is not None and out.width > width_budget:
        raise BudgetExceededError(f"survival bracket width {out.width:.3e} > {width_budget:.3e}")
    return out


# ---------------------------------------------------------------------------
# Green function partial sums
# ---------------------------------------------------------------------------


def green_partial(law, xs, N: int, lo: int, hi: int, tail_c0: float = 1.0):
    """(partial sums of P(S_n = x) over n <= N, envelope tail estimates).

    The tail estimate integrates the local large-deviation envelope
    C0/a_n * n L(|x - b_n|)(1+|x - b_n|)^-alpha over n > N; it is a trend
    estimate, flagged unreliable in recurrent regimes by the caller.
    """
    xs = np.atleast_1d(np.asarray(xs, dtype=int))
    if np.any((xs < lo) | (xs > hi)):
        raise DomainError("green_partial sites must lie inside the window")
    acc = np.zeros(len(xs))
    acc[xs == 0] += 1.0  # n = 0 term
    step = truncate(law, lo, hi)
    init = np.zeros(hi - lo + 1)
    init[-lo] = 1.0
    state = LatticeDist(lo, init)
    idx = xs - lo
    max_sup = law.max_support
    min_sup = law.min_support
    for n in range(1, N + 1):
        state = convolve(state, step, lo, hi)
        acc += state.mass[idx]
        if state.inner_mass < 1e-18:
            break
        if max_sup < math.inf and min_sup >= 1 and n * min_sup > xs.max():
            break  # strictly increasing walk has left every queried site
    tails = _green_tail_estimate(law, xs, N, tail_c0)
    return acc, tails


def _green_tail_estimate(law, xs, N: int, c0: float):
    from .scaling import ScalingTable

    if not hasattr(law, "alpha"):
        return np.zeros(len(xs))
    table = ScalingTable(law)
    out = np.zeros(len(xs))
    for i, x in enumerate(xs):
        total = 0.0
        n = N + 1
        while n < 10**9:
            m = min(n * 2, 10**9)
            a_n = table.an(n)
            try:
                b_n = table.bn(n)
            except RegimeError:
                b_n = 0.0
            z = max(1.0, abs(float(x) - b_n))
            env = min(1.0 / a_n, c0 / a_n * n * float(law.L(z)) * (1 + z) ** -law.alpha)
            total += env * (m - n)
            if env * n < 1e-14:
                break
            n = m
        out[i] = total
    return out


# ---------------------------------------------------------------------------
# limit density (Cauchy case)
# ---------------------------------------------------------------------------


def limit_density(alpha: float, p: float, q: float, u: float, b: float = 0.0) -> float | None:
    """Density of the limit of (S_n - b_n)/a_n at u (+b shifts to S_n/a_n).

    Closed form only in the balanced Cauchy case p = q, alpha = 1, where
    the normalization L(a_n) a_n^-1 = 1/n makes the limit a symmetric
    Cauchy law of scale pi/2, consistent with the positivity parameter
    rho = 1/2 + arctan(2b/pi)/pi.  Other parameterizations return None.
    """
    if alpha != 1.0 or abs(p - q) > 1e-12:
        return None
    v = u - b
    return 2.0 / (math.pi**2 + 4.0 * v * v)


def llt_sup_error(law, n: int, lo: int, hi: int, span: float = 5.0) -> float:
    """sup over |x| <= span * a_n of |a_n P(S_n = x) - g(x/a_n)|."""
    from .scaling import ScalingTable

    table = ScalingTable(law)
    a_n = table.an(n)
    d = distribution(law, n, lo, hi)
    xmax = int(span * a_n)
    xs = np.arange(-xmax, xmax + 1)
    if xs[0] < d.lo or xs[-1] > d.hi:
        raise DomainError("window too small for the requested LLT span")
    probs = d.mass[xs - d.offset]
    g = np.array([limit_density(law.alpha, law.p, law.q, x / a_n) for x in xs])
    return float(np.max(np.abs(a_n * probs - g)))
