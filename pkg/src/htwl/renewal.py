"""Transience classification, Green-function asymptotics, supremum tails.

Green functions are never simulated: for general laws they come from
certified partial sums of exact convolutions (exactdist.green_partial),
and for skip-free-below laws (renewal-type, no mass below zero beyond a
possible lazy site) from power-series inversion of 1 - f(s), which gives
the full series sum at machine precision out to x = 10^6 in seconds.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import DomainError, RegimeError
from .scaling import ScalingTable
from .series import reciprocal_series
from .slowvary import ell, ell_star
from .steplaw import StepLaw


@dataclass(frozen=True)
class RegimeClass:
    """Drift / transience verdict with the criterion that decided it."""

    alpha: float | None
    mean_class: str  # finite-positive, finite-negative, zero, +inf, -inf, undefined
    drift_class: str  # drifts-up, drifts-down, oscillates, no-drift
    verdict: str  # transient, recurrent, undetermined
    criterion: str


def classify(law) -> RegimeClass:
    """Decision tree over the mean, the tail balance and the L family."""
    mean = law.mean()
    alpha = getattr(law, "alpha", None)

    if mean.is_finite and mean.value != 0:
        sign = "finite-positive" if mean.value > 0 else "finite-negative"
        drift = "drifts-up" if mean.value > 0 else "drifts-down"
        return RegimeClass(alpha, sign, drift, "transient", "strong law of large numbers")
    if mean.is_finite:  # mu = 0
        return RegimeClass(alpha, "zero", "oscillates", "recurrent", "zero-mean recurrence")

    # infinite or undefined mean: only alpha <= 1 step laws reach here
    if alpha is None:
        raise RegimeError("bounded laws always have a finite mean")
    p, q = law.p, law.q
    if alpha == 1 and p == q:
        # centered case: b_n = O(a_n); transience iff sum 1/(n L(n)) converges
        verdict = "transient" if law.L.recip_sum_converges else "recurrent"
        return RegimeClass(alpha, "undefined", "oscillates", verdict,
                           "reciprocal sum test on 1/(n L(n))")
    if alpha == 1 and p != q:
        # drifts in probability but not almost surely; the exact local
        # tails built into StepLaw supply the local-tail hypothesis
        drift = "no-drift" if (p > 0 and q > 0) else ("drifts-up" if q == 0 else "drifts-down")
        return RegimeClass(alpha, "+inf" if p > q else "-inf", drift, "transient",
                           "local-tail transience (one-sided drift in probability)")
    if alpha < 1:
        if p == q:
            # b_n = 0; sum 1/a_n ~ sum n^-1/alpha converges for alpha < 1
            return RegimeClass(alpha, "undefined", "oscillates", "transient",
                               "sum of 1/a_n converges (alpha < 1)")
        drift = "no-drift" if (p > 0 and q > 0) else ("drifts-up" if q == 0 else "drifts-down")
        return RegimeClass(alpha, "undefined" if p * q > 0 else ("+inf" if q == 0 else "-inf"),
                           drift, "transient", "sum of 1/a_n converges (alpha < 1)")
    return RegimeClass(alpha, "undefined", "oscillates", "undetermined",
                       "unbalanced b_n/a_n oscillation left open")


# ---------------------------------------------------------------------------
# Green function: exact series for skip-free-below laws
# ---------------------------------------------------------------------------


def green_series(law, xmax: int) -> np.ndarray:
    """G(x) for x = 0..xmax when the law has no mass below 0.

    G is the coefficient sequence of 1/(1 - f(s)) where f is the step
    pmf generating function; Newton inversion makes this O(x log x).
    """
    if law.min_support < 0:
        raise RegimeError("series Green function needs a nonnegative law")
    f = law.pmf_window(0, xmax)
    a = -f
    a[0] += 1.0
    if a[0] <= 0:
        raise RegimeError("lazy mass at 0 must stay below 1")
    return reciprocal_series(a)


def green_asymptote(law, x: float, regime: str, table: ScalingTable | None = None) -> float:
    """Predicted G(x) in the stated regime.

    centered:      g(-b) * sum_{n>x} 1/(n L(n)) with the Cauchy(pi/2)
                   density value (scale corrected; see limit_density)
    inf-mean-pos:  (1 + q/(p-q)) / mu(x)
    inf-mean-neg:  (p/(q-p)) / |mu(x)|
    erickson:      1 / mu(x)            (renewal reading of the same law)
    finite-pos:    1 / mu
    finite-neg:    I(x) / mu^2          (supremum-tail form)
    gl:            alpha sin(pi alpha)/pi * x^(alpha-1) / L(x)
    """
    if regime == "centered":
        b = _centered_offset(law, table)
        from .exactdist import limit_density

        g = limit_density(1.0, 0.5, 0.5, -b)
        return g * _recip_l_tail(law.L, x)
    if regime == "inf-mean-pos":
        mu_x = law.truncated_mean(x)
        return (1.0 + law.q / (law.p - law.q)) / mu_x
    if regime == "inf-mean-neg":
        mu_x = abs(law.truncated_mean(x))
        return (law.p / (law.q - law.p)) / mu_x
    if regime == "erickson":
        return 1.0 / law.truncated_mean(x)
    if regime == "finite-pos":
        return 1.0 / law.mean().value
    if regime == "finite-neg":
        mu = law.mean().value
        return integrated_tail(law, x) / mu**2
    if regime == "gl":
        a = law.alpha
        if not 0.5 < a < 1:
            raise RegimeError("Garcia-Lamperti range is alpha in (1/2, 1)")
        return a * math.sin(math.pi * a) / math.pi * x ** (a - 1.0) / float(law.L(x))
    raise RegimeError(f"unknown regime {regime!r}")


def _centered_offset(law, table: ScalingTable | None) -> float:
    if law.is_symmetric:
        return 0.0
    table = table or ScalingTable(law)
    n = 1 << 20
    return table.bn(n) / table.an(n)


def _recip_l_tail(L, x: float) -> float:
    """sum_{n > x} 1/(n L(n)), certified by monotone integral brackets."""

    def h(u):
        return 1.0 / (u * float(L(u)))

    from .slowvary import _quad_decades

    total, lo = 0.0, float(math.floor(x) + 1)
    total += h(lo) * 0.5  # midpoint correction of the first lattice site
    hi = lo
    while True:
        nxt = hi * 10.0
        inc = _quad_decades(h, hi, nxt, rel=1e-10)
        total += inc
        if inc < 1e-12 * total or nxt > 1e250:
            break
        hi = nxt
    return total


def integrated_tail(law, x: float, horizon: float = 1e12) -> float:
    """I(x) = int_x^inf P(X > t) dt via exact lattice sums plus remainder."""
    j0 = int(math.floor(x))
    head_hi = int(min(j0 + (1 << 22), horizon))
    js = np.arange(j0, head_hi + 1)
    tail_at = _vector_right_tail(law, js)
    total = float(tail_at[1:].sum())  # unit-width pieces on [j0+1, head_hi+1)
    total += (j0 + 1 - x) * float(tail_at[0])  # fractional first piece
    # remainder: for alpha > 1 bracket by the regularly varying envelope
    alpha = getattr(law, "alpha", None)
    if alpha is not None and alpha > 1 and law.p > 0:
        u = float(head_hi + 1)
        total += law.p * float(law.L(u)) * u ** (1 - alpha) / (alpha - 1)
    return total


def _vector_right_tail(law, js: np.ndarray) -> np.ndarray:
    base = law.tail_prob(float(js[0]), "right")
    pm = law.pmf_window(int(js[0]) + 1, int(js[-1]))
    dec = np.concatenate([[0.0], np.cumsum(pm)])
    return base - dec


# ---------------------------------------------------------------------------
# supremum tail under negative drift
# ---------------------------------------------------------------------------


@dataclass
class SupTailEstimate:
    value: float
    std_error: float
    bias_bound: float
    pred: float  # integrated-tail prediction I(x)/|mu|
    n_samples: int
    seed: int


def sup_tail(law, x: float, samples: int, seed: int, barrier: float | None = None,
             horizon: int | None = None) -> SupTailEstimate:
    """Monte Carlo for P(sup_k S_k > x) with a certified truncation bias.

    Paths stop once S drops below the safety barrier; a stopped path could
    still have exceeded x later with probability at most
    I(x + |barrier|) / |mu|-scale, which is reported as the bias bound.
    """
    mean = law.mean()
    if not (mean.is_finite and mean.value < 0):
        raise RegimeError("sup tail needs a finite negative mean")
    mu = mean.value
    if barrier is None:
        barrier = -max(8.0 * x, 200.0)
    if horizon is None:
        horizon = int(max(4.0 * (x - barrier) / -mu, 200.0))
    from .deviations import StepLawSampler, _batched_rngs, _BATCH

    sampler = StepLawSampler(law)
    n_batches = (samples + _BATCH - 1) // _BATCH
    hits = 0
    alive_end = 0
    total = 0
    for rng in _batched_rngs(seed, n_batches):
        b = min(_BATCH, samples - total)
        s = np.zeros(b)
        peak = np.zeros(b)
        alive = np.ones(b, dtype=bool)
        for _ in range(horizon):
            if not alive.any():
                break
            steps = sampler.sample(rng, int(alive.sum()))
            s[alive] += steps
            peak[alive] = np.maximum(peak[alive], s[alive])
            alive &= (s > barrier) & (peak <= x)
        hits += int((peak > x).sum())
        alive_end += int(alive.sum())
        total += b
    p = hits / total
    se = math.sqrt(max(p * (1 - p), 1e-300) / total)
    # restart bound: from the barrier the remaining sup must climb x - barrier
    bias = integrated_tail(law, x - barrier) / -mu + alive_end / total
    pred = integrated_tail(law, x) / -mu
    return SupTailEstimate(p, se, bias, pred, total, seed)
