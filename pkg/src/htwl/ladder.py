"""Ladder epochs: the power-series identity, positivity sums, asymptotes.

The keystone identity converts positivity probabilities into survival
probabilities of the first descending ladder epoch T_-:

    sum_k P(T_- > k) s^k = exp( sum_m s^m/m P(S_m >= 0) ).

wiener_hopf_tail extracts the coefficients by the exp-series recurrence;
the DP of exactdist.survival_halfline provides the independent bracket the
identity is checked against.  For horizons beyond direct convolution reach
the positivity sequence is computed exactly on a dense prefix plus dyadic
anchors and interpolated in log-log space in between.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.interpolate import PchipInterpolator

from .errors import DomainError, RegimeError
from .exactdist import LatticeDist, convolve, move_probability_bound, truncate
from .series import exp_series
from .slowvary import ell, ell_star


# ---------------------------------------------------------------------------
# the identity itself
# ---------------------------------------------------------------------------


@dataclass
class LadderTail:
    """p_k = P(T_- > k), k = 0..n, with provenance tag."""

    p: np.ndarray
    provenance: str = "wiener-hopf"

    def __post_init__(self):
        if abs(self.p[0] - 1.0) > 1e-12:
            raise DomainError("p_0 must equal 1")


def wiener_hopf_tail(pos: np.ndarray) -> LadderTail:
    """Survival probabilities from pos[m] = P(S_m >= 0), m = 1..len-1.

    pos[0] is ignored.  The output is the exact coefficient sequence of
    exp(sum s^m pos_m / m), nonincreasing and in [0, 1] whenever the input
    is a genuine positivity sequence.
    """
    pos = np.asarray(pos, dtype=float)
    if np.any((pos[1:] < -1e-12) | (pos[1:] > 1 + 1e-12)):
        raise DomainError("positivity values must lie in [0, 1]")
    c = np.zeros(len(pos))
    c[1:] = pos[1:] / np.arange(1, len(pos))
    return LadderTail(exp_series(c))


def wiener_hopf_brackets(pos_lo: np.ndarray, pos_hi: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Monotone propagation of positivity brackets through the identity."""
    lo = wiener_hopf_tail(np.clip(pos_lo, 0.0, 1.0)).p
    hi = wiener_hopf_tail(np.clip(pos_hi, 0.0, 1.0)).p
    return lo, hi


# ---------------------------------------------------------------------------
# positivity sequences
# ---------------------------------------------------------------------------


@dataclass
class PositivityProfile:
    """pos[m] = P(S_m >= 0) for m = 1..N with per-entry error bounds.

    err entries are certified for m <= exact_upto and carry the anchored
    interpolation estimate beyond.
    """

    pos: np.ndarray
    err: np.ndarray
    exact_upto: int

    @property
    def horizon(self) -> int:
        return len(self.pos) - 1


def _seq_states(law, upto: int, lo: int, hi: int):
    """Yield (m, state) for m = 1..upto by sequential convolution."""
    step = truncate(law, lo, hi)
    state = step
    yield 1, state
    bare = LatticeDist(step.offset, step.mass, step.escaped_below, step.escaped_above)
    for m in range(2, upto + 1):
        state = convolve(state, bare, lo, hi)
        yield m, state


def _pos_from_state(law, state: LatticeDist, m: int, horizon: int) -> tuple[float, float]:
    val = state.tail_geq(0) + state.escaped_above
    err = (
        state.escaped_above * move_probability_bound(law, horizon, float(state.hi), "down")
        + state.escaped_below * move_probability_bound(law, horizon, float(-state.lo), "up")
        + state.err_fft
    )
    return val, err


def positivity_exact(law, N: int, lo: int, hi: int) -> PositivityProfile:
    """Sequential exact positivity sequence up to N."""
    pos = np.zeros(N + 1)
    err = np.zeros(N + 1)
    for m, state in _seq_states(law, N, lo, hi):
        pos[m], err[m] = _pos_from_state(law, state, m, N)
    return PositivityProfile(pos, err, exact_upto=N)


def _zero_point_err(law, state: LatticeDist, horizon: int) -> float:
    """Certified deficiency of the computed P(S_m = 0)."""
    back = move_probability_bound(law, horizon, float(state.hi), "down")
    fwd = move_probability_bound(law, horizon, float(-state.lo), "up")
    return state.escaped_above * back + state.escaped_below * fwd + state.err_fft


def _zero_prob_anchors(law, N: int, dense: int, lo: int, hi: int):
    """P(S_m = 0) for m <= dense and at dyadic anchors beyond, with certs.

    Uses the correlation trick P(S_{2m} = 0) = sum_z P(S_m=z) P(S_m=-z),
    so each doubling costs one convolution of the half-time state.
    """
    ms, es, errs = [], [], []
    last_state = None
    for m, state in _seq_states(law, dense, lo, hi):
        ms.append(m)
        es.append(state.prob_at(0))
        errs.append(_zero_point_err(law, state, N))
        last_state = state
    state = last_state
    m = dense
    while 2 * m <= N:
        if state.lo == -state.hi:
            val = float(np.dot(state.mass, state.mass[::-1]))
        else:
            val = float(np.dot(state.mass, state.mass[::-1]))  # symmetric window expected
        es.append(val)
        ms.append(2 * m)
        errs.append(2.0 * state.escaped * float(state.mass.max()) + 2.0 * state.err_fft)
        if 4 * m <= N:
            state = convolve(state, state, lo, hi)
        m *= 2
    return np.array(ms), np.array(es), np.array(errs)


def positivity_symmetric(law, N: int, dense: int = 256, lo: int = -(1 << 17),
                         hi: int = 1 << 17) -> PositivityProfile:
    """pos via the symmetry identity P(S_m >= 0) = (1 + P(S_m = 0))/2.

    Exact up to `dense`; beyond that dyadic anchors interpolated in
    log-log space, with a 2 percent interpolation allowance on top of the
    anchor certificates.
    """
    if not law.is_symmetric:
        raise RegimeError("symmetric positivity shortcut needs a symmetric law")
    if lo != -hi:
        raise DomainError("symmetric window required")
    ms, es, cert = _zero_prob_anchors(law, N, dense, lo, hi)
    grid = np.arange(1, N + 1, dtype=float)
    if len(ms) > 1:
        interp = PchipInterpolator(np.log(ms), np.log(np.maximum(es, 1e-300)))
        e_all = np.exp(interp(np.log(grid)))
        cert_interp = PchipInterpolator(np.log(ms), np.log(np.maximum(cert, 1e-300)))
        c_all = np.exp(cert_interp(np.log(grid)))
    else:
        e_all = np.full(N, es[0])
        c_all = np.full(N, cert[0])
    n_dense = min(dense, N)
    e_all[:n_dense] = es[:n_dense]
    c_all[:n_dense] = cert[:n_dense]
    pos = np.zeros(N + 1)
    pos[1:] = 0.5 * (1.0 + e_all)
    err = np.zeros(N + 1)
    err[1:] = 0.5 * c_all
    err[n_dense + 1 :] += 0.02 * 0.5 * e_all[n_dense:]
    return PositivityProfile(pos, err, exact_upto=n_dense)


def positivity_interpolated(law, N: int, dense: int = 256, lo: int = -(1 << 18),
                            hi: int = 1 << 10) -> PositivityProfile:
    """General law: interpolate the smaller of P(S_m < 0), P(S_m >= 0).

    Exact prefix by sequential convolution, dyadic anchors by squaring,
    Pchip in log-log space in between.  Suits drifting laws where the
    minority side decays smoothly.
    """
    mean = law.mean()
    if not (mean.is_finite and mean.value != 0):
        raise RegimeError("interpolated profile expects a finite nonzero mean")
    minority = "neg" if mean.value > 0 else "pos"
    ms, vals = [], []
    last_state = None
    for m, state in _seq_states(law, dense, lo, hi):
        ms.append(m)
        vals.append(_minority_mass(state, minority))
        last_state = state
    state, m = last_state, dense
    while 2 * m <= N:
        state = convolve(state, state, lo, hi)
        m *= 2
        ms.append(m)
        vals.append(_minority_mass(state, minority))
    interp = PchipInterpolator(np.log(np.array(ms)), np.log(np.maximum(vals, 1e-300)))
    grid = np.arange(1, N + 1, dtype=float)
    v_all = np.exp(interp(np.log(grid)))
    v_all[:dense] = np.array(vals[:dense])
    pos = np.zeros(N + 1)
    pos[1:] = 1.0 - v_all if minority == "neg" else v_all
    err = np.zeros(N + 1)
    err[1:] = v_all * 0.02
    err[1 : dense + 1] = 1e-11
    return PositivityProfile(pos, err, exact_upto=dense)


def _minority_mass(state: LatticeDist, minority: str) -> float:
    if minority == "neg":
        below = state.inner_mass - state.tail_geq(0)
        return below + state.escaped_below
    return state.tail_geq(0) + state.escaped_above


# ---------------------------------------------------------------------------
# positivity partial sums and the limit constants D+-
# ---------------------------------------------------------------------------


@dataclass
class PositivitySums:
    A: float  # sum k^-1 P(S_k >= 0)
    B: float  # sum k^-1 P(S_k < 0)
    r: float  # alias of B, the exponent scale of the balanced drifting case
    D_minus: float | None = None  # B extended by an asymptotic remainder
    D_plus: float | None = None


def positivity_sums(law, n: int, profile: PositivityProfile) -> PositivitySums:
    if profile.horizon < n:
        raise DomainError("profile shorter than requested n")
    ks = np.arange(1, n + 1, dtype=float)
    pos = profile.pos[1 : n + 1]
    A = float(np.sum(pos / ks))
    B = float(np.sum((1.0 - pos) / ks))
    D_minus = D_plus = None
    mean = law.mean()
    if mean.is_finite and mean.value > 0:
        D_minus = B + _spitzer_remainder(law, n, side="left")
    if mean.is_finite and mean.value < 0:
        D_plus = A + _spitzer_remainder(law, n, side="right")
    return PositivitySums(A, B, B, D_minus, D_plus)


def _spitzer_remainder(law, n: int, side: str) -> float:
    """sum_{k>n} k^-1 P(S_k on the minority side), deviation asymptote.

    For a finite positive mean, P(S_k < 0) ~ k q L(k mu) (k mu)^-alpha; the
    remainder is summed numerically with a bracketed geometric tail.
    """
    mu = abs(law.mean().value)
    weight = law.q if side == "left" else law.p
    if weight == 0:
        return 0.0
    alpha = law.alpha
    total = 0.0
    k = float(n + 1)
    while True:
        k2 = k * 2
        ks = np.linspace(k, k2, 64)
        vals = weight * law.L(ks * mu) * (ks * mu) ** -alpha
        total += float(np.trapezoid(vals, ks))
        if vals[-1] * k2 < 1e-14 * max(total, 1e-30):
            break
        k = k2
        if k > 1e15:
            break
    return total


# ---------------------------------------------------------------------------
# positivity parameter and asymptote evaluators
# ---------------------------------------------------------------------------


def rho_parameter(alpha: float, p: float, q: float, b: float = 0.0) -> float:
    """Limit of n^-1 sum_k P(S_k > 0) in the Spitzer-condition regimes."""
    if alpha == 1.0:
        if abs(p - q) > 1e-12:
            raise RegimeError("alpha=1 closed form needs p = q")
        return 0.5 + math.atan(2.0 * b / math.pi) / math.pi
    if 1.0 < alpha < 2.0:
        return 0.5 + math.atan((p - q) * math.tan(math.pi * alpha / 2.0)) / (math.pi * alpha)
    raise RegimeError("positivity parameter implemented for alpha in [1, 2)")


@dataclass
class LadderAsymptote:
    """Computable backbone of a tail formula, o(1) exponents set to zero.

    value is the formula with the neutral exponent; base is the slowly
    varying quantity whose log the harness regresses against, and exponent
    the predicted slope in that scale.
    """

    value: float
    base: float
    exponent: float
    note: str = ""


def ladder_regime(law) -> str:
    mean = law.mean()
    if mean.is_finite:
        if mean.value > 0:
            return "finite-mean-pos"
        if mean.value < 0:
            return "finite-mean-neg"
        if law.alpha == 1:
            return "mu0-alpha1-pos" if law.p > law.q else ("mu0-alpha1-neg" if law.p < law.q else "spitzer")
        return "spitzer"
    if law.alpha != 1:
        return "spitzer" if law.p == law.q else "stable-skewed"
    if law.p == law.q:
        return "spitzer"
    return "inf-mean-pos" if law.p > law.q else "inf-mean-neg"


def ladder_asymptote(law, n: int, regime: str, table=None, D_minus: float | None = None,
                     D_plus: float | None = None) -> LadderAsymptote:
    """Predicted P(T_- > n) backbone for the given regime.

    finite-mean-pos returns the epoch mass asymptote P(T_- = n) together
    with the defect limit exp(-D_-) folded into `note`.
    """
    from .scaling import ScalingTable

    table = table or ScalingTable(law)
    p, q, alpha, L = law.p, law.q, law.alpha, law.L
    if regime == "spitzer":
        b = 0.0 if law.is_symmetric else table.bn(n) / table.an(n)
        rho = rho_parameter(alpha, p, q, b)
        return LadderAsymptote(n**-rho, float(n), -rho, note=f"rho={rho}")
    if regime == "inf-mean-neg":  # p < q, drift to -inf
        bn = abs(table.bn(n))
        base = ell(L, bn)
        expo = p / (q - p) - 1.0
        return LadderAsymptote(float(L(bn)) / n * base**expo, base, expo)
    if regime == "inf-mean-pos":  # p > q
        bn = abs(table.bn(n))
        base = ell(L, bn)
        expo = -q / (p - q)
        return LadderAsymptote(base**expo, base, expo)
    if regime == "finite-mean-pos":
        if D_minus is None:
            raise DomainError("finite-mean-pos needs the D_- estimate")
        mu = law.mean().value
        val = q * math.exp(-D_minus) / mu**alpha * float(L(n)) * n**-alpha
        return LadderAsymptote(val, float(n), -alpha, note=f"p_inf={math.exp(-D_minus)}")
    if regime == "finite-mean-neg":
        if D_plus is None:
            raise DomainError("finite-mean-neg needs the D_+ estimate")
        mu = abs(law.mean().value)
        val = p * math.exp(D_plus) / mu**alpha * float(L(n)) * n**-alpha
        return LadderAsymptote(val, float(n), -alpha)
    if regime == "mu0-alpha1-pos":  # p > q, b_n -> -inf
        bn = abs(table.bn(n))
        base = ell_star(L, bn)
        expo = -p / (p - q) - 1.0
        return LadderAsymptote(float(L(bn)) / n * base**expo, base, expo)
    if regime == "mu0-alpha1-neg":  # p < q, b_n -> +inf
        bn = abs(table.bn(n))
        base = ell_star(L, bn)
        expo = q / (q - p)
        return LadderAsymptote(base**expo, base, expo)
    raise RegimeError(f"no asymptote for regime {regime!r}")


def balanced_drift_exponent(law, ns: np.ndarray, profile: PositivityProfile) -> dict:
    """Empirical exponent of P(T_->n) next to +-r(n), direction unasserted.

    The drifting balanced case prints as exp((1+o(1)) r(n)) although the
    survival probability decays; both signs are reported so the harness
    can display the empirical match without taking sides.
    """
    p = wiener_hopf_tail(profile.pos[: int(ns.max()) + 1]).p
    out = {}
    for n in ns:
        ks = np.arange(1, n + 1, dtype=float)
        r = float(np.sum((1.0 - profile.pos[1 : n + 1]) / ks))
        out[int(n)] = {"r": r, "log_p": math.log(max(p[int(n)], 1e-300)), "exp_plus": r, "exp_minus": -r}
    return out


def loglog_slope(xs: np.ndarray, ys: np.ndarray) -> float:
    """Least-squares slope of log y against log x."""
    lx, ly = np.log(np.asarray(xs, float)), np.log(np.asarray(ys, float))
    lx = lx - lx.mean()
    return float(np.dot(lx, ly - ly.mean()) / np.dot(lx, lx))
