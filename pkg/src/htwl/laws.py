"""Canonical test laws used by the verification suites and the CLI.

Each entry is a zero-argument factory so laws are built lazily; tail-mass
normalization happens in the constructor and is exact by construction.
"""

from __future__ import annotations

import math

from .steplaw import BoundedLaw, StepLaw, build_step_law
from .slowvary import const, logpow

_C_ZIPF = 6.0 / math.pi**2


def srw() -> BoundedLaw:
    """Simple random walk, steps +-1 with probability 1/2."""
    return BoundedLaw({-1: 0.5, 1: 0.5}, name="srw")


def det_up() -> BoundedLaw:
    """Deterministic unit step."""
    return BoundedLaw({1: 1.0}, name="det-up")


def bounded_mu2() -> BoundedLaw:
    """Aperiodic positive bounded law with mean exactly 2 (steps 1 or 3)."""
    return BoundedLaw({1: 0.5, 3: 0.5}, name="mu2")


def geo_mix() -> BoundedLaw:
    """Steps 1 or 2 with probability 1/2, for Green-function enumeration."""
    return BoundedLaw({1: 0.5, 2: 0.5}, name="geo-mix")


def zipf2() -> StepLaw:
    """P(X=x) = (6/pi^2) x^-2 on x >= 1: alpha=1, one-sided, infinite mean."""
    return build_step_law(1.0, 1.0, const(_C_ZIPF), t0=1, name="zipf2")


def sym_cauchy() -> StepLaw:
    """Symmetric alpha=1 law, tail mass 0.9, body 0.1 at the origin."""
    return build_step_law(1.0, 0.5, const(0.9 * _C_ZIPF), t0=1, name="sym-cauchy")


def sym_const1() -> StepLaw:
    """Symmetric alpha=1 law with L = 1 (recurrent by the reciprocal test)."""
    return build_step_law(1.0, 0.5, const(1.0), t0=2, name="sym-const1")


def sym_logpow2() -> StepLaw:
    """Symmetric alpha=1 law with L = log^2 (transient by the same test)."""
    return build_step_law(1.0, 0.5, logpow(2.0), t0=20, name="sym-logpow2")


def alpha_half() -> StepLaw:
    """alpha = 1/2, one-sided: a_n = n^2 scaling, zero centering."""
    return build_step_law(0.5, 1.0, const(1.0), t0=4, name="alpha-half")


def alpha32() -> StepLaw:
    """alpha = 3/2, one-sided right tail, finite positive mean."""
    return build_step_law(1.5, 1.0, const(1.0), t0=2, name="alpha-32")


def heavy_left_mu_pos() -> StepLaw:
    """Heavy left tail (alpha=3/2), positive drift via body mass at +1."""
    return build_step_law(
        1.5, 0.0, const(0.25), t0=2, body_policy="explicit", body={1: _left_body(0.25)},
        name="heavy-left",
    )


def _left_body(c: float) -> float:
    from .steplaw import tail_mass

    return 1.0 - tail_mass(1.5, const(c), 2)


def neg_drift_heavy() -> StepLaw:
    """Heavy right tail (alpha=3/2) with negative mean, for supremum tails."""
    from .steplaw import tail_mass

    leftover = 1.0 - tail_mass(1.5, const(1.0), 9)
    return build_step_law(
        1.5, 1.0, const(1.0), t0=9, body_policy="explicit", body={-2: leftover},
        name="neg-drift",
    )


LAWS = {
    "srw": srw,
    "det-up": det_up,
    "mu2": bounded_mu2,
    "geo-mix": geo_mix,
    "zipf2": zipf2,
    "sym-cauchy": sym_cauchy,
    "sym-const1": sym_const1,
    "sym-logpow2": sym_logpow2,
    "alpha-half": alpha_half,
    "alpha-32": alpha32,
    "heavy-left": heavy_left_mu_pos,
    "neg-drift": neg_drift_heavy,
}


def get_law(name: str):
    try:
        return LAWS[name]()
    except KeyError:
        raise KeyError(f"unknown law {name!r}; available: {sorted(LAWS)}") from None
