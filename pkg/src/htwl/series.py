"""Power-series coefficient kernels shared by the fluctuation modules.

exp_series turns sum c_m s^m into the coefficients of its exponential via
the standard derivative recurrence; reciprocal_series inverts 1 - f(s) by
Newton doubling with FFT multiplies, which is what makes Green functions
of renewal-type laws affordable out to x = 10^6.
"""

from __future__ import annotations

import math

import numpy as np
from scipy import fft


def exp_series(c: np.ndarray, compensated: bool = True) -> np.ndarray:
    """Coefficients of exp(sum_{m>=1} c_m s^m) up to the length of c.

    c[0] is ignored.  The recurrence k p_k = sum_{m=1}^{k} m c_m p_{k-m}
    runs in exact (fsum) arithmetic by default; k up to ~2^14 keeps float
    drift below 1e-12 either way.
    """
    n = len(c)
    p = np.zeros(n)
    p[0] = 1.0
    mc = np.arange(n, dtype=float) * c  # m * c_m
    for k in range(1, n):
        seg = mc[1 : k + 1] * p[k - 1 :: -1]
        p[k] = (math.fsum(seg) if compensated else float(seg.sum())) / k
    return p


def reciprocal_series(a: np.ndarray) -> np.ndarray:
    """Coefficients of 1/a(s) mod s^len(a), Newton doubling; needs a[0] != 0."""
    n = len(a)
    if a[0] == 0:
        raise ZeroDivisionError("series has no reciprocal (zero constant term)")
    h = np.array([1.0 / a[0]])
    m = 1
    while m < n:
        m2 = min(2 * m, n)
        ah = _mul_trunc(a[:m2], h, m2)
        ah = -ah
        ah[0] += 2.0
        h = _mul_trunc(h, ah, m2)
        m = m2
    return h


def _mul_trunc(u: np.ndarray, v: np.ndarray, out_len: int) -> np.ndarray:
    nfft = fft.next_fast_len(len(u) + len(v) - 1)
    w = fft.irfft(fft.rfft(u, nfft) * fft.rfft(v, nfft), nfft)
    return w[:out_len].copy()
