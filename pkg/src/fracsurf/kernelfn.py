"""Vertical-slice antiderivative of the fractional interaction kernel.

For ambient graph dimension n and order a in (0, 1) the kernel restricted to
a vertical line integrates against the substitution tau = (height)/(horizontal
distance) to

    F(t) = integral_0^t (1 + tau^2)^(-(n + 1 + a)/2) dtau.

F is odd, strictly increasing, 1-Lipschitz, and saturates at a finite limit
F(inf) = B(1/2, (n+a)/2) / 2.  Everything downstream (curvature assembly,
truncation bounds, Monte Carlo cross-checks) is phrased through F, so this
module carries the only special-function dependency.
"""

from __future__ import annotations

import numpy as np
from scipy import special


class SliceIntegral:
    """Evaluator for F and its derivative at fixed (n, alpha).

    The closed form uses the regularized incomplete beta function:

        F(t) = sign(t) * B(1/2, (n+a)/2) * I_x(1/2, (n+a)/2) / 2,
        x = t^2 / (1 + t^2).

    For |t| beyond ~1e150 the naive x overflows to nan, so the ratio is
    formed as 1/(1 + t^-2) there; infinities map to the saturation value.
    """

    def __init__(self, n: int, alpha: float):
        if n < 1:
            raise ValueError("ambient graph dimension must be >= 1")
        if not 0.0 < alpha < 1.0:
            raise ValueError("order must lie strictly inside (0, 1)")
        self.n = int(n)
        self.alpha = float(alpha)
        self.power = 0.5 * (n + 1 + alpha)
        self._b = 0.5 * (n + alpha)
        self._beta_full = special.beta(0.5, self._b)
        self.limit = 0.5 * self._beta_full

    def value(self, t):
        t = np.asarray(t, dtype=float)
        scalar = t.ndim == 0
        t = np.atleast_1d(t)
        out = np.empty_like(t)
        at = np.abs(t)
        big = at > 1e150
        tf = t[~big]
        x = tf * tf / (1.0 + tf * tf)
        out[~big] = np.sign(tf) * 0.5 * self._beta_full * special.betainc(0.5, self._b, x)
        if big.any():
            tb = t[big]
            # (1/t)^2 underflows silently where t*t would overflow;
            # t = +-inf gives x = 1 exactly
            inv = np.zeros_like(tb)
            finite = np.isfinite(tb)
            r = 1.0 / tb[finite]
            inv[finite] = r * r
            x = 1.0 / (1.0 + inv)
            out[big] = np.sign(tb) * 0.5 * self._beta_full * special.betainc(0.5, self._b, x)
        return float(out[0]) if scalar else out

    __call__ = value

    def gap(self, t):
        """limit - F(|t|), computed without cancellation.

        Uses I_x(a, b) = 1 - I_{1-x}(b, a) with 1 - x = 1/(1 + t^2), which
        stays accurate where x itself would round to 1.
        """
        t = np.abs(np.asarray(t, dtype=float))
        scalar = t.ndim == 0
        t = np.atleast_1d(t)
        u = np.empty_like(t)
        big = t > 1e150
        tf = t[~big]
        u[~big] = 1.0 / (1.0 + tf * tf)
        if big.any():
            tb = t[big]
            r = np.zeros_like(tb)
            finite = np.isfinite(tb)
            r[finite] = 1.0 / tb[finite]
            u[big] = r * r
        out = self.limit * special.betainc(self._b, 0.5, u)
        return float(out[0]) if scalar else out

    def deriv(self, t):
        t = np.asarray(t, dtype=float)
        return (1.0 + t * t) ** (-self.power)

    def tail_gap_bound(self, t: float) -> float:
        """Upper bound for limit - F(t), t > 0.

        From (1 + tau^2)^(-p) <= tau^(-2p) the gap is at most
        t^(-(n+alpha)) / (n+alpha).
        """
        m = self.n + self.alpha
        return float(t) ** (-m) / m
