"""Scale-dependent radial cutoff profiles.

A profile l(t) for parameters (k, D, c0) is the piecewise function

    l(t) = k^(1/4)                      on [0, D]
    l(t) = a k^(1/4) / t^(1/2 + eps)    on [2D, sqrt(k) c0 / 2]
    l(t) = 1                            for t >= 3 sqrt(k) c0 / 4

with the two gaps bridged smoothly.  The constants are pinned by asking
the power section to pass through k^(1/4) at t = (3/2) D and through 1 at
t = 0.7 c0 sqrt(k):

    a   = ((3/2) D)^(1/2 + eps)
    eps = ln(3D / (1.4 c0)) / (ln k - 2 ln(3D / (1.4 c0)))

which keeps 0 < eps <= 1/4 exactly when k >= (3D / (1.4 c0))^6.

Every admissible profile must satisfy the slope corridor

    0 > l'(t) / l(t) >= -(1/2 + eps) / t     on (D, 3 sqrt(k) c0 / 4).

The bridges are therefore built in log-slope space: on a band we set
l'/l = -(1/2 + eps) S(u) / t where S is a quintic smoothstep (value and
slope matched at both ends, so l is C^2 across every seam) plus a bump
u^3 (1-u)^3 whose universal coefficient makes the band integral land
exactly on the adjacent closed form.  Since 0 <= S <= 1, the corridor
holds by construction, and l / (power section) is increasing on the
bands.  (The naive choice, a single quintic interpolating l itself,
overshoots the corridor by ~1e-3 and is not used.)
"""

from __future__ import annotations

import numpy as np
from numpy.polynomial import Polynomial

_SMOOTHSTEP = Polynomial([0.0, 0.0, 0.0, 10.0, -15.0, 6.0])
_BUMP = Polynomial([0.0, 0.0, 0.0, 1.0, -3.0, 3.0, -1.0])  # u^3 (1-u)^3


def _band_integral(poly, c):
    """integral_0^1 poly(u) / (c + u) du, exactly (polynomial part + log)."""
    rho = poly(-c)
    t = (poly - rho) // Polynomial([c, 1.0])
    return t.integ()(1.0) - t.integ()(0.0) + rho * (np.log(c + 1.0) - np.log(c))


def _tuned_ramp(c, target):
    """A ramp S: [0,1] -> [0,1] with zero end slopes and a pinned integral.

    S = smoothstep(u^q) + lambda * u^3 (1-u)^3, with the warp exponent q
    chosen so that the bump correction hitting
    integral_0^1 S/(c+u) du = target stays small; asserts the [0, 1]
    corridor that downstream slope bounds rely on.
    """
    best = None
    u = Polynomial([0.0, 1.0])
    grid = np.linspace(0.0, 1.0, 2001)
    for q in range(1, 9):
        shape = _SMOOTHSTEP(u**q)
        lam = (target - _band_integral(shape, c)) / _band_integral(_BUMP, c)
        s = shape + lam * _BUMP
        probe = s(grid)
        if probe.min() < -1e-12 or probe.max() > 1.0 + 1e-12:
            continue
        if best is None or abs(lam) < abs(best[1]):
            best = (s, lam)
    if best is None:
        raise AssertionError("no tuned ramp stays inside the [0, 1] corridor")
    return best[0]


# Both band shapes are parameter independent: the inner band always spans
# [D, 2D] (so c = t_lo / width = 1) and carries the log-ratio ln(4/3);
# the outer band spans [1/2, 3/4] c0 sqrt(k) (c = 2) and its complement
# ramp carries ln(3/2) - ln(7/5).
_S_INNER = _tuned_ramp(1.0, np.log(4.0 / 3.0))
_S_OUTER_RAMP = _tuned_ramp(2.0, np.log(1.5) - np.log(1.4))


class ThresholdError(ValueError):
    """k is below the smallest admissible value for (D, c0)."""

    def __init__(self, k, min_k):
        super().__init__(
            "k = %g is below the minimal admissible value %.6g" % (k, min_k)
        )
        self.min_k = min_k


def min_admissible_k(D, c0):
    """Smallest k for which the profile exists (eps <= 1/4 and ordered bands)."""
    return max((3.0 * D / (1.4 * c0)) ** 6, 16.0 * D * D / (c0 * c0))


class _Band:
    """One bridge: l'/l = -beta S(u)/t on [t_lo, t_hi], u = (t - t_lo)/w."""

    def __init__(self, beta, t_lo, t_hi, shape, falling, log_l_lo):
        self.beta = beta
        self.t_lo = t_lo
        self.w = t_hi - t_lo
        # falling bands ramp S 0 -> 1 (leave a flat section), rising-S
        # complements (1 - shape) leave the power section toward a constant
        self.s = shape if falling else Polynomial([1.0]) - shape
        self.s1 = self.s.deriv()
        self.s2 = self.s1.deriv()
        self.log_l_lo = log_l_lo
        self._c = t_lo / self.w
        # fixed-node quadrature: stable for the high-degree warped shapes,
        # where polynomial division by (c + u) cancels catastrophically
        self._nodes, self._weights = np.polynomial.legendre.leggauss(32)

    def _int_s(self, u):
        """integral_0^u S(v)/(c + v) dv, by Gauss-Legendre on [0, u]."""
        u = np.asarray(u, dtype=float)
        half = 0.5 * u[..., None]
        v = half * (self._nodes + 1.0)
        return np.sum(self._weights * self.s(v) / (self._c + v), axis=-1) * half[..., 0]

    def log_jets(self, t):
        u = (t - self.t_lo) / self.w
        m = self.log_l_lo - self.beta * self._int_s(u)
        m1 = -self.beta * self.s(u) / t
        m2 = -self.beta * (self.s1(u) / (self.w * t) - self.s(u) / t**2)
        m3 = -self.beta * (
            self.s2(u) / (self.w**2 * t)
            - 2.0 * self.s1(u) / (self.w * t**2)
            + 2.0 * self.s(u) / t**3
        )
        return m, m1, m2, m3


class CutoffProfile:
    """Evaluator for l and its first three derivatives.

    Vectorized over numpy arrays.  l is C^2 globally; third derivatives
    jump at the four band seams.
    """

    def __init__(self, k, D, c0):
        min_k = min_admissible_k(D, c0)
        if k < min_k:
            raise ThresholdError(k, min_k)
        self.k = float(k)
        self.D = float(D)
        self.c0 = float(c0)
        ratio = 3.0 * D / (1.4 * c0)
        self.eps = float(np.log(ratio) / (np.log(k) - 2.0 * np.log(ratio)))
        self.a = float((1.5 * D) ** (0.5 + self.eps))
        self.beta = 0.5 + self.eps
        self.t_flat = float(D)
        self.t_pow_lo = 2.0 * float(D)
        self.t_pow_hi = float(0.5 * np.sqrt(k) * c0)
        self.t_one = float(0.75 * np.sqrt(k) * c0)
        self.top = float(k**0.25)
        self._inner = _Band(
            self.beta, self.t_flat, self.t_pow_lo, _S_INNER, True, np.log(self.top)
        )
        self._outer = _Band(
            self.beta,
            self.t_pow_hi,
            self.t_one,
            _S_OUTER_RAMP,
            False,
            np.log(self._pow_value(self.t_pow_hi)),
        )

    def _pow_value(self, t):
        return self.a * self.top * t ** (-self.beta)

    def _pow_log_jets(self, t):
        m = np.log(self.a * self.top) - self.beta * np.log(t)
        return m, -self.beta / t, self.beta / t**2, -2.0 * self.beta / t**3

    def _eval(self, t, order):
        t = np.asarray(t, dtype=float)
        scalar = t.ndim == 0
        t = np.atleast_1d(t)
        out = np.zeros_like(t)
        flat = t <= self.t_flat
        band1 = (t > self.t_flat) & (t < self.t_pow_lo)
        power = (t >= self.t_pow_lo) & (t <= self.t_pow_hi)
        band2 = (t > self.t_pow_hi) & (t < self.t_one)
        one = t >= self.t_one
        if order == 0:
            out[flat] = self.top
            out[one] = 1.0
        for mask, jets in (
            (band1, self._inner.log_jets),
            (band2, self._outer.log_jets),
            (power, self._pow_log_jets),
        ):
            if not np.any(mask):
                continue
            m, m1, m2, m3 = jets(t[mask])
            l = np.exp(m)
            if order == 0:
                out[mask] = l
            elif order == 1:
                out[mask] = l * m1
            elif order == 2:
                out[mask] = l * (m1**2 + m2)
            else:
                out[mask] = l * (m1**3 + 3.0 * m1 * m2 + m3)
        return out[0] if scalar else out

    def value(self, t):
        return self._eval(t, 0)

    def d1(self, t):
        return self._eval(t, 1)

    def d2(self, t):
        return self._eval(t, 2)

    def d3(self, t):
        return self._eval(t, 3)

    @property
    def blend(self):
        """Specification of the two bridge bands (endpoints and log-slope shape)."""
        return {
            "inner": {
                "from": self.t_flat,
                "to": self.t_pow_lo,
                "shape_coefficients": [float(c) for c in self._inner.s.coef],
            },
            "outer": {
                "from": self.t_pow_hi,
                "to": self.t_one,
                "shape_coefficients": [float(c) for c in self._outer.s.coef],
            },
        }

    def slope_check(self, samples=10_000, pad=1e-6):
        """Check 0 > l'/l >= -(1/2 + eps)/t on the open deformation range.

        Samples log-spaced points on (D, 3 sqrt(k) c0 / 4); reports the
        worst margins observed.
        """
        lo = self.t_flat * (1.0 + pad)
        hi = self.t_one * (1.0 - pad)
        t = np.geomspace(lo, hi, samples)
        ratio = self.d1(t) / self.value(t)
        bound = -self.beta / t
        upper_margin = float(np.max(ratio))          # must be < 0
        lower_margin = float(np.min(ratio - bound))  # must be >= 0 (tolerance)
        ok = upper_margin < 0.0 and lower_margin >= -1e-12
        return {
            "ok": bool(ok),
            "samples": int(samples),
            "max_slope_ratio": upper_margin,
            "min_margin_above_bound": lower_margin,
        }

    def derivative_bound_report(self, samples=2000):
        """Observed dimensionless constants of the two bridge bands."""
        b1 = np.linspace(self.t_flat, self.t_pow_lo, samples)[1:-1]
        b2 = np.linspace(self.t_pow_hi, self.t_one, samples)[1:-1]
        k4 = self.top
        return {
            "eps2": float(np.max(np.abs(self.d1(b1))) * self.D / k4),
            "C_second": float(np.max(np.abs(self.d2(b1))) * self.D**2 / k4),
            "C_third": float(np.max(np.abs(self.d3(b1))) * self.D**3 / k4),
            "eps2_prime": float(np.max(np.abs(self.d1(b2))) * np.sqrt(self.k)),
            "C_second_prime": float(np.max(np.abs(self.d2(b2))) * self.k),
            "C_third_prime": float(np.max(np.abs(self.d3(b2))) * self.k**1.5),
        }


def build_cutoff(k, D, c0):
    """Construct the profile, or raise ThresholdError with the minimal k."""
    return CutoffProfile(k, D, c0)
