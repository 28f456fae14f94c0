"""Deformations of a Morse function with pinned transversality behavior.

Model: a Morse function f on R^n whose critical points are exactly
quadratic, f = c_j + sum(sign_i x_i^2), inside a ball of radius c0 around
each center (base metric).  The deformation at scale k works in rescaled
coordinates x_resc = sqrt(k) x_base and replaces f_k = sqrt(k) f inside
each rescaled ball of radius sqrt(k) c0 by

    h(x) = f_k( l(|y|) y ),     y = x - sqrt(k) p_j,

with l a cutoff profile (see cutoff.py).  Since l = 1 on the outer shell
the two definitions agree there, and on the flat core l = k^(1/4) turns
the shallow rescaled well back into the unit-size quadratic
sqrt(k) c_j + sum(sign_i y_i^2).

Evaluators return the value, gradient, Hessian and third derivative in
the rescaled metric from closed-form chain rules through the radial map;
they back the empirical bounds

    max |grad h| = O(D),  grad h eta-transverse to 0,  max |d^3 h| = O(1/D)

with constants that a sweep over k checks for scale stability.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np


@dataclass(frozen=True)
class CriticalPoint:
    center: tuple  # base-metric coordinates
    value: float
    signs: tuple   # +1 / -1 per coordinate


class QuadraticBackground:
    """Global quadratic extension c + sum(sign_i (x - p)_i^2) of one well."""

    def __init__(self, crit):
        self.crit = crit

    def jets(self, xb):
        p = np.asarray(self.crit.center, dtype=float)
        s = np.asarray(self.crit.signs, dtype=float)
        y = np.asarray(xb, dtype=float) - p
        n = len(y)
        value = self.crit.value + float(s @ (y * y))
        grad = 2.0 * s * y
        hess = 2.0 * np.diag(s)
        third = np.zeros((n, n, n))
        return value, grad, hess, third


class MorseModel:
    """Critical-point data plus a background for the far region."""

    def __init__(self, n, crits, background=None):
        self.n = n
        self.crits = list(crits)
        for c in self.crits:
            if len(c.center) != n or len(c.signs) != n:
                raise ValueError("critical point data does not match dimension")
            if any(s not in (-1, 1) for s in c.signs):
                raise ValueError("signs must be +-1")
        self.background = background

    @classmethod
    def quadratic(cls, n, value=0.0, signs=None, center=None):
        """One critical point whose quadratic model extends globally."""
        signs = tuple(signs) if signs is not None else tuple(
            1 if i % 2 == 0 else -1 for i in range(n)
        )
        center = tuple(center) if center is not None else (0.0,) * n
        crit = CriticalPoint(center, float(value), signs)
        return cls(n, [crit], background=QuadraticBackground(crit))

    def check_separation(self, c0):
        for i, a in enumerate(self.crits):
            for b in self.crits[i + 1 :]:
                d = np.linalg.norm(np.asarray(a.center) - np.asarray(b.center))
                if d <= 2.0 * c0:
                    raise ValueError(
                        "critical points at distance %g violate the > 2 c0 = %g separation"
                        % (d, 2.0 * c0)
                    )


class DeformedMorse:
    """Closed-form jets of the deformed function in rescaled coordinates."""

    def __init__(self, model, profile):
        model.check_separation(profile.c0)
        self.model = model
        self.profile = profile
        self.k = profile.k
        self.sqrt_k = float(np.sqrt(profile.k))
        self.ball_radius = self.sqrt_k * profile.c0

    def _locate(self, x):
        x = np.asarray(x, dtype=float)
        for crit in self.model.crits:
            y = x - self.sqrt_k * np.asarray(crit.center, dtype=float)
            if np.linalg.norm(y) <= self.ball_radius:
                return crit, y
        return None, None

    def jets(self, x):
        """(value, gradient, Hessian, third derivative) at a rescaled point."""
        crit, y = self._locate(x)
        if crit is None:
            if self.model.background is None:
                raise ValueError("point outside every critical ball and no background given")
            xb = np.asarray(x, dtype=float) / self.sqrt_k
            v, g, h, t3 = self.model.background.jets(xb)
            return (
                self.sqrt_k * v,
                g,
                h / self.sqrt_k,
                t3 / self.k,
            )
        return self._local_jets(crit, y)

    def _local_jets(self, crit, y):
        n = self.model.n
        signs = np.asarray(crit.signs, dtype=float)
        base = self.sqrt_k * crit.value
        t = float(np.linalg.norm(y))
        prof = self.profile
        if t <= prof.t_flat:
            # flat core: exactly the unit quadratic
            value = base + float(signs @ (y * y))
            grad = 2.0 * signs * y
            hess = 2.0 * np.diag(signs)
            third = np.zeros((n, n, n))
            return value, grad, hess, third

        l = prof.value(t)
        l1 = prof.d1(t)
        l2 = prof.d2(t)
        l3 = prof.d3(t)
        r = y / t
        u = l * y
        eye = np.eye(n)

        du = l * eye + l1 * np.outer(r, y)
        # d2u[i,a,b]: fully symmetric
        sym_dr = (
            np.einsum("a,ib->iab", r, eye)
            + np.einsum("b,ia->iab", r, eye)
            + np.einsum("i,ab->iab", r, eye)
        )
        rrr = np.einsum("i,a,b->iab", r, r, r)
        d2u = l1 * sym_dr + (t * l2 - l1) * rrr

        A = l1 / t
        B = l2 - l1 / t
        dd = np.einsum("bc,ia->iabc", eye, eye) + np.einsum("ac,ib->iabc", eye, eye) + np.einsum("ic,ab->iabc", eye, eye)
        drr = (
            np.einsum("ia,b,c->iabc", eye, r, r)
            + np.einsum("ib,a,c->iabc", eye, r, r)
            + np.einsum("ab,i,c->iabc", eye, r, r)
            + np.einsum("ac,b,i->iabc", eye, r, r)
            + np.einsum("bc,a,i->iabc", eye, r, r)
            + np.einsum("ic,a,b->iabc", eye, r, r)
        )
        r4 = np.einsum("i,a,b,c->iabc", r, r, r, r)
        d3u = A * dd + B * drr + (t * l3 - 3.0 * B) * r4

        scale = 2.0 / self.sqrt_k
        su = signs * u
        value = base + float(signs @ (u * u)) / self.sqrt_k
        grad = scale * (su @ du)
        hess = scale * (du.T @ np.diag(signs) @ du + np.einsum("i,iab->ab", su, d2u))
        third = scale * (
            np.einsum("i,iab,ic->abc", signs, d2u, du)
            + np.einsum("i,iac,ib->abc", signs, d2u, du)
            + np.einsum("i,ibc,ia->abc", signs, d2u, du)
            + np.einsum("i,iabc->abc", su, d3u)
        )
        return value, grad, hess, third

    def value(self, x):
        return self.jets(x)[0]

    def gradient(self, x):
        return self.jets(x)[1]

    def hessian(self, x):
        return self.jets(x)[2]

    def third(self, x):
        return self.jets(x)[3]


def deform_morse(model, profile):
    """Attach a cutoff profile to a Morse model; raises on bad separation."""
    return DeformedMorse(model, profile)


def deform_grid(model, profile, radial=160, angular=24, core=24, outer=12):
    """Sample points covering the flat core, both bands, the power annulus
    and a thin collar outside the deformation ball.

    n = 2 uses evenly spaced directions on the circle; other dimensions
    draw a fixed set of unit directions from a seeded generator, so the
    grid is deterministic.
    """
    sqrt_k = float(np.sqrt(profile.k))
    radii = np.concatenate(
        [
            np.linspace(0.0, profile.t_flat, core, endpoint=False),
            np.geomspace(profile.t_flat, profile.t_one, radial, endpoint=False),
            np.linspace(profile.t_one, sqrt_k * profile.c0, outer),
            np.linspace(sqrt_k * profile.c0 * 1.01, sqrt_k * profile.c0 * 1.25, 4)
            if model.background is not None
            else np.empty(0),
        ]
    )
    n = model.n
    if n == 2:
        angles = np.linspace(0.0, 2.0 * np.pi, angular, endpoint=False)
        dirs = np.stack([np.cos(angles), np.sin(angles)], axis=1)
    elif n == 1:
        dirs = np.array([[1.0], [-1.0]])
    else:
        rng = np.random.default_rng(0)
        dirs = rng.normal(size=(angular, n))
        dirs /= np.linalg.norm(dirs, axis=1)[:, None]
    center = sqrt_k * np.asarray(model.crits[0].center, dtype=float)
    pts = [center]
    for rr in radii:
        if rr == 0.0:
            continue
        for d in dirs:
            pts.append(center + rr * d)
    return np.array(pts)


def verify_deform_bounds(h, grid):
    """Empirical bounds over a grid: max gradient, transversality constant,
    max third derivative (Frobenius norm), all in the rescaled metric.

    The transversality constant is the largest eta such that every grid
    point with |grad| < eta has Hessian smallest singular value >= eta,
    found by bisection.
    """
    grads = np.empty(len(grid))
    sigmas = np.empty(len(grid))
    thirds = np.empty(len(grid))
    for i, x in enumerate(grid):
        _, g, hess, t3 = h.jets(x)
        grads[i] = np.linalg.norm(g)
        sigmas[i] = np.linalg.svd(hess, compute_uv=False)[-1]
        thirds[i] = np.linalg.norm(t3)

    def transverse(eta):
        mask = grads < eta
        return bool(np.all(sigmas[mask] >= eta)) if np.any(mask) else True

    lo, hi = 0.0, float(np.max(sigmas)) + 1.0
    for _ in range(60):
        mid = 0.5 * (lo + hi)
        if transverse(mid):
            lo = mid
        else:
            hi = mid
    return {
        "points": int(len(grid)),
        "maxGrad": float(np.max(grads)),
        "etaObserved": float(lo),
        "maxThird": float(np.max(thirds)),
    }


def check_gradient_transversality(h, grid, eta):
    """True iff every grid point with |grad h| < eta has Hessian smallest
    singular value >= eta.  eta = 0 is vacuously true (empty test set)."""
    if eta == 0:
        return True
    for x in grid:
        _, g, hess, _ = h.jets(x)
        if np.linalg.norm(g) < eta:
            if np.linalg.svd(hess, compute_uv=False)[-1] < eta:
                return False
    return True


class CirclePair:
    """The pair (cos h, sin h) of a scalar function, with its algebra checks.

    The quotient (h1 + i h2) / (h1 - i h2) equals the unit-circle point
    (cos 2h, sin 2h) identically; identity_residual certifies this on
    samples.  derivative_report gives the observed first and second
    derivative bounds of the pair through the chain rule.
    """

    def __init__(self, h):
        self.h = h  # scalar callable (or a DeformedMorse value method)

    def first(self, x):
        return np.cos(self.h(x))

    def second(self, x):
        return np.sin(self.h(x))

    @staticmethod
    def identity_residual(h_values):
        h_values = np.asarray(h_values, dtype=float)
        z = np.cos(h_values) + 1j * np.sin(h_values)
        quotient = z / np.conj(z)
        target = np.cos(2.0 * h_values) + 1j * np.sin(2.0 * h_values)
        return float(np.max(np.abs(quotient - target)))

    @staticmethod
    def derivative_report(deformed, grid):
        """max |d(cos h)|, |d(sin h)| and their second derivatives over a grid."""
        d1max = 0.0
        d2max = 0.0
        for x in grid:
            v, g, hess, _ = deformed.jets(x)
            c, s = np.cos(v), np.sin(v)
            d1max = max(d1max, np.linalg.norm(-s * g), np.linalg.norm(c * g))
            outer = np.outer(g, g)
            h1 = -c * outer - s * hess
            h2 = -s * outer + c * hess
            d2max = max(d2max, np.linalg.norm(h1), np.linalg.norm(h2))
        return {"max_first_derivative": float(d1max), "max_second_derivative": float(d2max)}


def circle_pair(h):
    return CirclePair(h)
