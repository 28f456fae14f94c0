"""Symmetric local perturbation: picking w so p - w - conj(w) q is transverse.

The local model is s(z, w) = p(z) - w - conj(w) q(z) with p, q complex
polynomials on the 11/10-ball, |p| <= 1 and |q| <= 1 - kappa.  For fixed
z the equation s = 0 has the unique solution

    w(z) = (p - conj(p) q) / (1 - |q|^2),

a graph over the ball.  Where the z-derivative l(z) = p'(z) - conj(w) q'(z)
along the graph is small, the graph's image marks the dangerous values of
w; a good w0 stays sigma-clear of a C sigma-neighborhood of that image
and then s(., w0) is sigma-transverse to zero over the unit ball, which a
brute-force grid check certifies directly.  The quantitative scale is
sigma = delta (log(1/delta))^(-p) with w0 constrained to |w0| < delta.

Everything here is desk scale: tensor grids, flood fill for the clear
region in the w-disc, and an independent re-verification of every
certificate on a finer grid.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np


class VerificationError(RuntimeError):
    """The selected w0 failed the brute-force transversality check."""

    def __init__(self, message, failing_point=None, margins=None):
        super().__init__(message)
        self.failing_point = failing_point
        self.margins = margins


class CPoly:
    """A complex polynomial in n variables as an exponent -> coefficient map."""

    def __init__(self, n, coeffs):
        self.n = n
        clean = {}
        for exps, c in coeffs.items():
            exps = tuple(int(e) for e in exps)
            if len(exps) != n or any(e < 0 for e in exps):
                raise ValueError("bad exponent tuple %r" % (exps,))
            c = complex(c)
            if c != 0:
                clean[exps] = clean.get(exps, 0.0 + 0.0j) + c
        self.coeffs = clean

    @classmethod
    def univariate(cls, coeff_list):
        """From [c0, c1, ...] meaning c0 + c1 z + ..."""
        return cls(1, {(i,): c for i, c in enumerate(coeff_list)})

    def degree(self):
        return max((sum(e) for e in self.coeffs), default=0)

    def __call__(self, z):
        z = np.asarray(z, dtype=complex)
        if self.n == 1:
            out = np.zeros_like(z)
            for (e,), c in self.coeffs.items():
                out = out + c * z**e
            return out
        out = np.zeros(z.shape[:-1], dtype=complex)
        for exps, c in self.coeffs.items():
            term = np.full(z.shape[:-1], c, dtype=complex)
            for i, e in enumerate(exps):
                if e:
                    term = term * z[..., i] ** e
            out = out + term
        return out

    def deriv(self, var=0):
        out = {}
        for exps, c in self.coeffs.items():
            e = exps[var]
            if e:
                new = list(exps)
                new[var] = e - 1
                out[tuple(new)] = c * e
        return CPoly(self.n, out)

    def scaled(self, factor):
        return CPoly(self.n, {e: c * factor for e, c in self.coeffs.items()})

    def to_json(self):
        return {
            ",".join(str(e) for e in exps): [c.real, c.imag]
            for exps, c in sorted(self.coeffs.items())
        }

    @classmethod
    def from_json(cls, n, doc):
        coeffs = {}
        for key, (re, im) in doc.items():
            exps = tuple(int(t) for t in key.split(","))
            coeffs[exps] = complex(re, im)
        return cls(n, coeffs)


def ball_grid(radius, resolution, n=1):
    """Points of a tensor grid inside the complex n-ball of the radius.

    n = 1 returns a flat complex array; n = 2 an (m, 2) complex array.
    """
    axis = np.linspace(-radius, radius, resolution)
    if n == 1:
        zr, zi = np.meshgrid(axis, axis, indexing="ij")
        z = (zr + 1j * zi).ravel()
        return z[np.abs(z) <= radius]
    if n == 2:
        g = np.meshgrid(*([axis] * 4), indexing="ij")
        z1 = (g[0] + 1j * g[1]).ravel()
        z2 = (g[2] + 1j * g[3]).ravel()
        pts = np.stack([z1, z2], axis=-1)
        keep = np.sqrt(np.abs(z1) ** 2 + np.abs(z2) ** 2) <= radius
        return pts[keep]
    raise ValueError("desk scale handles n in {1, 2}")


def sigma_of(delta, pexp):
    return delta * math.log(1.0 / delta) ** (-pexp)


@dataclass(frozen=True)
class LocalTransInstance:
    p: CPoly
    q: CPoly
    kappa: float
    delta: float
    pexp: int

    def __post_init__(self):
        if not 0.0 < self.kappa < 1.0:
            raise ValueError("kappa must be in (0, 1)")
        if not 0.0 < self.delta < 0.5:
            raise ValueError("delta must be in (0, 1/2)")
        if self.pexp < 1:
            raise ValueError("pexp must be a positive integer")
        if self.p.n != self.q.n:
            raise ValueError("p and q must share the variable count")

    @property
    def n(self):
        return self.p.n

    @property
    def sigma(self):
        return sigma_of(self.delta, self.pexp)

    def validate(self, resolution=101):
        """Check the sampled sup bounds on the 11/10-ball."""
        z = ball_grid(1.1, resolution, self.n)
        sup_p = float(np.max(np.abs(self.p(z))))
        sup_q = float(np.max(np.abs(self.q(z))))
        if sup_p > 1.0 + 1e-12:
            raise ValueError("sampled sup |p| = %g exceeds 1" % sup_p)
        if sup_q > 1.0 - self.kappa + 1e-12:
            raise ValueError("sampled sup |q| = %g exceeds 1 - kappa" % sup_q)
        return {"sup_p": sup_p, "sup_q": sup_q}

    def to_json(self):
        return {
            "n": self.n,
            "p": self.p.to_json(),
            "q": self.q.to_json(),
            "kappa": self.kappa,
            "delta": self.delta,
            "pexp": self.pexp,
        }

    @classmethod
    def from_json(cls, doc):
        n = int(doc["n"])
        return cls(
            CPoly.from_json(n, doc["p"]),
            CPoly.from_json(n, doc["q"]),
            float(doc["kappa"]),
            float(doc["delta"]),
            int(doc["pexp"]),
        )


def solve_w(p, q, z):
    """The graph value w(z) with p(z) - w - conj(w) q(z) = 0.

    Requires |q(z)| < 1; vectorized over z.
    """
    pv = p(z)
    qv = q(z)
    qabs = np.abs(qv)
    if np.any(qabs >= 1.0):
        raise ValueError("|q| >= 1 somewhere; the graph equation degenerates")
    return (pv - np.conj(pv) * qv) / (1.0 - qabs**2)


def solve_w_residual(p, q, z):
    """max |s(z, w(z))| over the given points."""
    w = solve_w(p, q, z)
    return float(np.max(np.abs(p(z) - w - np.conj(w) * q(z))))


def dw_dz_jacobian(p, q, z):
    """Real 2x2 Jacobian of the graph z -> w(z) at a point, closed form.

    Differentiating s(z, w(z)) = 0 gives dw/dz = -(ds/dw)^(-1) ds/dz with
    ds/dw = -(Id + antilinear multiplication by q(z)) and ds/dz the
    complex multiplication by p'(z) - conj(w) q'(z).
    """
    if p.n != 1:
        raise ValueError("the graph Jacobian is univariate")
    z = complex(z)
    w = complex(solve_w(p, q, np.array([z]))[0])
    qv = complex(q(np.array([z]))[0])
    l = complex(p.deriv()(np.array([z]))[0] - np.conj(w) * q.deriv()(np.array([z]))[0])
    m_w = -(np.eye(2) + np.array([[qv.real, qv.imag], [qv.imag, -qv.real]]))
    m_z = np.array([[l.real, -l.imag], [l.imag, l.real]])
    return -np.linalg.solve(m_w, m_z)


def dw_dz_bound_check(p, q, z, kappa, step=1e-7):
    """Spot check |dw/dz| <= 2 kappa^-1 |l(z)| by finite differences (n = 1)."""
    if p.n != 1:
        raise ValueError("the dw/dz spot check is univariate")
    z = np.asarray(z, dtype=complex)
    w0 = solve_w(p, q, z)
    dp, dq = p.deriv(), q.deriv()
    l = np.abs(dp(z) - np.conj(w0) * dq(z))
    wx = (solve_w(p, q, z + step) - solve_w(p, q, z - step)) / (2.0 * step)
    wy = (solve_w(p, q, z + 1j * step) - solve_w(p, q, z - 1j * step)) / (2.0 * step)
    # operator norm of the real 2x2 Jacobian with columns (wx, wy)
    norms = np.empty(z.shape)
    flat_wx, flat_wy = wx.ravel(), wy.ravel()
    for idx in range(z.size):
        jac = np.array(
            [
                [flat_wx[idx].real, flat_wy[idx].real],
                [flat_wx[idx].imag, flat_wy[idx].imag],
            ]
        )
        norms.ravel()[idx] = np.linalg.svd(jac, compute_uv=False)[0]
    margin = 2.0 / kappa * l - norms
    return {
        "max_dw_norm": float(np.max(norms)),
        "min_margin": float(np.min(margin)),
        "ok": bool(np.min(margin) >= -1e-6),
    }


def eta_transverse_check(f, df, grid, eta):
    """Estimated transversality of a complex function on a grid.

    True iff every grid point with |f| < eta has derivative with a right
    inverse of norm at most 1/eta; for a holomorphic scalar on C^n that
    means gradient norm >= eta.  (Non-strict, so the identity map is
    1-transverse.)
    """
    fv = np.abs(f(grid))
    dv = df(grid)
    if dv.ndim > fv.ndim:  # n > 1: gradient vectors
        dnorm = np.sqrt(np.sum(np.abs(dv) ** 2, axis=-1))
    else:
        dnorm = np.abs(dv)
    mask = fv < eta
    return bool(np.all(dnorm[mask] >= eta)) if np.any(mask) else True


@dataclass(frozen=True)
class TransversalityCertificate:
    w0: complex
    margin: float
    sigma: float
    clearance_area: float
    clearance_claim: float
    grid: dict = field(compare=False)

    def __post_init__(self):
        if self.margin < self.sigma:
            raise ValueError("certificate margin %g below sigma %g" % (self.margin, self.sigma))

    @property
    def area_claim_ok(self):
        return self.clearance_area > self.clearance_claim

    def to_json(self):
        return {
            "w0": [self.w0.real, self.w0.imag],
            "margin": self.margin,
            "sigma": self.sigma,
            "clearance_area": self.clearance_area,
            "clearance_claim": self.clearance_claim,
            "area_claim_ok": self.area_claim_ok,
            "grid": self.grid,
        }


def _flood_components(free, res):
    """Connected components (4-neighbor) of a boolean res x res grid."""
    labels = np.full(free.shape, -1, dtype=int)
    count = 0
    for start in range(free.size):
        if not free.flat[start] or labels.flat[start] >= 0:
            continue
        stack = [start]
        labels.flat[start] = count
        while stack:
            idx = stack.pop()
            i, j = divmod(idx, res)
            for ni, nj in ((i - 1, j), (i + 1, j), (i, j - 1), (i, j + 1)):
                if 0 <= ni < res and 0 <= nj < res:
                    nidx = ni * res + nj
                    if free.flat[nidx] and labels.flat[nidx] < 0:
                        labels.flat[nidx] = count
                        stack.append(nidx)
        count += 1
    return labels, count


def _attempt(inst, graph_resolution, w_resolution, verify_resolution, C):
    sigma = inst.sigma
    dp = inst.p.deriv()
    dq = inst.q.deriv()

    z = ball_grid(1.1, graph_resolution, 1)
    w_graph = solve_w(inst.p, inst.q, z)
    residual = float(np.max(np.abs(inst.p(z) - w_graph - np.conj(w_graph) * inst.q(z))))
    l = np.abs(dp(z) - np.conj(w_graph) * dq(z))
    bad_images = w_graph[l <= C * sigma]

    axis = np.linspace(-inst.delta, inst.delta, w_resolution)
    wr, wi = np.meshgrid(axis, axis, indexing="ij")
    w_flat = (wr + 1j * wi).ravel()
    in_disc = np.abs(w_flat) <= inst.delta
    if bad_images.size:
        dist = np.full(w_flat.shape, np.inf)
        chunk = 4096
        for lo in range(0, w_flat.size, chunk):
            block = w_flat[lo : lo + chunk, None] - bad_images[None, :]
            dist[lo : lo + chunk] = np.min(np.abs(block), axis=1)
    else:
        dist = np.full(w_flat.shape, np.inf)
    free = (in_disc & (dist > C * sigma)).reshape(w_resolution, w_resolution)

    cell = (axis[1] - axis[0]) ** 2
    labels, count = _flood_components(free, w_resolution)
    if count == 0:
        return None, residual, {"reason": "no clear region in the w-disc"}
    sizes = np.bincount(labels[labels >= 0].ravel(), minlength=count)
    main = int(np.argmax(sizes))
    clearance_area = float(sizes[main] * cell)
    in_main = (labels == main).ravel()
    dist_masked = np.where(in_main, dist, -np.inf)
    w0 = complex(w_flat[int(np.argmax(dist_masked))])

    zv = ball_grid(1.0, verify_resolution, 1)
    s = inst.p(zv) - w0 - np.conj(w0) * inst.q(zv)
    ds = dp(zv) - np.conj(w0) * dq(zv)
    margin = float(np.min(np.maximum(np.abs(s), np.abs(ds))))
    ok = eta_transverse_check(
        lambda grid_: inst.p(grid_) - w0 - np.conj(w0) * inst.q(grid_),
        lambda grid_: dp(grid_) - np.conj(w0) * dq(grid_),
        zv,
        sigma,
    )
    detail = {
        "w0": w0,
        "margin": margin,
        "clearance_area": clearance_area,
        "residual": residual,
    }
    if not ok or margin < sigma:
        worst = int(np.argmin(np.maximum(np.abs(s), np.abs(ds))))
        detail["failing_point"] = complex(zv[worst])
        detail["failing_margins"] = (float(np.abs(s[worst])), float(np.abs(ds[worst])))
        return None, residual, detail
    return detail, residual, None


def find_good_w0(
    inst,
    graph_resolution=201,
    w_resolution=201,
    verify_resolution=201,
    C=4.0,
):
    """Select and certify a good perturbation value w0 for the instance.

    Computes the graph w(z) over the 11/10-ball, its near-critical image,
    and picks the w-disc point (inside the largest clear component found
    by flood fill) farthest from the C sigma-neighborhood of that image.
    The returned certificate is validated by a brute-force transversality
    check at eta = sigma over the unit ball; one automatic 2x refinement
    is attempted before reporting failure.
    """
    sigma = inst.sigma
    attempt_specs = [
        (graph_resolution, w_resolution, verify_resolution),
        (2 * graph_resolution - 1, 2 * w_resolution - 1, 2 * verify_resolution - 1),
    ]
    last_detail = None
    for spec in attempt_specs:
        detail, residual, failure = _attempt(inst, *spec, C)
        if residual > 1e-10:
            raise VerificationError(
                "graph residual %g exceeds 1e-10" % residual, margins={"residual": residual}
            )
        if detail is not None:
            return TransversalityCertificate(
                w0=detail["w0"],
                margin=detail["margin"],
                sigma=sigma,
                clearance_area=detail["clearance_area"],
                clearance_claim=0.9 * math.pi * inst.delta**2,
                grid={
                    "graph_resolution": spec[0],
                    "w_resolution": spec[1],
                    "verify_resolution": spec[2],
                    "C": C,
                },
            )
        last_detail = failure
    raise VerificationError(
        "no sigma-transverse w0 found after refinement",
        failing_point=last_detail.get("failing_point") if last_detail else None,
        margins=last_detail,
    )


def reverify(inst, cert, factor=2):
    """Independent re-check of a certificate on a finer unit-ball grid."""
    res = factor * cert.grid["verify_resolution"] - 1
    zv = ball_grid(1.0, res, 1)
    dp, dq = inst.p.deriv(), inst.q.deriv()
    return eta_transverse_check(
        lambda g: inst.p(g) - cert.w0 - np.conj(cert.w0) * inst.q(g),
        lambda g: dp(g) - np.conj(cert.w0) * dq(g),
        zv,
        cert.sigma,
    )


def random_instance(rng, degree=4, kappa=0.2, delta=0.1, pexp=2, resolution=101):
    """A seeded random univariate instance normalized to the sup bounds."""
    z = ball_grid(1.1, resolution, 1)

    def draw(sup_target, min_degree=0):
        while True:
            deg = int(rng.integers(min_degree, degree + 1))
            coeffs = rng.normal(size=deg + 1) + 1j * rng.normal(size=deg + 1)
            poly = CPoly.univariate(list(coeffs))
            sup = float(np.max(np.abs(poly(z))))
            if sup > 1e-9:
                return poly.scaled(sup_target / sup)

    return LocalTransInstance(draw(1.0, min_degree=1), draw(1.0 - kappa), kappa, delta, pexp)
