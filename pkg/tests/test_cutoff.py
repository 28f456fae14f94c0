import math

import numpy as np
import pytest

from lefpen.transversal.cutoff import (
    CutoffProfile,
    ThresholdError,
    build_cutoff,
    min_admissible_k,
)


def closed_form_eps(k, D, c0):
    r = 3.0 * D / (1.4 * c0)
    return math.log(r) / (math.log(k) - 2.0 * math.log(r))


def test_threshold():
    assert min_admissible_k(1, 1) == pytest.approx((15 / 7) ** 6)
    assert min_admissible_k(1, 1) == pytest.approx(96.8187, abs=1e-3)
    with pytest.raises(ThresholdError) as err:
        build_cutoff(50, 1, 1)
    assert err.value.min_k == pytest.approx((15 / 7) ** 6)


def test_constants_match_closed_forms():
    p = build_cutoff(1e4, 1.0, 1.0)
    eps = closed_form_eps(1e4, 1.0, 1.0)
    assert abs(p.eps - eps) < 1e-12
    assert abs(p.a - 1.5 ** (0.5 + eps)) < 1e-12
    assert p.eps == pytest.approx(0.099158, abs=1e-6)
    assert p.a == pytest.approx(1.27499, abs=1e-5)


def test_endpoint_values():
    p = build_cutoff(1e4, 1.0, 1.0)
    assert p.value(1.0) == 1e4**0.25
    assert p.value(0.0) == 1e4**0.25
    assert abs(p.value(p.t_one) - 1.0) < 1e-9
    assert p.value(p.t_one * 2) == 1.0
    # the power form passes through k^(1/4) at 1.5 D and through 1 at
    # 0.7 c0 sqrt(k) (the anchors pinning a and eps)
    beta = 0.5 + p.eps
    assert p.a * p.top * 1.5 ** (-beta) == pytest.approx(p.top, rel=1e-12)
    assert p.a * p.top * (0.7 * math.sqrt(1e4)) ** (-beta) == pytest.approx(1.0, rel=1e-12)


def test_eps_range_at_threshold():
    # eps = 1/4 exactly at the admissibility threshold, decreasing in k
    D, c0 = 1.0, 1.0
    k0 = (3 * D / (1.4 * c0)) ** 6
    assert closed_form_eps(k0, D, c0) == pytest.approx(0.25)
    assert 0 < closed_form_eps(1e8, D, c0) < closed_form_eps(1e4, D, c0) <= 0.25


@pytest.mark.parametrize("k,D", [(1e3, 1), (1e4, 1), (1e4, 2), (1e5, 1), (1e5, 2)])
def test_slope_inequality(k, D):
    p = build_cutoff(k, D, 1.0)
    rep = p.slope_check(samples=10_000)
    assert rep["ok"], rep


def test_c2_at_seams():
    p = build_cutoff(1e4, 1.0, 1.0)
    for t0 in (p.t_flat, p.t_pow_lo, p.t_pow_hi, p.t_one):
        h = 1e-9 * t0
        for f in (p.value, p.d1, p.d2):
            scale = max(1.0, abs(f(t0)))
            assert abs(f(t0 + h) - f(t0 - h)) / scale < 1e-6


def test_derivatives_vs_finite_differences():
    p = build_cutoff(1e4, 1.0, 1.0)
    rng = np.random.default_rng(5)
    regions = [
        (0.05, p.t_flat),
        (p.t_flat, p.t_pow_lo),
        (p.t_pow_lo, p.t_pow_hi),
        (p.t_pow_hi, p.t_one),
    ]
    for _ in range(200):
        lo, hi = regions[rng.integers(0, 4)]
        pad = 0.02 * (hi - lo)
        t = rng.uniform(lo + pad, hi - pad)
        h = min(1e-6 * max(t, 1.0), 0.4 * pad)
        for g, dg in ((p.value, p.d1), (p.d1, p.d2), (p.d2, p.d3)):
            num = (g(t + h) - g(t - h)) / (2 * h)
            an = dg(t)
            if abs(an) > 1e-6:
                assert abs(num - an) / abs(an) < 1e-4


def test_monotone_decreasing():
    p = build_cutoff(1e5, 2.0, 1.0)
    t = np.geomspace(p.t_flat * (1 + 1e-9), p.t_one * (1 - 1e-9), 5000)
    v = p.value(t)
    assert np.all(np.diff(v) <= 1e-12)
    assert v.max() <= p.top + 1e-9
    assert v.min() >= 1.0 - 1e-9


def test_derivative_bound_report_keys():
    p = build_cutoff(1e4, 1.0, 1.0)
    rep = p.derivative_bound_report()
    assert set(rep) == {
        "eps2",
        "C_second",
        "C_third",
        "eps2_prime",
        "C_second_prime",
        "C_third_prime",
    }
    assert all(v > 0 for v in rep.values())


def test_band_ordering_guard():
    # small k with large D / c0 would invert the band ordering
    with pytest.raises(ThresholdError):
        CutoffProfile(1.0, 0.3, 1.0)
