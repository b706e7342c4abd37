import math

import numpy as np
import pytest
from hypothesis import assume, given
from hypothesis import strategies as st

from mollify import gen_constant, gen_delta, gen_heaviside, gen_power_cusp, gen_weierstrass
from mollify.config import geometric_ladder
from mollify.errors import AllSaturated, BelowNoiseFloor, DegenerateFit, ValidationError
from mollify.estimator import (
    INCONCLUSIVE,
    NOT_SMOOTH,
    PROP_BOUNDED,
    SMOOTH,
    THM_I,
    THM_II,
    GrowthFit,
    RateFit,
    classify_sequence,
    estimate_from_sweep,
    estimate_rate,
    estimate_regularity,
    fit_growth,
    fit_growth_per_order,
    fit_loglog,
    k_consistency,
    ols,
    resolved_scales,
    sequence_fits,
    smoothness_test,
    standard_test_functions,
    tail_count,
)
from mollify.kernels import make_moment_vanishing_mollifier
from mollify.transform import ScaleSweep, log_schedule, scale_sweep

LOG_INDICES = geometric_ladder(2.0**24, 2.0**64, 1)


# --- OLS and fit plumbing


@given(
    slope=st.floats(-5, 5),
    icept=st.floats(-10, 10),
    noise=st.lists(st.floats(-0.1, 0.1), min_size=5, max_size=20),
)
def test_ols_matches_polyfit(slope, icept, noise):
    t = np.arange(len(noise), dtype=float)
    y = icept + slope * t + np.array(noise)
    b, a, se, r2 = ols(t, y)
    ref = np.polyfit(t, y, 1)
    assert b == pytest.approx(ref[0], abs=1e-9)
    assert a == pytest.approx(ref[1], abs=1e-8)
    assert se >= 0
    assume(np.ptp(y) > 1e-6)
    assert r2 <= 1 + 1e-12


def test_ols_exact_line():
    t = np.linspace(0, 3, 7)
    b, a, se, r2 = ols(t, 2.5 * t - 1)
    assert (b, a) == pytest.approx((2.5, -1.0))
    assert se == pytest.approx(0.0, abs=1e-14) and r2 == pytest.approx(1.0)


def test_ols_degenerate():
    with pytest.raises(DegenerateFit):
        ols(np.ones(5), np.arange(5.0))


def test_tail_count():
    assert tail_count(17, 0.5) == 9
    assert tail_count(6, 0.5) == 4
    assert tail_count(3, 0.5) == 3
    with pytest.raises(ValidationError):
        tail_count(10, 0.0)


def test_fit_loglog_floor():
    t = np.arange(1.0, 11.0)
    y = t**2
    y[-3:] = 0.0
    with pytest.raises(DegenerateFit):
        fit_loglog(t, y, 0.5)
    fit = fit_loglog(t, t**-1.0, 1.0)
    assert fit.raw_slope == pytest.approx(-1.0) and fit.slope == 0.0


# --- fit_growth


def test_fit_growth_delta(delta, gauss, window, ladder):
    fit = fit_growth(scale_sweep(delta, gauss, 0, ladder, window))
    assert fit.slope == pytest.approx(1.0, abs=0.01)
    assert fit.points_used >= 4 and fit.stderr >= 0


def test_fit_growth_constant_clamped(gauss, window, ladder):
    fit = fit_growth(scale_sweep(gen_constant(), gauss, 1, ladder, window))
    assert fit.slope == pytest.approx(0.0, abs=1e-12)
    assert fit.slope >= 0 and abs(fit.raw_slope) < 1e-12


def test_fit_growth_heaviside(heaviside, gauss, window, ladder):
    fit = fit_growth(scale_sweep(heaviside, gauss, 1, ladder, window))
    assert fit.slope == pytest.approx(1.0, abs=0.02)


def test_fit_growth_reproducible(weierstrass, gauss, window, ladder):
    sw = scale_sweep(weierstrass, gauss, 1, ladder, window)
    assert fit_growth(sw) == fit_growth(sw)


def test_fit_growth_needs_scales(delta, gauss, window):
    sw = scale_sweep(delta, gauss, 0, [8, 16, 32, 64, 128], window)
    with pytest.raises(ValidationError):
        fit_growth(sw)


def test_noise_mask_drops_roundoff_scales(bump, gauss, window, ladder):
    sw = scale_sweep(bump, gauss, 6, ladder, window)
    ok = resolved_scales(sw, [6])
    assert ok[0] and not ok.all()
    # without the mask, roundoff growth at order 6 looks like a positive slope
    bare = ScaleSweep(sw.k, sw.scales, sw.sup_norms, sw.window, sw.kernel, sw.label)
    assert fit_growth(bare, orders=[6]).slope > 0.1
    assert fit_growth(sw, orders=[6]).slope < 0.1


# --- estimate_regularity


def test_estimate_cusp(cusp05, gauss):
    est = estimate_regularity(cusp05, gauss, 1)
    assert est.alpha == pytest.approx(0.5, abs=0.05)
    assert est.alpha == est.k_used - est.growth.slope
    assert not est.saturated


@pytest.mark.parametrize("k", [0, 1])
def test_estimate_delta(delta, gauss, k):
    est = estimate_regularity(delta, gauss, k)
    assert est.alpha == pytest.approx(-1.0, abs=0.05)


def test_estimate_saturated_bump(bump, gauss):
    est = estimate_regularity(bump, gauss, 2)
    assert est.saturated
    assert est.saturated == (est.growth.slope < 0.05)


def test_estimate_report(delta, gauss):
    est = estimate_regularity(delta, gauss, 0)
    rep = est.report(config={"a": 1}, kernel={"family": "gauss_poly"})
    assert rep["alpha"] == est.alpha and rep["method"] == "mollifier"
    assert rep["config"] == {"a": 1} and rep["kernel"]["family"] == "gauss_poly"
    rows = est.plot_rows()
    assert len(rows) == len(est.scales)
    assert rows[0][0] == pytest.approx(math.log(8))


def test_estimate_deterministic(weierstrass, gauss):
    a = estimate_regularity(weierstrass, gauss, 1)
    b = estimate_regularity(weierstrass, gauss, 1)
    assert a.alpha == b.alpha and a.growth == b.growth


# --- k_consistency


def test_k_consistency_weierstrass(weierstrass, gauss):
    rep = k_consistency(weierstrass, gauss, [1, 2])
    assert rep.spread <= 0.1
    assert rep.alpha == pytest.approx(0.5, abs=0.07)


def test_k_consistency_delta(delta, gauss):
    rep = k_consistency(delta, gauss, [0, 1, 2])
    assert rep.spread <= 0.1
    assert rep.alpha == pytest.approx(-1.0, abs=0.05)
    assert len(rep.report()["estimates"]) == 3


def test_k_consistency_bump_saturates(bump, gauss):
    with pytest.raises(AllSaturated):
        k_consistency(bump, gauss, [1, 2, 3])


def test_k_consistency_validation(delta, gauss):
    with pytest.raises(ValidationError):
        k_consistency(delta, gauss, [1])
    with pytest.raises(ValidationError):
        k_consistency(delta, gauss, [-1, 0])


INVARIANCE_CASES = [
    ("delta", lambda: gen_delta(), -1.0),
    ("delta'", lambda: gen_delta(1), -2.0),
    ("heaviside", gen_heaviside, 0.0),
    ("cusp(0.3)", lambda: gen_power_cusp(0.3), 0.3),
    ("cusp(0.5)", lambda: gen_power_cusp(0.5), 0.5),
    ("cusp(0.7)", lambda: gen_power_cusp(0.7), 0.7),
    ("cusp(1.5)", lambda: gen_power_cusp(1.5), 1.5),
    ("weierstrass", gen_weierstrass, 0.5),
]


@pytest.mark.parametrize("name,make,alpha", INVARIANCE_CASES, ids=[c[0] for c in INVARIANCE_CASES])
def test_k_invariance(gauss, name, make, alpha):
    # k in {ceil(alpha) + 1, ceil(alpha) + 2}, restricted to k >= 0
    k0 = max(0, math.ceil(alpha) + 1)
    rep = k_consistency(make(), gauss, [k0, k0 + 1])
    assert not any(e.saturated for e in rep.estimates)
    assert rep.spread <= 0.1


# --- pipeline invariants


@pytest.mark.parametrize("name,make,alpha", INVARIANCE_CASES[:5], ids=[c[0] for c in INVARIANCE_CASES[:5]])
def test_scaling_equivariance(gauss, window, ladder, name, make, alpha):
    T = make()
    k = max(0, math.ceil(alpha))
    a = fit_growth_per_order(scale_sweep(T, gauss, k, ladder, window))
    b = fit_growth_per_order(scale_sweep(T.scaled(1000.0), gauss, k, ladder, window))
    for fa, fb in zip(a, b):
        assert abs(fa.raw_slope - fb.raw_slope) <= 1e-10
        assert fb.intercept - fa.intercept == pytest.approx(math.log(1000.0), abs=1e-9)


@pytest.mark.parametrize("make,k", [(lambda: gen_delta(), 0), (gen_heaviside, 1)], ids=["delta", "heaviside"])
def test_derivative_shift(gauss, make, k):
    T = make()
    a = estimate_regularity(T, gauss, k).alpha
    b = estimate_regularity(T.derivative(), gauss, k).alpha
    assert b == pytest.approx(a - 1, abs=0.1)


# --- smoothness


def test_smoothness_bump(bump, gauss):
    v = smoothness_test(bump, gauss, 6)
    assert v.verdict == SMOOTH
    assert max(v.order_slopes) <= 0.1
    assert len(v.order_slopes) == 7


def test_smoothness_cusp(cusp05, gauss):
    v = smoothness_test(cusp05, gauss, 6)
    assert v.verdict == NOT_SMOOTH
    assert v.alpha_hat == pytest.approx(0.5, abs=0.05)
    for m in range(1, 7):
        assert v.order_slopes[m] == pytest.approx(m - 0.5, abs=0.15)


def test_smoothness_delta(delta, gauss):
    v = smoothness_test(delta, gauss, 6)
    assert v.verdict == NOT_SMOOTH
    for m in range(7):
        assert v.order_slopes[m] == pytest.approx(m + 1, abs=0.15)
    assert v.alpha_hat == pytest.approx(-1.0, abs=0.05)
    assert v.report()["verdict"] == NOT_SMOOTH


def test_smoothness_validation(bump, gauss):
    with pytest.raises(ValidationError):
        smoothness_test(bump, gauss, 3)


def test_smoothness_inconclusive_labels():
    assert INCONCLUSIVE not in (SMOOTH, NOT_SMOOTH)


# --- rates


def test_rate_delta_gauss(delta, gauss):
    fit = estimate_rate(delta, gauss)
    assert fit.b == pytest.approx(2.0, abs=0.1)
    assert fit.b == min(fit.slopes)
    assert all(f.r_squared > 0.99 for f in fit.fits)
    assert len(fit.report()["r2"]) == 2


@pytest.mark.parametrize("k,b", [(1, 2.0), (3, 4.0), (5, 6.0)])
def test_rate_moment_law(delta, k, b):
    fit = estimate_rate(delta, make_moment_vanishing_mollifier(k))
    assert fit.b == pytest.approx(b, abs=0.2)


def test_rate_log_sequence(delta, gauss):
    fit = estimate_rate(delta, gauss, LOG_INDICES, schedule=log_schedule)
    # error ~ (log n)**-2: local slope 2 / log n, about 0.05 over these indices
    assert 0 < fit.b < 0.1


def test_rate_constant_below_floor(gauss):
    from mollify.signals import GridSignal, bump

    c = gen_constant()
    # supports inside the flat part, where c * phi_n = c up to roundoff
    tests = [(f"w={w}", GridSignal(bump(c.x / w), c.x_min, c.x_max)) for w in (0.5, 1.0)]
    with pytest.raises(BelowNoiseFloor):
        estimate_rate(c, gauss, test_functions=tests)


def test_rate_needs_two_tests(delta, gauss):
    with pytest.raises(ValidationError):
        estimate_rate(delta, gauss, test_functions=standard_test_functions(delta)[:1])


# --- classification


def _fit(slope, se=0.0):
    return GrowthFit(slope, 0.0, se, 1.0, 8, 0.5, slope)


def _rate(b, se=0.01):
    return RateFit(b, [b, b + 1], ["r1", "r2"], [_fit(-b, se), _fit(-b - 1, se)])


def test_classify_synthetic_rules():
    rep = classify_sequence([_fit(0.0), _fit(0.0)], _rate(20.0), 1, 0.0)
    assert rep.implications == [PROP_BOUNDED, THM_I, THM_II]
    assert not rep.rule_hits["d"]
    rep = classify_sequence([_fit(0.3)], _rate(2.0), 0, 0.5)
    assert rep.rule_hits == {"a": False, "b": False, "c": False, "d": True}
    rep = classify_sequence([_fit(0.02)], _rate(0.05), 0, 0.0)
    assert not rep.rate_positive and rep.rule_hits["d"]
    assert "growth hypothesis met, rate hypothesis failed" in rep.notes


def test_classify_wrong_fit_count():
    with pytest.raises(ValidationError):
        classify_sequence([_fit(0.0)], _rate(2.0), 2, 0.0)


def test_classify_bump(bump, gauss, window, ladder):
    _, fits = sequence_fits(bump, gauss, 2, ladder, window)
    rep = classify_sequence(fits, estimate_rate(bump, gauss), 2, 0.0)
    assert rep.rule_hits["b"]
    assert THM_I in rep.implications


def test_classify_log_sequence(delta, gauss, window):
    sweep, fits = sequence_fits(delta, gauss, 0, LOG_INDICES, window, log_schedule)
    assert np.allclose(sweep.kernel_scales, np.log(LOG_INDICES))
    rate = estimate_rate(delta, gauss, LOG_INDICES, schedule=log_schedule)
    rep = classify_sequence(fits, rate, 0, 0.0)
    assert rep.growth_subpower and not rep.rate_positive
    assert rep.implications == []
    assert "growth hypothesis met, rate hypothesis failed" in rep.notes


def test_classify_delta_regularization(delta, gauss, window, ladder):
    _, fits = sequence_fits(delta, gauss, 0, ladder, window)
    rep = classify_sequence(fits, estimate_rate(delta, gauss), 0, 1.0)
    assert rep.rule_hits["d"] and rep.implications == []
    assert "growth class alone proves nothing without a rapidly decreasing rate" in rep.notes


def test_estimate_from_sweep_threshold(delta, gauss, window, ladder):
    sw = scale_sweep(delta, gauss, 0, ladder, window)
    assert not estimate_from_sweep(sw).saturated
    assert estimate_from_sweep(sw, saturation_threshold=2.0).saturated
