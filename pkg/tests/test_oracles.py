import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from mollify import Window, gen_constant, gen_delta, gen_heaviside, gen_power_cusp, gen_weierstrass
from mollify.errors import DegenerateFit, EmptyWindow, ResolutionError, ValidationError
from mollify.estimator import LITTLEWOOD_PALEY, estimate_regularity
from mollify.kernels import make_lp_family
from mollify.oracles import LPDecomposition, holder_seminorm, lp_decompose, lp_estimate_alpha, lp_norm
from mollify.signals import DistributionRep, GridSignal


@pytest.fixture(scope="module")
def delta_j8(delta, lp_family, window):
    return lp_decompose(delta, lp_family, 8, window)


# --- lp_decompose


def test_lp_delta_levels(delta_j8, lp_family):
    sup = lp_family.theta.sup_abs(0)
    j = np.arange(1, 9)
    assert np.allclose(delta_j8.sup_norms[1:], 2.0**j * sup, rtol=1e-6)
    assert delta_j8.sup_norms[0] == pytest.approx(1 / np.sqrt(2 * np.pi), rel=1e-12)


def test_lp_constant_killed(lp_family):
    # theta has zero mass; a wide box keeps the coarse levels off the taper
    c = gen_constant(n=2**20, box=(-16.0, 16.0))
    d = lp_decompose(c, lp_family, 8, Window(-0.5, 0.5))
    assert np.all(d.sup_norms[1:] < 1e-12)
    assert d.sup_norms[0] == pytest.approx(1.0, abs=1e-12)


def test_lp_bump_decay(bump, lp_family, window):
    s = lp_decompose(bump, lp_family, 8, window).sup_norms
    assert np.all(np.diff(np.log2(s[3:])) < -7)
    weighted = s * 2.0 ** (7 * np.arange(9))
    assert np.all(np.diff(weighted[4:]) < 0)


def test_lp_decompose_validation(delta, lp_family, window):
    with pytest.raises(ValidationError):
        lp_decompose(delta, lp_family, 0, window)
    with pytest.raises(ResolutionError):
        lp_decompose(delta, lp_family, 20, window)


def test_lp_wrap_check(lp_family):
    # support filling the box reaches its own periodic images at level 1
    wide = DistributionRep(GridSignal(np.ones(2**12), -4.0, 4.0))
    with pytest.raises(ValidationError):
        lp_decompose(wide, lp_family, 6, Window(-0.5, 0.5))


def test_lp_decomposition_type(window):
    with pytest.raises(ValidationError):
        LPDecomposition(2, np.array([1.0, 2.0]), {}, window)
    with pytest.raises(ValidationError):
        LPDecomposition(1, np.array([1.0, -2.0]), {}, window)


def test_lp_csv(delta_j8):
    lines = delta_j8.to_csv().splitlines()
    assert lines[0] == "j,sup_norm"
    assert len(lines) == 10
    assert float(lines[3].split(",")[1]) == delta_j8.sup_norms[2]


# --- lp_norm


def test_lp_norm_delta(delta_j8, lp_family):
    sup = lp_family.theta.sup_abs(0)
    assert lp_norm(delta_j8, -1.0) == pytest.approx(sup, rel=1e-6)
    assert lp_norm(delta_j8, -0.5) == pytest.approx(2.0**4 * sup, rel=1e-6)


def test_lp_norm_diverges_with_J(delta, lp_family, window):
    a = lp_norm(lp_decompose(delta, lp_family, 6, window), -0.5)
    b = lp_norm(lp_decompose(delta, lp_family, 8, window), -0.5)
    assert b / a == pytest.approx(2.0, rel=1e-6)


def test_lp_norm_zero_distribution(lp_family, window):
    zero = DistributionRep(GridSignal(np.zeros(2**16), -4.0, 4.0))
    d = lp_decompose(zero, lp_family, 8, window)
    for alpha in (-2.0, 0.0, 3.5):
        assert lp_norm(d, alpha) == 0.0


def test_lp_norm_alpha_below_M(delta_j8):
    with pytest.raises(ValidationError):
        lp_norm(delta_j8, 8.0)


@given(a=st.floats(-3, 7.5), b=st.floats(-3, 7.5))
def test_lp_norm_monotone(delta_j8, a, b):
    lo, hi = min(a, b), max(a, b)
    assert lp_norm(delta_j8, lo) <= lp_norm(delta_j8, hi)


@given(s=st.lists(st.floats(0, 1e6), min_size=6, max_size=6), a=st.floats(-2, 2), da=st.floats(0, 3))
def test_lp_norm_monotone_arbitrary(window, s, a, da):
    d = LPDecomposition(5, np.array(s), {"M": 8}, window)
    assert lp_norm(d, a) <= lp_norm(d, a + da)


# --- lp_estimate_alpha


def test_lp_estimate_delta(delta, lp_family, window):
    est = lp_estimate_alpha(lp_decompose(delta, lp_family, window=window))
    assert est.alpha == pytest.approx(-1.0, abs=0.05)
    assert est.method == LITTLEWOOD_PALEY
    assert not est.saturated


def test_lp_estimate_weierstrass(weierstrass, lp_family, window):
    est = lp_estimate_alpha(lp_decompose(weierstrass, lp_family, window=window))
    assert est.alpha == pytest.approx(0.5, abs=0.07)


def test_lp_estimate_heaviside(heaviside, lp_family, window):
    est = lp_estimate_alpha(lp_decompose(heaviside, lp_family, window=window))
    assert est.alpha == pytest.approx(0.0, abs=0.05)


def test_lp_estimate_smooth_degenerate(bump, lp_family, window):
    # the bump's levels fall to the roundoff floor within a few octaves
    with pytest.raises(DegenerateFit):
        lp_estimate_alpha(lp_decompose(bump, lp_family, window=window))


CORPUS = [
    ("cusp(0.3)", lambda: gen_power_cusp(0.3), 0.3),
    ("cusp(0.5)", lambda: gen_power_cusp(0.5), 0.5),
    ("cusp(0.7)", lambda: gen_power_cusp(0.7), 0.7),
    ("cusp(1.5)", lambda: gen_power_cusp(1.5), 1.5),
    ("weierstrass", gen_weierstrass, 0.5),
    ("heaviside", gen_heaviside, 0.0),
    ("delta", lambda: gen_delta(), -1.0),
    ("delta'", lambda: gen_delta(1), -2.0),
]


@pytest.mark.parametrize("name,make,alpha", CORPUS, ids=[c[0] for c in CORPUS])
def test_cross_method_agreement(gauss, lp_family, window, name, make, alpha):
    T = make()
    k = max(0, int(np.floor(alpha)) + 1)
    a_moll = estimate_regularity(T, gauss, k).alpha
    a_lp = lp_estimate_alpha(lp_decompose(T, lp_family, window=window)).alpha
    assert abs(a_moll - a_lp) <= 0.1


@pytest.mark.parametrize("name,make,alpha", CORPUS, ids=[c[0] for c in CORPUS])
def test_level0_independence(lp_family, window, name, make, alpha):
    T = make()
    wide = make_lp_family(theta1_width=2.0)
    a = lp_estimate_alpha(lp_decompose(T, lp_family, window=window)).alpha
    b = lp_estimate_alpha(lp_decompose(T, wide, window=window)).alpha
    assert abs(a - b) < 0.02


# --- holder_seminorm


def test_holder_constant(window):
    c = gen_constant()
    assert holder_seminorm(c.grid, 0.5, window) == pytest.approx(0.0, abs=1e-12)


def test_holder_cusp_half(cusp05, window):
    assert holder_seminorm(cusp05.grid, 0.5, window) == pytest.approx(1.0, rel=0.05)


def test_holder_cusp_divergence(window):
    coarse = gen_power_cusp(0.5, n=2**16)
    fine = gen_power_cusp(0.5, n=2**18)
    ratio = holder_seminorm(fine.grid, 0.75, window) / holder_seminorm(coarse.grid, 0.75, window)
    # two halvings of h: (h'/h)**(-1/4) = 4**0.25
    assert ratio == pytest.approx(4**0.25, rel=0.02)
    stable = holder_seminorm(fine.grid, 0.5, window) / holder_seminorm(coarse.grid, 0.5, window)
    assert stable == pytest.approx(1.0, abs=0.05)


@pytest.mark.parametrize("alpha", [0.3, 0.5, 0.7])
def test_holder_stable_iff_at_or_below_exponent(window, alpha):
    T = gen_power_cusp(alpha)
    F = T.regrid(2 * T.n)
    at = holder_seminorm(F.grid, alpha, window) / holder_seminorm(T.grid, alpha, window)
    above = holder_seminorm(F.grid, alpha + 0.25, window) / holder_seminorm(T.grid, alpha + 0.25, window)
    assert abs(at - 1) <= 0.05
    assert above >= 1.1


def test_holder_validation(cusp05, window):
    with pytest.raises(ValidationError):
        holder_seminorm(cusp05.grid, 1.0, window)
    with pytest.raises(EmptyWindow):
        holder_seminorm(cusp05.grid, 0.5, Window(0.1, 0.1 + 1e-9))
