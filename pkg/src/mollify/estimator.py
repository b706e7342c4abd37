"""Growth fits, regularity exponents, smoothness verdicts and convergence rates.

A regularization sequence ``T * phi_n`` of class ``(k, s)`` has sup-norms of
all derivatives up to order ``k`` growing like ``n**s``; its regularity is
then ``alpha = k - s``. The slope ``s`` is estimated by ordinary least squares
on the log-log tail of a scale sweep.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Sequence

import numpy as np

from mollify.config import DEFAULTS
from mollify.errors import AllSaturated, BelowNoiseFloor, DegenerateFit, ValidationError
from mollify.kernels import HermiteKernel
from mollify.signals import DistributionRep, GridSignal, Window
from mollify.transform import ScaleSweep, mollify, pair, pair_grid, scale_sweep

ABS_FLOOR = 1e-300
NOISE_FLOOR = 1e-14
MIN_FIT_POINTS = 4
# sweep entries whose roundoff bound exceeds this fraction of the value are not fitted
NOISE_FRACTION = 0.01

MOLLIFIER = "mollifier"
LITTLEWOOD_PALEY = "littlewood_paley"
HOLDER_DIRECT = "holder_direct"


@dataclass(frozen=True)
class GrowthFit:
    """OLS fit ``log y = intercept + raw_slope * log t`` on a tail of points.

    ``slope`` is ``raw_slope`` clamped below at 0: a decaying sequence is of
    class ``(k, s)`` for every ``s > 0``.
    """

    slope: float
    intercept: float
    stderr: float
    r_squared: float
    points_used: int
    tail_fraction: float
    raw_slope: float

    def as_dict(self) -> dict:
        return {
            "slope": self.slope,
            "raw_slope": self.raw_slope,
            "intercept": self.intercept,
            "stderr": self.stderr,
            "r2": self.r_squared,
            "points_used": self.points_used,
            "tail_fraction": self.tail_fraction,
        }


def ols(t: np.ndarray, y: np.ndarray) -> tuple[float, float, float, float]:
    """Slope, intercept, slope stderr and R^2 of ``y ~ a + b t``."""
    t = np.asarray(t, dtype=float)
    y = np.asarray(y, dtype=float)
    p = t.size
    tm, ym = t.mean(), y.mean()
    dt, dy = t - tm, y - ym
    sxx = float(np.dot(dt, dt))
    if sxx == 0.0:
        raise DegenerateFit("abscissae are all equal")
    slope = float(np.dot(dt, dy)) / sxx
    intercept = ym - slope * tm
    resid = y - (intercept + slope * t)
    sse = float(np.dot(resid, resid))
    sst = float(np.dot(dy, dy))
    stderr = math.sqrt(sse / (p - 2) / sxx) if p > 2 else 0.0
    r2 = 1.0 - sse / sst if sst > 0 else 1.0
    return slope, float(intercept), stderr, r2


def tail_count(total: int, tail_fraction: float, minimum: int = MIN_FIT_POINTS) -> int:
    if not 0 < tail_fraction <= 1:
        raise ValidationError(f"tail_fraction must be in (0, 1], got {tail_fraction}")
    return min(total, max(minimum, int(math.ceil(tail_fraction * total))))


def fit_loglog(
    t: np.ndarray,
    y: np.ndarray,
    tail_fraction: float,
    floor: float = ABS_FLOOR,
    minimum: int = MIN_FIT_POINTS,
    xform=np.log,
    yform=np.log,
) -> GrowthFit:
    """Fit on the top ``tail_fraction`` of points, dropping values below ``floor``."""
    t = np.asarray(t, dtype=float)
    y = np.asarray(y, dtype=float)
    p = tail_count(t.size, tail_fraction, minimum)
    tt, yy = t[-p:], y[-p:]
    keep = yy > floor
    if keep.sum() < minimum:
        raise DegenerateFit(f"only {int(keep.sum())} of {p} tail values above floor {floor:g}")
    slope, intercept, stderr, r2 = ols(xform(tt[keep]), yform(yy[keep]))
    return GrowthFit(max(slope, 0.0), intercept, stderr, r2, int(keep.sum()), tail_fraction, slope)


def resolved_scales(sweep: ScaleSweep, orders=None) -> np.ndarray:
    """Mask of scales where ``max_m sup|d^m f_n|`` over ``orders`` clears the
    largest roundoff bound among those orders."""
    rows = list(range(sweep.k + 1) if orders is None else orders)
    if sweep.noise is None:
        return np.ones(sweep.scales.size, dtype=bool)
    env = sweep.sup_norms[rows].max(axis=0)
    return sweep.noise[rows].max(axis=0) <= NOISE_FRACTION * env


def fit_growth(sweep: ScaleSweep, tail_fraction: float = DEFAULTS.tail_fraction, orders=None) -> GrowthFit:
    """Growth slope of ``max_{m in orders} sup|d^m f_n|`` against ``n``.

    Scales lost to roundoff (see ``resolved_scales``) are removed before the
    tail is taken.
    """
    if sweep.scales.size < 6:
        raise ValidationError("fit_growth needs a sweep with at least 6 scales")
    rows = list(range(sweep.k + 1) if orders is None else orders)
    ok = resolved_scales(sweep, rows)
    if ok.sum() < MIN_FIT_POINTS:
        raise DegenerateFit(f"only {int(ok.sum())} scales above the roundoff bound")
    env = sweep.sup_norms[rows].max(axis=0)
    return fit_loglog(sweep.scales[ok], env[ok], tail_fraction)


def fit_growth_per_order(sweep: ScaleSweep, tail_fraction: float = DEFAULTS.tail_fraction) -> list[GrowthFit]:
    return [fit_growth(sweep, tail_fraction, orders=[m]) for m in range(sweep.k + 1)]


@dataclass(frozen=True)
class RegularityEstimate:
    alpha: float
    k_used: int
    growth: GrowthFit
    saturated: bool
    method: str = MOLLIFIER
    scales: tuple[float, ...] = ()
    label: str = ""
    sweep: ScaleSweep | None = field(default=None, repr=False, compare=False)

    def report(self, config: dict | None = None, kernel: dict | None = None) -> dict:
        out = {
            "fixture": self.label,
            "method": self.method,
            "k": self.k_used,
            "alpha": self.alpha,
            "slope": self.growth.slope,
            "stderr": self.growth.stderr,
            "r2": self.growth.r_squared,
            "saturated": self.saturated,
            "scales": list(self.scales),
            "fit": self.growth.as_dict(),
        }
        if kernel is not None:
            out["kernel"] = kernel
        if config is not None:
            out["config"] = config
        return out

    def plot_rows(self) -> list[tuple[float, float]]:
        """``(log n, log max_m sup)`` pairs of the underlying sweep."""
        if self.sweep is None:
            return []
        env = self.sweep.envelope()
        return [(math.log(n), math.log(v) if v > 0 else -math.inf) for n, v in zip(self.sweep.scales, env)]


def estimate_from_sweep(
    sweep: ScaleSweep,
    tail_fraction: float = DEFAULTS.tail_fraction,
    saturation_threshold: float = DEFAULTS.saturation_threshold,
) -> RegularityEstimate:
    growth = fit_growth(sweep, tail_fraction)
    return RegularityEstimate(
        alpha=sweep.k - growth.slope,
        k_used=sweep.k,
        growth=growth,
        saturated=growth.slope < saturation_threshold,
        method=MOLLIFIER,
        scales=tuple(float(n) for n in sweep.scales),
        label=sweep.label,
        sweep=sweep,
    )


def estimate_regularity(
    T: DistributionRep,
    kernel: HermiteKernel,
    k: int,
    scales: Sequence[float] | None = None,
    window: Window | None = None,
    tail_fraction: float = DEFAULTS.tail_fraction,
    saturation_threshold: float = DEFAULTS.saturation_threshold,
) -> RegularityEstimate:
    """``alpha = k - s`` from the sweep of orders ``0..k``.

    A saturated estimate (``s < saturation_threshold``) only shows
    ``alpha >= k - saturation_threshold``; raise ``k`` to resolve it.
    """
    scales = DEFAULTS.ladder() if scales is None else scales
    window = Window(*DEFAULTS.window) if window is None else window
    sweep = scale_sweep(T, kernel, k, scales, window)
    return estimate_from_sweep(sweep, tail_fraction, saturation_threshold)


@dataclass(frozen=True)
class KConsistency:
    estimates: list[RegularityEstimate]
    spread: float
    alpha: float

    def report(self) -> dict:
        return {
            "estimates": [e.report() for e in self.estimates],
            "spread": self.spread,
            "alpha": self.alpha,
        }


def k_consistency(
    T: DistributionRep,
    kernel: HermiteKernel,
    k_list: Sequence[int],
    scales: Sequence[float] | None = None,
    window: Window | None = None,
    tail_fraction: float = DEFAULTS.tail_fraction,
) -> KConsistency:
    """Estimates for each ``k`` and the max pairwise spread among non-saturated ones."""
    k_list = list(k_list)
    if len(k_list) < 2:
        raise ValidationError("k_consistency needs at least two values of k")
    if min(k_list) < 0:
        raise ValidationError("every k must be >= 0")
    scales = DEFAULTS.ladder() if scales is None else scales
    window = Window(*DEFAULTS.window) if window is None else window
    # one sweep at max k serves every k: lower-order rows are identical
    top = scale_sweep(T, kernel, max(k_list), scales, window)
    ests = []
    for k in k_list:
        sub = top.orders(k)
        ests.append(estimate_from_sweep(sub, tail_fraction))
    live = [e.alpha for e in ests if not e.saturated]
    if not live:
        raise AllSaturated(f"every k in {k_list} saturated; raise k")
    return KConsistency(ests, max(live) - min(live), float(np.mean(live)))


SMOOTH = "smooth"
NOT_SMOOTH = "not_smooth"
INCONCLUSIVE = "inconclusive"


@dataclass(frozen=True)
class SmoothnessVerdict:
    verdict: str
    order_slopes: list[float]
    alpha_hat: float | None = None
    trend: float | None = None
    estimate: RegularityEstimate | None = field(default=None, repr=False)

    def report(self) -> dict:
        return {
            "verdict": self.verdict,
            "order_slopes": self.order_slopes,
            "alpha_hat": self.alpha_hat,
            "trend": self.trend,
        }


def smoothness_test(
    T: DistributionRep,
    kernel: HermiteKernel,
    K_max: int = 6,
    scales: Sequence[float] | None = None,
    window: Window | None = None,
    s_cap: float = DEFAULTS.s_cap,
    tail_fraction: float = DEFAULTS.tail_fraction,
    trend_range: tuple[float, float] = (0.8, 1.2),
) -> SmoothnessVerdict:
    """Uniform-growth test for smoothness over orders ``0..K_max``.

    Smooth when every per-order slope stays below ``s_cap``. Not smooth when
    the growing orders follow ``s_m ~ m - alpha`` (unit trend in ``m``);
    ``alpha`` is then estimated with ``k`` the first growing order.
    """
    if K_max < 4:
        raise ValidationError("K_max must be >= 4")
    scales = DEFAULTS.ladder() if scales is None else scales
    window = Window(*DEFAULTS.window) if window is None else window
    sweep = scale_sweep(T, kernel, K_max, scales, window)
    slopes = [f.slope for f in fit_growth_per_order(sweep, tail_fraction)]
    if max(slopes) <= s_cap:
        return SmoothnessVerdict(SMOOTH, slopes)
    growing = [m for m, s in enumerate(slopes) if s > s_cap]
    if len(growing) >= 2 and growing == list(range(growing[0], K_max + 1)):
        trend = ols(np.array(growing, float), np.array([slopes[m] for m in growing]))[0]
        if trend_range[0] <= trend <= trend_range[1]:
            k0 = growing[0]
            sub = sweep.orders(k0)
            est = estimate_from_sweep(sub, tail_fraction)
            return SmoothnessVerdict(NOT_SMOOTH, slopes, est.alpha, trend, est)
        return SmoothnessVerdict(INCONCLUSIVE, slopes, None, trend)
    return SmoothnessVerdict(INCONCLUSIVE, slopes)


@dataclass(frozen=True)
class RateFit:
    """Decay exponent ``b`` with ``|<T - f_n, rho>| = O(n**-b)`` for every probed ``rho``."""

    b: float
    slopes: list[float]
    labels: list[str]
    fits: list[GrowthFit]
    errors: np.ndarray = field(repr=False, default=None)
    scales: tuple[float, ...] = ()

    @property
    def stderr(self) -> float:
        i = int(np.argmin(self.slopes))
        return self.fits[i].stderr

    def report(self) -> dict:
        return {
            "b": self.b,
            "slopes": self.slopes,
            "labels": self.labels,
            "r2": [f.r_squared for f in self.fits],
            "stderr": [f.stderr for f in self.fits],
            "scales": list(self.scales),
        }


def standard_test_functions(T: DistributionRep) -> list[tuple[str, GridSignal]]:
    """Two wide bumps at distinct centers and widths.

    Wide supports keep high derivatives small, so the leading moment term
    dominates the pairing error before it reaches the roundoff floor.
    """
    from mollify.signals import bump

    x = T.x
    out = []
    for center, width in ((0.0, 3.0), (0.25, 2.5)):
        out.append((f"bump(c={center:g},w={width:g})", GridSignal(bump((x - center) / width), T.x_min, T.x_max)))
    return out


def approximation_errors(
    T: DistributionRep,
    kernel: HermiteKernel,
    scales: Sequence[float],
    test_functions: Sequence[tuple[str, GridSignal]],
    schedule: Callable[[float], float] | None = None,
) -> np.ndarray:
    """``E[i, j] = |<T, rho_i> - <T * phi_{sigma(n_j)}, rho_i>|``."""
    exact = np.array([pair(T, rho) for _, rho in test_functions])
    errs = np.empty((len(test_functions), len(scales)))
    for j, n in enumerate(scales):
        f = mollify(T, kernel, n if schedule is None else schedule(n), 0)
        for i, (_, rho) in enumerate(test_functions):
            errs[i, j] = abs(exact[i] - pair_grid(f, rho))
    return errs


def estimate_rate(
    T: DistributionRep,
    kernel: HermiteKernel,
    scales: Sequence[float] | None = None,
    test_functions: Sequence[tuple[str, GridSignal]] | None = None,
    tail_fraction: float = DEFAULTS.tail_fraction,
    floor: float = NOISE_FLOOR,
    schedule: Callable[[float], float] | None = None,
) -> RateFit:
    """Fit ``|<T - f_n, rho>| ~ n**-b_rho`` per test function; ``b = min b_rho``.

    Errors below ``floor`` are indistinguishable from roundoff and skipped;
    the tail is taken among the remaining scales.
    """
    scales = np.asarray(DEFAULTS.ladder() if scales is None else scales, dtype=float)
    tests = standard_test_functions(T) if test_functions is None else list(test_functions)
    if len(tests) < 2:
        raise ValidationError("estimate_rate needs at least two test functions")
    errs = approximation_errors(T, kernel, scales, tests, schedule)
    if np.all(errs < floor):
        raise BelowNoiseFloor("every pairing error is below the noise floor")
    fits, slopes = [], []
    for row in errs:
        keep = row >= floor
        if keep.sum() < 2:
            raise DegenerateFit("fewer than two pairing errors above the noise floor")
        fit = fit_loglog(scales[keep], row[keep], tail_fraction, floor=0.0, minimum=min(MIN_FIT_POINTS, int(keep.sum())))
        fits.append(fit)
        slopes.append(-fit.raw_slope)
    return RateFit(min(slopes), slopes, [lab for lab, _ in tests], fits, errs, tuple(float(n) for n in scales))


# implication labels
PROP_BOUNDED = "bounded growth: the order-k derivatives of T are in L^inf"
THM_I = "sub-power growth with a power rate: T in C_*^(k - eta) for every eta > 0"
THM_II = "class (k, s) growth with a rapidly decreasing rate: T in C_*^(k - eta) for every eta > 0"


@dataclass(frozen=True)
class ClassificationReport:
    implications: list[str]
    rule_hits: dict
    growth_subpower: bool
    rate_positive: bool
    rate_rapid: bool
    notes: list[str]

    def report(self) -> dict:
        return {
            "implications": self.implications,
            "rules": self.rule_hits,
            "growth_subpower": self.growth_subpower,
            "rate_positive": self.rate_positive,
            "rate_rapid": self.rate_rapid,
            "notes": self.notes,
        }


def classify_sequence(
    fits: Sequence[GrowthFit],
    rate: RateFit,
    k: int,
    s: float,
    probes: Sequence[float] = (0.5, 0.25, 0.1),
    bounded_tol: float = 0.01,
    rapid_cap: float = 12.0,
) -> ClassificationReport:
    """Evaluate which sufficient-condition theorems a measured sequence satisfies.

    Rules, each checked on ``slope + 2 stderr`` of the per-order fits:

    (a) all slopes <= ``bounded_tol``: bounded derivatives, order-k derivatives in L^inf;
    (b) all slopes <= every probe ``a`` and a positive power rate: C_*^(k - eta);
    (c) all slopes <= ``s`` and a rate faster than ``n**-rapid_cap``: C_*^(k - eta);
    (d) none of the above: no conclusion.

    "for every a > 0" is only certified down to ``min(probes)``, and a power
    rate counts as positive only when ``b - 2 stderr`` exceeds that same
    resolution.
    """
    fits = list(fits)
    if len(fits) != k + 1:
        raise ValidationError(f"need one growth fit per order 0..{k}, got {len(fits)}")
    upper = max(f.slope + 2 * f.stderr for f in fits)
    resolution = min(probes)
    subpower = all(upper <= a for a in probes)
    rate_lo = rate.b - 2 * rate.stderr
    positive = rate_lo > resolution
    rapid = rate_lo > rapid_cap
    hits = {
        "a": upper <= bounded_tol,
        "b": subpower and positive,
        "c": upper <= s and rapid,
    }
    implications = []
    if hits["a"]:
        implications.append(PROP_BOUNDED)
    if hits["b"]:
        implications.append(THM_I)
    if hits["c"]:
        implications.append(THM_II)
    hits["d"] = not implications
    notes = [
        f"growth upper slope {upper:.4g} (k={k}); sub-power growth certified to probe resolution {resolution:g}",
        f"rate b = {rate.b:.4g} +- {rate.stderr:.2g}",
    ]
    if subpower and not positive:
        notes.append("growth hypothesis met, rate hypothesis failed")
    if not subpower and not rapid:
        notes.append("growth class alone proves nothing without a rapidly decreasing rate")
    return ClassificationReport(implications, hits, subpower, positive, rapid, notes)


def sequence_fits(
    T: DistributionRep,
    kernel: HermiteKernel,
    k: int,
    indices: Sequence[float],
    window: Window,
    schedule: Callable[[float], float] | None = None,
    tail_fraction: float = DEFAULTS.tail_fraction,
) -> tuple[ScaleSweep, list[GrowthFit]]:
    """Per-order growth fits for ``f_n = T * phi_{schedule(n)}``."""
    sweep = scale_sweep(T, kernel, k, indices, window, schedule=schedule)
    return sweep, fit_growth_per_order(sweep, tail_fraction)
