"""Independent regularity measurements: Littlewood-Paley levels and Hölder quotients.

``T in C_*^alpha`` iff ``sup_x 2**(alpha j) |(T * theta_{2^j})(x)|`` is finite;
equivalently the level sup-norms ``S_j`` decay like ``2**(-alpha j)``.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from mollify.config import DEFAULTS
from mollify.errors import DegenerateFit, EmptyWindow, ValidationError
from mollify.estimator import LITTLEWOOD_PALEY, RegularityEstimate, fit_loglog
from mollify.kernels import LPFamily
from mollify.signals import DistributionRep, GridSignal, Window
from mollify.transform import check_resolution, mollify, sup_norm, window_mask

LP_MIN_LEVELS = 5
LP_REL_FLOOR = 1e-12


@dataclass(frozen=True, eq=False)
class LPDecomposition:
    J: int
    sup_norms: np.ndarray
    family: dict
    window: Window
    label: str = ""

    def __post_init__(self):
        s = np.asarray(self.sup_norms, dtype=float)
        if s.shape != (self.J + 1,) or not np.all(np.isfinite(s)) or np.any(s < 0):
            raise ValidationError("LP sup-norms must be J+1 finite non-negative values")
        s.setflags(write=False)
        object.__setattr__(self, "sup_norms", s)

    @property
    def levels(self) -> np.ndarray:
        return np.arange(self.J + 1)

    def to_csv(self) -> str:
        rows = ["j,sup_norm"] + [f"{j},{v:.17g}" for j, v in enumerate(self.sup_norms)]
        return "\n".join(rows) + "\n"


def _check_no_wrap(T: DistributionRep, window: Window, radius: float) -> None:
    # periodic images of the support must stay a kernel radius away from the window
    lo, hi = T.support()
    span = max(window.b, hi) - min(window.a, lo)
    if T.length - span <= radius:
        raise ValidationError(
            f"kernel radius {radius:.3g} reaches periodic images of the support (gap {T.length - span:.3g})"
        )
    window.check_inside(T.x_min, T.x_max)


def lp_decompose(
    T: DistributionRep,
    family: LPFamily,
    J: int | None = None,
    window: Window | None = None,
    oversampling: int = DEFAULTS.oversampling,
) -> LPDecomposition:
    """``S_j = sup_window |T * theta_{2^j}|`` for ``j = 0..J`` (``theta_{2^0} = theta1``)."""
    J = DEFAULTS.lp_levels() if J is None else int(J)
    window = Window(*DEFAULTS.window) if window is None else window
    if J < 1:
        raise ValidationError("J must be >= 1")
    check_resolution(T, 2.0**J, oversampling)
    norms = np.empty(J + 1)
    for j in range(J + 1):
        kernel, scale = family.level_kernel(j)
        if j >= 1:
            _check_no_wrap(T, window, kernel.effective_radius(DEFAULTS.radius_tol, 0) / scale)
        norms[j] = sup_norm(mollify(T, kernel, scale, 0, oversampling), window)
    return LPDecomposition(J, norms, family.descriptor(), window, T.label)


def lp_norm(decomp: LPDecomposition, alpha: float) -> float:
    """Finite-``J`` proxy ``max_j 2**(alpha j) S_j`` of the Zygmund norm."""
    M = decomp.family.get("M")
    if M is not None and not alpha < M:
        raise ValidationError(f"alpha must be < M = {M}")
    return float(np.max(2.0 ** (alpha * decomp.levels) * decomp.sup_norms))


def lp_estimate_alpha(
    decomp: LPDecomposition, tail_fraction: float = DEFAULTS.tail_fraction
) -> RegularityEstimate:
    """``alpha = -slope`` of ``log2 S_j`` against ``j`` over the tail levels.

    Levels below ``LP_REL_FLOOR * max S_j`` sit at the FFT roundoff floor
    (smooth signals) and are discarded before the fit.
    """
    s = decomp.sup_norms
    floor = max(1e-300, LP_REL_FLOOR * float(s.max()))
    usable = int(np.sum(s > floor))
    if usable < LP_MIN_LEVELS:
        raise DegenerateFit(f"only {usable} LP levels above floor {floor:.3g}; need {LP_MIN_LEVELS}")
    fit = fit_loglog(
        decomp.levels.astype(float), s, tail_fraction, floor=floor, minimum=LP_MIN_LEVELS,
        xform=np.asarray, yform=np.log2,
    )
    M = decomp.family.get("M", np.inf)
    alpha = -fit.raw_slope
    return RegularityEstimate(
        alpha=alpha,
        k_used=0,
        growth=fit,
        saturated=alpha > M - 1,
        method=LITTLEWOOD_PALEY,
        scales=tuple(float(2.0**j) for j in decomp.levels),
        label=decomp.label,
    )


def holder_seminorm(sig: GridSignal, alpha: float, window: Window) -> float:
    """``max_gap sup_x |f(x + gap) - f(x)| / gap**alpha`` over dyadic gaps ``h 2**i``,
    with both points in the window."""
    if not 0 < alpha < 1:
        raise ValidationError("alpha must be in (0, 1)")
    mask = window_mask(sig, window)
    f = sig.samples[mask]
    if f.size < 2:
        raise EmptyWindow(f"fewer than two grid points in [{window.a}, {window.b}]")
    best = 0.0
    g = 1
    while g < f.size:
        diff = np.max(np.abs(f[g:] - f[:-g]))
        best = max(best, float(diff) / (g * sig.h) ** alpha)
        g *= 2
    return best
