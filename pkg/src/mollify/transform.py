"""Mollification, window sup-norms, distributional pairings and scale sweeps.

Derivatives are always put on the kernel: ``d^m (T * phi_n) = T * d^m phi_n``.
Grid parts are convolved circularly with the exactly sampled kernel
derivative; atoms are evaluated in closed form,
``(delta^(p)_{x0} * d^m phi_n)(x) = d^{m+p} phi_n(x - x0)``.
"""

from __future__ import annotations

import csv
import io
import math
from dataclasses import dataclass, field
from typing import Callable, Sequence

import numpy as np

from mollify.config import DEFAULTS
from mollify.errors import EmptyWindow, ResolutionError, SupportError, ValidationError
from mollify.kernels import MAX_DERIVATIVE, HermiteKernel
from mollify.signals import DistributionRep, GridSignal, Window, spectral_value


def wrapped_offsets(n: int, h: float) -> np.ndarray:
    """Offsets ``i h`` folded into ``[-L/2, L/2)``, in FFT index order."""
    i = np.arange(n)
    i = np.where(i < n // 2, i, i - n)
    return i * h


def _wrap(d: np.ndarray, length: float) -> np.ndarray:
    return (d + 0.5 * length) % length - 0.5 * length


def max_resolved_scale(rep, oversampling: int = DEFAULTS.oversampling) -> float:
    """Largest ``n`` with ``n h <= 1/q``."""
    return 1.0 / (oversampling * rep.h)


def check_resolution(rep, n: float, oversampling: int = DEFAULTS.oversampling) -> None:
    if n * rep.h > 1.0 / oversampling * (1 + 1e-12):
        raise ResolutionError(
            f"scale n={n:g} unresolved: n*h = {n * rep.h:.4g} > 1/{oversampling} "
            f"(max scale {max_resolved_scale(rep, oversampling):g})"
        )


def mollify(
    T: DistributionRep,
    kernel: HermiteKernel,
    n: float,
    m: int = 0,
    oversampling: int = DEFAULTS.oversampling,
) -> GridSignal:
    """Grid samples of ``d^m (T * phi_n)``."""
    if not n > 0:
        raise ValidationError(f"scale must be positive, got {n}")
    if not 0 <= m <= MAX_DERIVATIVE:
        raise ValidationError(f"derivative order must be in [0, {MAX_DERIVATIVE}]")
    check_resolution(T, n, oversampling)
    out = np.zeros(T.n)
    if T.grid is not None:
        k = kernel.scaled(n, m, wrapped_offsets(T.n, T.h)) * T.h
        out += np.fft.irfft(np.fft.rfft(T.grid.samples) * np.fft.rfft(k), T.n)
    if T.atoms:
        x = T.x
        for atom in T.atoms:
            out += atom.weight * kernel.scaled(n, m + atom.order, _wrap(x - atom.location, T.length))
    return GridSignal(out, T.x_min, T.x_max)


def roundoff_bound(T: DistributionRep, kernel: HermiteKernel, n: float, m: int = 0) -> float:
    """Worst-case effect of sample roundoff on ``d^m (T * phi_n)``:
    ``eps max|f| ||d^m phi_n||_1``. Atoms are evaluated exactly and add nothing."""
    if T.grid is None:
        return 0.0
    fmax = float(np.max(np.abs(T.grid.samples)))
    return float(np.finfo(float).eps) * fmax * float(n) ** m * kernel.l1_norm(m)


def mollify_grid(sig: GridSignal, kernel: HermiteKernel, n: float, m: int = 0, **kw) -> GridSignal:
    return mollify(DistributionRep(sig, (), ""), kernel, n, m, **kw)


def window_mask(sig, w: Window) -> np.ndarray:
    x = sig.x
    return (x >= w.a) & (x <= w.b)


def sup_norm(sig: GridSignal, w: Window) -> float:
    """Grid max of ``|samples|`` over ``[a, b]``; no subgrid interpolation."""
    mask = window_mask(sig, w)
    if not mask.any():
        raise EmptyWindow(f"no grid point in [{w.a}, {w.b}]")
    return float(np.max(np.abs(sig.samples[mask])))


def pair(T: DistributionRep, rho: GridSignal) -> float:
    """``<T, rho>``: rectangle rule on the grid part (exact for periodic smooth
    integrands) plus ``sum (-1)**p w rho^(p)(x0)`` over atoms."""
    if rho.n != T.n or rho.x_min != T.x_min or rho.x_max != T.x_max:
        raise ValidationError("test function must live on the distribution's grid")
    if rho.samples[0] != 0.0 or rho.samples[-1] != 0.0 or rho.support() is None:
        raise SupportError("test function support must lie strictly inside the box")
    total = 0.0
    if T.grid is not None:
        total += float(np.sum(T.grid.samples * rho.samples)) * T.h
    for atom in T.atoms:
        total += (-1) ** atom.order * atom.weight * spectral_value(rho, atom.order, atom.location)
    return total


def pair_grid(f: GridSignal, rho: GridSignal) -> float:
    return float(np.sum(f.samples * rho.samples)) * f.h


@dataclass(frozen=True, eq=False)
class ScaleSweep:
    """``sup_norms[m, j] = sup_{x in window} |d^m f_j(x)|``.

    For a regularization sequence ``f_j = T * phi_{n_j}`` and
    ``kernel_scales == scales``; sequence sweeps (``f_j = T * phi_{sigma(n_j)}``)
    record the kernel scales actually used. ``noise[m, j]`` bounds the
    roundoff in each entry (see ``roundoff_bound``).
    """

    k: int
    scales: np.ndarray
    sup_norms: np.ndarray
    window: Window
    kernel: dict
    label: str = ""
    kernel_scales: np.ndarray | None = None
    meta: dict = field(default_factory=dict)
    noise: np.ndarray | None = None

    def __post_init__(self):
        scales = np.asarray(self.scales, dtype=float)
        norms = np.asarray(self.sup_norms, dtype=float)
        if norms.shape != (self.k + 1, scales.size):
            raise ValidationError(f"sup_norms shape {norms.shape} != ({self.k + 1}, {scales.size})")
        if np.any(np.diff(scales) <= 0):
            raise ValidationError("scales must be strictly increasing")
        if not np.all(np.isfinite(norms)) or np.any(norms < 0):
            raise ValidationError("sup-norms must be finite and >= 0")
        for arr in (scales, norms):
            arr.setflags(write=False)
        object.__setattr__(self, "scales", scales)
        object.__setattr__(self, "sup_norms", norms)
        if self.kernel_scales is None:
            object.__setattr__(self, "kernel_scales", scales)
        if self.noise is not None:
            noise = np.asarray(self.noise, dtype=float)
            if noise.shape != norms.shape:
                raise ValidationError("noise must match the sup_norms shape")
            noise.setflags(write=False)
            object.__setattr__(self, "noise", noise)

    def orders(self, k: int) -> "ScaleSweep":
        """The same sweep restricted to orders ``0..k``."""
        if not 0 <= k <= self.k:
            raise ValidationError(f"k must be in [0, {self.k}]")
        noise = None if self.noise is None else self.noise[: k + 1]
        return ScaleSweep(
            k, self.scales, self.sup_norms[: k + 1], self.window, self.kernel,
            self.label, self.kernel_scales, dict(self.meta), noise,
        )

    def envelope(self) -> np.ndarray:
        """``max_m sup_norms[m, j]`` (the quantifier over all orders ``m <= k``)."""
        return self.sup_norms.max(axis=0)

    def scaled(self, factor: float) -> "ScaleSweep":
        return ScaleSweep(
            self.k, self.scales, self.sup_norms * factor, self.window, self.kernel,
            self.label, self.kernel_scales, dict(self.meta),
            None if self.noise is None else self.noise * abs(factor),
        )

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["m", "n", "sup_norm"])
        for m in range(self.k + 1):
            for j, n in enumerate(self.scales):
                w.writerow([m, f"{n:.17g}", f"{self.sup_norms[m, j]:.17g}"])
        return buf.getvalue()

    @classmethod
    def from_csv(cls, text: str, window: Window, kernel: dict, label: str = "") -> "ScaleSweep":
        rows = list(csv.DictReader(io.StringIO(text)))
        if not rows or set(rows[0]) != {"m", "n", "sup_norm"}:
            raise ValidationError("sweep CSV needs header m,n,sup_norm")
        ms = sorted({int(r["m"]) for r in rows})
        scales = sorted({float(r["n"]) for r in rows})
        col = {n: j for j, n in enumerate(scales)}
        norms = np.full((len(ms), len(scales)), np.nan)
        for r in rows:
            norms[int(r["m"]), col[float(r["n"])]] = float(r["sup_norm"])
        return cls(ms[-1], np.array(scales), norms, window, kernel, label)


def sweep_radius(kernel: HermiteKernel, k: int, n_min: float, tol: float = DEFAULTS.radius_tol) -> float:
    """Effective radius of ``d^k phi`` (weighted by the kernel's moment order), at scale ``n_min``."""
    weight = getattr(kernel, "vanish_order", 0)
    he_k = HermiteKernel(poly=_derivative_poly(kernel, k))
    return max(kernel.effective_radius(tol, weight), he_k.effective_radius(tol, 0)) / n_min


def _derivative_poly(kernel: HermiteKernel, k: int) -> tuple[float, ...]:
    # d/dx (Q g) = (Q' - x Q) g
    q = np.array(kernel.poly, dtype=float)
    for _ in range(k):
        dq = np.polynomial.polynomial.polyder(q) if q.size > 1 else np.zeros(1)
        xq = np.concatenate([[0.0], q])
        dq = np.concatenate([dq, np.zeros(xq.size - dq.size)])
        q = dq - xq
    return tuple(float(c) for c in q)


def scale_sweep(
    T: DistributionRep,
    kernel: HermiteKernel,
    k: int,
    scales: Sequence[float],
    window: Window,
    schedule: Callable[[float], float] | None = None,
    oversampling: int = DEFAULTS.oversampling,
    check_window: bool = True,
) -> ScaleSweep:
    """Fill ``M[m][j]`` for ``0 <= m <= k`` by mollify + sup_norm.

    ``schedule`` maps a sequence index ``n`` to the kernel scale, giving the
    sequences ``T * phi_{schedule(n)}``; the default is the identity.
    """
    if k < 0:
        raise ValidationError("k must be >= 0")
    scales = np.asarray(scales, dtype=float)
    if scales.ndim != 1 or scales.size == 0 or np.any(np.diff(scales) <= 0) or np.any(scales <= 0):
        raise ValidationError("scales must be positive and strictly increasing")
    kscales = scales if schedule is None else np.array([float(schedule(n)) for n in scales])
    if np.any(kscales <= 0):
        raise ValidationError("schedule must return positive kernel scales")
    for n in (kscales.min(), kscales.max()):
        check_resolution(T, n, oversampling)
    if check_window:
        window.check_inside(T.x_min, T.x_max, sweep_radius(kernel, k, float(kscales.min())))
    norms = np.empty((k + 1, scales.size))
    noise = np.empty_like(norms)
    for j, n in enumerate(kscales):
        for m in range(k + 1):
            norms[m, j] = sup_norm(mollify(T, kernel, n, m, oversampling), window)
            noise[m, j] = roundoff_bound(T, kernel, n, m)
    desc = kernel.descriptor() if hasattr(kernel, "descriptor") else {}
    return ScaleSweep(k, scales, norms, window, desc, T.label, kscales, noise=noise)


def log_schedule(n: float) -> float:
    """Kernel scale ``log n``: the slowly sharpening sequence ``phi_{log n}``."""
    return math.log(n)
