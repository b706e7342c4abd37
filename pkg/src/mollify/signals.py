"""Compactly supported distributions on a periodic box, and the fixture corpus.

A distribution is a grid-sampled density plus a list of atoms
``w * delta^(p)_{x0}``. The box ``[x_min, x_max)`` is periodic; every
support is kept well inside it so circular convolution never wraps.
"""

from __future__ import annotations

import inspect
import json
import math
import os
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from mollify.config import DEFAULTS
from mollify.errors import FormatError, ResolutionError, ValidationError

MAX_ATOM_ORDER = 8
MIN_GRID = 16


def _is_pow2(n: int) -> bool:
    return n >= 1 and (n & (n - 1)) == 0


@dataclass(frozen=True)
class Window:
    a: float
    b: float

    def __post_init__(self):
        if not (math.isfinite(self.a) and math.isfinite(self.b) and self.a < self.b):
            raise ValidationError(f"window needs finite a < b, got [{self.a}, {self.b}]")

    def check_inside(self, x_min: float, x_max: float, radius: float = 0.0) -> None:
        """Require ``[a, b]`` strictly inside ``[x_min + radius, x_max - radius]``."""
        if not (x_min + radius < self.a and self.b < x_max - radius):
            raise ValidationError(
                f"window [{self.a}, {self.b}] not inside box [{x_min}, {x_max}) "
                f"shrunk by kernel radius {radius:.4g}"
            )

    def as_list(self) -> list[float]:
        return [self.a, self.b]


@dataclass(frozen=True, eq=False)
class GridSignal:
    """Samples at ``x_i = x_min + i h``, ``h = (x_max - x_min) / N``."""

    samples: np.ndarray
    x_min: float
    x_max: float

    def __post_init__(self):
        s = np.array(self.samples, dtype=float)
        s.setflags(write=False)
        object.__setattr__(self, "samples", s)
        n = s.size
        if s.ndim != 1 or n < MIN_GRID or not _is_pow2(n):
            raise ValidationError(f"grid size must be a power of two >= {MIN_GRID}, got {s.shape}")
        if not self.x_min < self.x_max:
            raise ValidationError("need x_min < x_max")
        if not np.all(np.isfinite(s)):
            raise ValidationError("grid samples must be finite")

    @property
    def n(self) -> int:
        return self.samples.size

    @property
    def h(self) -> float:
        return (self.x_max - self.x_min) / self.n

    @property
    def length(self) -> float:
        return self.x_max - self.x_min

    @property
    def x(self) -> np.ndarray:
        return grid_points(self.n, self.x_min, self.x_max)

    def support(self) -> tuple[float, float] | None:
        nz = np.flatnonzero(self.samples)
        if nz.size == 0:
            return None
        x = self.x
        return float(x[nz[0]]), float(x[nz[-1]])

    def margin(self) -> float:
        """Distance from the support to the box edges (inf for the zero signal)."""
        sup = self.support()
        if sup is None:
            return math.inf
        return min(sup[0] - self.x_min, self.x_max - sup[1])

    def scaled(self, factor: float) -> "GridSignal":
        return GridSignal(self.samples * factor, self.x_min, self.x_max)


def grid_points(n: int, x_min: float, x_max: float) -> np.ndarray:
    return x_min + np.arange(n) * ((x_max - x_min) / n)


@dataclass(frozen=True)
class AtomicTerm:
    """``weight * delta^(order)`` located at ``location``."""

    location: float
    weight: float = 1.0
    order: int = 0

    def __post_init__(self):
        if not (0 <= self.order <= MAX_ATOM_ORDER):
            raise ValidationError(f"atom order must be in [0, {MAX_ATOM_ORDER}]")
        if not (math.isfinite(self.location) and math.isfinite(self.weight)):
            raise ValidationError("atom location and weight must be finite")


@dataclass(frozen=True, eq=False)
class DistributionRep:
    """A compactly supported distribution: optional grid density plus atoms.

    ``n``, ``x_min``, ``x_max`` give the computational grid even when the
    density part is absent (purely atomic distributions).
    """

    grid: GridSignal | None
    atoms: tuple[AtomicTerm, ...] = ()
    label: str = ""
    n: int = DEFAULTS.n_grid
    x_min: float = DEFAULTS.x_min
    x_max: float = DEFAULTS.x_max
    meta: dict = field(default_factory=dict)

    def __post_init__(self):
        object.__setattr__(self, "atoms", tuple(self.atoms))
        if self.grid is not None:
            object.__setattr__(self, "n", self.grid.n)
            object.__setattr__(self, "x_min", self.grid.x_min)
            object.__setattr__(self, "x_max", self.grid.x_max)
        if self.grid is None and not self.atoms:
            raise ValidationError("distribution needs a grid part or at least one atom")
        if not _is_pow2(self.n) or self.n < MIN_GRID:
            raise ValidationError(f"grid size must be a power of two >= {MIN_GRID}")
        if not self.x_min < self.x_max:
            raise ValidationError("need x_min < x_max")
        for atom in self.atoms:
            if not (self.x_min < atom.location < self.x_max):
                raise ValidationError(f"atom at {atom.location} outside box")

    @property
    def h(self) -> float:
        return (self.x_max - self.x_min) / self.n

    @property
    def length(self) -> float:
        return self.x_max - self.x_min

    @property
    def x(self) -> np.ndarray:
        return grid_points(self.n, self.x_min, self.x_max)

    def support(self) -> tuple[float, float]:
        """Convex hull of the grid support and the atom locations."""
        lo, hi = math.inf, -math.inf
        if self.grid is not None and self.grid.support() is not None:
            lo, hi = self.grid.support()
        for atom in self.atoms:
            lo, hi = min(lo, atom.location), max(hi, atom.location)
        if lo > hi:
            return (0.5 * (self.x_min + self.x_max),) * 2
        return lo, hi

    def scaled(self, factor: float) -> "DistributionRep":
        grid = None if self.grid is None else self.grid.scaled(factor)
        atoms = tuple(AtomicTerm(a.location, a.weight * factor, a.order) for a in self.atoms)
        return DistributionRep(grid, atoms, self.label, self.n, self.x_min, self.x_max, dict(self.meta))

    def derivative(self) -> "DistributionRep":
        """Distributional derivative: atoms gain one order, the grid part is
        differentiated spectrally."""
        grid = None
        if self.grid is not None:
            grid = GridSignal(spectral_derivative(self.grid, 1), self.x_min, self.x_max)
        atoms = tuple(AtomicTerm(a.location, a.weight, a.order + 1) for a in self.atoms)
        meta = dict(self.meta)
        if "alpha" in meta and meta["alpha"] is not None:
            meta["alpha"] = meta["alpha"] - 1
        meta["derivatives"] = int(meta.get("derivatives", 0)) + 1
        return DistributionRep(grid, atoms, f"d({self.label})", self.n, self.x_min, self.x_max, meta)

    def regrid(self, n: int) -> "DistributionRep":
        """Same distribution on an ``n``-point grid; only valid for reps made by
        a generator (regenerated from ``meta``)."""
        spec = self.meta.get("generator")
        if spec is None:
            raise ValidationError("regrid needs a generator-built distribution")
        rep = generate(spec["name"], n=n, box=(self.x_min, self.x_max), **spec["params"])
        for _ in range(int(self.meta.get("derivatives", 0))):
            rep = rep.derivative()
        return DistributionRep(rep.grid, rep.atoms, self.label, rep.n, rep.x_min, rep.x_max, rep.meta)


def spectral_derivative(sig: GridSignal, p: int) -> np.ndarray:
    """``p``-th derivative of the trigonometric interpolant, on the grid."""
    if p == 0:
        return np.array(sig.samples)
    k = 2 * np.pi * np.fft.rfftfreq(sig.n, sig.h)
    spec = np.fft.rfft(sig.samples) * (1j * k) ** p
    if p % 2:
        spec[-1] = 0.0
    return np.fft.irfft(spec, sig.n)


def spectral_value(sig: GridSignal, p: int, x0: float) -> float:
    """``p``-th derivative of the trigonometric interpolant at any ``x0``."""
    n = sig.n
    c = np.fft.rfft(sig.samples) / n
    k = 2 * np.pi * np.fft.rfftfreq(n, sig.h)
    w = np.full(c.size, 2.0)
    w[0] = 1.0
    if n % 2 == 0:
        w[-1] = 0.0 if p % 2 else 1.0
    phase = np.exp(1j * k * (x0 - sig.x_min))
    return float(np.real(np.sum(w * c * (1j * k) ** p * phase)))


# ---------------------------------------------------------------- tapers

def _psi(t):
    t = np.asarray(t, dtype=float)
    out = np.zeros_like(t)
    pos = t > 0
    out[pos] = np.exp(-1.0 / t[pos])
    return out


def smooth_step(t):
    """C-infinity step: 0 for t <= 0, 1 for t >= 1."""
    a, b = _psi(t), _psi(1.0 - np.asarray(t, dtype=float))
    return a / (a + b)


def taper(x, flat: float = 0.5, edge: float = 1.0):
    """C-infinity window equal to 1 on ``|x| <= flat`` and 0 on ``|x| >= edge``."""
    x = np.abs(np.asarray(x, dtype=float))
    return 1.0 - smooth_step((x - flat) / (edge - flat))


def bump(x):
    """``exp(-1 / (1 - x**2))`` on ``(-1, 1)``, zero elsewhere."""
    x = np.asarray(x, dtype=float)
    out = np.zeros_like(x)
    inside = np.abs(x) < 1
    out[inside] = np.exp(-1.0 / (1.0 - x[inside] ** 2))
    return out


# ---------------------------------------------------------------- generators

def _check_grid(n: int, box) -> tuple[int, float, float]:
    x_min, x_max = float(box[0]), float(box[1])
    if not _is_pow2(int(n)) or n < MIN_GRID:
        raise ValidationError(f"N must be a power of two >= {MIN_GRID}, got {n}")
    if not (x_min < -1.0 and x_max > 1.0):
        raise ValidationError("box must contain the fixture support [-1, 1] in its interior")
    return int(n), x_min, x_max


def _grid_rep(samples, n, x_min, x_max, label, name, params, alpha) -> DistributionRep:
    meta = {"generator": {"name": name, "params": params}, "alpha": alpha}
    return DistributionRep(GridSignal(samples, x_min, x_max), (), label, meta=meta)


def gen_power_cusp(alpha: float, n: int = DEFAULTS.n_grid, box=DEFAULTS.box) -> DistributionRep:
    """``|x|**alpha * taper(x)``: exact Hölder exponent ``alpha`` at 0."""
    if not 0 < alpha < 2 or float(alpha).is_integer():
        raise ValidationError(f"alpha must be a non-integer in (0, 2), got {alpha}")
    if n < 2**10:
        raise ResolutionError(f"cusp fixture needs N >= 2**10, got {n}")
    n, x_min, x_max = _check_grid(n, box)
    x = grid_points(n, x_min, x_max)
    return _grid_rep(
        np.abs(x) ** alpha * taper(x), n, x_min, x_max, f"cusp({alpha:g})", "cusp", {"alpha": alpha}, alpha
    )


def weierstrass_terms(a: float) -> int:
    """Smallest term count with ``a**terms < 1e-12``."""
    return int(math.floor(math.log(1e-12) / math.log(a))) + 1


def gen_weierstrass(
    a: float = 0.5,
    b: float = 4.0,
    terms: int | None = None,
    n: int = DEFAULTS.n_grid,
    box=DEFAULTS.box,
    band_limit: bool = True,
) -> DistributionRep:
    """Tapered partial sum of ``sum_j a**j cos(b**j pi x)``; exponent ``ln(1/a)/ln b``.

    With ``band_limit`` the terms at or above the grid Nyquist frequency are
    left out: sampled, they alias onto low frequencies instead of vanishing.
    """
    if not 0 < a < 1:
        raise ValidationError("need 0 < a < 1")
    if not (b > 1 and a * b > 1):
        raise ValidationError("need b > 1 and a * b > 1")
    if terms is None:
        terms = weierstrass_terms(a)
    if not a**terms < 1e-12:
        raise ValidationError(f"truncation a**terms = {a**terms:.3g} is not < 1e-12")
    n, x_min, x_max = _check_grid(n, box)
    x = grid_points(n, x_min, x_max)
    nyquist = math.pi * n / (x_max - x_min)
    total = np.zeros(n)
    for j in range(terms):
        freq = b**j * math.pi
        if band_limit and freq >= nyquist:
            break
        total += a**j * np.cos(freq * x)
    alpha = math.log(1 / a) / math.log(b)
    params = {"a": a, "b": b, "terms": terms, "band_limit": band_limit}
    return _grid_rep(total * taper(x), n, x_min, x_max, f"weierstrass({a:g},{b:g})", "weierstrass", params, alpha)


def gen_heaviside(n: int = DEFAULTS.n_grid, box=DEFAULTS.box) -> DistributionRep:
    """Tapered step ``H(x) taper(x)`` with the jump at 0 (``H(0) = 1``)."""
    n, x_min, x_max = _check_grid(n, box)
    x = grid_points(n, x_min, x_max)
    return _grid_rep((x >= 0) * taper(x), n, x_min, x_max, "heaviside", "heaviside", {}, 0.0)


def gen_bump(n: int = DEFAULTS.n_grid, box=DEFAULTS.box) -> DistributionRep:
    n, x_min, x_max = _check_grid(n, box)
    x = grid_points(n, x_min, x_max)
    return _grid_rep(bump(x), n, x_min, x_max, "bump", "bump", {}, None)


def gen_constant(c: float = 1.0, n: int = DEFAULTS.n_grid, box=DEFAULTS.box) -> DistributionRep:
    """``c`` on the middle half of the box, tapered to 0 over the next quarter.

    On the default box that is flat on ``|x| <= 2`` and zero beyond ``|x| = 3``.
    """
    n, x_min, x_max = _check_grid(n, box)
    half = 0.5 * (x_max - x_min)
    x = grid_points(n, x_min, x_max)
    t = x - 0.5 * (x_min + x_max)
    return _grid_rep(
        c * taper(t, flat=0.5 * half, edge=0.75 * half), n, x_min, x_max,
        f"constant({c:g})", "constant", {"c": c}, None,
    )


def gen_delta(
    p: int = 0, location: float = 0.0, n: int = DEFAULTS.n_grid, box=DEFAULTS.box, weight: float = 1.0
) -> DistributionRep:
    """Purely atomic ``weight * delta^(p)`` at ``location``; exponent ``-1 - p``."""
    if not 0 <= p <= MAX_ATOM_ORDER:
        raise ValidationError(f"p must be in [0, {MAX_ATOM_ORDER}]")
    x_min, x_max = float(box[0]), float(box[1])
    if not _is_pow2(int(n)) or n < MIN_GRID:
        raise ValidationError(f"N must be a power of two >= {MIN_GRID}")
    label = "delta" if p == 0 else f"delta^({p})"
    if location != 0.0:
        label += f"@{location:g}"
    meta = {
        "generator": {"name": "delta", "params": {"p": p, "location": location, "weight": weight}},
        "alpha": -1.0 - p,
    }
    return DistributionRep(None, (AtomicTerm(location, weight, p),), label, int(n), x_min, x_max, meta)


GENERATORS = {
    "cusp": gen_power_cusp,
    "weierstrass": gen_weierstrass,
    "heaviside": gen_heaviside,
    "bump": gen_bump,
    "constant": gen_constant,
    "delta": gen_delta,
}


def generate(name: str, n: int = DEFAULTS.n_grid, box=DEFAULTS.box, **params) -> DistributionRep:
    try:
        fn = GENERATORS[name]
    except KeyError:
        raise ValidationError(f"unknown generator {name!r}; choose from {sorted(GENERATORS)}") from None
    allowed = set(inspect.signature(fn).parameters) - {"n", "box"}
    extra = sorted(set(params) - allowed)
    if extra:
        raise ValidationError(f"generator {name!r} takes no parameter(s) {extra}; allowed: {sorted(allowed)}")
    return fn(n=n, box=box, **params)


# ---------------------------------------------------------------- file I/O
#
# Line 1 of a signal file is a JSON header. With format "bin" the samples go
# to a sidecar "<path>.bin" as little-endian float64; with format "csv" they
# follow the header, one per line. Purely atomic signals carry no samples.

def store_signal(rep: DistributionRep, path, fmt: str = "bin") -> Path:
    if fmt not in ("bin", "csv"):
        raise ValidationError(f"format must be 'bin' or 'csv', got {fmt!r}")
    path = Path(path)
    header = {
        "n": rep.n,
        "x_min": rep.x_min,
        "x_max": rep.x_max,
        "label": rep.label,
        "atoms": [{"x": a.location, "w": a.weight, "p": a.order} for a in rep.atoms],
        "has_grid": rep.grid is not None,
        "format": fmt,
    }
    if rep.meta:
        header["meta"] = rep.meta
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(json.dumps(header) + "\n")
        if rep.grid is not None and fmt == "csv":
            fh.writelines(f"{v!r}\n" for v in rep.grid.samples.tolist())
    if rep.grid is not None and fmt == "bin":
        rep.grid.samples.astype("<f8").tofile(sidecar_path(path))
    return path


def sidecar_path(path) -> Path:
    return Path(os.fspath(path) + ".bin")


def _field(header: dict, key: str, kind, default=None, required=True):
    if key not in header:
        if required:
            raise FormatError(f"line 1: header missing field {key!r}")
        return default
    value = header[key]
    if kind is float and isinstance(value, int) and not isinstance(value, bool):
        value = float(value)
    if not isinstance(value, kind) or isinstance(value, bool) and kind is not bool:
        raise FormatError(f"line 1: field {key!r} has type {type(value).__name__}, expected {kind.__name__}")
    return value


def load_signal(path) -> DistributionRep:
    path = Path(path)
    with open(path, "r", encoding="utf-8") as fh:
        first = fh.readline()
        try:
            header = json.loads(first)
        except json.JSONDecodeError as exc:
            raise FormatError(f"line 1: header is not valid JSON ({exc.msg} at column {exc.colno})") from None
        if not isinstance(header, dict):
            raise FormatError("line 1: header must be a JSON object")
        n = _field(header, "n", int)
        x_min = _field(header, "x_min", float)
        x_max = _field(header, "x_max", float)
        label = _field(header, "label", str, default="", required=False)
        fmt = _field(header, "format", str, default="bin", required=False)
        has_grid = _field(header, "has_grid", bool, default=True, required=False)
        raw_atoms = _field(header, "atoms", list, default=[], required=False)
        atoms = []
        for i, a in enumerate(raw_atoms):
            if not isinstance(a, dict) or "x" not in a:
                raise FormatError(f"line 1: atoms[{i}] must be an object with at least field 'x'")
            try:
                atoms.append(AtomicTerm(float(a["x"]), float(a.get("w", 1.0)), int(a.get("p", 0))))
            except (TypeError, ValueError) as exc:
                raise FormatError(f"line 1: atoms[{i}]: {exc}") from None
        samples = None
        if has_grid:
            if fmt == "csv":
                values = []
                for lineno, line in enumerate(fh, start=2):
                    line = line.strip()
                    if not line:
                        continue
                    try:
                        values.append(float(line))
                    except ValueError:
                        raise FormatError(f"line {lineno}: sample {line!r} is not a number") from None
                samples = np.array(values, dtype=float)
            elif fmt == "bin":
                side = sidecar_path(path)
                if not side.exists():
                    raise FormatError(f"line 1: sidecar {side.name} not found")
                samples = np.fromfile(side, dtype="<f8").astype(float)
            else:
                raise FormatError(f"line 1: field 'format' must be 'bin' or 'csv', got {fmt!r}")
            if samples.size != n:
                raise FormatError(f"line 1: field 'n' is {n} but {samples.size} samples were found")
    meta = header.get("meta", {}) or {}
    try:
        grid = None if samples is None else GridSignal(samples, x_min, x_max)
        return DistributionRep(grid, tuple(atoms), label, n, x_min, x_max, meta)
    except ValidationError as exc:
        raise FormatError(f"line 1: {exc}") from None
