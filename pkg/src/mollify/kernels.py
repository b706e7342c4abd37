"""Analytic mollifier kernels and Littlewood-Paley families.

Every kernel here has the form ``P(x) * g(x)`` with ``g`` the standard
Gaussian density and ``P`` a polynomial. Values, derivatives, moments and
Fourier transforms are all closed form:

* derivatives use the Hermite recurrence ``d/dx (He_j g) = -He_{j+1} g``,
  so ``(sum a_j He_j g)^(m) = (-1)**m * sum a_j He_{j+m} g``;
* moments reduce to Gaussian moments ``E[x**(2p)] = (2p - 1)!!``, computed
  in exact rational arithmetic;
* ``He_j g`` has Fourier transform ``(-iu)**j * exp(-u**2 / 2)`` under the
  convention ``hat f(u) = int f(x) exp(-iux) dx``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property, lru_cache

import numpy as np
from numpy.polynomial import hermite_e as H
from scipy import integrate

from mollify.errors import ConditioningError, ValidationError

SQRT_2PI = math.sqrt(2.0 * math.pi)
MAX_VANISH_ORDER = 12
MAX_DERIVATIVE = 2 * MAX_VANISH_ORDER

# Beyond this |x| the Gaussian factor underflows to exactly 0.0 in double
# precision, while He_j(x) for j <= 40 stays finite.
_UNDERFLOW_X = 39.0


def gaussian_moment(q: int) -> Fraction:
    """``E[x**q]`` for a standard normal variable, exactly."""
    if q < 0:
        raise ValueError("moment order must be >= 0")
    if q % 2:
        return Fraction(0)
    out = 1
    for i in range(q - 1, 0, -2):
        out *= i
    return Fraction(out)


def _monomial_to_hermite(poly: tuple[Fraction, ...]) -> list[Fraction]:
    # x**i = sum_j i! / (j! ((i-j)/2)! 2**((i-j)/2)) He_j(x), i - j even
    out = [Fraction(0)] * len(poly)
    for i, c in enumerate(poly):
        if c == 0:
            continue
        for j in range(i % 2, i + 1, 2):
            half = (i - j) // 2
            coef = Fraction(math.factorial(i), math.factorial(j) * math.factorial(half) * 2**half)
            out[j] += c * coef
    return out


@dataclass(frozen=True)
class HermiteKernel:
    """Kernel ``P(x) g(x)``; ``poly`` holds monomial coefficients of ``P``, ascending."""

    poly: tuple[float, ...]
    label: str = "gauss_poly"

    def __post_init__(self):
        if len(self.poly) == 0:
            raise ValidationError("kernel polynomial must have at least one coefficient")
        if not all(math.isfinite(c) for c in self.poly):
            raise ValidationError("kernel coefficients must be finite")

    @cached_property
    def hermite_coeffs(self) -> np.ndarray:
        exact = _monomial_to_hermite(tuple(Fraction(c) for c in self.poly))
        return np.array([float(c) for c in exact])

    def derivative(self, m: int, x) -> np.ndarray:
        """``phi^(m)(x)`` in closed form."""
        if m < 0:
            raise ValueError("derivative order must be >= 0")
        x = np.asarray(x, dtype=float)
        coeffs = np.concatenate([np.zeros(m), self.hermite_coeffs])
        if m % 2:
            coeffs = -coeffs
        out = np.zeros_like(x)
        live = np.abs(x) < _UNDERFLOW_X
        xl = x[live]
        out[live] = H.hermeval(xl, coeffs) * np.exp(-0.5 * xl * xl) / SQRT_2PI
        return out if out.ndim else out[()]

    def __call__(self, x) -> np.ndarray:
        return self.derivative(0, x)

    def scaled(self, n: float, m: int, x) -> np.ndarray:
        """``d^m/dx^m [n * phi(n x)] = n**(1+m) * phi^(m)(n x)``."""
        if n <= 0:
            raise ValueError(f"scale must be positive, got {n}")
        return n ** (1 + m) * self.derivative(m, n * np.asarray(x, dtype=float))

    def exact_moment(self, m: int) -> Fraction:
        """``int x**m phi(x) dx`` of the float kernel, in exact arithmetic."""
        return sum(
            (Fraction(c) * gaussian_moment(m + i) for i, c in enumerate(self.poly)),
            Fraction(0),
        )

    def fourier(self, u) -> np.ndarray:
        u = np.asarray(u, dtype=float)
        coeffs = self.hermite_coeffs * (-1j) ** np.arange(len(self.hermite_coeffs))
        return np.polynomial.polynomial.polyval(u, coeffs) * np.exp(-0.5 * u * u)

    def sup_abs(self, m: int = 0) -> float:
        """``sup |phi^(m)|`` by dense sampling plus bounded polish around the best sample."""
        from scipy.optimize import minimize_scalar

        xs = np.linspace(-12.0, 12.0, 24001)
        vals = np.abs(self.derivative(m, xs))
        i = int(np.argmax(vals))
        lo, hi = xs[max(i - 1, 0)], xs[min(i + 1, len(xs) - 1)]
        res = minimize_scalar(
            lambda t: -abs(float(self.derivative(m, t))),
            bounds=(lo, hi),
            method="bounded",
            options={"xatol": 1e-12},
        )
        return max(float(vals[i]), -float(res.fun))

    @lru_cache(maxsize=64)
    def l1_norm(self, m: int = 0) -> float:
        """``int |phi^(m)|`` by the trapezoid rule on a dense grid."""
        xs = np.linspace(-40.0, 40.0, 160001)
        return float(integrate.trapezoid(np.abs(self.derivative(m, xs)), xs))

    @lru_cache(maxsize=64)
    def effective_radius(self, tol: float = 1e-12, weight_order: int = 0) -> float:
        """Smallest ``r`` with ``int_{|x|>r} (1 + |x|**k) |phi| < tol``, to 1e-6."""

        def tail(r: float) -> float:
            f = lambda x: (1.0 + abs(x) ** weight_order) * abs(float(self(x)))
            right = integrate.quad(f, r, np.inf, epsabs=1e-18, epsrel=1e-10, limit=200)[0]
            left = integrate.quad(f, -np.inf, -r, epsabs=1e-18, epsrel=1e-10, limit=200)[0]
            return right + left

        lo, hi = 0.0, _UNDERFLOW_X
        if tail(hi) >= tol:
            raise ValidationError(f"tail mass does not drop below {tol}")
        while hi - lo > 1e-6:
            mid = 0.5 * (lo + hi)
            if tail(mid) < tol:
                hi = mid
            else:
                lo = mid
        return hi

    def descriptor(self) -> dict:
        return {"family": self.label, "poly": list(self.poly)}


@dataclass(frozen=True)
class MollifierKernel(HermiteKernel):
    """Unit-mass even kernel ``P(x) g(x)`` whose moments 1..vanish_order vanish."""

    vanish_order: int = 1
    label: str = "gauss_poly"

    def __post_init__(self):
        super().__post_init__()
        if any(c != 0.0 for c in self.poly[1::2]):
            raise ValidationError("mollifier polynomial must be even")
        if self.vanish_order < 0:
            raise ValidationError("vanish_order must be >= 0")

    @classmethod
    def from_even_coeffs(cls, coeffs, vanish_order: int) -> "MollifierKernel":
        poly = []
        for c in coeffs:
            poly.extend([float(c), 0.0])
        return cls(poly=tuple(poly[:-1]), vanish_order=int(vanish_order))

    @property
    def polynomial_coeffs(self) -> list[float]:
        """Even-degree coefficients ``[c0, c2, c4, ...]``."""
        return list(self.poly[0::2])

    def effective_radius(self, tol: float = 1e-12, weight_order: int | None = None) -> float:
        k = self.vanish_order if weight_order is None else weight_order
        return HermiteKernel.effective_radius(self, tol, k)

    def descriptor(self) -> dict:
        return {
            "family": self.label,
            "coeffs": self.polynomial_coeffs,
            "vanish_order": self.vanish_order,
        }

    @classmethod
    def from_descriptor(cls, d: dict) -> "MollifierKernel":
        if d.get("family") != "gauss_poly":
            raise ValidationError(f"unknown kernel family {d.get('family')!r}")
        return cls.from_even_coeffs(d["coeffs"], d["vanish_order"])

    def spec(self) -> str:
        """Short CLI form: ``gauss`` or ``vanish:k``."""
        return "gauss" if self.poly == (1.0,) else f"vanish:{self.vanish_order}"


def make_gaussian_mollifier() -> MollifierKernel:
    return MollifierKernel(poly=(1.0,), vanish_order=1)


def _solve_exact(a: list[list[Fraction]], b: list[Fraction]) -> list[Fraction]:
    n = len(b)
    rows = [row[:] + [rhs] for row, rhs in zip(a, b)]
    for col in range(n):
        piv = next(r for r in range(col, n) if rows[r][col] != 0)
        rows[col], rows[piv] = rows[piv], rows[col]
        for r in range(n):
            if r != col and rows[r][col] != 0:
                f = rows[r][col] / rows[col][col]
                rows[r] = [x - f * y for x, y in zip(rows[r], rows[col])]
    return [rows[i][n] / rows[i][i] for i in range(n)]


def make_moment_vanishing_mollifier(k: int) -> MollifierKernel:
    """Even ``P`` of degree ``2 * (k // 2)`` with unit mass and moments 1..k zero.

    Odd moments vanish by symmetry, so only the even moments ``2, 4, .., 2*(k//2)``
    are imposed. Row ``p`` of the system reads
    ``sum_i c_{2i} (2p + 2i - 1)!! = [p == 0]``.
    """
    if not isinstance(k, (int, np.integer)) or k < 1:
        raise ValidationError(f"k must be an integer >= 1, got {k!r}")
    if k > MAX_VANISH_ORDER:
        raise ValidationError(f"k <= {MAX_VANISH_ORDER} required for a well-conditioned system")
    size = k // 2 + 1
    a = [[gaussian_moment(2 * p + 2 * i) for i in range(size)] for p in range(size)]
    b = [Fraction(int(p == 0)) for p in range(size)]
    exact = _solve_exact(a, b)
    coeffs = [float(c) for c in exact]

    am = np.array([[float(v) for v in row] for row in a])
    resid = np.max(np.abs(am @ np.array(coeffs) - np.array([float(v) for v in b])))
    if resid > 1e-8:
        raise ConditioningError(f"moment system residual {resid:.3e} exceeds 1e-8 (k={k})")
    return MollifierKernel.from_even_coeffs(coeffs, vanish_order=int(k))


def kernel_moment(kernel: HermiteKernel, m: int) -> float:
    if m < 0:
        raise ValueError("moment order must be >= 0")
    return float(kernel.exact_moment(m))


def eval_scaled_kernel(kernel: HermiteKernel, n: float, m: int, x):
    """Closed-form ``d^m/dx^m phi_n(x)`` with ``phi_n(x) = n phi(n x)``."""
    return kernel.scaled(n, m, x)


@dataclass(frozen=True)
class LPFamily:
    """Low-pass ``theta1`` (Gaussian) and band-pass ``theta = g^(M)``.

    Level 0 uses ``theta1``, evaluated as the Gaussian mollifier at scale
    ``1 / theta1_width``; level ``j >= 1`` uses ``2**j theta(2**j x)``.
    """

    theta1: MollifierKernel
    theta: HermiteKernel
    order: int
    epsilon: float
    theta1_width: float = 1.0
    grid_points: int = field(default=4096, repr=False)

    def theta1_hat(self, u) -> np.ndarray:
        return self.theta1.fourier(self.theta1_width * np.asarray(u, dtype=float))

    def theta_hat(self, u) -> np.ndarray:
        return self.theta.fourier(u)

    def level_kernel(self, j: int) -> tuple[HermiteKernel, float]:
        """Kernel and scale used at level ``j``."""
        if j < 0:
            raise ValueError("level must be >= 0")
        if j == 0:
            return self.theta1, 1.0 / self.theta1_width
        return self.theta, float(2**j)

    def check(self) -> None:
        eps = self.epsilon
        u_low = np.linspace(-2 * eps, 2 * eps, self.grid_points)
        if np.min(np.abs(self.theta1_hat(u_low))) <= 0.0:
            raise ValidationError("|theta1_hat| vanishes on [-2 eps, 2 eps]")
        half = self.grid_points // 2
        u_band = np.concatenate(
            [np.linspace(-2 * eps, -eps / 2, half), np.linspace(eps / 2, 2 * eps, half)]
        )
        if np.min(np.abs(self.theta_hat(u_band))) <= 0.0:
            raise ValidationError("|theta_hat| vanishes on the annulus eps/2 <= |u| <= 2 eps")
        for m in range(self.order):
            if abs(kernel_moment(self.theta, m)) > 1e-8:
                raise ValidationError(f"theta moment {m} does not vanish")

    def descriptor(self) -> dict:
        return {
            "family": "lp_gauss_derivative",
            "M": self.order,
            "epsilon": self.epsilon,
            "theta1_width": self.theta1_width,
        }


def make_lp_family(M: int = 8, epsilon: float = 1.0, theta1_width: float = 1.0) -> LPFamily:
    """Gaussian low-pass plus the ``M``-th Gaussian derivative as band-pass.

    ``hat theta(u) = (iu)**M exp(-u**2/2)`` is nonzero off the origin, so the
    annulus condition holds for every ``epsilon``; moments ``0..M-1`` vanish.
    """
    if M < 1:
        raise ValidationError("M must be >= 1")
    if not epsilon > 0:
        raise ValidationError("epsilon must be > 0")
    if not theta1_width > 0:
        raise ValidationError("theta1_width must be > 0")
    # g^(M) = (-1)**M He_M g
    he = np.zeros(M + 1)
    he[M] = (-1.0) ** M
    poly = tuple(float(c) for c in H.herme2poly(he))
    theta = HermiteKernel(poly=poly, label=f"gauss_d{M}")
    family = LPFamily(
        theta1=make_gaussian_mollifier(),
        theta=theta,
        order=M,
        epsilon=float(epsilon),
        theta1_width=float(theta1_width),
    )
    family.check()
    return family


def parse_kernel(spec: str) -> MollifierKernel:
    """``gauss`` or ``vanish:k``."""
    spec = spec.strip().lower()
    if spec in ("gauss", "gaussian"):
        return make_gaussian_mollifier()
    if spec.startswith("vanish:"):
        try:
            k = int(spec.split(":", 1)[1])
        except ValueError as exc:
            raise ValidationError(f"bad kernel spec {spec!r}") from exc
        return make_moment_vanishing_mollifier(k)
    raise ValidationError(f"bad kernel spec {spec!r}; expected 'gauss' or 'vanish:k'")
