"""Sphere moments, the curvature inequality, the quartic majorant and the R^4 family."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
import scipy.integrate
import scipy.optimize

from ..equiangular import LineSystem, extremal_parameters, tight_frame_residual
from ..errors import DomainError, PreconditionError
from ..linalg import check_field, gram_matrix
from ..minproj import projection_bound

CURVATURE_TOL = 1e-12


def _check_even(k: int):
    if k < 2 or k % 2:
        raise DomainError(f"k must be an even integer >= 2, got {k}")


def sphere_moment(n: int, k: int, field: str = "real") -> float:
    """``int |<e, w>|^k dw`` over the unit sphere of K^n with normalized measure.

    Real: ``(k-1)!! / (n (n+2) ... (n+k-2))``. Complex, with ``m = k/2``:
    ``m! (n-1)! / (n+m-1)!``.
    """
    _check_even(k)
    if n < 1:
        raise DomainError("n must be at least 1")
    if check_field(field) == "real":
        num = math.prod(range(k - 1, 0, -2))
        den = math.prod(n + 2 * i for i in range(k // 2))
        return num / den
    m = k // 2
    return math.factorial(m) * math.factorial(n - 1) / math.factorial(n + m - 1)


def sphere_moment_quadrature(n: int, k: int, field: str = "real") -> float:
    """The same moment from a one-dimensional integral, by adaptive quadrature.

    A uniform point ``w`` of the real sphere has first coordinate with density
    proportional to ``(1 - t^2)^((n-3)/2)`` on ``[-1, 1]``; on the complex
    sphere ``|w_1|^2`` has density ``(n-1)(1-r)^(n-2)`` on ``[0, 1]``.
    """
    _check_even(k)
    if check_field(field) == "real":
        if n == 1:
            return 1.0
        a = (n - 3) / 2
        num, _ = scipy.integrate.quad(lambda t: t ** k, -1, 1, weight="alg", wvar=(a, a), epsabs=0, epsrel=1e-13)
        den, _ = scipy.integrate.quad(lambda t: 1.0, -1, 1, weight="alg", wvar=(a, a), epsabs=0, epsrel=1e-13)
        return num / den
    if n == 1:
        return 1.0
    m = k // 2
    val, _ = scipy.integrate.quad(lambda r: r ** m * (n - 1) * (1 - r) ** (n - 2), 0, 1, epsabs=0, epsrel=1e-13)
    return val


@dataclass(frozen=True)
class CurvatureResult:
    lhs: float
    rhs: float
    holds: bool


def curvature_check(system: LineSystem, k: int) -> CurvatureResult:
    """Compare ``sum |<z_s, z_t>|^k mu_s mu_t`` with the k-th sphere moment."""
    _check_even(k)
    if system.weights is None:
        raise PreconditionError("curvature_check needs a weighted system")
    mu = system.weights
    lhs = float(mu @ (np.abs(gram_matrix(system.vectors)) ** k) @ mu)
    rhs = sphere_moment(system.n, k, system.field)
    return CurvatureResult(lhs, rhs, bool(lhs >= rhs - CURVATURE_TOL))


# --- quartic majorant ------------------------------------------------------------

@dataclass(frozen=True)
class MajorizationResult:
    holds: bool
    min_gap: float
    touch_points: np.ndarray
    touch_deviation: float


@dataclass(frozen=True)
class GammaCoefficients:
    """``p(u) = gamma0 + gamma2 u^2 - gamma4 u^4``, which majorizes ``|u|`` on [-1, 1]."""

    n: int
    field: str
    gamma0: float
    gamma2: float
    gamma4: float
    alpha: float
    beta_moment: float

    def polynomial(self, u):
        u = np.asarray(u, dtype=float)
        return self.gamma0 + self.gamma2 * u ** 2 - self.gamma4 * u ** 4

    def identity_value(self) -> float:
        """``n gamma0 + gamma2 - gamma4 beta``; equals the projection bound."""
        return self.n * self.gamma0 + self.gamma2 - self.gamma4 * self.beta_moment

    def identity_deviation(self) -> float:
        return abs(self.identity_value() - projection_bound(self.n, self.field))

    def majorization_check(self, points: int = 10 ** 5, tol: float = 1e-12) -> MajorizationResult:
        """Check ``|u| <= p(u)`` on a uniform grid, with equality only at ``|u| in {alpha, 1}``.

        The touch points are added to the grid and must have gap within
        ``tol``. Every other grid point where the gap is within ``tol`` has to
        lie within one grid spacing of a touch point, which is the finest
        statement the grid can resolve.
        """
        a = self.alpha
        touch = np.array([-1.0, -a, a, 1.0])
        u = np.union1d(np.linspace(-1.0, 1.0, points), touch)
        gap = self.polynomial(u) - np.abs(u)
        touch_dev = float(np.abs(self.polynomial(touch) - np.abs(touch)).max())
        spacing = 2.0 / (points - 1)
        near_equal = u[gap <= tol]
        dist = np.abs(near_equal[:, None] - touch[None, :]).min(axis=1)
        holds = bool(gap.min() >= -tol and touch_dev <= tol and np.all(dist <= spacing))
        return MajorizationResult(holds, float(gap.min()), touch, touch_dev)


def gamma_tools(n: int, field: str = "real") -> GammaCoefficients:
    """Coefficients of the quartic that touches ``|u|`` at ``+-alpha`` and ``+-1``."""
    if n < 1:
        raise DomainError("n must be at least 1")
    _, a = extremal_parameters(n, field)
    g0 = a / 2 - a ** 3 / (2 * (1 + a) ** 2)
    g2 = 1 / (2 * a) + a / (1 + a) ** 2
    g4 = 1 / (2 * a * (1 + a) ** 2)
    return GammaCoefficients(n, field, g0, g2, g4, a, n * sphere_moment(n, 4, field))


# --- the R^4 family ----------------------------------------------------------------

R4_UPPER = (2 + 3 * math.sqrt(6)) / 5


def r4_example_system(alpha: float) -> LineSystem:
    """Ten weighted unit vectors in R^4 forming a tight frame for admissible ``alpha``.

    Four vectors ``(3,-1,-1,-1)/sqrt(12)`` up to permutation, and six with
    ``-cos(alpha)`` on a pair of coordinates and ``sin(alpha)`` on the other
    two, over ``sqrt(2)``. Weights need ``sin(2 alpha) <= 1/2``.
    """
    a = 0.5 - math.sin(2 * alpha)
    if a < -1e-15:
        raise DomainError(f"alpha={alpha} gives negative weights (needs sin 2alpha <= 1/2)")
    a = max(a, 0.0)
    rows = []
    for j in range(4):
        v = -np.ones(4)
        v[j] = 3.0
        rows.append(v / math.sqrt(12))
    s, c = math.sin(alpha), math.cos(alpha)
    for i in range(4):
        for j in range(i + 1, 4):
            v = np.full(4, s)
            v[[i, j]] = -c
            rows.append(v / math.sqrt(2))
    w = np.array([a / (2 * (1 + 2 * a))] * 4 + [1 / (6 * (1 + 2 * a))] * 6)
    return LineSystem("real", np.array(rows), w, label=f"R4 family alpha={alpha}")


def r4_value(alpha: float) -> float:
    """``4 sum |<x_s, x_t>| mu_s mu_t`` for the family member at ``alpha``."""
    S = r4_example_system(alpha)
    return float(4 * S.weights @ np.abs(gram_matrix(S.vectors)) @ S.weights)


def r4_admissible(alpha) -> np.ndarray:
    return np.sin(2 * np.asarray(alpha)) <= 0.5 + 1e-15


@dataclass(frozen=True)
class R4Scan:
    alpha_star: float
    value: float
    alphas: np.ndarray
    curve: np.ndarray
    max_frame_residual: float
    maximizers: tuple = ()


def _refine(alphas, curve, i, tol):
    a, v = float(alphas[i]), float(curve[i])
    if 0 < i < len(alphas) - 1 and not np.isnan(curve[i - 1]) and not np.isnan(curve[i + 1]):
        lo, hi = alphas[i - 1], alphas[i + 1]
        x = float(np.clip(scipy.optimize.golden(lambda t: -r4_value(t), brack=(lo, a, hi), tol=tol), lo, hi))
        if r4_admissible(x) and r4_value(x) >= v:
            return x, r4_value(x)
    return a, v


def r4_example_scan(grid: int = 10 ** 4, tol: float = 1e-8) -> R4Scan:
    """Scan the family over a uniform grid of ``[0, pi]`` and refine the best points.

    Inadmissible ``alpha`` (negative weights) are NaN in the curve. Every
    grid peak within ``1e-3`` of the maximum is refined by golden-section
    search over its two neighbouring cells. The value is symmetric under
    ``alpha -> pi/2 - alpha``, so maxima come in mirror pairs; all are listed
    in ``maximizers`` and ``alpha_star`` is the largest of them.
    """
    if grid < 100:
        raise DomainError("grid must have at least 100 points")
    alphas = np.linspace(0.0, math.pi, grid)
    curve = np.full(grid, np.nan)
    resid = 0.0
    for i, al in enumerate(alphas):
        if r4_admissible(al):
            S = r4_example_system(al)
            curve[i] = 4 * S.weights @ np.abs(gram_matrix(S.vectors)) @ S.weights
            resid = max(resid, tight_frame_residual(S))
    top = np.nanmax(curve)
    padded = np.concatenate([[-np.inf], np.nan_to_num(curve, nan=-np.inf), [-np.inf]])
    peaks = [i for i in range(grid)
             if curve[i] >= top - 1e-3 and padded[i + 1] >= padded[i] and padded[i + 1] >= padded[i + 2]]
    refined = [_refine(alphas, curve, i, tol) for i in peaks]
    best = max(v for _, v in refined)
    maximizers = tuple(sorted(a for a, v in refined if v >= best - 1e-10))
    return R4Scan(maximizers[-1], best, alphas, curve, resid, maximizers)
