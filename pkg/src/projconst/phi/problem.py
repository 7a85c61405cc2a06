"""The weighted absolute-Gram functional and its multi-start maximizer.

A state is a pair ``(Z, Lambda)`` with ``Z`` an N x n matrix of orthonormal
columns and ``Lambda`` a nonnegative unit vector. Row ``s`` of ``Z`` is
``f(s) sqrt(mu_s)`` and ``Lambda_s = sqrt(mu_s)``, so the functional

    F(Z, Lambda) = sum_{s,t} |<z_s, z_t>| Lambda_s Lambda_t

equals ``sum |<f(s), f(t)>| mu_s mu_t`` for an orthonormal system ``f`` in
``L2(mu)``. Its maximum over N-point measures is ``phi(n, N)``.
"""

from __future__ import annotations

import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from ..equiangular import LineSystem
from ..errors import DomainError, ShapeError
from ..linalg import check_field, dtype_for, gram_matrix, polar_factor

EPS_SCHEDULE = (1e-2, 1e-3, 1e-4, 1e-5, 1e-6, 1e-7, 1e-8)
POLISH_ITERS = 5000


@dataclass(frozen=True)
class PhiProblem:
    n: int
    N: int
    field: str = "real"

    def __post_init__(self):
        check_field(self.field)
        if self.n < 1:
            raise DomainError("n must be at least 1")
        if self.n > self.N:
            raise DomainError(f"need n <= N, got n={self.n}, N={self.N}")


@dataclass(frozen=True)
class PhiState:
    field: str
    Z: np.ndarray
    Lambda: np.ndarray
    objective: float
    orthonormality_residual: float
    mass_residual: float
    seed: int | None = None

    @classmethod
    def from_arrays(cls, field, Z, Lambda, seed=None) -> "PhiState":
        check_field(field)
        Z = np.array(Z, dtype=dtype_for(field))
        Lambda = np.array(Lambda, dtype=float)
        if Z.ndim != 2 or Lambda.shape != (Z.shape[0],):
            raise ShapeError(f"Z must be N x n and Lambda length N; got {Z.shape} and {Lambda.shape}")
        n = Z.shape[1]
        ortho = float(np.linalg.norm(Z.conj().T @ Z - np.eye(n)))
        mass = float(abs(np.sum(Lambda ** 2) - 1.0))
        return cls(field, Z, Lambda, _objective(Z, Lambda), ortho, mass, seed)

    @property
    def n(self) -> int:
        return self.Z.shape[1]

    @property
    def N(self) -> int:
        return self.Z.shape[0]

    @property
    def mu(self) -> np.ndarray:
        return self.Lambda ** 2


def _objective(Z, Lambda) -> float:
    return float(Lambda @ np.abs(gram_matrix(Z)) @ Lambda)


def phi_objective(state: PhiState) -> float:
    """``sum_{s,t} |<z_s, z_t>| Lambda_s Lambda_t``, diagonal terms included."""
    return _objective(state.Z, state.Lambda)


def state_from_system(system: LineSystem) -> PhiState:
    """The state of the orthonormal system ``f_j(s) = sqrt(n) (z_s)_j`` on ``mu``.

    Orthonormality of ``f`` in ``L2(mu)`` is the tight-frame condition, so the
    returned residual is small exactly when the weighted system is tight.
    Unweighted systems get the uniform measure.
    """
    mu = system.weights if system.weights is not None else np.full(system.N, 1.0 / system.N)
    Z = np.sqrt(system.n) * system.vectors * np.sqrt(mu)[:, None]
    return PhiState.from_arrays(system.field, Z, np.sqrt(mu))


# --- ascent --------------------------------------------------------------------

def _smoothed(Z, Lambda, eps):
    G = gram_matrix(Z)
    rho = np.sqrt(np.abs(G) ** 2 + eps * eps)
    W = np.outer(Lambda, Lambda)
    value = float(np.sum(rho * W))
    gZ = 2.0 * ((G / rho) * W) @ Z
    gL = 2.0 * rho.real @ Lambda
    return value, gZ, gL


def _retract(Z, Lambda):
    L = np.abs(Lambda)
    return polar_factor(Z), L / np.linalg.norm(L)


def _ascend(Z, Lambda, iters, schedule):
    """Projected gradient ascent on the smoothed functional, one pass per eps."""
    step = 1.0
    for eps in schedule:
        val, gZ, gL = _smoothed(Z, Lambda, eps)
        for _ in range(iters):
            while True:
                Zn, Ln = _retract(Z + step * gZ, Lambda + step * gL)
                vn, gZn, gLn = _smoothed(Zn, Ln, eps)
                if vn >= val or step < 1e-12:
                    break
                step *= 0.5
            if vn < val:
                break
            gain = vn - val
            Z, Lambda, val, gZ, gL = Zn, Ln, vn, gZn, gLn
            step = min(step * 2.0, 1e3)
            if gain <= 1e-15 * max(1.0, val):
                break
    return Z, Lambda


def _sign(G):
    mag = np.abs(G)
    return np.divide(G, mag, out=np.zeros_like(G), where=mag > 0)


def _polish(Z, Lambda, iters):
    """Monotone minorize-maximize steps with the exact modulus.

    For fixed ``Z`` the best ``Lambda`` is the Perron vector of ``|G|``. For
    fixed signs, ``tr(Z^* A Z)`` with ``A = sgn(G) o Lambda Lambda^T`` minorizes
    the functional and touches it at the current ``Z``; its maximizer over
    orthonormal ``Z`` spans the top ``n`` eigenvectors of ``A``. A fixed point
    satisfies the first-order conditions ``A Z = Z Gamma``, ``|G| Lambda = beta Lambda``.
    """
    n = Z.shape[1]
    val = _objective(Z, Lambda)
    for _ in range(iters):
        _, V = np.linalg.eigh(np.abs(gram_matrix(Z)))
        L = np.abs(V[:, -1])
        A = _sign(gram_matrix(Z)) * np.outer(L, L)
        _, U = np.linalg.eigh(A)
        Zn = U[:, -n:]
        vn = _objective(Zn, L)
        if vn < val:
            break
        done = vn - val <= 1e-16 * max(1.0, val)
        Z, Lambda, val = Zn, L, vn
        if done:
            break
    return Z, Lambda


def _threads() -> int:
    try:
        return max(1, int(os.environ.get("PROJCONST_THREADS", "1")))
    except ValueError:
        return 1


def _initial(problem: PhiProblem, rng):
    shape = (problem.N, problem.n)
    Z = rng.standard_normal(shape)
    if problem.field == "complex":
        Z = Z + 1j * rng.standard_normal(shape)
    return polar_factor(Z), np.full(problem.N, 1.0 / np.sqrt(problem.N))


def maximize_phi(problem, N=None, field="real", *, restarts=32, iters=200, smoothing=EPS_SCHEDULE,
                 seed=0, polish=POLISH_ITERS) -> PhiState:
    """Best state found by multi-start smoothed projected ascent.

    ``problem`` is a ``PhiProblem`` or the dimension ``n`` (then ``N`` and
    ``field`` are required). Each restart draws a Gaussian ``Z`` from
    ``default_rng([seed, i])``, ascends the functional with the modulus
    smoothed to ``sqrt(|g|^2 + eps^2)`` along ``smoothing``, retracting onto
    the constraints after every step, and is then polished with the exact
    modulus. The result is feasible and its objective is a lower bound for
    ``phi(n, N)``.
    """
    if not isinstance(problem, PhiProblem):
        problem = PhiProblem(int(problem), int(N), field)
    if restarts < 1:
        raise DomainError("need at least one restart")

    def run(i):
        rng = np.random.default_rng([seed, i])
        Z, L = _initial(problem, rng)
        Z, L = _ascend(Z, L, iters, smoothing)
        Z, L = _polish(Z, L, polish)
        Z, L = _retract(Z, L)
        return _objective(Z, L), Z, L

    with ThreadPoolExecutor(max_workers=_threads()) as pool:
        runs = list(pool.map(run, range(restarts)))
    best = min(range(restarts), key=lambda i: (-runs[i][0], i))
    _, Z, L = runs[best]
    return PhiState.from_arrays(problem.field, Z, L, seed=seed)
