"""Relative projection constants of subspaces of l_inf^N.

Every projection onto ``E = span(columns of F)`` has the form ``P = F C``
with ``C F = I``. Its norm on l_inf is the largest absolute row sum.
``minimal_projection`` minimizes that norm, either exactly by linear
programming (real field) or by multi-start smoothed descent.
"""

from __future__ import annotations

import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np
import scipy.linalg

from .equiangular import LineSystem, extremal_parameters
from .errors import (
    DomainError,
    InvalidWitnessError,
    RankError,
    ShapeError,
    SolverError,
    UnsupportedMethodError,
)
from .linalg import check_field, dtype_for, gram_matrix, inf_operator_norm, matrix_rank, null_space
from .simplex import linprog

EPS_SCHEDULE = (1e-2, 1e-3, 1e-4, 1e-5, 1e-6, 1e-7, 1e-8)


@dataclass(frozen=True)
class SubspaceBasis:
    field: str
    F: np.ndarray

    def __post_init__(self):
        check_field(self.field)
        F = np.array(self.F, dtype=dtype_for(self.field))
        if F.ndim != 2 or F.size == 0:
            raise ShapeError("F must be a nonempty N x n matrix")
        if F.shape[1] > F.shape[0] or matrix_rank(F, 1e-10) < F.shape[1]:
            raise RankError("columns of F must be linearly independent")
        object.__setattr__(self, "F", F)

    @property
    def N(self) -> int:
        return self.F.shape[0]

    @property
    def n(self) -> int:
        return self.F.shape[1]

    @classmethod
    def from_system(cls, system: LineSystem) -> "SubspaceBasis":
        """Embed via ``f_j(s) = sqrt(n) (z_s)_j``, the isometric copy in l_inf^N."""
        return cls(system.field, np.sqrt(system.n) * system.vectors)


@dataclass(frozen=True)
class ProjectionResult:
    P: np.ndarray
    norm: float
    idempotency_residual: float
    range_residual: float
    method: str = ""
    lower_bound: float | None = None
    witness: "TraceDualityWitness | None" = None

    @classmethod
    def build(cls, P, F, method, lower_bound=None, witness=None):
        return cls(
            P=P,
            norm=inf_operator_norm(P),
            idempotency_residual=float(np.linalg.norm(P @ P - P)),
            range_residual=float(np.linalg.norm(P @ F - F)),
            method=method,
            lower_bound=lower_bound,
            witness=witness,
        )


@dataclass(frozen=True)
class TraceDualityWitness:
    """A map ``u`` on l_inf^N with ``u(E) ⊆ E``, scaled to unit column-norm sum."""

    u: np.ndarray
    column_norm_sum: float

    @classmethod
    def normalized(cls, u) -> "TraceDualityWitness":
        u = np.asarray(u)
        total = float(np.abs(u).max(axis=0).sum())
        if total == 0:
            raise InvalidWitnessError("zero map is not a witness")
        u = u / total
        return cls(u, float(np.abs(u).max(axis=0).sum()))


def orthogonal_projection(system: LineSystem) -> ProjectionResult:
    """``P = (n/N) Gram(z)``, the orthogonal projection when ``z`` is a uniform tight frame."""
    if matrix_rank(system.vectors, 1e-10) < system.n:
        raise RankError("vectors do not span K^n, so (n/N) Gram is not a projection")
    P = (system.n / system.N) * gram_matrix(system.vectors)
    F = np.sqrt(system.n) * system.vectors
    return ProjectionResult.build(P, F, "orthogonal")


def trace_on_subspace(u, basis: SubspaceBasis, tol: float = 1e-8) -> complex:
    """Trace of ``u`` restricted to ``E``; raises if ``u`` does not preserve ``E``."""
    F = basis.F
    uF = np.asarray(u) @ F
    R, *_ = np.linalg.lstsq(F, uF, rcond=None)
    resid = np.linalg.norm(F @ R - uF)
    if resid > tol * max(1.0, np.linalg.norm(uF)):
        raise InvalidWitnessError(f"u does not map E into E (residual {resid:.3e})")
    return complex(np.trace(R))


def trace_duality_lower_bound(witness: TraceDualityWitness, basis: SubspaceBasis) -> float:
    """``Re tr(u|E)``, a lower bound for the relative projection constant."""
    if abs(witness.column_norm_sum - 1.0) > 1e-10:
        raise InvalidWitnessError("witness must have unit column-norm sum")
    return trace_on_subspace(witness.u, basis).real


def sign_gram_witness(system: LineSystem) -> TraceDualityWitness:
    """Witness with entries ``sgn <z_s, z_t>`` weighted by ``mu_s`` (uniform if unweighted)."""
    G = gram_matrix(system.vectors)
    mag = np.abs(G)
    S = np.divide(G, mag, out=np.zeros_like(G), where=mag > 1e-12)
    mu = system.weights if system.weights is not None else np.full(system.N, 1.0 / system.N)
    return TraceDualityWitness.normalized(S * mu[None, :])


def random_witness(basis: SubspaceBasis, rng: np.random.Generator) -> TraceDualityWitness:
    """Random ``u = F X + V Q^*`` with ``Q^* F = 0``, so ``u(E) ⊆ E``."""
    F = basis.F
    dtype = F.dtype
    Q = null_space(F.conj().T)

    def gauss(*shape):
        g = rng.standard_normal(shape)
        return g + 1j * rng.standard_normal(shape) if dtype == np.complex128 else g

    u = F @ gauss(basis.n, basis.N)
    if Q.shape[1]:
        u = u + gauss(basis.N, Q.shape[1]) @ Q.conj().T
    return TraceDualityWitness.normalized(u)


# --- exact LP -------------------------------------------------------------------

def _build_lp(F):
    """Variables ``[C+, C-, A+, A-, t]``; minimize t."""
    N, n = F.shape
    nc, na = n * N, N * N
    nv = 2 * nc + 2 * na + 1
    c = np.zeros(nv)
    c[-1] = 1.0
    IN = np.eye(N)

    # A+ - A- - F C = 0
    eq1 = np.zeros((na, nv))
    KC = np.kron(F, IN)
    eq1[:, :nc] = -KC
    eq1[:, nc:2 * nc] = KC
    eq1[:, 2 * nc:2 * nc + na] = np.eye(na)
    eq1[:, 2 * nc + na:2 * nc + 2 * na] = -np.eye(na)

    # C F = I
    eq2 = np.zeros((n * n, nv))
    KF = np.kron(np.eye(n), F.T)
    eq2[:, :nc] = KF
    eq2[:, nc:2 * nc] = -KF

    # sum_u (A+ + A-)_{su} <= t
    ub = np.zeros((N, nv))
    KR = np.kron(IN, np.ones(N))
    ub[:, 2 * nc:2 * nc + na] = KR
    ub[:, 2 * nc + na:2 * nc + 2 * na] = KR
    ub[:, -1] = -1.0

    A_eq = np.vstack([eq1, eq2])
    b_eq = np.concatenate([np.zeros(na), np.eye(n).ravel()])
    return c, ub, np.zeros(N), A_eq, b_eq


def _crash_basis(F):
    """A feasible starting basis, so the LP needs no phase 1.

    ``C`` is supported on ``n`` well-conditioned rows of ``F`` (``C = F_sub^-1``
    there), each entry of ``A = F C`` is carried by ``A+`` or ``A-`` by sign,
    and ``t`` is basic in the row with the largest absolute sum.
    """
    N, n = F.shape
    nc, na = n * N, N * N
    nv = 2 * nc + 2 * na + 1
    _, _, piv = scipy.linalg.qr(F.T, pivoting=True)
    rows = np.sort(piv[:n])
    C = np.zeros((n, N))
    C[:, rows] = np.linalg.inv(F[rows])
    A = F @ C

    basis = []
    top = int(np.argmax(np.abs(A).sum(axis=1)))
    for s in range(N):
        basis.append(nv - 1 if s == top else nv + s)
    for s in range(N):
        for u in range(N):
            basis.append(2 * nc + s * N + u + (na if A[s, u] < 0 else 0))
    for j in range(n):
        for u in rows:
            basis.append(j * N + u + (nc if C[j, u] < 0 else 0))
    return basis


def _lp_projection(basis: SubspaceBasis) -> ProjectionResult:
    F = basis.F
    N, n = F.shape
    c, A_ub, b_ub, A_eq, b_eq = _build_lp(F)
    res = linprog(c, A_ub, b_ub, A_eq, b_eq, initial_basis=_crash_basis(F))
    # a rank-n F always admits a projection and the objective is bounded below by 0
    if not res.success:
        raise SolverError(f"LP for the minimal projection terminated with status {res.status!r}")
    nc = n * N
    C = (res.x[:nc] - res.x[nc:2 * nc]).reshape(n, N)
    P = F @ C

    witness, lower = None, None
    Y = res.y_eq[:N * N].reshape(N, N)
    candidates = []
    for sgn in (1.0, -1.0):
        try:
            w = TraceDualityWitness.normalized(sgn * Y.T)
            candidates.append((trace_duality_lower_bound(w, basis), w))
        except InvalidWitnessError:
            continue
    if candidates:
        lower, witness = max(candidates, key=lambda item: item[0])
    return ProjectionResult.build(P, F, "lp-exact", lower, witness)


# --- smoothed multi-start descent ------------------------------------------------

def _smoothed_norm(P, eps):
    """Smooth surrogate of the max row sum and its gradient with respect to conj(P)."""
    rho = np.sqrt(np.abs(P) ** 2 + eps * eps)
    rows = rho.sum(axis=1)
    top = rows.max()
    w = np.exp((rows - top) / eps)
    w /= w.sum()
    value = top + eps * np.log(np.sum(np.exp((rows - top) / eps)))
    grad = w[:, None] * P / rho
    return value, grad


def _descent_run(F, C0, Q, M, iters):
    """Gradient descent on the smoothed objective over ``C = C0 + M Q^*``."""
    best_val = np.inf
    best_P = None
    step = 1.0
    for eps in EPS_SCHEDULE:
        P = F @ (C0 + M @ Q.conj().T)
        val, grad = _smoothed_norm(P, eps)
        for _ in range(iters):
            gM = F.conj().T @ grad @ Q
            gnorm2 = float(np.sum(np.abs(gM) ** 2))
            if gnorm2 < 1e-30:
                break
            while True:
                M_new = M - step * gM
                P_new = F @ (C0 + M_new @ Q.conj().T)
                val_new, grad_new = _smoothed_norm(P_new, eps)
                if val_new <= val - 0.25 * step * gnorm2 or step < 1e-14:
                    break
                step *= 0.5
            if val_new > val:
                break
            M, P, val, grad = M_new, P_new, val_new, grad_new
            step *= 2.0
            true = inf_operator_norm(P)
            if true < best_val:
                best_val, best_P = true, P
    if best_P is None:
        best_P = F @ (C0 + M @ Q.conj().T)
        best_val = inf_operator_norm(best_P)
    return best_val, best_P


def _threads() -> int:
    try:
        return max(1, int(os.environ.get("PROJCONST_THREADS", "1")))
    except ValueError:
        return 1


def _descent_projection(basis: SubspaceBasis, restarts: int, iters: int, seed: int) -> ProjectionResult:
    F = basis.F
    N, n = F.shape
    C0 = np.linalg.pinv(F)
    Q = null_space(F.conj().T)
    if Q.shape[1] == 0:
        return ProjectionResult.build(F @ C0, F, "descent")

    def start(i):
        rng = np.random.default_rng([seed, i])
        if i == 0:
            M = np.zeros((n, Q.shape[1]), dtype=F.dtype)
        else:
            M = rng.standard_normal((n, Q.shape[1]))
            if F.dtype == np.complex128:
                M = M + 1j * rng.standard_normal(M.shape)
            M = 0.5 * M / np.sqrt(N)
        return _descent_run(F, C0, Q, M.astype(F.dtype), iters)

    with ThreadPoolExecutor(max_workers=_threads()) as pool:
        runs = list(pool.map(start, range(restarts)))
    # ties go to the earliest seed, so the merge is reproducible
    best = min(range(restarts), key=lambda i: (runs[i][0], i))
    return ProjectionResult.build(runs[best][1], F, "descent")


def minimal_projection(basis: SubspaceBasis, method: str = "lp-exact", *, restarts: int = 32,
                       iters: int = 200, seed: int = 0) -> ProjectionResult:
    """Projection onto ``E`` of (near) minimal l_inf operator norm.

    ``lp-exact`` returns the relative projection constant itself together
    with a trace-duality lower bound read off the LP dual. ``descent``
    returns the best projection found, an upper bound.
    """
    if method == "lp-exact":
        if basis.field != "real":
            raise UnsupportedMethodError("lp-exact applies to the real field only; use descent")
        return _lp_projection(basis)
    if method == "descent":
        return _descent_projection(basis, restarts, iters, seed)
    raise UnsupportedMethodError(f"unknown method {method!r}")


# --- bounds -----------------------------------------------------------------------

def projection_bound(n: int, field: str) -> float:
    """Upper bound for the projection constant of any n-dimensional space."""
    if n < 1:
        raise DomainError("dimension must be at least 1")
    if check_field(field) == "real":
        return (2 + (n - 1) * np.sqrt(n + 2)) / (n + 1)
    return (1 + (n - 1) * np.sqrt(n + 1)) / n


def bounds_summary(n: int, field: str) -> dict:
    G = projection_bound(n, field)
    N, alpha = extremal_parameters(n, field)
    rn = np.sqrt(n)
    if field == "real":
        asym = rn - 1 / rn + 2 / n
    else:
        asym = rn - 1 / (2 * rn) + 1 / n
    return {
        "G": float(G),
        "kadec_snobar": float(rn),
        "asymptotic": float(asym),
        "equality_chain": float(n * alpha + (n / N) * (1 - alpha)),
    }
