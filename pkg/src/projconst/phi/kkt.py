"""First- and second-order optimality diagnostics for phi states.

With ``G = Z Z^*``, ``A = sgn(G) o Lambda Lambda^T`` and ``B = |G|``, a
critical point of the functional on the constraint set satisfies

    A Z = Z Gamma,      B Lambda = beta Lambda,

with a Hermitian multiplier matrix ``Gamma``. Rotating the columns of ``Z``
by the eigenvectors of ``Gamma`` turns the first system into ``n`` eigenvalue
equations ``A z_k = alpha_k z_k``.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ..errors import PreconditionError
from ..linalg import gram_matrix, hermitian_eigendecomposition, null_space
from .problem import PhiState

FEASIBILITY_TOL = 1e-8
SUPPORT_TOL = 1e-10
CONNECTIVITY_TOL = 1e-8
SMOOTHNESS_TOL = 1e-8
HESSIAN_KKT_TOL = 1e-6


@dataclass(frozen=True)
class KktDiagnostics:
    A: np.ndarray
    B: np.ndarray
    Gamma: np.ndarray
    alpha_eigs: np.ndarray
    beta: float
    eigen_residual: float
    square_function: np.ndarray
    connectivity: bool
    rotated_Z: np.ndarray

    @property
    def alpha_spread(self) -> float:
        """Relative spread ``(max - min) / max |alpha_k|`` of the multipliers."""
        a = self.alpha_eigs
        return float((a.max() - a.min()) / max(np.abs(a).max(), 1e-300))

    @property
    def beta_over_alpha(self) -> float:
        return float(self.beta / self.alpha_eigs.mean())

    def square_function_spread(self, support=None) -> float:
        """``max |f0(s) - sqrt(n)|`` over the support of the measure."""
        n = self.rotated_Z.shape[1]
        f0 = self.square_function
        mask = f0 > 0 if support is None else support
        return float(np.abs(f0[mask] - np.sqrt(n)).max()) if mask.any() else 0.0


def _sign(G):
    mag = np.abs(G)
    return np.divide(G, mag, out=np.zeros_like(G), where=mag > 0)


def _check_feasible(state: PhiState):
    if state.orthonormality_residual > FEASIBILITY_TOL or state.mass_residual > FEASIBILITY_TOL:
        raise PreconditionError(
            f"state is not feasible (orthonormality {state.orthonormality_residual:.2e}, "
            f"mass {state.mass_residual:.2e})"
        )
    if state.Lambda.min() < 0:
        raise PreconditionError("Lambda must be nonnegative")


def _connected(Z, tol) -> bool:
    """Columns ``l ~ m`` when some row has ``|Z_sl Z_sm| > tol``; is the graph connected?"""
    mag = np.abs(Z)
    link = (mag[:, :, None] * mag[:, None, :] > tol).any(axis=0)
    seen = {0}
    frontier = [0]
    while frontier:
        l = frontier.pop()
        for m in np.flatnonzero(link[l]):
            if m not in seen:
                seen.add(int(m))
                frontier.append(int(m))
    return len(seen) == Z.shape[1]


def kkt_diagnostics(state: PhiState) -> KktDiagnostics:
    """Multipliers and residuals of the first-order conditions at ``state``.

    Moduli and signs are exact here (no smoothing). ``Gamma = Z^* A Z`` is the
    least-squares multiplier, symmetrized before diagonalization.
    """
    _check_feasible(state)
    Z, L = state.Z, state.Lambda
    G = gram_matrix(Z)
    W = np.outer(L, L)
    A = _sign(G) * W
    B = np.abs(G)

    Gamma = Z.conj().T @ A @ Z
    Gamma = (Gamma + Gamma.conj().T) / 2
    eig = hermitian_eigendecomposition(Gamma)
    alphas = eig.eigenvalues
    Zr = Z @ eig.eigenvectors

    beta = float(L @ B @ L)
    col_res = max(float(np.linalg.norm(A @ Zr[:, k] - alphas[k] * Zr[:, k])) for k in range(Zr.shape[1]))
    lam_res = float(np.linalg.norm(B @ L - beta * L))

    mu = L ** 2
    f0 = np.zeros(state.N)
    support = mu >= SUPPORT_TOL
    f0[support] = np.linalg.norm(Z[support], axis=1) / L[support]

    return KktDiagnostics(
        A=A,
        B=B,
        Gamma=Gamma,
        alpha_eigs=alphas,
        beta=beta,
        eigen_residual=col_res + lam_res,
        square_function=f0,
        connectivity=_connected(Zr, CONNECTIVITY_TOL),
        rotated_Z=Zr,
    )


# --- second order --------------------------------------------------------------

@dataclass(frozen=True)
class HessianCheck:
    H: np.ndarray
    tangent_basis: np.ndarray
    max_tangent_eigenvalue: float

    @property
    def tangent_dimension(self) -> int:
        return self.tangent_basis.shape[1]

    def passed(self, tol: float = 1e-6) -> bool:
        return self.max_tangent_eigenvalue <= tol


def lagrangian_hessian(Z, Lambda, alphas, beta) -> np.ndarray:
    """Hessian of ``F/2 - sum_k alpha_k (|z_k|^2 - 1)/2 - beta (|Lambda|^2 - 1)/2``.

    Variables are ordered ``[z_1, ..., z_n, Lambda]`` (columns of ``Z``, each
    of length N). ``Z`` must be in the frame where ``Gamma`` is diagonal.
    The coupling block ``C_k[p, q] = d^2/dZ_pk dLambda_q`` is
    ``sgn(G_pq) Lambda_p Z_qk`` off the diagonal and
    ``sum_t sgn(G_pt) Lambda_t Z_tk + Lambda_p Z_pk`` on it.
    """
    N, n = Z.shape
    G = gram_matrix(Z)
    S = _sign(G)
    A = S * np.outer(Lambda, Lambda)
    B = np.abs(G)
    H = np.zeros((N * (n + 1), N * (n + 1)))
    for k in range(n):
        blk = slice(k * N, (k + 1) * N)
        H[blk, blk] = A - alphas[k] * np.eye(N)
        C = S * np.outer(Lambda, Z[:, k])
        C[np.diag_indices(N)] += S @ (Lambda * Z[:, k])
        H[blk, n * N:] = C
        H[n * N:, blk] = C.T
    H[n * N:, n * N:] = B - beta * np.eye(N)
    return H


def constraint_gradients(Z, Lambda) -> np.ndarray:
    """Rows: gradients of ``<z_l, z_m>`` (l <= m) and of ``|Lambda|^2``."""
    N, n = Z.shape
    rows = []
    for l in range(n):
        for m in range(l, n):
            g = np.zeros(N * (n + 1))
            g[l * N:(l + 1) * N] += Z[:, m]
            g[m * N:(m + 1) * N] += Z[:, l]
            rows.append(g)
    g = np.zeros(N * (n + 1))
    g[n * N:] = 2 * Lambda
    rows.append(g)
    return np.array(rows)


def projected_hessian_check(state: PhiState) -> HessianCheck:
    """Largest eigenvalue of the Lagrangian Hessian on the tangent space (real field).

    At a local maximizer this is at most zero up to rounding. States with a
    vanishing inner product ``<z_s, z_t>`` are refused: the modulus is not
    differentiable there.
    """
    if state.field != "real":
        raise PreconditionError("the second-order check is implemented for the real field only")
    diag = kkt_diagnostics(state)
    if diag.eigen_residual > HESSIAN_KKT_TOL:
        raise PreconditionError(f"state is not critical (KKT residual {diag.eigen_residual:.2e})")
    G = gram_matrix(state.Z)
    if np.abs(G).min() <= SMOOTHNESS_TOL:
        raise PreconditionError("some inner products vanish; the functional is not smooth at this state")

    Z = diag.rotated_Z.real
    H = lagrangian_hessian(Z, state.Lambda, diag.alpha_eigs, diag.beta)
    T = null_space(constraint_gradients(Z, state.Lambda))
    if T.shape[1] == 0:
        return HessianCheck(H, T, 0.0)
    Hp = T.T @ H @ T
    top = float(hermitian_eigendecomposition((Hp + Hp.T) / 2).eigenvalues[-1])
    return HessianCheck(H, T, top)
