"""Dense real/complex linear algebra used throughout the package.

Matrices are plain numpy arrays. The real field uses ``float64`` and the
complex field ``complex128``; every routine here accepts either, so a single
code path serves both fields.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Literal

import numpy as np

from .errors import DimensionError, ShapeError

Field = Literal["real", "complex"]
FIELDS = ("real", "complex")

ABS_TOL = 1e-14
JACOBI_TOL = 1e-12
HERMITIAN_TOL = 1e-12


def check_field(field: str) -> str:
    if field not in FIELDS:
        raise ValueError(f"field must be 'real' or 'complex', got {field!r}")
    return field


def dtype_for(field: str):
    return np.complex128 if check_field(field) == "complex" else np.float64


def field_of(a: np.ndarray) -> str:
    return "complex" if np.iscomplexobj(a) else "real"


def rel_tol(M: np.ndarray, tol: float) -> float:
    """Tolerance scaled by the Frobenius norm, with an absolute floor."""
    scale = float(np.linalg.norm(M))
    return tol * scale if scale > 0 else ABS_TOL


def inf_operator_norm(M) -> float:
    """Norm of ``M`` as an operator on l_inf: the largest absolute row sum."""
    M = np.asarray(M)
    if M.ndim != 2 or M.size == 0:
        raise DimensionError("inf_operator_norm needs a nonempty 2-d matrix")
    return float(np.abs(M).sum(axis=1).max())


@dataclass(frozen=True)
class HermitianEigenResult:
    eigenvalues: np.ndarray
    eigenvectors: np.ndarray
    sweeps: int = 0

    def reconstruct(self) -> np.ndarray:
        V = self.eigenvectors
        return (V * self.eigenvalues) @ V.conj().T


def _off_norm(A: np.ndarray) -> float:
    off = A.copy()
    np.fill_diagonal(off, 0.0)
    return float(np.linalg.norm(off))


def hermitian_eigendecomposition(M, tol: float = JACOBI_TOL, max_sweeps: int = 100) -> HermitianEigenResult:
    """Eigen-decompose a Hermitian matrix with cyclic Jacobi rotations.

    Each rotation annihilates one off-diagonal pair ``(p, q)``. For complex
    entries the rotation carries the phase of ``M[p, q]`` so that the same
    real 2x2 Jacobi angle applies. Sweeps stop once the off-diagonal
    Frobenius mass drops below ``tol * ||M||_F``.

    Returns eigenvalues in ascending order with orthonormal eigenvectors
    as columns.
    """
    M = np.asarray(M)
    if M.ndim != 2 or M.shape[0] != M.shape[1]:
        raise ShapeError(f"expected a square matrix, got shape {M.shape}")
    n = M.shape[0]
    if n == 0:
        raise DimensionError("empty matrix")
    if np.linalg.norm(M - M.conj().T) > rel_tol(M, HERMITIAN_TOL):
        raise ShapeError("matrix is not Hermitian within tolerance")

    is_complex = np.iscomplexobj(M)
    dtype = np.complex128 if is_complex else np.float64
    A = ((M + M.conj().T) / 2).astype(dtype)
    V = np.eye(n, dtype=dtype)
    threshold = rel_tol(M, tol)

    sweeps = 0
    while _off_norm(A) > threshold:
        if sweeps >= max_sweeps:
            raise RuntimeError("Jacobi iteration did not converge")
        sweeps += 1
        for p in range(n - 1):
            for q in range(p + 1, n):
                apq = A[p, q]
                mag = abs(apq)
                if mag <= ABS_TOL * 1e-6:
                    continue
                phase = apq / mag
                theta = (A[q, q].real - A[p, p].real) / (2.0 * mag)
                t = 1.0 / (abs(theta) + np.sqrt(theta * theta + 1.0))
                if theta < 0:
                    t = -t
                c = 1.0 / np.sqrt(t * t + 1.0)
                s = t * c
                R = np.array([[c, s * phase], [-s * np.conj(phase), c]], dtype=dtype)
                idx = [p, q]
                A[:, idx] = A[:, idx] @ R
                A[idx, :] = R.conj().T @ A[idx, :]
                A[p, q] = A[q, p] = 0.0
                V[:, idx] = V[:, idx] @ R

    w = np.diag(A).real.copy()
    order = np.argsort(w, kind="stable")
    return HermitianEigenResult(w[order], V[:, order], sweeps)


def gram_matrix(vectors) -> np.ndarray:
    """Gram matrix ``G[s, t] = <z_s, z_t>`` of the rows of ``vectors``.

    The inner product is linear in the first slot and conjugate-linear in
    the second, so ``G = Z Z^*``. Accepts an array or any object with a
    ``vectors`` attribute (a ``LineSystem``).
    """
    vectors = getattr(vectors, "vectors", vectors)
    try:
        Z = np.asarray(vectors)
    except ValueError as exc:
        raise ShapeError(f"vectors have mixed dimensions: {exc}") from None
    if Z.ndim != 2:
        raise ShapeError("vectors must be a 2-d array with one vector per row")
    return Z @ Z.conj().T


def matrix_rank(M, tol: float) -> int:
    """Numerical rank relative to the largest singular value."""
    M = np.asarray(M)
    if M.size == 0:
        return 0
    sv = np.linalg.svd(M, compute_uv=False)
    if sv[0] == 0:
        return 0
    return int(np.sum(sv > tol * sv[0]))


def null_space(M, tol: float = 1e-10) -> np.ndarray:
    """Orthonormal basis (columns) of the null space of ``M``."""
    M = np.atleast_2d(np.asarray(M))
    _, sv, Vh = np.linalg.svd(M, full_matrices=True)
    cutoff = tol * (sv[0] if sv.size and sv[0] > 0 else 1.0)
    rank = int(np.sum(sv > cutoff))
    return Vh[rank:].conj().T


def polar_factor(Z: np.ndarray) -> np.ndarray:
    """Closest matrix with orthonormal columns, ``Z (Z^* Z)^{-1/2}``."""
    U, _, Vh = np.linalg.svd(Z, full_matrices=False)
    return U @ Vh
