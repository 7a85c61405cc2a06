"""Equiangular line systems, weighted tight frames and their certificates."""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field as dc_field

import numpy as np

from .errors import DomainError, PreconditionError, ShapeError, UnsupportedConstructionError
from .linalg import check_field, dtype_for, gram_matrix, hermitian_eigendecomposition

UNIT_TOL = 1e-12
RANK_ONE_TOL = 1e-9

KNOWN_SYSTEMS = (("real", 2), ("real", 3), ("real", 7), ("complex", 2), ("complex", 3))


@dataclass(frozen=True)
class LineSystem:
    """``N`` unit vectors in K^n (one per row) with optional probability weights."""

    field: str
    vectors: np.ndarray
    weights: np.ndarray | None = None
    label: str = dc_field(default="", compare=False)

    def __post_init__(self):
        check_field(self.field)
        V = np.array(self.vectors, dtype=dtype_for(self.field))
        if V.ndim != 2 or V.shape[0] == 0 or V.shape[1] == 0:
            raise ShapeError(f"vectors must form a nonempty N x n array, got shape {V.shape}")
        norms = np.linalg.norm(V, axis=1)
        if np.abs(norms - 1.0).max() > UNIT_TOL:
            raise PreconditionError("all vectors must have unit Euclidean norm")
        object.__setattr__(self, "vectors", V)
        if self.weights is not None:
            w = np.array(self.weights, dtype=float)
            if w.shape != (V.shape[0],):
                raise ShapeError("weights must have one entry per vector")
            if w.min() < 0 or abs(w.sum() - 1.0) > UNIT_TOL:
                raise PreconditionError("weights must be a probability vector")
            object.__setattr__(self, "weights", w)

    @property
    def n(self) -> int:
        return self.vectors.shape[1]

    @property
    def N(self) -> int:
        return self.vectors.shape[0]

    def with_weights(self, weights) -> "LineSystem":
        return LineSystem(self.field, self.vectors, weights, self.label)

    def uniform(self) -> "LineSystem":
        return self.with_weights(np.full(self.N, 1.0 / self.N))

    def canonical_vectors(self) -> np.ndarray:
        """Line representatives whose first nonzero coordinate is real positive."""
        V = self.vectors.copy()
        for row in V:
            nz = np.flatnonzero(np.abs(row) > 1e-12)
            if nz.size:
                lead = row[nz[0]]
                row *= np.conj(lead) / abs(lead)
        return V

    def is_minimal(self, tol: float = 1e-9) -> bool:
        """True when no two vectors span the same line."""
        C = self.canonical_vectors()
        for s, t in itertools.combinations(range(self.N), 2):
            if np.linalg.norm(C[s] - C[t]) <= tol:
                return False
        return True


@dataclass(frozen=True)
class EquiangularCertificate:
    common_angle: float
    max_deviation: float
    gerzon_saturated: bool
    forced_angle_matched: bool


def gerzon_bound(n: int, field: str) -> int:
    if n < 1:
        raise DomainError("dimension must be at least 1")
    return n * (n + 1) // 2 if check_field(field) == "real" else n * n


def extremal_parameters(n: int, field: str) -> tuple[int, float]:
    """Maximal number of equiangular lines in K^n and the angle forced at equality."""
    N = gerzon_bound(n, field)
    alpha = 1.0 / np.sqrt(n + 2) if field == "real" else 1.0 / np.sqrt(n + 1)
    return N, float(alpha)


def verify_equiangular(system: LineSystem, tol: float = 1e-12) -> EquiangularCertificate:
    if system.N < 2:
        raise DomainError("equiangularity needs at least two vectors")
    moduli = np.abs(gram_matrix(system.vectors))
    off = moduli[~np.eye(system.N, dtype=bool)]
    alpha = float(off.mean())
    dev = float(np.abs(off - alpha).max())
    N_max, forced = extremal_parameters(system.n, system.field)
    return EquiangularCertificate(
        common_angle=alpha,
        max_deviation=dev,
        gerzon_saturated=bool(system.N == N_max and dev <= tol),
        forced_angle_matched=bool(abs(alpha - forced) <= tol),
    )


def tight_frame_residual(system: LineSystem) -> float:
    """Frobenius distance between ``n * sum_s mu_s z_s z_s^*`` and the identity."""
    if system.weights is None:
        raise PreconditionError("tight_frame_residual needs a weighted system")
    return frame_operator_residual(system.vectors, system.weights)


def frame_operator_residual(vectors, weights) -> float:
    Z = np.asarray(vectors)
    n = Z.shape[1]
    S = n * (Z.T * np.asarray(weights)) @ Z.conj()
    return float(np.linalg.norm(np.eye(n) - S))


def rank_one_independence(system: LineSystem, tol: float = RANK_ONE_TOL) -> tuple[bool, int]:
    """Linear independence of the projections ``z_s z_s^*``.

    Decided from the Hilbert-Schmidt Gram matrix ``|<z_s, z_t>|^2``. Returns
    the verdict together with the numerical rank.
    """
    H = np.abs(gram_matrix(system.vectors)) ** 2
    eig = hermitian_eigendecomposition(H).eigenvalues
    rank = int(np.sum(eig > tol * max(eig.max(), 1.0)))
    return rank == system.N, rank


# --- explicit constructions -------------------------------------------------

def _helmert_basis(d: int) -> np.ndarray:
    """Rows: orthonormal basis of the sum-zero hyperplane of R^d."""
    H = np.zeros((d - 1, d))
    for k in range(1, d):
        H[k - 1, :k] = 1.0
        H[k - 1, k] = -k
        H[k - 1] /= np.sqrt(k * (k + 1))
    return H


def _real2():
    angles = 2 * np.pi * np.arange(3) / 3
    return np.column_stack([np.cos(angles), np.sin(angles)])


def _real3():
    tau = np.sqrt((np.sqrt(5) + 1) / 2)
    sigma = np.sqrt((np.sqrt(5) - 1) / 2)
    rows = []
    for j in range(3):
        for sgn in (1.0, -1.0):
            v = np.zeros(3)
            v[j] = tau
            v[(j + 1) % 3] = sgn * sigma
            rows.append(v)
    return np.array(rows) / 5 ** 0.25


def _real7():
    ones = np.full(8, 0.25)
    raw = []
    for i, j in itertools.combinations(range(8), 2):
        v = -ones.copy()
        v[i] += 1.0
        v[j] += 1.0
        raw.append(v)
    V = np.array(raw) @ _helmert_basis(8).T
    return V / np.linalg.norm(V, axis=1)[:, None]


def _complex2():
    theta = np.arccos(-1.0 / 3.0)
    rows = [np.array([1.0, 0.0], dtype=complex)]
    for k in range(3):
        phi = 2 * np.pi * k / 3
        rows.append(np.array([np.cos(theta / 2), np.exp(1j * phi) * np.sin(theta / 2)]))
    return np.array(rows)


def _complex3():
    omega = np.exp(2j * np.pi / 3)
    rows = []
    for j in range(3):
        for k in range(3):
            v = np.zeros(3, dtype=complex)
            v[j] = 1.0
            v[(j + 1) % 3] = -omega ** k
            rows.append(v / np.sqrt(2))
    return np.array(rows)


_BUILDERS = {
    ("real", 2): (_real2, "hexagon"),
    ("real", 3): (_real3, "icosahedron diagonals"),
    ("real", 7): (_real7, "28 lines in R^7"),
    ("complex", 2): (_complex2, "tetrahedral SIC in C^2"),
    ("complex", 3): (_complex3, "Hesse SIC in C^3"),
}


def construct_known_system(n: int, field: str) -> LineSystem:
    """Return a saturated equiangular system (``N(n)`` lines) in K^n."""
    check_field(field)
    key = (field, n)
    if key not in _BUILDERS:
        if key == ("real", 23):
            raise UnsupportedConstructionError(
                "the 276 equiangular lines in R^23 (Leech lattice) are out of scope"
            )
        raise UnsupportedConstructionError(f"no saturated equiangular system available for n={n}, field={field}")
    build, label = _BUILDERS[key]
    return LineSystem(field, build(), label=label)


def orthonormal_system(n: int, field: str = "real") -> LineSystem:
    return LineSystem(field, np.eye(n))
