"""Polyhedral norms defined by finite sets of functionals.

A list of vectors ``z_1..z_N`` spanning K^n defines the norm
``||x|| = max_s |<x, z_s>|``. The extremal spaces all have this form;
``TABLE_SPACES`` records the explicit closed forms for the known cases.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass

import numpy as np

from .equiangular import LineSystem
from .errors import RankError, ShapeError, UnsupportedConstructionError
from .linalg import check_field, dtype_for, matrix_rank

TAU = np.sqrt((np.sqrt(5) + 1) / 2)
SIGMA = np.sqrt((np.sqrt(5) - 1) / 2)
OMEGA = np.exp(2j * np.pi / 3)


@dataclass(frozen=True)
class NormedSpaceSpec:
    field: str
    functionals: np.ndarray
    label: str = ""

    def __post_init__(self):
        check_field(self.field)
        Z = np.array(self.functionals, dtype=dtype_for(self.field))
        if Z.ndim != 2 or Z.size == 0:
            raise ShapeError("functionals must be a nonempty N x n array")
        if matrix_rank(Z, 1e-10) < Z.shape[1]:
            raise RankError("functionals do not span the space; the formula is only a seminorm")
        object.__setattr__(self, "functionals", Z)

    @property
    def n(self) -> int:
        return self.functionals.shape[1]

    @classmethod
    def from_system(cls, system: LineSystem, label: str = "") -> "NormedSpaceSpec":
        return cls(system.field, system.vectors, label or system.label)


def norm_from_system(spec: NormedSpaceSpec, x) -> float | np.ndarray:
    """Evaluate ``max_s |<x, z_s>|``; ``x`` may be one vector or a batch of rows."""
    x = np.asarray(x)
    if x.shape[-1] != spec.n:
        raise ShapeError(f"expected vectors of length {spec.n}, got {x.shape[-1]}")
    vals = np.abs(x @ spec.functionals.conj().T).max(axis=-1)
    return float(vals) if np.ndim(vals) == 0 else vals


# --- closed forms --------------------------------------------------------------

def _r2(a):
    a1, a2 = a[..., 0], a[..., 1]
    s3 = np.sqrt(3)
    return np.max(np.abs([2 * a1, a1 - s3 * a2, a1 + s3 * a2]), axis=0)


def _r3(a):
    terms = []
    for j in range(3):
        for sgn in (1, -1):
            terms.append(TAU * a[..., j] + sgn * SIGMA * a[..., (j + 1) % 3])
    return np.max(np.abs(terms), axis=0)


def _r7(a):
    pairs = [a[..., i] + a[..., j] for i, j in itertools.combinations(range(7), 2)]
    total = a.sum(axis=-1)
    leave_one = [total - a[..., j] for j in range(7)]
    return np.max(np.abs(pairs + leave_one), axis=0)


def _c2(a):
    a1, a2 = a[..., 0], a[..., 1]
    s3 = np.sqrt(3)
    return np.max(np.abs([s3 * a1 + a2, a1 + s3 * a2, a1 + 1j * a2, a1 - 1j * a2]), axis=0)


def _c3(a):
    terms = [a[..., j] - OMEGA ** k * a[..., (j + 1) % 3] for j in range(3) for k in range(3)]
    return np.max(np.abs(terms), axis=0)


@dataclass(frozen=True)
class TableSpace:
    space_id: str
    field: str
    n: int
    lam: float
    closed_form: object = None

    @property
    def evaluable(self) -> bool:
        return self.closed_form is not None


TABLE_SPACES = {
    "R2-hexagon": TableSpace("R2-hexagon", "real", 2, 4 / 3, _r2),
    "R3-dodecahedron": TableSpace("R3-dodecahedron", "real", 3, (1 + np.sqrt(5)) / 2, _r3),
    "R7": TableSpace("R7", "real", 7, 5 / 2, _r7),
    "R23": TableSpace("R23", "real", 23, 14 / 3, None),
    "C2": TableSpace("C2", "complex", 2, (1 + np.sqrt(3)) / 2, _c2),
    "C3": TableSpace("C3", "complex", 3, 5 / 3, _c3),
}


def table_space(space_id: str) -> TableSpace:
    try:
        return TABLE_SPACES[space_id]
    except KeyError:
        raise KeyError(f"unknown space id {space_id!r}; choose from {sorted(TABLE_SPACES)}") from None


def table_norm(space_id: str, x):
    """Evaluate the closed-form extremal norm of ``space_id`` at ``x``."""
    space = table_space(space_id)
    if not space.evaluable:
        raise UnsupportedConstructionError(f"{space_id}: no closed form (Leech lattice construction is out of scope)")
    x = np.asarray(x)
    if x.shape[-1] != space.n:
        raise ShapeError(f"{space_id} expects vectors of length {space.n}")
    val = space.closed_form(x)
    return float(val) if np.ndim(val) == 0 else val


def table_functionals(space_id: str) -> NormedSpaceSpec:
    """The closed form of ``space_id`` written as an (unnormalized) functional list."""
    s3 = np.sqrt(3)
    if space_id == "R2-hexagon":
        Z = [[2, 0], [1, -s3], [1, s3]]
    elif space_id == "R3-dodecahedron":
        Z = []
        for j in range(3):
            for sgn in (1, -1):
                v = np.zeros(3)
                v[j], v[(j + 1) % 3] = TAU, sgn * SIGMA
                Z.append(v)
    elif space_id == "R7":
        Z = []
        for i, j in itertools.combinations(range(7), 2):
            v = np.zeros(7)
            v[[i, j]] = 1
            Z.append(v)
        for j in range(7):
            v = np.ones(7)
            v[j] = 0
            Z.append(v)
    elif space_id == "C2":
        # |<x, z>| = |sum x_j conj(z_j)|, hence the conjugated imaginary parts
        Z = [[s3, 1], [1, s3], [1, -1j], [1, 1j]]
    elif space_id == "C3":
        Z = []
        for j in range(3):
            for k in range(3):
                v = np.zeros(3, dtype=complex)
                v[j] = 1
                v[(j + 1) % 3] = -np.conj(OMEGA ** k)
                Z.append(v)
    elif table_space(space_id).evaluable is False:
        raise UnsupportedConstructionError(f"{space_id}: no closed form (Leech lattice construction is out of scope)")
    space = table_space(space_id)
    return NormedSpaceSpec(space.field, np.array(Z), space_id)


def unit_ball_vertices(spec: NormedSpaceSpec, tol: float = 1e-9) -> np.ndarray:
    """Extreme points of ``{x : |<x, z_s>| <= 1 for all s}`` (real, n <= 3).

    Brute force: every choice of ``n`` signed functionals whose hyperplanes
    meet in a single point is solved, infeasible points are discarded and
    duplicates merged.
    """
    if spec.field != "real":
        raise ShapeError("vertex enumeration is implemented for real spaces only")
    Z = spec.functionals
    n = spec.n
    halfspaces = np.vstack([Z, -Z])
    found = []
    for idx in itertools.combinations(range(len(halfspaces)), n):
        M = halfspaces[list(idx)]
        if abs(np.linalg.det(M)) < tol:
            continue
        x = np.linalg.solve(M, np.ones(n))
        if np.abs(Z @ x).max() > 1 + tol:
            continue
        if not any(np.linalg.norm(x - y) < tol for y in found):
            found.append(x)
    return np.array(found)
