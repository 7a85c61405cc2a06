"""Dense two-phase tableau simplex.

Solves ``min c.x`` subject to ``A_ub x <= b_ub``, ``A_eq x = b_eq`` and
``x >= 0``. Free variables must be split by the caller.

Pricing is Dantzig's most-negative reduced cost. Phase 2 starts from a
randomly shifted basic solution so that degenerate vertices (ubiquitous in
the projection LPs, whose right-hand sides are mostly zero) cannot stall it;
the shift is then removed and a few dual simplex pivots restore feasibility.
After a run of degenerate pivots the solver still falls back to Bland's
rule. The tableau is rebuilt from the original data every
``REFACTOR_EVERY`` pivots to shed rounding.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.linalg.blas import dger

DEGENERATE_RUN = 30
REFACTOR_EVERY = 100
# smallest admissible pivot element; smaller ones are rounding noise
PIVOT_TOL = 1e-7
PERTURBATION = 1e-7


@dataclass
class LPResult:
    status: str
    x: np.ndarray | None = None
    fun: float = float("nan")
    iterations: int = 0
    y_ub: np.ndarray | None = None
    y_eq: np.ndarray | None = None

    @property
    def success(self) -> bool:
        return self.status == "optimal"


class _Tableau:
    """Tableau ``[B^-1 A | B^-1 b; reduced costs | -objective]``.

    ``source`` holds the original ``[A | b]`` and ``cost`` the objective, so
    the body can be rebuilt from scratch to shed accumulated rounding.
    """

    def __init__(self, T, basis, tol, source, cost):
        self.T = T
        self.basis = basis
        self.tol = tol
        self.source = source
        self.cost = cost
        self.iterations = 0

    def refactor(self, clip=True):
        T, src = self.T, self.source
        body = np.linalg.solve(src[:, self.basis], src)
        if clip:
            body[:, -1] = np.maximum(body[:, -1], 0.0)
        T[:-1] = body
        cb = self.cost[self.basis]
        T[-1, :-1] = self.cost - cb @ body[:, :-1]
        T[-1, -1] = -cb @ body[:, -1]

    def pivot(self, r, j):
        T = self.T
        prow = T[r] / T[r, j]
        col = T[:, j].copy()
        col[r] = 0.0
        # in-place rank-one update; T.T is a Fortran-ordered view of T
        dger(-1.0, prow, col, a=T.T, overwrite_a=True)
        T[r] = prow
        self.basis[r] = j
        self.iterations += 1

    def dual_run(self, max_iter):
        """Dual simplex from a dual-feasible tableau until the rhs is nonnegative."""
        T, tol = self.T, self.tol
        while True:
            if self.iterations >= max_iter:
                return "iteration_limit"
            if self.iterations and self.iterations % REFACTOR_EVERY == 0:
                self.refactor(clip=False)
            rhs = T[:-1, -1]
            r = int(np.argmin(rhs))
            if rhs[r] >= -tol:
                T[:-1, -1] = np.maximum(rhs, 0.0)
                return "optimal"
            row = T[r, :-1]
            cand = np.flatnonzero(row < -PIVOT_TOL)
            if cand.size == 0:
                return "infeasible"
            ratios = np.maximum(T[-1, cand], 0.0) / -row[cand]
            best = ratios.min()
            ties = cand[ratios <= best + tol * max(1.0, best)]
            self.pivot(r, int(ties[np.argmin(row[ties])]))

    def run(self, allowed, max_iter):
        """Iterate to optimality over the columns flagged in ``allowed``."""
        T, tol = self.T, self.tol
        degenerate = 0
        while True:
            if self.iterations >= max_iter:
                return "iteration_limit"
            if self.iterations and self.iterations % REFACTOR_EVERY == 0:
                self.refactor()
            rc = T[-1, :-1]
            candidates = np.flatnonzero((rc < -tol) & allowed)
            if candidates.size == 0:
                return "optimal"
            bland = degenerate >= DEGENERATE_RUN
            if bland:
                j = int(candidates[0])
            else:
                j = int(candidates[np.argmin(rc[candidates])])
            col = T[:-1, j]
            rows = np.flatnonzero(col > PIVOT_TOL)
            if rows.size == 0:
                return "unbounded"
            ratios = np.maximum(T[rows, -1], 0.0) / col[rows]
            best = ratios.min()
            ties = rows[ratios <= best + tol * max(1.0, best)]
            if bland:
                r = int(ties[np.argmin(self.basis[ties])])
            else:
                r = int(ties[np.argmax(col[ties])])
            degenerate = degenerate + 1 if best <= tol else 0
            self.pivot(r, j)


def linprog(c, A_ub=None, b_ub=None, A_eq=None, b_eq=None, *, initial_basis=None, tol=1e-9,
            max_iter=200_000) -> LPResult:
    """Minimize ``c.x``; see the module docstring for the problem form.

    ``initial_basis`` optionally lists one column per constraint row
    (indices ``< len(c)`` are structural variables, ``len(c) + i`` is the
    slack of inequality row ``i``). When it is a feasible basis, phase 1 is
    skipped; otherwise the solver falls back to artificials.
    """
    c = np.asarray(c, dtype=float)
    nvar = c.size
    A_ub = np.zeros((0, nvar)) if A_ub is None else np.asarray(A_ub, dtype=float)
    b_ub = np.zeros(0) if b_ub is None else np.asarray(b_ub, dtype=float)
    A_eq = np.zeros((0, nvar)) if A_eq is None else np.asarray(A_eq, dtype=float)
    b_eq = np.zeros(0) if b_eq is None else np.asarray(b_eq, dtype=float)
    m_ub, m_eq = A_ub.shape[0], A_eq.shape[0]
    m = m_ub + m_eq

    # standard form: [A_ub I; A_eq 0] [x; slack] = b, rows flipped so b >= 0
    A = np.zeros((m, nvar + m_ub))
    A[:m_ub, :nvar] = A_ub
    A[:m_ub, nvar:] = np.eye(m_ub)
    A[m_ub:, :nvar] = A_eq
    b = np.concatenate([b_ub, b_eq])
    sign = np.where(b < 0, -1.0, 1.0)
    A *= sign[:, None]
    b = b * sign
    ncol = A.shape[1]

    if initial_basis is not None:
        installed = _install_basis(A, b, np.asarray(initial_basis), tol)
        if installed is not None:
            tab = _Tableau(installed, np.array(initial_basis), tol, None, None)
            return _phase2(tab, A, b, c, m_ub, nvar, np.arange(m), sign, max_iter)

    basis = np.full(m, -1)
    for i in range(m_ub):
        if sign[i] > 0:
            basis[i] = nvar + i
    art_rows = np.flatnonzero(basis < 0)
    n_art = art_rows.size

    T = np.zeros((m + 1, ncol + n_art + 1))
    T[:m, :ncol] = A
    T[:m, -1] = b
    for k, i in enumerate(art_rows):
        T[i, ncol + k] = 1.0
        basis[i] = ncol + k
    source = np.hstack([A, np.zeros((m, n_art)), b[:, None]])
    source[art_rows, ncol + np.arange(n_art)] = 1.0
    cost = np.concatenate([np.zeros(ncol), np.ones(n_art)])
    tab = _Tableau(T, basis, tol, source, cost)

    if n_art:
        # phase 1 objective: sum of artificials, expressed in reduced costs
        T[-1, :] = -T[art_rows].sum(axis=0)
        T[-1, ncol:ncol + n_art] = 0.0
        allowed = np.ones(ncol + n_art, dtype=bool)
        status = tab.run(allowed, max_iter)
        if status == "iteration_limit":
            return LPResult(status, iterations=tab.iterations)
        scale = max(1.0, float(np.abs(b).max(initial=0.0)))
        if -T[-1, -1] > 1e-7 * scale:
            return LPResult("infeasible", iterations=tab.iterations)
        # drive remaining artificials out of the basis, dropping redundant rows
        keep = np.ones(m + 1, dtype=bool)
        for i in range(m):
            if tab.basis[i] >= ncol:
                row = T[i, :ncol]
                j = int(np.argmax(np.abs(row)))
                if abs(row[j]) > tol:
                    tab.pivot(i, j)
                else:
                    keep[i] = False
        T = T[keep][:, list(range(ncol)) + [T.shape[1] - 1]]
        tab.T = T
        tab.basis = tab.basis[keep[:-1]]
        rows_kept = np.flatnonzero(keep[:-1])
    else:
        T = np.delete(T, np.s_[ncol:ncol + n_art], axis=1)
        tab.T = T
        rows_kept = np.arange(m)

    return _phase2(tab, A, b, c, m_ub, nvar, rows_kept, sign, max_iter)


def _install_basis(A, b, basis, tol):
    m, ncol = A.shape
    if basis.shape != (m,) or len(set(basis.tolist())) != m:
        return None
    Bmat = A[:, basis]
    try:
        body = np.linalg.solve(Bmat, np.column_stack([A, b]))
    except np.linalg.LinAlgError:
        return None
    if body[:, -1].min() < -tol:
        return None
    body[:, -1] = np.maximum(body[:, -1], 0.0)
    T = np.zeros((m + 1, ncol + 1))
    T[:m] = body
    return T


def _phase2(tab, A, b, c, m_ub, nvar, rows_kept, sign, max_iter):
    m = sign.size
    ncol = A.shape[1]
    cfull = np.concatenate([c, np.zeros(m_ub)])
    tab.source = np.column_stack([A[rows_kept], b[rows_kept]])
    tab.cost = cfull
    allowed = np.ones(ncol, dtype=bool)

    # Shift the basic solution by small distinct positive amounts. Steps then
    # never have length zero, which defeats stalling on degenerate vertices.
    true_rhs = tab.source[:, -1].copy()
    scale = max(1.0, float(np.abs(true_rhs).max(initial=0.0)))
    delta = PERTURBATION * scale * (1.0 + np.random.default_rng(0).random(rows_kept.size))
    tab.source[:, -1] += tab.source[:, tab.basis] @ delta
    tab.refactor()
    status = tab.run(allowed, max_iter)
    if status != "optimal":
        return LPResult(status, iterations=tab.iterations)

    # restore the true rhs; the basis stays dual feasible, so dual simplex
    # removes whatever primal infeasibility the shift leaves behind
    tab.source[:, -1] = true_rhs
    for _ in range(3):
        tab.refactor(clip=False)
        status = tab.dual_run(max_iter)
        if status != "optimal":
            return LPResult(status, iterations=tab.iterations)
        tab.refactor()
        status = tab.run(allowed, max_iter)
        if status != "optimal":
            return LPResult(status, iterations=tab.iterations)
        tab.refactor(clip=False)
        if tab.T[:-1, -1].min() >= -tab.tol:
            break
    T = tab.T

    xfull = np.zeros(ncol)
    xfull[tab.basis] = T[:-1, -1]
    xfull[xfull < 0] = 0.0

    # duals from the final basis: B^T y = c_B
    cb = cfull[tab.basis]
    Bmat = A[rows_kept][:, tab.basis]
    y_std = np.linalg.solve(Bmat.T, cb)
    y = np.zeros(m)
    y[rows_kept] = y_std
    y *= sign
    return LPResult(
        "optimal",
        x=xfull[:nvar],
        fun=float(c @ xfull[:nvar]),
        iterations=tab.iterations,
        y_ub=y[:m_ub],
        y_eq=y[m_ub:],
    )
