"""Thin deterministic wrapper around scipy's HiGHS dual simplex."""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.optimize import linprog

DEFAULT_TOL = 1e-9


@dataclass(frozen=True)
class LPResult:
    status: str  # "optimal" | "infeasible" | "unbounded" | "error"
    x: np.ndarray | None
    value: float | None


def _options(tol):
    # HiGHS rejects feasibility tolerances below 1e-10.
    t = min(max(tol, 1e-10), 1e-7)
    return {"primal_feasibility_tolerance": t, "dual_feasibility_tolerance": t}


def maximize(c, A, b, bounds=None, tol=DEFAULT_TOL) -> LPResult:
    """Maximize ``c @ x`` subject to ``A @ x <= b``; variables free by default."""
    c = np.asarray(c, dtype=float)
    if bounds is None:
        bounds = [(None, None)] * c.size
    res = linprog(-c, A_ub=np.asarray(A, dtype=float), b_ub=np.asarray(b, dtype=float),
                  bounds=bounds, method="highs-ds", options=_options(tol))
    if res.status == 0:
        return LPResult("optimal", np.asarray(res.x), float(-res.fun))
    if res.status == 2:
        return LPResult("infeasible", None, None)
    if res.status == 3:
        return LPResult("unbounded", None, None)
    return LPResult("error", None, None)


def chebyshev_center(A, b, weights=None, tol=DEFAULT_TOL):
    """Largest ``lam`` with ``A t + lam * weights <= b``.

    ``weights`` defaults to the row norms (classical Chebyshev ball).  Returns
    ``(lam, t)``; ``lam`` is ``-inf`` when the system is infeasible and
    ``inf`` (with ``t=None``) when it is unbounded.
    """
    A = np.asarray(A, dtype=float)
    b = np.asarray(b, dtype=float)
    n, d = A.shape
    classical = weights is None
    if classical:
        weights = np.linalg.norm(A, axis=1)
    M = np.hstack([A, np.asarray(weights, dtype=float).reshape(-1, 1)])
    c = np.zeros(d + 1)
    c[-1] = 1.0
    # for unit rows a positive dependence sum mu_i a_i = 0 gives lam <= max b_i, so the
    # cap only bites on unbounded input; gauge weights admit no such bound
    cap = (1.0 + float(np.max(np.abs(b))) if b.size else 1.0) if classical else None
    bounds = [(None, None)] * d + [(None, cap)]
    res = maximize(c, M, b, bounds=bounds, tol=tol)
    if res.status == "unbounded":
        return float("inf"), None
    if res.status != "optimal":
        return float("-inf"), None
    return float(res.x[-1]), res.x[:-1]
