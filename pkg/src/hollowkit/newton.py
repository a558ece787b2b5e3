"""Gauss-Newton on the orthogonal group for diagonal zero patterns.

Unknown: orthogonal V.  Residual: the selected diagonal entries of ``V^T L V``
and ``V M V^T``.  Steps move along ``V <- V cay(A)`` for a skew-symmetric A
expressed in the basis ``e_a e_b^T - e_b e_a^T`` (a < b).  The linearised
system is underdetermined for the patterns used here, so each step is the
minimum-norm least-squares solution, followed by a backtracking line search.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np


@dataclass
class NewtonResult:
    V: np.ndarray
    residual: float  # max |pattern entry| relative to the input scale
    iterations: int
    converged: bool


def _cayley(A: np.ndarray) -> np.ndarray:
    n = A.shape[0]
    I = np.eye(n)
    return np.linalg.solve(I - A / 2.0, I + A / 2.0)


def _polar(V: np.ndarray) -> np.ndarray:
    U, _, Wt = np.linalg.svd(V)
    return U @ Wt


class PatternProblem:
    def __init__(self, L, M, pattern_l: Sequence[int], pattern_m: Sequence[int]):
        L = np.asarray(L, dtype=np.float64)
        M = np.asarray(M, dtype=np.float64)
        self.scale = max(np.linalg.norm(L) + np.linalg.norm(M), 1e-300)
        self.L = (L + L.T) / (2.0 * self.scale)
        self.M = (M + M.T) / (2.0 * self.scale)
        self.n = L.shape[0]
        self.pl = np.asarray(pattern_l, dtype=int)
        self.pm = np.asarray(pattern_m, dtype=int)
        self.ia, self.ib = np.triu_indices(self.n, 1)

    def residual(self, V: np.ndarray) -> np.ndarray:
        dl = np.einsum("ij,jk,ki->i", V.T[self.pl], self.L, V[:, self.pl])
        dm = np.einsum("ij,jk,ki->i", V[self.pm], self.M, V.T[:, self.pm])
        return np.concatenate([dl, dm])

    def jacobian(self, V: np.ndarray) -> np.ndarray:
        n, ia, ib = self.n, self.ia, self.ib
        K = len(ia)
        cols = np.arange(K)
        Lp = V.T @ self.L @ V
        JL = np.zeros((n, K))
        JL[ia, cols] = -2.0 * Lp[ia, ib]
        JL[ib, cols] = 2.0 * Lp[ia, ib]
        Y = V @ self.M
        JM = 2.0 * (V[:, ia] * Y[:, ib] - V[:, ib] * Y[:, ia])
        return np.vstack([JL[self.pl], JM[self.pm]])

    def skew(self, x: np.ndarray) -> np.ndarray:
        A = np.zeros((self.n, self.n))
        A[self.ia, self.ib] = x
        A[self.ib, self.ia] = -x
        return A


def solve(L, M, pattern_l: Sequence[int], pattern_m: Sequence[int],
          V0: Optional[np.ndarray] = None, maxit: int = 60, target: float = 1e-14) -> NewtonResult:
    """Drive the 0-based pattern entries of ``V^T L V`` and ``V M V^T`` to zero."""
    prob = PatternProblem(L, M, pattern_l, pattern_m)
    V = np.eye(prob.n) if V0 is None else np.array(V0, dtype=np.float64)
    r = prob.residual(V)
    if r.size == 0:
        return NewtonResult(V, 0.0, 0, True)
    for it in range(maxit):
        if np.max(np.abs(r)) <= target:
            return NewtonResult(_polar(V), float(np.max(np.abs(r))), it, True)
        J = prob.jacobian(V)
        x = np.linalg.lstsq(J, -r, rcond=None)[0]
        A = prob.skew(x)
        r0 = float(r @ r)
        t = 1.0
        while True:
            V2 = V @ _cayley(t * A)
            r2 = prob.residual(V2)
            if float(r2 @ r2) < r0 * (1.0 - 1e-4 * t) or t < 1e-8:
                break
            t /= 2.0
        if t < 1e-8 and float(r2 @ r2) >= r0:
            break
        V, r = V2, r2
    V = _polar(V)
    r = prob.residual(V)
    res = float(np.max(np.abs(r)))
    return NewtonResult(V, res, maxit, res <= target)
