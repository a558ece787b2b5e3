"""Independent brute-force checks for the constructions.

Nothing here calls the constructive kernels.  Existence is tested by
minimising the squared pattern residual over the whole orthogonal group:
exhaustive angle grids for sizes 2 and 3, random restarts with local
refinement for larger sizes.  The closed-form predicates on 3x3 minors are
checked against sampled quadratic forms and eigenvalues.
"""
from __future__ import annotations

import math
from typing import Iterable, Optional, Sequence

import numpy as np
from scipy.optimize import minimize_scalar

from . import kernels, lab
from .conjugate import ZeroingCertificate
from .lab import OptimizerConfig, SearchResult
from .matrix import DEFAULT_TOL, ToleranceConfig, as_matrix, frobenius

O2_STEP = 1e-3  # rad
O3_STEP = 2e-2  # rad
PQ_TOL = 1e-6
PQ_GRID_BUDGET = 200_000
PQ_RESTARTS = 8


def _patterns(patternL, patternM, n):
    pl = sorted(set(int(i) for i in patternL))
    pm = sorted(set(int(i) for i in patternM))
    for i in pl + pm:
        if not 1 <= i <= n:
            raise IndexError(f"pattern index {i} out of range 1..{n}")
    return [i - 1 for i in pl], [j - 1 for j in pm]


def _o2_matrix(theta: float, reflect: int) -> np.ndarray:
    c, s = math.cos(theta), math.sin(theta)
    return np.array([[c, s], [s, -c]]) if reflect else np.array([[c, -s], [s, c]])


def _o3_grid_shape(budget: Optional[int]):
    n1 = int(round(2 * math.pi / O3_STEP))
    if budget is not None:
        # 2 reflections * n1 * (n1/2 + 1) * n1 evaluations
        n1 = min(n1, max(8, int((budget / 1.0) ** (1.0 / 3.0))))
    return n1, n1 // 2 + 1, n1


def _euler_point(t1, t2, t3, reflect):
    V = kernels._kernels_py.euler_matrix(t1, t2, t3)
    if reflect:
        V = V @ np.diag([-1.0, 1.0, 1.0])
    return V


def brute_force_conj(L, M, patternL: Iterable[int], patternM: Iterable[int],
                     budget: Optional[int] = None, seed: int = 0,
                     method: Optional[str] = None) -> SearchResult:
    """Minimise the squared pattern residual over the orthogonal group.

    ``method`` defaults to "grid" for sizes 2 and 3 and "randomRestartRefine"
    otherwise.  The size-2 grid covers rotations and reflections at 1e-3 rad.
    The size-3 grid runs over Euler angles at about 2e-2 rad, with and without
    a reflection, and is followed by local refinement from the best grid
    point.  ``budget`` caps the number of grid points, or sets the restart
    count for random restarts (one restart per 1000 evaluations, at least 4).
    """
    L, M = as_matrix(L), as_matrix(M)
    n = L.shape[0]
    if M.shape != L.shape:
        from .errors import SizeMismatch

        raise SizeMismatch("L and M must have the same size")
    pl, pm = _patterns(patternL, patternM, n)
    if method is None:
        method = "grid" if n in (2, 3) else "randomRestartRefine"
    if method == "grid" and n == 2:
        steps = int(math.ceil(2 * math.pi / O2_STEP))
        if budget is not None:
            steps = max(16, min(steps, budget // 2))
        val, k, reflect = kernels.grid_o2(L, M, pl, pm, steps)
        h = 2 * math.pi / steps
        th0 = 2 * math.pi * k / steps
        r = minimize_scalar(lambda th: lab.objective(_o2_matrix(th, reflect), L, M, pl, pm),
                            bounds=(th0 - h, th0 + h), method="bounded", options={"xatol": 1e-12})
        V = _o2_matrix(float(r.x), reflect)
        if lab.objective(V, L, M, pl, pm) > val:
            V = _o2_matrix(th0, reflect)
        return SearchResult(V, lab.objective(V, L, M, pl, pm), 2 * steps + int(r.nfev), "grid")
    if method == "grid" and n == 3:
        n1, n2, n3 = _o3_grid_shape(budget)
        val, i, j, k, reflect = kernels.grid_o3(L, M, pl, pm, n1, n2, n3)
        V0 = _euler_point(2 * math.pi * i / n1, math.pi * j / (n2 - 1), 2 * math.pi * k / n3, reflect)
        cfg = OptimizerConfig(restarts=1, seed=seed)
        ref = lab.minimize_diag_residual(L, M, [p + 1 for p in pl], [q + 1 for q in pm], cfg, V0=V0)
        V = ref.bestV if ref.bestResidual <= val else V0
        return SearchResult(V, lab.objective(V, L, M, pl, pm), 2 * n1 * n2 * n3 + ref.evaluations, "grid")
    if method == "grid":
        raise ValueError("the grid method covers sizes 2 and 3 only")
    if method != "randomRestartRefine":
        raise ValueError(f"unknown method {method!r}")
    restarts = 32 if budget is None else max(4, budget // 1000)
    res = lab.minimize_diag_residual(L, M, [p + 1 for p in pl], [q + 1 for q in pm],
                                     OptimizerConfig(restarts=restarts, seed=seed))
    return SearchResult(res.bestV, res.bestResidual, res.evaluations, "randomRestartRefine",
                        res.restartResiduals)


# --------------------------------------------------------------------------
# certificate verification


def verify_certificate(cert: ZeroingCertificate, tol: ToleranceConfig = DEFAULT_TOL):
    """Recompute everything a certificate claims.  Returns ``(ok, report)``."""
    L = np.asarray(cert.L, dtype=np.float64)
    M = np.asarray(cert.M, dtype=np.float64)
    psi = np.asarray(cert.psi, dtype=np.float64)
    n = L.shape[0]
    report = {}
    scale = max(frobenius(L), frobenius(M), 1e-300)
    band = tol.zero_tol * scale
    orth = float(np.linalg.norm(psi.T @ psi - np.eye(n)))
    report["orthogonality"] = {"residual": orth, "ok": bool(orth <= tol.orth_tol * n)}
    Lt = psi.T @ L @ psi
    Mt = psi @ M @ psi.T
    shift = 0.0 if cert.c is None else float(cert.c)
    pl = [i - 1 for i in cert.patternL]
    pm = [j - 1 for j in cert.patternM]
    pattern_vals = [abs(Lt[i, i] - shift) for i in pl] + [abs(Mt[j, j] - shift) for j in pm]
    claimed = []
    if cert.claimedL is not None:
        claimed += [abs(cert.claimedL[i, i] - shift) for i in pl]
    if cert.claimedM is not None:
        claimed += [abs(cert.claimedM[j, j] - shift) for j in pm]
    worst = max(pattern_vals + claimed, default=0.0)
    report["pattern"] = {"residual": float(worst), "ok": bool(worst <= band)}
    dtr = max(abs(np.trace(Lt) - np.trace(L)), abs(np.trace(Mt) - np.trace(M)))
    report["trace"] = {"residual": float(dtr), "ok": bool(dtr <= band)}
    if cert.factors:
        P = np.eye(n)
        for f in cert.factors:
            P = P @ np.asarray(f.matrix, dtype=np.float64)
        prod = float(np.abs(P - psi).max())
        report["factors"] = {"residual": prod, "ok": bool(prod <= 1e-10 * n)}
    claims = []
    if cert.claimedL is not None:
        claims.append(float(np.abs(cert.claimedL - Lt).max()))
    if cert.claimedM is not None:
        claims.append(float(np.abs(cert.claimedM - Mt).max()))
    if claims:
        report["outputs"] = {"residual": max(claims), "ok": bool(max(claims) <= band)}
    ok = all(v["ok"] for v in report.values())
    return bool(ok), report


# --------------------------------------------------------------------------
# quantifier-elimination checks on 3x3 minors


def _minors(S):
    m11, m12, m13 = S[0]
    m22, m23, m33 = S[1, 1], S[1, 2], S[2, 2]
    d11 = m22 * m33 - m23 * m23
    d22 = m11 * m33 - m13 * m13
    d33 = m11 * m22 - m12 * m12
    d13 = m12 * m23 - m22 * m13
    d23 = m11 * m23 - m12 * m13
    d = float(np.linalg.det(S))
    return d11, d22, d33, d13, d23, d


def elim_predicate(M3, tol: ToleranceConfig = DEFAULT_TOL) -> bool:
    """Closed form of: the free-w discriminant is nonnegative for all (v1, z1).

    ``(d33 < 0 and m22*d >= 0) or (d33 = d13 = 0 and d11 <= 0)``.
    """
    S = _sym(M3)
    s = frobenius(S)
    if s == 0.0:
        return True
    t2 = tol.zero_tol * s * s
    d11, _, d33, d13, _, d = _minors(S)
    return bool((d33 < -t2 and S[1, 1] * d >= -tol.zero_tol * s ** 4)
                or (abs(d33) <= t2 and abs(d13) <= t2 and d11 <= t2))


def elim_form(M3):
    """The binary quadratic form (v1, z1) -> discriminant, as a symmetric 2x2 matrix."""
    S = _sym(M3)
    m11, m12, m13 = S[0]
    m22, m23, m33 = S[1, 1], S[1, 2], S[2, 2]
    a = m12 * m12 - m22 * m11
    b = m12 * m23 - m22 * m13
    c = m23 * m23 - m22 * m33
    return np.array([[a, b], [b, c]])


def _sym(M3):
    S = as_matrix(M3)
    if S.shape[0] != 3:
        from .errors import InvalidMatrix

        raise InvalidMatrix("expected a 3x3 matrix")
    return (S + S.T) / 2.0


def check_elimA_equivalence(M3, grid: int = 720, tol: ToleranceConfig = DEFAULT_TOL) -> bool:
    """Whether the closed-form predicate agrees with sampled nonnegativity.

    The form is homogeneous, so sampling the unit circle at ``grid`` angles
    plus its eigenvector for the smallest eigenvalue decides the sign.  When
    m22 = 0 but m33 != 0 the free-z version is used, which swaps rows and
    columns 2 and 3.
    """
    S = _sym(M3)
    s = frobenius(S)
    if abs(S[1, 1]) <= tol.zero_tol * s and abs(S[2, 2]) > tol.zero_tol * s:
        S = S[np.ix_([0, 2, 1], [0, 2, 1])]
    F = elim_form(S)
    ts = np.linspace(0.0, math.pi, grid, endpoint=False)
    U = np.stack([np.cos(ts), np.sin(ts)], axis=1)
    w, E = np.linalg.eigh(F)
    U = np.vstack([U, E[:, 0]])
    vals = np.einsum("ki,ij,kj->k", U, F, U)
    sampled_nonneg = bool(vals.min() >= -tol.zero_tol * max(s, 1e-300) ** 4)
    return elim_predicate(S, tol) == sampled_nonneg


def x1_conditions_predicate(M3, tol: ToleranceConfig = DEFAULT_TOL) -> bool:
    """Minor form, organised by the sign of d33, of: some x1 has a real x2 root."""
    S = _sym(M3)
    s = frobenius(S)
    t2 = tol.zero_tol * s * s
    t4 = tol.zero_tol * s ** 4
    d11, d22, d33, _, d23, d = _minors(S)
    m11, m12 = S[0, 0], S[0, 1]
    if d33 < -t2:
        return True
    if abs(d33) <= t2:
        return abs(d23) > t2 or d22 <= t2
    if m11 * d < -t4:
        return True
    return abs(m11 * d) <= t4 and abs(m11 * d11 * d33 - m12 * m12 * d) > tol.zero_tol * s ** 5


def sylvester_nondefinite(M3, tol: ToleranceConfig = DEFAULT_TOL) -> bool:
    """``exists i: d_ii <= 0  or  exists i: m_ii * d <= 0``."""
    S = _sym(M3)
    s = frobenius(S)
    t2 = tol.zero_tol * s * s
    d11, d22, d33, _, _, d = _minors(S)
    return bool(min(d11, d22, d33) <= t2 or any(S[i, i] * d <= tol.zero_tol * s ** 4 for i in range(3)))


def eigen_nondefinite(M3, tol: ToleranceConfig = DEFAULT_TOL) -> bool:
    w = np.linalg.eigvalsh(_sym(M3))
    band = tol.zero_tol * max(float(np.abs(w).max()), 1e-300)
    return not (w.min() > band or w.max() < -band)


def x1_conditions_applicable(M3, tol: ToleranceConfig = DEFAULT_TOL) -> bool:
    """No zero diagonal entry, and d != 0 or both d33, d11 nonzero."""
    S = _sym(M3)
    s = frobenius(S)
    t2 = tol.zero_tol * s * s
    d11, _, d33, _, _, d = _minors(S)
    if np.any(np.abs(np.diag(S)) <= tol.zero_tol * s):
        return False
    return abs(d) > tol.zero_tol * s ** 3 or (abs(d33) > t2 and abs(d11) > t2)


def check_x1_conditions_equivalence(M3, tol: ToleranceConfig = DEFAULT_TOL) -> bool:
    """The minor form, the Sylvester form and the eigenvalue test agree."""
    a = x1_conditions_predicate(M3, tol)
    b = sylvester_nondefinite(M3, tol)
    c = eigen_nondefinite(M3, tol)
    return a == b == c


# --------------------------------------------------------------------------
# which single entries can be zeroed together


def achievable_pq(L3, M3, budget: int = PQ_GRID_BUDGET, seed: int = 0) -> set:
    """All (p, q) for which some orthogonal R zeros ``(R^T L R)[p,p]`` and ``(R M R^T)[q,q]``.

    A pair counts when the search gets the squared residual to at most
    ``(1e-6 * scale)**2`` with scale the larger Frobenius norm.  Each search
    is a coarse Euler grid followed by refinement from the grid optimum and
    from a few random points.
    """
    L, M = as_matrix(L3), as_matrix(M3)
    if L.shape[0] != 3 or M.shape[0] != 3:
        from .errors import InvalidMatrix

        raise InvalidMatrix("achievable_pq needs 3x3 matrices")
    scale = max(frobenius(L), frobenius(M))
    if scale == 0.0:
        return {(p, q) for p in (1, 2, 3) for q in (1, 2, 3)}
    target = (PQ_TOL * scale) ** 2
    out = set()
    for p in (1, 2, 3):
        for q in (1, 2, 3):
            res = brute_force_conj(L, M, [p], [q], budget=budget, seed=seed)
            if res.bestResidual > target:
                more = lab.minimize_diag_residual(L, M, [p], [q],
                                                  OptimizerConfig(restarts=PQ_RESTARTS, seed=seed + 1),
                                                  stop_at=target)
                if more.bestResidual < res.bestResidual:
                    res = more
            if res.bestResidual <= target:
                out.add((p, q))
    return out


def exclusion_pattern(p0: int, q0: int) -> set:
    """Pairs left open by the stronger 3x3 result when the 2x2 test holds at (p0, q0)."""
    return {(q0, t) for t in (1, 2, 3) if t != p0} | {(t, p0) for t in (1, 2, 3) if t != q0}
