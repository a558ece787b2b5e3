"""Constructive zeroing kernels for 3x3 matrices.

* ``zero_entry_1_1`` builds a rotation from Euler angles that zeros the
  (1, 1) entry of a nondefinite matrix in closed form.
* ``conjugate_zero_pq`` decides exactly whether one orthogonal R can zero
  ``(R^T L R)[p,p]`` and ``(R M R^T)[q,q]`` together, and builds R when it can.
  Column p of R must be L-neutral and row q must be M-neutral.  They share the
  entry ``R[q,p]``, so R exists iff the ranges of that shared coordinate
  overlap.
* ``solve_two_one`` zeros two diagonal entries on one side and one on the
  other by scanning the one-parameter family of orthonormal neutral pairs.
"""
from __future__ import annotations

import enum
import itertools
import math
from dataclasses import dataclass, field
from typing import Optional, Sequence, Tuple

import numpy as np
from scipy.optimize import brentq, minimize_scalar

from . import kernels, neutral
from .definiteness import (
    conditions_A,
    conditions_B,
    is_nondefinite,
    size2_nondefinite,
)
from .errors import (
    ConditionsNotMet,
    DefiniteInput,
    GivensInfeasible,
    InvalidMatrix,
    NotFound,
    NumericalBreakdown,
    ZeroingInfeasible,
)
from .matrix import (
    DEFAULT_TOL,
    ToleranceConfig,
    as_matrix,
    euler,
    frobenius,
    givens,
    signed_permutations,
)


class Branch(enum.Enum):
    AlreadyZeroDiagonal = "AlreadyZeroDiagonal"
    GeneralRoots = "GeneralRoots"
    D33ZeroBranch = "D33ZeroBranch"
    DD11ZeroBranch = "DD11ZeroBranch"
    CondA_FreeW = "CondA_FreeW"
    CondA_FreeZ = "CondA_FreeZ"
    CondA_DoubleZeroRow = "CondA_DoubleZeroRow"
    CondB = "CondB"


@dataclass
class Zero3Construction:
    transform: np.ndarray
    branch: Branch
    parameters: dict = field(default_factory=dict)

    def to_dict(self):
        from .matrix import matrix_to_json_obj

        return {
            "transform": matrix_to_json_obj(self.transform),
            "branch": self.branch.value,
            "parameters": {k: _jsonable(v) for k, v in self.parameters.items()},
        }


def _jsonable(v):
    if isinstance(v, (np.floating, np.integer)):
        return v.item()
    if isinstance(v, (tuple, list)):
        return [_jsonable(x) for x in v]
    return v


def _sym3(M) -> np.ndarray:
    M = as_matrix(M)
    if M.shape[0] != 3:
        raise InvalidMatrix(f"expected a 3x3 matrix, got size {M.shape[0]}")
    return (M + M.T) / 2.0


def _frozen(a) -> np.ndarray:
    a = np.array(a, dtype=np.float64)
    a.setflags(write=False)
    return a


# --------------------------------------------------------------------------
# Euler-angle zeroing of the (1, 1) entry


def _minors(S):
    m11, m12, m13 = S[0]
    m22, m23, m33 = S[1, 1], S[1, 2], S[2, 2]
    d11 = m22 * m33 - m23 * m23
    d22 = m11 * m33 - m13 * m13
    d33 = m11 * m22 - m12 * m12
    d12 = m12 * m33 - m13 * m23
    d23 = m11 * m23 - m12 * m13
    d = m11 * d11 - m12 * d12 + m13 * (m12 * m23 - m13 * m22)
    return d11, d22, d33, d12, d23, d


def radicand(S, x1: float) -> float:
    """Discriminant (over 4) of the x2-quadratic at a given x1.

    Equals ``-d33*x1**2 - 2*d23*x1 - d22`` for the symmetric matrix S.
    """
    _, d22, d33, _, d23, _ = _minors(S)
    return -d33 * x1 * x1 - 2.0 * d23 * x1 - d22


def denominator(S, x1: float) -> float:
    return S[1, 1] * x1 * x1 + 2.0 * S[1, 2] * x1 + S[2, 2]


def find_x1(S, tol: ToleranceConfig = DEFAULT_TOL) -> float:
    """First candidate x1 with a nonnegative radicand and a usable denominator.

    Candidates: the radicand's vertex, interior points of its positive
    interval, a few small integers, then powers of ten from 1e-8 to 1e8.
    Both tests are normalised by ``1 + x1**2`` so that they compare like
    quantities for huge and tiny candidates.
    """
    S = _sym3(S)
    x1 = kernels.find_x1(S[0, 0], S[0, 1], S[0, 2], S[1, 1], S[1, 2], S[2, 2],
                         tol.zero_tol, tol.disc_clamp)
    if math.isnan(x1):
        raise NotFound("no x1 candidate gives a real root with nonzero denominator")
    return float(x1)


_BRANCHES = {
    kernels.BRANCH_D33: Branch.D33ZeroBranch,
    kernels.BRANCH_DD11: Branch.DD11ZeroBranch,
    kernels.BRANCH_GENERAL: Branch.GeneralRoots,
}


def zero_entry_1_1(M3, tol: ToleranceConfig = DEFAULT_TOL) -> Zero3Construction:
    """Special orthogonal T with ``(T^T M3 T)[1,1] = 0``.

    The rotation is built as ``E(theta1, theta2, 0)`` zeroing ``(E M E^T)[1,1]``
    and returned transposed.
    """
    S = _sym3(M3)
    s = frobenius(S)
    if not is_nondefinite(S, tol):
        raise DefiniteInput("matrix is definite; no diagonal entry can be zeroed")
    band = tol.zero_tol * s
    diag = np.abs(np.diag(S))
    if s == 0.0 or diag.min() <= band:
        i = int(np.argmin(diag)) + 1
        for P in signed_permutations(3):
            if P.perm[0] == i and P.determinant() == 1:
                return Zero3Construction(P.matrix(), Branch.AlreadyZeroDiagonal,
                                         {"index": i, "perm": list(P.perm), "signs": list(P.signs)})
    code, theta1, theta2, x1, res = kernels.zero11_angles(
        S[0, 0], S[0, 1], S[0, 2], S[1, 1], S[1, 2], S[2, 2], tol.zero_tol, tol.disc_clamp)
    if code == kernels.BRANCH_NONE:
        raise NumericalBreakdown("no x1 candidate with a nonnegative discriminant")
    if code < 0:
        raise NumericalBreakdown(f"residual {abs(res):.3e} above tolerance in branch {_BRANCHES[-code].value}")
    # theta2 = pi/2 exactly when the x2 root is at infinity
    params = {"theta1": theta1, "theta2": theta2,
              "x2": None if theta2 == math.pi / 2 else math.tan(theta2)}
    if code == kernels.BRANCH_GENERAL:
        params["x1"] = x1
    return Zero3Construction(euler(theta1, theta2, 0.0).T, _BRANCHES[code], params)


# --------------------------------------------------------------------------
# exact conjugate zeroing of one entry on each side


@dataclass
class PQFeasibility:
    """Ranges of the shared entry ``|R[q,p]|`` allowed by each side."""

    feasible: bool
    l_range: Optional[Tuple[float, float]]
    m_range: Optional[Tuple[float, float]]

    @property
    def interval(self) -> Optional[Tuple[float, float]]:
        if self.l_range is None or self.m_range is None:
            return None
        return max(self.l_range[0], self.m_range[0]), min(self.l_range[1], self.m_range[1])


_RANGE_SLACK = 1e-9


def pq_feasibility(L3, M3, p: int, q: int, tol: ToleranceConfig = DEFAULT_TOL) -> PQFeasibility:
    L, M = _sym3(L3), _sym3(M3)
    nl = neutral.neutral_set(L, tol.disc_clamp)
    nm = neutral.neutral_set(M, tol.disc_clamp)
    lr = neutral.component_range(nl, q - 1)
    mr = neutral.component_range(nm, p - 1)
    if lr is None or mr is None:
        return PQFeasibility(False, lr, mr)
    lo, hi = max(lr[0], mr[0]), min(lr[1], mr[1])
    return PQFeasibility(lo <= hi + _RANGE_SLACK, lr, mr)


def _complete(c: np.ndarray, r: np.ndarray, p0: int, q0: int) -> np.ndarray:
    """Orthogonal R with column p0 equal to c and row q0 equal to r.

    Requires unit c, r with ``c[q0] == r[p0]`` (up to rounding).
    """
    e = np.zeros(3)
    e[p0] = 1.0
    u = e - c
    nu = np.linalg.norm(u)
    H = np.eye(3) if nu < 1e-15 else np.eye(3) - 2.0 * np.outer(u, u) / (nu * nu)
    h = H[q0].copy()
    j1, j2 = [j for j in range(3) if j != p0]
    hr = math.hypot(h[j1], h[j2])
    rr = math.hypot(r[j1], r[j2])
    K = np.eye(3)
    if hr > 1e-15 and rr > 1e-15:
        # rotate the complement of e_p0 so that K @ r_perp points along h_perp
        alpha = math.atan2(h[j2], h[j1]) - math.atan2(r[j2], r[j1])
        ca, sa = math.cos(alpha), math.sin(alpha)
        K[j1, j1], K[j1, j2], K[j2, j1], K[j2, j2] = ca, -sa, sa, ca
    # K fixes e_p0 so column p0 stays c, and K^T h = r makes row q0 equal r
    return H @ K


def conjugate_zero_pq(L3, M3, p: int, q: int, prefer_zero_entry: bool = False,
                      tol: ToleranceConfig = DEFAULT_TOL) -> Zero3Construction:
    """Orthogonal R with ``(R^T L R)[p,p] = 0`` and ``(R M R^T)[q,q] = 0``.

    With ``prefer_zero_entry`` the shared entry ``R[q,p]`` is set to 0 when
    both sides allow it; otherwise it is placed mid-way in the allowed range.
    Raises ZeroingInfeasible when no such R exists.
    """
    L, M = _sym3(L3), _sym3(M3)
    for name, v in (("p", p), ("q", q)):
        if not 1 <= v <= 3:
            raise IndexError(f"{name} {v} out of range 1..3")
    feas = pq_feasibility(L, M, p, q, tol)
    if not feas.feasible:
        raise ZeroingInfeasible(
            f"no orthogonal R zeros L[{p},{p}] and M[{q},{q}] together",
        )
    lo, hi = feas.interval
    lo, hi = max(lo, 0.0), max(min(hi, 1.0), 0.0)
    if lo > hi:
        lo = hi = (lo + hi) / 2.0
    s = 0.0 if (prefer_zero_entry and lo <= _RANGE_SLACK) else (lo + hi) / 2.0
    nl = neutral.neutral_set(L, tol.disc_clamp)
    nm = neutral.neutral_set(M, tol.disc_clamp)
    p0, q0 = p - 1, q - 1
    c = neutral.neutral_with_component(nl, q0, s)
    r = neutral.neutral_with_component(nm, p0, float(c[q0]))
    R = _complete(c, r, p0, q0)
    scale = frobenius(L) + frobenius(M)
    res_l = abs((R.T @ L @ R)[p0, p0])
    res_m = abs((R @ M @ R.T)[q0, q0])
    if max(res_l, res_m) > tol.zero_tol * max(scale, 1e-300):
        raise NumericalBreakdown(f"completion residuals {res_l:.3e}, {res_m:.3e} above tolerance")
    return Zero3Construction(_frozen(R), Branch.CondB, {
        "p": p, "q": q, "shared_entry": float(R[q0, p0]),
        "l_range": list(feas.l_range), "m_range": list(feas.m_range),
    })


def _cond_a_branch(M: np.ndarray, q: int) -> Branch:
    others = [j for j in range(3) if j != q - 1]
    m22, m33 = M[others[0], others[0]], M[others[1], others[1]]
    band = 1e-14 * max(frobenius(M), 1e-300)
    if abs(m22) > band:
        return Branch.CondA_FreeW
    if abs(m33) > band:
        return Branch.CondA_FreeZ
    return Branch.CondA_DoubleZeroRow


def build_R_condA(L3, M3, p: int, q: int, tol: ToleranceConfig = DEFAULT_TOL) -> np.ndarray:
    return build_R_condA_construction(L3, M3, p, q, tol).transform


def build_R_condA_construction(L3, M3, p, q, tol: ToleranceConfig = DEFAULT_TOL) -> Zero3Construction:
    L, M = _sym3(L3), _sym3(M3)
    if not conditions_A(L, M, p, tol):
        raise ConditionsNotMet(f"pair fails the nondefinite/minor test for p={p}")
    try:
        out = conjugate_zero_pq(L, M, p, q, tol=tol)
    except ZeroingInfeasible as exc:
        raise ZeroingInfeasible(
            f"conditions hold for p={p} but no R zeros ({p},{q}): {exc}"
        ) from None
    out.branch = _cond_a_branch(M, q)
    return out


def build_R_condB(L3, M3, p: int, q: int, tol: ToleranceConfig = DEFAULT_TOL) -> np.ndarray:
    return build_R_condB_construction(L3, M3, p, q, tol).transform


def build_R_condB_construction(L3, M3, p, q, tol: ToleranceConfig = DEFAULT_TOL) -> Zero3Construction:
    """R for (p, q) with ``R[q,p] = 0`` whenever the pair allows it.

    The zero shared entry needs L without row/column q and M without
    row/column p to be nondefinite, which coincides with the stated test only
    when p == q.  Otherwise the shared entry is taken from the feasible range.
    """
    L, M = _sym3(L3), _sym3(M3)
    if not conditions_B(L, M, p, q, tol):
        raise ConditionsNotMet(f"2x2 principal blocks are definite for (p,q)=({p},{q})")
    return conjugate_zero_pq(L, M, p, q, prefer_zero_entry=True, tol=tol)


# --------------------------------------------------------------------------
# Givens completion


def givens_angle(a: float, b: float, c: float) -> Optional[float]:
    """Angle theta with ``a cos^2 + 2 b cos sin + c sin^2 = 0``, smallest |theta|.

    Returns None when the 2x2 form ``[[a, b], [b, c]]`` is definite.
    """
    half = (a - c) / 2.0
    R = math.hypot(half, b)
    mean = (a + c) / 2.0
    if R == 0.0:
        return 0.0 if mean == 0.0 else None
    arg = -mean / R
    if arg > 1.0 + 1e-12 or arg < -1.0 - 1e-12:
        return None
    arg = min(1.0, max(-1.0, arg))
    th0 = math.atan2(b, half)
    best = None
    for sgn in (1.0, -1.0):
        th = (th0 + sgn * math.acos(arg)) / 2.0
        th = math.remainder(th, math.pi)
        if th <= -math.pi / 2:
            th += math.pi
        key = (abs(th), -th)
        if best is None or key < best[0]:
            best = (key, th)
    return best[1]


def find_givens_zero(A3, i: int, j: int, c: Optional[int] = None,
                     tol: ToleranceConfig = DEFAULT_TOL) -> np.ndarray:
    """Givens G on plane (i, j) with ``(G^T A3 G)[c,c] = 0``; c defaults to i."""
    A = as_matrix(A3)
    A = (A + A.T) / 2.0
    n = A.shape[0]
    c = i if c is None else c
    if c not in (i, j):
        raise IndexError("target index must be one of the rotation plane indices")
    a0, b0 = i - 1, j - 1
    block = A[np.ix_([a0, b0], [a0, b0])]
    if not size2_nondefinite(block, tol):
        raise GivensInfeasible(f"the ({i},{j}) block has positive determinant")
    aa, ab, bb = block[0, 0], block[0, 1], block[1, 1]
    # column i of G is (cos, sin) on (i, j); column j is (-sin, cos)
    theta = givens_angle(aa, ab, bb) if c == i else givens_angle(bb, -ab, aa)
    if theta is None:
        raise GivensInfeasible(f"the ({i},{j}) block admits no neutral direction")
    return givens(n, i, j, theta)


# --------------------------------------------------------------------------
# two zeros on one side, one on the other

_FAMILY_SAMPLES = 720
_SIGNS = ((1, 1), (1, -1), (-1, 1), (-1, -1))


class _Family:
    """Orthonormal frames whose columns a1, a2 are neutral for L.

    Column a2 runs along a neutral loop; column a1 is one of the two neutral
    directions of L restricted to the plane orthogonal to it (``branch``);
    the remaining column completes the frame.  Column signs of a1 and the
    free column are free as well, and they matter for the M side.
    """

    def __init__(self, L, loop, a1, a2):
        self.L, self.loop, self.a1, self.a2 = L, loop, a1, a2
        self.free = 3 - a1 - a2

    def _plane(self, ts):
        Y = self.loop.points(ts)
        tau = self.loop.tangents(ts)
        nu = np.cross(Y, tau)
        L = self.L
        a = np.einsum("ti,ij,tj->t", tau, L, tau)
        b = np.einsum("ti,ij,tj->t", tau, L, nu)
        c = np.einsum("ti,ij,tj->t", nu, L, nu)
        half, mean = (a - c) / 2.0, (a + c) / 2.0
        R = np.hypot(half, b)
        with np.errstate(divide="ignore", invalid="ignore"):
            arg = np.where(R > 0.0, -mean / R, 0.0)
        ok = np.abs(arg) <= 1.0 + 1e-12
        ok &= (R > 0.0) | (np.abs(mean) <= 1e-14 * (np.abs(a) + np.abs(c) + 1e-300))
        th0 = np.arctan2(b, half)
        return Y, tau, nu, np.clip(arg, -1.0, 1.0), th0, ok

    def rows(self, ts, branch, signs, b0, th0=None):
        """Row b0 of each frame, plus the feasibility mask and raw angle."""
        Y, tau, nu, arg, raw, ok = self._plane(ts)
        if th0 is None:
            th0 = raw
        else:
            th0 = raw + 2 * np.pi * np.round((th0 - raw) / (2 * np.pi))
        phi = (th0 + branch * np.arccos(arg)) / 2.0
        W1 = np.cos(phi)[:, None] * tau + np.sin(phi)[:, None] * nu
        W0 = np.cross(W1, Y)
        row = np.empty((len(Y), 3))
        row[:, self.free] = signs[0] * W0[:, b0]
        row[:, self.a1] = signs[1] * W1[:, b0]
        row[:, self.a2] = Y[:, b0]
        return row, ok, th0, (W0, W1, Y)

    def frame(self, t, branch, signs, th0_ref):
        _, ok, _, (W0, W1, Y) = self.rows(np.array([t]), branch, signs, 0, np.array([th0_ref]))
        W = np.empty((3, 3))
        W[:, self.free] = signs[0] * W0[0]
        W[:, self.a1] = signs[1] * W1[0]
        W[:, self.a2] = Y[0]
        return W, bool(ok[0])


def solve_two_one(L3, M3, l_pos: Sequence[int], m_pos: int,
                  tol: ToleranceConfig = DEFAULT_TOL) -> Optional[np.ndarray]:
    """Orthogonal W zeroing ``(W^T L W)`` at both ``l_pos`` and ``(W M W^T)`` at ``m_pos``.

    Scans the one-parameter family of frames whose ``l_pos`` columns are
    orthonormal L-neutral vectors: 2 partner branches times 4 sign patterns per
    loop point.  The M-side entry is continuous along each series, so sign
    changes are refined with Brent's method; a near-tangential minimum is
    polished as a last resort.  Returns None when nothing is found.
    """
    L, M = _sym3(L3), _sym3(M3)
    a1, a2 = (x - 1 for x in l_pos)
    if a1 == a2:
        raise ValueError("l_pos entries must differ")
    b0 = m_pos - 1
    scale = frobenius(L) + frobenius(M)
    band = tol.zero_tol * max(scale, 1e-300)
    ns = neutral.neutral_set(L, tol.disc_clamp)
    if ns.kind == "empty":
        return None
    if ns.kind == "all":
        # every frame zeros L; only the M side matters
        if not is_nondefinite(M, tol):
            return None
        W = np.array(zero_entry_1_1(M, tol).transform.T)
        W[[0, b0]] = W[[b0, 0]]
        return _frozen(W)
    if ns.kind == "point":
        z = ns.point
        loops = [neutral.Loop(z, _any_perp(z))]
        # only t = 0 is neutral on this circle
        grid = np.array([0.0])
    else:
        loops = ns.loops
        grid = np.linspace(0.0, 2 * math.pi, _FAMILY_SAMPLES + 1)

    best = None
    for loop in loops:
        fam = _Family(L, loop, a1, a2)
        for branch in (1.0, -1.0):
            for signs in _SIGNS:
                _, _, raw, _ = fam.rows(grid, branch, signs, b0)
                # rows along the unwrapped angle are continuous in t and match frame()
                row, ok, th0, _ = fam.rows(grid, branch, signs, b0, np.unwrap(raw))
                f = np.einsum("ti,ij,tj->t", row, M, row)
                f = np.where(ok, f, np.nan)
                for i in range(len(grid)):
                    if not ok[i]:
                        continue
                    if abs(f[i]) <= band:
                        W, _ = fam.frame(grid[i], branch, signs, th0[i])
                        return _frozen(W)
                    if best is None or abs(f[i]) < best[0]:
                        best = (abs(f[i]), fam, grid[i], branch, signs, th0[i])
                    if i + 1 < len(grid) and ok[i + 1] and (f[i] < 0.0) != (f[i + 1] < 0.0):
                        W = _refine_root(fam, grid[i], grid[i + 1], branch, signs, th0[i], M, b0, band)
                        if W is not None:
                            return _frozen(W)
    if best is not None and len(grid) > 1:
        _, fam, t0, branch, signs, th_ref = best
        h = grid[1] - grid[0]

        def objective(u):
            W, ok = fam.frame(u, branch, signs, th_ref)
            return abs(W[b0] @ M @ W[b0]) if ok else math.inf

        r = minimize_scalar(objective, bounds=(t0 - h, t0 + h), method="bounded",
                            options={"xatol": 1e-14})
        W, ok = fam.frame(float(r.x), branch, signs, th_ref)
        if ok and abs(W[b0] @ M @ W[b0]) <= band:
            return _frozen(W)
    return None


def _any_perp(z):
    k = int(np.argmin(np.abs(z)))
    e = np.zeros(3)
    e[k] = 1.0
    v = e - z * (z @ e)
    return v / np.linalg.norm(v)


def _refine_root(fam, t0, t1, branch, signs, th_ref, M, b0, band):
    def g(t):
        W, ok = fam.frame(t, branch, signs, th_ref)
        return W[b0] @ M @ W[b0] if ok else np.nan

    g0, g1 = g(t0), g(t1)
    if not (np.isfinite(g0) and np.isfinite(g1)) or (g0 < 0) == (g1 < 0):
        return None
    t = brentq(g, t0, t1, xtol=1e-15, rtol=4 * np.finfo(float).eps)
    W, ok = fam.frame(t, branch, signs, th_ref)
    if ok and abs(W[b0] @ M @ W[b0]) <= band:
        return W
    return None


class OmegaVariant(enum.Enum):
    A = "A"
    B = "B"
    C = "C"


def build_omega(L3, M3, variant, p: int, q: int, r: int,
                tol: ToleranceConfig = DEFAULT_TOL) -> np.ndarray:
    """Three diagonal zeros spread over the pair.

    variant A: ``(W^T L W)[p,p] = 0`` and ``(W M W^T)`` zero at q and r.
    variant B: ``(W^T L W)`` zero at q and r, and ``(W M W^T)[p,p] = 0`` when attainable.
    variant C: ``(W^T L W)`` zero at q and r and ``(W M W^T)[p,p] = 0``.
    """
    variant = OmegaVariant(variant if not isinstance(variant, OmegaVariant) else variant.value)
    L, M = _sym3(L3), _sym3(M3)
    for name, v in (("p", p), ("q", q), ("r", r)):
        if not 1 <= v <= 3:
            raise IndexError(f"{name} {v} out of range 1..3")
    if variant is OmegaVariant.A:
        if not (any(conditions_A(L, M, k, tol) for k in (1, 2, 3)) and is_nondefinite(M, tol)):
            raise ConditionsNotMet("variant A needs the nondefinite/minor test and a nondefinite M")
        if q == r:
            return conjugate_zero_pq(L, M, p, q, tol=tol).transform
        W = solve_two_one(M, L, (q, r), p, tol)
        if W is None:
            raise ZeroingInfeasible("no orthogonal matrix gives the requested three zeros")
        return _frozen(W.T)
    if variant is OmegaVariant.B:
        if not (any(conditions_A(L, M, k, tol) for k in (1, 2, 3)) and is_nondefinite(L, tol)):
            raise ConditionsNotMet("variant B needs the nondefinite/minor test and a nondefinite L")
    elif not any(conditions_B(L, M, a, b, tol) for a in (1, 2, 3) for b in (1, 2, 3)):
        raise ConditionsNotMet("variant C needs a nondefinite 2x2 principal block on each side")
    if q == r:
        return conjugate_zero_pq(L, M, q, p, tol=tol).transform
    W = solve_two_one(L, M, (q, r), p, tol)
    if W is not None:
        return W
    if variant is OmegaVariant.B:
        W = solve_two_one(L, np.zeros((3, 3)), (q, r), p, tol)
        if W is not None:
            return W
    raise ZeroingInfeasible("no orthogonal matrix gives the requested three zeros")
