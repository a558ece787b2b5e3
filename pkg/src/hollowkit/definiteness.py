"""Predicates on symmetric parts: definiteness, the strength ladder and the
size-3 zeroing conditions.

Every equality or sign test is taken inside a band that scales with the
Frobenius norm of the symmetric part, raised to the degree of the quantity
being tested (entries ~ s, 2x2 minors ~ s**2, determinants ~ s**3).
"""
from __future__ import annotations

import enum
import itertools
from dataclasses import dataclass, field

import numpy as np

from .errors import InvalidMatrix
from .matrix import DEFAULT_TOL, ToleranceConfig, as_matrix, det, frobenius


class LadderLevel(enum.IntEnum):
    """Strength levels, strongest first.  Lower value means stronger."""

    ZeroDiagonalEntry = 0
    Traceless = 1
    MixedSignDiagonal = 2
    Size3SatisfiesEq2 = 3
    Size2PrincipalNondefinite = 4
    Size3PrincipalNondefinite = 5
    Nondefinite = 6
    Definite = 7


# Which weaker levels each level entails.  Traceless sits beside the zero
# diagonal entry: both imply a mixed-sign diagonal.
LADDER_IMPLIES = {
    LadderLevel.ZeroDiagonalEntry: (LadderLevel.MixedSignDiagonal,),
    LadderLevel.Traceless: (LadderLevel.MixedSignDiagonal,),
    LadderLevel.MixedSignDiagonal: (LadderLevel.Size3SatisfiesEq2,),
    LadderLevel.Size3SatisfiesEq2: (LadderLevel.Size2PrincipalNondefinite,),
    LadderLevel.Size2PrincipalNondefinite: (LadderLevel.Size3PrincipalNondefinite,),
    LadderLevel.Size3PrincipalNondefinite: (LadderLevel.Nondefinite,),
    LadderLevel.Nondefinite: (),
    LadderLevel.Definite: (),
}


def _sym(M) -> np.ndarray:
    M = as_matrix(M)
    return (M + M.T) / 2.0


def _require_size(M: np.ndarray, n: int, what: str = "matrix"):
    if M.shape[0] != n:
        raise InvalidMatrix(f"{what} must have size {n}, got {M.shape[0]}")


def _definite_sign(S: np.ndarray, tol: ToleranceConfig) -> int:
    """+1 if S is positive definite, -1 if negative definite, 0 otherwise."""
    n = S.shape[0]
    s = frobenius(S)
    if s == 0.0:
        return 0
    pos = neg = True
    for k in range(1, n + 1):
        D = det(S[:k, :k])
        band = tol.zero_tol * s ** k
        if not D > band:
            pos = False
        if not (-1) ** k * D > band:
            neg = False
        if not (pos or neg):
            return 0
    return 1 if pos else -1


def is_nondefinite(M, tol: ToleranceConfig = DEFAULT_TOL) -> bool:
    """True when the symmetric part is neither positive nor negative definite.

    Decided by leading principal minors of +-S; a minor inside the band
    ``zero_tol * ||S||_F**k`` counts as singular.
    """
    return _definite_sign(_sym(M), tol) == 0


def size2_nondefinite(M2, tol: ToleranceConfig = DEFAULT_TOL) -> bool:
    S = _sym(M2)
    _require_size(S, 2)
    s = frobenius(S)
    return det(S) <= tol.zero_tol * s * s


def _minors3(S: np.ndarray) -> np.ndarray:
    """All nine (i, j) minors of a 3x3 matrix, 0-based storage."""
    d = np.empty((3, 3))
    for i in range(3):
        for j in range(3):
            rows = [r for r in range(3) if r != i]
            cols = [c for c in range(3) if c != j]
            sub = S[np.ix_(rows, cols)]
            d[i, j] = sub[0, 0] * sub[1, 1] - sub[0, 1] * sub[1, 0]
    return d


def eq2_clause(S: np.ndarray, tol: ToleranceConfig = DEFAULT_TOL) -> bool:
    """The minor disjunction on a symmetric 3x3 matrix, without the side condition.

    Exists i != k and any j with d_ii <= 0 and either
    (d_ii != 0 and m_jj * d >= 0) or (d_kk = d_ki = 0).
    """
    s = frobenius(S)
    if s == 0.0:
        return True
    t2 = tol.zero_tol * s ** 2
    d = _minors3(S)
    D = det(S)
    diag = np.diag(S)
    # m_jj * d has degree 4
    sign_ok = any(diag[j] * D >= -tol.zero_tol * s ** 4 for j in range(3))
    for i in range(3):
        if d[i, i] > t2:
            continue
        if abs(d[i, i]) > t2 and sign_ok:
            return True
        for k in range(3):
            if k != i and abs(d[k, k]) <= t2 and abs(d[k, i]) <= t2:
                return True
    return False


def _side_condition(S: np.ndarray, p0: int, tol: ToleranceConfig) -> bool:
    """False only when the (p, p) entry is the sole nonzero entry."""
    s = frobenius(S)
    if s == 0.0:
        return True
    band = tol.zero_tol * s
    if abs(S[p0, p0]) <= band:
        return True
    others = np.abs(S).copy()
    others[p0, p0] = 0.0
    return bool(others.max() > band)


def satisfies_eq2(M3, p: int, tol: ToleranceConfig = DEFAULT_TOL) -> bool:
    S = _sym(M3)
    _require_size(S, 3)
    if not 1 <= p <= 3:
        raise IndexError(f"p {p} out of range 1..3")
    return eq2_clause(S, tol) and _side_condition(S, p - 1, tol)


def conditions_A(L3, M3, p: int, tol: ToleranceConfig = DEFAULT_TOL) -> bool:
    L = _sym(L3)
    _require_size(L, 3, "L")
    _require_size(_sym(M3), 3, "M")
    return is_nondefinite(L, tol) and satisfies_eq2(M3, p, tol)


def _delete(S: np.ndarray, k0: int) -> np.ndarray:
    keep = [i for i in range(S.shape[0]) if i != k0]
    return S[np.ix_(keep, keep)]


def conditions_B(L3, M3, p: int, q: int, tol: ToleranceConfig = DEFAULT_TOL) -> bool:
    """The (p,p) principal 2x2 of L and the (q,q) principal 2x2 of M are nondefinite.

    The "(i,i) principal submatrix" is the one with row and column i removed.
    """
    L, M = _sym(L3), _sym(M3)
    _require_size(L, 3, "L")
    _require_size(M, 3, "M")
    if not (1 <= p <= 3 and 1 <= q <= 3):
        raise IndexError(f"(p, q) = ({p}, {q}) out of range 1..3")
    return size2_nondefinite(_delete(L, p - 1), tol) and size2_nondefinite(_delete(M, q - 1), tol)


def trace_condition(M, idx: int, tol: ToleranceConfig = DEFAULT_TOL) -> bool:
    """``tr(M)**2 <= M[idx, idx] * tr(M)``: the diagonal entry lies between 0 and the trace."""
    M = as_matrix(M)
    n = M.shape[0]
    if not 1 <= idx <= n:
        raise IndexError(f"idx {idx} out of range 1..{n}")
    t = float(np.trace(M))
    m = float(M[idx - 1, idx - 1])
    s = frobenius(M)
    return t * t <= m * t + tol.zero_tol * s * s


def _mixed_sign(diag: np.ndarray, band: float) -> bool:
    return not (np.all(diag > band) or np.all(diag < -band))


def classify(M, tol: ToleranceConfig = DEFAULT_TOL) -> LadderLevel:
    """Strongest ladder level satisfied by the symmetric part of M."""
    S = _sym(M)
    n = S.shape[0]
    s = frobenius(S)
    band = tol.zero_tol * s
    diag = np.diag(S)
    if np.any(np.abs(diag) <= band):
        return LadderLevel.ZeroDiagonalEntry
    if abs(float(np.trace(S))) <= band:
        return LadderLevel.Traceless
    if _mixed_sign(diag, band):
        return LadderLevel.MixedSignDiagonal
    if n >= 3 and any(
        eq2_clause(S[np.ix_(c, c)], tol) for c in itertools.combinations(range(n), 3)
    ):
        return LadderLevel.Size3SatisfiesEq2
    if n >= 2 and any(
        size2_nondefinite(S[np.ix_(c, c)], tol) for c in itertools.combinations(range(n), 2)
    ):
        return LadderLevel.Size2PrincipalNondefinite
    if n >= 3 and any(
        is_nondefinite(S[np.ix_(c, c)], tol) for c in itertools.combinations(range(n), 3)
    ):
        return LadderLevel.Size3PrincipalNondefinite
    if is_nondefinite(S, tol):
        return LadderLevel.Nondefinite
    return LadderLevel.Definite


def ladder_holds(M, level: LadderLevel, tol: ToleranceConfig = DEFAULT_TOL) -> bool:
    """Whether M satisfies ``level`` itself (not just something stronger)."""
    S = _sym(M)
    n = S.shape[0]
    s = frobenius(S)
    band = tol.zero_tol * s
    diag = np.diag(S)
    if level is LadderLevel.ZeroDiagonalEntry:
        return bool(np.any(np.abs(diag) <= band))
    if level is LadderLevel.Traceless:
        return abs(float(np.trace(S))) <= band
    if level is LadderLevel.MixedSignDiagonal:
        return _mixed_sign(diag, band)
    if level is LadderLevel.Size3SatisfiesEq2:
        return n >= 3 and any(
            eq2_clause(S[np.ix_(c, c)], tol) for c in itertools.combinations(range(n), 3)
        )
    if level is LadderLevel.Size2PrincipalNondefinite:
        return n >= 2 and any(
            size2_nondefinite(S[np.ix_(c, c)], tol) for c in itertools.combinations(range(n), 2)
        )
    if level is LadderLevel.Size3PrincipalNondefinite:
        return n >= 3 and any(
            is_nondefinite(S[np.ix_(c, c)], tol) for c in itertools.combinations(range(n), 3)
        )
    if level is LadderLevel.Nondefinite:
        return is_nondefinite(S, tol)
    return not is_nondefinite(S, tol)


@dataclass
class ConditionReport:
    ladder: LadderLevel
    condA: dict = field(default_factory=dict)
    condB: dict = field(default_factory=dict)
    traceCond: dict = field(default_factory=dict)

    def to_dict(self):
        return {
            "ladder": self.ladder.name,
            "condA": {str(p): v for p, v in self.condA.items()},
            "condB": {f"{p},{q}": v for (p, q), v in self.condB.items()},
            "traceCond": {str(i): v for i, v in self.traceCond.items()},
        }


def condition_report(L3, M3, tol: ToleranceConfig = DEFAULT_TOL) -> ConditionReport:
    """Conditions A/B for every (p, q) and trace tests for M, on a 3x3 pair.

    The ladder level reported is that of M, the side the conditions constrain.
    """
    L, M = _sym(L3), _sym(M3)
    _require_size(L, 3, "L")
    _require_size(M, 3, "M")
    condA = {p: conditions_A(L, M, p, tol) for p in (1, 2, 3)}
    condB = {(p, q): conditions_B(L, M, p, q, tol) for p in (1, 2, 3) for q in (1, 2, 3)}
    trace = {i: trace_condition(M, i, tol) for i in (1, 2, 3)}
    return ConditionReport(classify(M, tol), condA, condB, trace)
