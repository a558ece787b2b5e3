"""Simultaneous zeroing of diagonal entries of a pair (V^T L V, V M V^T).

Shapes produced, for size n:

* ``conj_zero``: ``V^T L V`` zero at positions 3..n, ``V M V^T`` zero at 1..n-2.
* ``conj_zero_prime``: ``V^T L V`` zero at 2..n, ``V M V^T`` zero at 1..n-2.
  With a traceless L this makes ``V^T L V`` hollow.

For n = 3 both are solved by exact kernels from :mod:`hollowkit.zero3`.  For
larger n the transform is found by Gauss-Newton on the orthogonal group with
deterministic restarts.  ``build_phi`` exposes the single block step that
zeros one more entry on each side of a pair that already carries a partial
pattern.
"""
from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from typing import List, Optional, Sequence

import numpy as np

from . import newton, zero3
from .definiteness import (
    condition_report,
    conditions_A,
    conditions_B,
    is_nondefinite,
    trace_condition,
)
from .errors import (
    ConditionsNotMet,
    FinalStepConditionsNotMet,
    GivensInfeasible,
    InvalidMatrix,
    NotTraceless,
    NumericalBreakdown,
    SizeMismatch,
    SizeTooSmall,
    StepConditionsNotMet,
)
from .matrix import (
    DEFAULT_TOL,
    ToleranceConfig,
    as_matrix,
    embed_block,
    frobenius,
    matrix_from_json_obj,
    matrix_to_json_obj,
    orthogonality_residual,
)

# (p, q) placements allowed for the block kernel at an intermediate step
ALLOWED_PQ = ((1, 3), (2, 1), (2, 2), (3, 1), (3, 2))
MAX_RESTARTS = 64


@dataclass
class Factor:
    name: str
    matrix: np.ndarray
    detail: dict = field(default_factory=dict)

    def to_dict(self):
        out = {"name": self.name, "matrix": matrix_to_json_obj(self.matrix)}
        if self.detail:
            out["detail"] = self.detail
        return out


@dataclass
class ZeroingCertificate:
    L: np.ndarray
    M: np.ndarray
    psi: np.ndarray
    factors: List[Factor]
    patternL: List[int]
    patternM: List[int]
    c: Optional[float] = None
    notes: dict = field(default_factory=dict)
    # outputs as stated by a parsed certificate; never used to build one
    claimedL: Optional[np.ndarray] = None
    claimedM: Optional[np.ndarray] = None

    @property
    def transformedL(self) -> np.ndarray:
        return self.psi.T @ self.L @ self.psi

    @property
    def transformedM(self) -> np.ndarray:
        return self.psi @ self.M @ self.psi.T

    @property
    def residuals(self) -> dict:
        shift = 0.0 if self.c is None else self.c
        dl = np.diag(self.transformedL) - shift
        dm = np.diag(self.transformedM) - shift
        return {
            "patternL": float(max((abs(dl[i - 1]) for i in self.patternL), default=0.0)),
            "patternM": float(max((abs(dm[i - 1]) for i in self.patternM), default=0.0)),
            "orthogonality": orthogonality_residual(self.psi),
        }

    def to_dict(self):
        out = {
            "psi": matrix_to_json_obj(self.psi),
            "factors": [f.to_dict() for f in self.factors],
            "L_in": matrix_to_json_obj(self.L),
            "M_in": matrix_to_json_obj(self.M),
            "L_out": matrix_to_json_obj(self.transformedL),
            "M_out": matrix_to_json_obj(self.transformedM),
            "patternL": list(self.patternL),
            "patternM": list(self.patternM),
            "residuals": self.residuals,
        }
        if self.c is not None:
            out["c"] = self.c
        if self.notes:
            out["notes"] = self.notes
        return out

    @classmethod
    def from_dict(cls, obj) -> "ZeroingCertificate":
        try:
            factors = [
                Factor(f["name"], matrix_from_json_obj(f["matrix"]), f.get("detail", {}))
                for f in obj.get("factors", [])
            ]
            return cls(
                L=matrix_from_json_obj(obj["L_in"]),
                M=matrix_from_json_obj(obj["M_in"]),
                psi=matrix_from_json_obj(obj["psi"]),
                factors=factors,
                patternL=[int(i) for i in obj["patternL"]],
                patternM=[int(i) for i in obj["patternM"]],
                c=obj.get("c"),
                notes=obj.get("notes", {}),
                claimedL=matrix_from_json_obj(obj["L_out"]) if "L_out" in obj else None,
                claimedM=matrix_from_json_obj(obj["M_out"]) if "M_out" in obj else None,
            )
        except (KeyError, TypeError) as exc:
            raise InvalidMatrix(f"malformed certificate: {exc}") from None


def _pair(L, M):
    L, M = as_matrix(L), as_matrix(M)
    if L.shape != M.shape:
        raise SizeMismatch(f"L is {L.shape[0]}x{L.shape[0]} but M is {M.shape[0]}x{M.shape[0]}")
    return L, M


def _sym(A):
    return (A + A.T) / 2.0


def _frozen(a):
    a = np.array(a, dtype=np.float64)
    a.setflags(write=False)
    return a


def _check_pattern(cert: ZeroingCertificate, tol: ToleranceConfig):
    res = cert.residuals
    scale = max(frobenius(cert.L), frobenius(cert.M), 1e-300)
    if res["patternL"] > tol.zero_tol * scale or res["patternM"] > tol.zero_tol * scale:
        raise NumericalBreakdown(
            f"pattern residuals {res['patternL']:.3e}, {res['patternM']:.3e} above tolerance"
        )


# --------------------------------------------------------------------------
# single block step


@dataclass
class PhiStep:
    phi: np.ndarray
    factors: List[Factor]
    route: str  # "conditions" or "exact"


def _transposition(n: int, i: int, j: int) -> np.ndarray:
    P = np.eye(n)
    if i != j:
        P[[i - 1, j - 1]] = P[[j - 1, i - 1]]
    return P


def _perm3(perm) -> np.ndarray:
    P = np.zeros((3, 3))
    for j, p in enumerate(perm):
        P[p - 1, j] = 1.0
    return P


def build_phi_step(Lprev, Mprev, i: int, tol: ToleranceConfig = DEFAULT_TOL,
                   strict: bool = False) -> PhiStep:
    """One step of the block chain.

    Input: Lprev with its last i-1 diagonal entries zero, Mprev with its first
    n-(i+2) zero.  Output Phi with ``Phi^T Lprev Phi`` zero on the last i
    entries and ``Phi Mprev Phi^T`` zero on the first n-(i+1).  The work
    happens on the 3x3 block at positions n-i-1 .. n-i+1 (1-based), where L
    needs a zero in block slot 3 and M in block slot 1.

    Candidates are tried in a fixed order: transpositions bringing a leading
    L entry and a trailing M entry into the block, then block permutations
    for which the nondefinite/minor test (then the 2x2 block test) admits a
    kernel R.  Unless ``strict``, the exact 3x3 solver is tried last.

    When the inputs carry only part of the expected zeros, transpositions are
    limited to those that cannot move a nonzero entry onto a tracked zero, and
    the output keeps every tracked zero present on input plus the two new ones.
    """
    L, M = _pair(Lprev, Mprev)
    L, M = _sym(L), _sym(M)
    n = L.shape[0]
    if n < 3:
        raise SizeTooSmall("the block step needs n >= 3")
    if not 1 <= i <= n - 2:
        raise IndexError(f"step {i} out of range 1..{n - 2}")
    lo = n - i - 2  # 0-based first block position
    block = [lo, lo + 1, lo + 2]
    scale = max(frobenius(L) + frobenius(M), 1e-300)
    band = tol.zero_tol * scale
    first_report = None

    # 0-based positions that must be zero afterwards
    want_l = [lo + 2] + [k for k in range(lo + 3, n) if abs(L[k, k]) <= band]
    want_m = [lo] + [k for k in range(lo) if abs(M[k, k]) <= band]

    def finish(T_L, Q, T_M, factors, route):
        Phi = T_L @ embed_block(n, lo, Q) @ T_M.T
        dl = np.diag(Phi.T @ L @ Phi)
        dm = np.diag(Phi @ M @ Phi.T)
        if np.all(np.abs(dl[want_l]) <= band) and np.all(np.abs(dm[want_m]) <= band):
            return PhiStep(_frozen(Phi), factors, route)
        return None

    # T_L lands on the M side last, T_M on the L side last
    xs = [lo + 1] + [x + 1 for x in want_m[1:]]
    ys = [lo + 3] + [y + 1 for y in want_l[1:]]
    t_pairs = [(x, y) for x in sorted(xs) for y in sorted(ys)]
    for x, y in t_pairs:
        T_L = _transposition(n, x, lo + 1)
        T_M = _transposition(n, y, lo + 3)
        L1 = T_L.T @ L @ T_L
        M1 = T_M.T @ M @ T_M
        Lb, Mb = L1[np.ix_(block, block)], M1[np.ix_(block, block)]
        if first_report is None:
            first_report = condition_report(Lb, Mb, tol).to_dict()
        for use_a in (True, False):
            for sm in itertools.permutations((1, 2, 3)):
                for sl in itertools.permutations((1, 2, 3)):
                    S_M, S_L = _perm3(sm), _perm3(sl)
                    # R sees (S_M Lb S_M^T, S_L Mb S_L^T); S_L sends slot 3 to a, S_M slot 1 to b
                    a, b = sl[2], sm[0]
                    L2 = S_M @ Lb @ S_M.T
                    M2 = S_L @ Mb @ S_L.T
                    try:
                        if use_a:
                            if not conditions_A(L2, M2, a, tol):
                                continue
                            R = zero3.build_R_condA(L2, M2, a, b, tol)
                        else:
                            if (a, b) not in ALLOWED_PQ or not conditions_B(L2, M2, a, b, tol):
                                continue
                            R = zero3.build_R_condB(L2, M2, a, b, tol)
                    except ConditionsNotMet:
                        continue
                    Q = S_M.T @ R @ S_L
                    factors = [
                        Factor("T_L", T_L), Factor("S_M^T", embed_block(n, lo, S_M.T)),
                        Factor("R", embed_block(n, lo, R), {"a": a, "b": b, "kind": "A" if use_a else "B"}),
                        Factor("S_L", embed_block(n, lo, S_L)), Factor("T_M^T", T_M.T),
                    ]
                    out = finish(T_L, Q, T_M, factors, "conditions")
                    if out is not None:
                        return out
    if not strict:
        for x, y in t_pairs:
            T_L = _transposition(n, x, lo + 1)
            T_M = _transposition(n, y, lo + 3)
            L1 = T_L.T @ L @ T_L
            M1 = T_M.T @ M @ T_M
            Lb, Mb = L1[np.ix_(block, block)], M1[np.ix_(block, block)]
            try:
                Q = zero3.conjugate_zero_pq(Lb, Mb, 3, 1, tol=tol).transform
            except (ConditionsNotMet, NumericalBreakdown):
                continue
            factors = [Factor("T_L", T_L), Factor("Q", embed_block(n, lo, Q)), Factor("T_M^T", T_M.T)]
            out = finish(T_L, Q, T_M, factors, "exact")
            if out is not None:
                return out
    raise StepConditionsNotMet(i, f"no admissible block construction at step {i}", first_report)


def build_phi(Lprev, Mprev, i: int, tol: ToleranceConfig = DEFAULT_TOL) -> np.ndarray:
    return build_phi_step(Lprev, Mprev, i, tol).phi


# --------------------------------------------------------------------------
# drivers


def _restart_seeds(n: int, seed: int):
    yield np.eye(n)
    rng = np.random.default_rng(seed)
    for _ in range(MAX_RESTARTS):
        Q, R = np.linalg.qr(rng.standard_normal((n, n)))
        yield Q * np.sign(np.diag(R))


def _newton_pattern(L, M, pl, pm, seed: int, tol: ToleranceConfig):
    """Factors [seed, refinement] for the 1-based patterns, or None."""
    n = L.shape[0]
    best = None
    for k, V0 in enumerate(_restart_seeds(n, seed)):
        res = newton.solve(L, M, [i - 1 for i in pl], [j - 1 for j in pm], V0)
        if res.converged:
            V = res.V
            return V, [
                Factor("seed", _frozen(V0), {"restart": k}),
                Factor("gauss_newton", _frozen(V0.T @ V), {"iterations": res.iterations}),
            ], {"restarts": k}
        if best is None or res.residual < best:
            best = res.residual
    return None, None, {"best_residual": best}


def _trace_preconditions(L, M, tol):
    n = L.shape[0]
    return {
        "traceL": any(trace_condition(L, i, tol) for i in range(1, max(n - 2, 0) + 1)),
        "traceM": any(trace_condition(M, i, tol) for i in range(3, n + 1)),
    }


def _block_report(L, M, tol):
    n = L.shape[0]
    if n < 3:
        return None
    b = [n - 3, n - 2, n - 1]
    return condition_report(_sym(L)[np.ix_(b, b)], _sym(M)[np.ix_(b, b)], tol).to_dict()


def conj_zero(L, M, tol: ToleranceConfig = DEFAULT_TOL, seed: int = 0) -> ZeroingCertificate:
    """Psi with ``Psi^T L Psi`` zero at 3..n and ``Psi M Psi^T`` zero at 1..n-2."""
    L, M = _pair(L, M)
    n = L.shape[0]
    pl, pm = list(range(3, n + 1)), list(range(1, n - 1))
    notes = _trace_preconditions(L, M, tol) if n >= 3 else {}
    if n <= 2:
        return ZeroingCertificate(L, M, _frozen(np.eye(n)), [Factor("identity", _frozen(np.eye(n)))],
                                  [], [], notes=notes)
    Ls, Ms = _sym(L), _sym(M)
    if not is_nondefinite(Ls, tol) or not is_nondefinite(Ms, tol):
        raise StepConditionsNotMet(1, "a definite matrix cannot acquire a zero diagonal entry",
                                   _block_report(L, M, tol))
    if n == 3:
        try:
            c = zero3.conjugate_zero_pq(Ls, Ms, 3, 1, tol=tol)
        except (ConditionsNotMet, NumericalBreakdown) as exc:
            raise StepConditionsNotMet(1, str(exc), _block_report(L, M, tol)) from None
        cert = ZeroingCertificate(L, M, c.transform, [Factor("R", c.transform, c.to_dict()["parameters"])],
                                  pl, pm, notes=notes)
    else:
        V, factors, info = _newton_pattern(Ls, Ms, pl, pm, seed, tol)
        if V is None:
            raise StepConditionsNotMet(1, f"no transform found (best relative residual {info['best_residual']:.3e})",
                                       _block_report(L, M, tol))
        notes.update(info)
        cert = ZeroingCertificate(L, M, _frozen(V), factors, pl, pm, notes=notes)
    _check_pattern(cert, tol)
    return cert


def conj_zero_prime(L, M, tol: ToleranceConfig = DEFAULT_TOL, seed: int = 0) -> ZeroingCertificate:
    """Psi with ``Psi^T L Psi`` zero at 2..n and ``Psi M Psi^T`` zero at 1..n-2."""
    L, M = _pair(L, M)
    n = L.shape[0]
    pl, pm = list(range(2, n + 1)), list(range(1, n - 1))
    Ls, Ms = _sym(L), _sym(M)
    if n == 1:
        return ZeroingCertificate(L, M, _frozen(np.eye(1)), [Factor("identity", _frozen(np.eye(1)))], [], [])
    if n == 2:
        try:
            G = zero3.find_givens_zero(Ls, 1, 2, c=2, tol=tol)
        except GivensInfeasible as exc:
            raise FinalStepConditionsNotMet(1, str(exc)) from None
        cert = ZeroingCertificate(L, M, G, [Factor("G", G)], pl, pm)
        _check_pattern(cert, tol)
        return cert
    if n >= 3 and (not is_nondefinite(Ls, tol) or not is_nondefinite(Ms, tol)):
        raise StepConditionsNotMet(1, "a definite matrix cannot acquire a zero diagonal entry",
                                   _block_report(L, M, tol))
    if n == 3:
        W = zero3.solve_two_one(Ls, Ms, (2, 3), 1, tol)
        if W is None:
            raise FinalStepConditionsNotMet(1, "no orthogonal frame zeros L at 2,3 and M at 1",
                                            _block_report(L, M, tol))
        cert = ZeroingCertificate(L, M, W, [Factor("Omega", W)], pl, pm)
    else:
        V, factors, info = _newton_pattern(Ls, Ms, pl, pm, seed, tol)
        if V is None:
            raise FinalStepConditionsNotMet(
                n - 2, f"no transform found (best relative residual {info['best_residual']:.3e})",
                _block_report(L, M, tol))
        cert = ZeroingCertificate(L, M, _frozen(V), factors, pl, pm, notes=info)
    _check_pattern(cert, tol)
    return cert


def _is_traceless(M, tol):
    return abs(float(np.trace(M))) <= tol.zero_tol * max(frobenius(M), 1e-300) or not np.any(M)


def hollowize(M, tol: ToleranceConfig = DEFAULT_TOL, seed: int = 0) -> ZeroingCertificate:
    """Psi making ``Psi^T M Psi`` hollow and ``Psi M Psi^T`` zero on its first n-2 entries."""
    M = as_matrix(M)
    if not _is_traceless(M, tol):
        raise NotTraceless(f"trace is {float(np.trace(M)):.17g}; only traceless matrices can be hollowized")
    n = M.shape[0]
    if not np.any(M):
        I = _frozen(np.eye(n))
        return ZeroingCertificate(M, M, I, [Factor("identity", I)], list(range(1, n + 1)),
                                  list(range(1, max(n - 2, 0) + 1)))
    cert = conj_zero_prime(M, M, tol, seed)
    cert.patternL = list(range(1, n + 1))
    _check_pattern(cert, tol)
    return cert


def constant_diagonal(M, tol: ToleranceConfig = DEFAULT_TOL, seed: int = 0):
    """Psi giving ``Psi^T M Psi`` a constant diagonal c = trace/n; returns (certificate, c).

    ``Psi M Psi^T`` has the same constant on its first n-2 entries.
    """
    M = as_matrix(M)
    n = M.shape[0]
    c = float(np.trace(M)) / n
    shifted = M - c * np.eye(n)
    # the shift is exact in the trace, so relax only for the rounding it introduces
    base = hollowize(shifted, ToleranceConfig(max(tol.zero_tol, 1e-12), tol.orth_tol, tol.disc_clamp), seed)
    cert = ZeroingCertificate(M, M, base.psi, base.factors, base.patternL, base.patternM, c=c, notes=base.notes)
    res = cert.residuals
    if max(res["patternL"], res["patternM"]) > tol.zero_tol * max(frobenius(M), 1e-300):
        raise NumericalBreakdown("constant-diagonal residual above tolerance")
    return cert, c
