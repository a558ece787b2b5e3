"""Dense real square matrices and the elementary orthogonal building blocks.

Matrices are plain ``numpy.ndarray`` objects of dtype float64.  Every function
here returns a fresh read-only array, so values can be shared freely between
threads.  Index arguments in the public API are 1-based; conversion to numpy's
0-based storage happens at the boundary of each function.
"""
from __future__ import annotations

import itertools
import json
import math
from dataclasses import dataclass
from typing import Iterable, Iterator, Sequence

import numpy as np

from .errors import InvalidMatrix, SizeMismatch

MAX_JSON_SIZE = 64


@dataclass(frozen=True)
class ToleranceConfig:
    """Tolerances, all relative to the Frobenius norm of the data involved.

    zero_tol
        band for "is zero" tests on entries, minors and residuals.
    orth_tol
        allowed ``||V^T V - I||_F`` per unit of matrix size.
    disc_clamp
        negative discriminants above ``-disc_clamp * scale**2`` count as 0.
    """

    zero_tol: float = 1e-8
    orth_tol: float = 1e-11
    disc_clamp: float = 1e-12

    def __post_init__(self):
        for name in ("zero_tol", "orth_tol", "disc_clamp"):
            value = getattr(self, name)
            if not (isinstance(value, (int, float)) and math.isfinite(value) and value > 0):
                raise ValueError(f"{name} must be a positive finite number, got {value!r}")

    def to_dict(self):
        return {"zero_tol": self.zero_tol, "orth_tol": self.orth_tol, "disc_clamp": self.disc_clamp}


DEFAULT_TOL = ToleranceConfig()


def _frozen(a: np.ndarray) -> np.ndarray:
    a = np.array(a, dtype=np.float64, copy=True)
    a.setflags(write=False)
    return a


def as_matrix(obj) -> np.ndarray:
    """Validate ``obj`` as a finite real square matrix and return a read-only copy."""
    try:
        a = np.asarray(obj, dtype=np.float64)
    except (TypeError, ValueError) as exc:
        raise InvalidMatrix(f"cannot interpret input as a real matrix: {exc}") from None
    if a.ndim != 2 or a.shape[0] != a.shape[1] or a.shape[0] == 0:
        raise InvalidMatrix(f"matrix must be square and non-empty, got shape {a.shape}")
    if not np.all(np.isfinite(a)):
        raise InvalidMatrix("matrix entries must be finite")
    return _frozen(a)


def _same_size(*mats: np.ndarray) -> int:
    n = mats[0].shape[0]
    for m in mats[1:]:
        if m.shape[0] != n:
            raise SizeMismatch(f"size mismatch: {n} vs {m.shape[0]}")
    return n


def _index(i: int, n: int, name: str = "index") -> int:
    if isinstance(i, bool) or not isinstance(i, (int, np.integer)):
        raise IndexError(f"{name} must be an integer, got {i!r}")
    if not 1 <= i <= n:
        raise IndexError(f"{name} {i} out of range 1..{n}")
    return int(i) - 1


def frobenius(M) -> float:
    return float(np.linalg.norm(np.asarray(M, dtype=np.float64)))


def symmetrize(M) -> np.ndarray:
    """Return the symmetric part ``(M + M^T) / 2``; its diagonal equals that of M."""
    M = as_matrix(M)
    return _frozen((M + M.T) / 2.0)


def conjugate(V, M, flipped: bool = False) -> np.ndarray:
    """``V^T M V`` (or ``V M V^T`` when ``flipped``) for orthogonal ``V``."""
    V = as_matrix(V)
    M = as_matrix(M)
    _same_size(V, M)
    if flipped:
        return _frozen(V @ M @ V.T)
    return _frozen(V.T @ M @ V)


def det(M) -> float:
    """Determinant: cofactor expansion up to size 4, LU with partial pivoting beyond."""
    a = np.asarray(M, dtype=np.float64)
    n = a.shape[0]
    if n == 0:
        return 1.0
    if n == 1:
        return float(a[0, 0])
    if n == 2:
        return float(a[0, 0] * a[1, 1] - a[0, 1] * a[1, 0])
    if n == 3:
        return float(
            a[0, 0] * (a[1, 1] * a[2, 2] - a[1, 2] * a[2, 1])
            - a[0, 1] * (a[1, 0] * a[2, 2] - a[1, 2] * a[2, 0])
            + a[0, 2] * (a[1, 0] * a[2, 1] - a[1, 1] * a[2, 0])
        )
    if n == 4:
        total = 0.0
        for j in range(4):
            if a[0, j] != 0.0:
                sub = np.delete(a[1:], j, axis=1)
                total += (-1) ** j * a[0, j] * det(sub)
        return float(total)
    return float(np.linalg.det(a))


def minor(M, i: int, j: int) -> float:
    """The (i, j) minor: determinant of M with row i and column j deleted."""
    M = as_matrix(M)
    n = M.shape[0]
    r, c = _index(i, n, "i"), _index(j, n, "j")
    sub = np.delete(np.delete(M, r, axis=0), c, axis=1)
    return det(sub)


def principal_submatrix(M, keep: Iterable[int]) -> np.ndarray:
    """Submatrix on the rows and columns listed in ``keep`` (1-based), order preserved."""
    M = as_matrix(M)
    n = M.shape[0]
    idx = sorted({_index(k, n, "keep index") for k in keep})
    if not idx:
        raise InvalidMatrix("keep set must be non-empty")
    return _frozen(M[np.ix_(idx, idx)])


def principal_minors(M, k: int) -> list[float]:
    """All principal minors of order k (one per k-subset of indices)."""
    M = np.asarray(M, dtype=np.float64)
    n = M.shape[0]
    return [det(M[np.ix_(s, s)]) for s in itertools.combinations(range(n), k)]


def givens(n: int, i: int, j: int, theta: float) -> np.ndarray:
    """Identity except for a rotation by ``theta`` in the (i, j) plane.

    The 2x2 block on rows/columns (i, j) is ``[[c, -s], [s, c]]``.
    """
    if n < 2:
        raise InvalidMatrix("Givens rotation needs n >= 2")
    a, b = _index(i, n, "i"), _index(j, n, "j")
    if a == b:
        raise IndexError("Givens rotation needs i != j")
    G = np.eye(n)
    c, s = math.cos(theta), math.sin(theta)
    G[a, a] = c
    G[b, b] = c
    G[a, b] = -s
    G[b, a] = s
    return _frozen(G)


def _euler_factors(theta1: float, theta2: float, theta3: float):
    c1, s1 = math.cos(theta1), math.sin(theta1)
    c2, s2 = math.cos(theta2), math.sin(theta2)
    c3, s3 = math.cos(theta3), math.sin(theta3)
    A3 = np.array([[1.0, 0.0, 0.0], [0.0, c3, -s3], [0.0, s3, c3]])
    A2 = np.array([[c2, 0.0, s2], [0.0, 1.0, 0.0], [-s2, 0.0, c2]])
    A1 = np.array([[1.0, 0.0, 0.0], [0.0, c1, -s1], [0.0, s1, c1]])
    return A3, A2, A1


def euler(theta1: float, theta2: float, theta3: float) -> np.ndarray:
    """3x3 rotation ``X(theta3) @ Y(theta2) @ X(theta1)``.

    X rotates the (2, 3) plane and Y the (1, 3) plane with the sign layout
    ``[[c, 0, s], [0, 1, 0], [-s, 0, c]]``.
    """
    A3, A2, A1 = _euler_factors(theta1, theta2, theta3)
    return _frozen(A3 @ A2 @ A1)


def shift_diagonal(M, c: float) -> np.ndarray:
    """``M + c I``."""
    M = as_matrix(M)
    return _frozen(M + c * np.eye(M.shape[0]))


def orthogonality_residual(V) -> float:
    V = np.asarray(V, dtype=np.float64)
    return float(np.linalg.norm(V.T @ V - np.eye(V.shape[0])))


def is_orthogonal(V, tol: ToleranceConfig = DEFAULT_TOL) -> bool:
    V = np.asarray(V, dtype=np.float64)
    return orthogonality_residual(V) <= tol.orth_tol * V.shape[0]


@dataclass(frozen=True)
class SignedPermutation:
    """A permutation of {1..n} with a sign attached to each position.

    ``perm[j-1]`` is the image of j and the matrix realization maps the unit
    vector e_j to ``signs[j-1] * e_perm[j-1]``.
    """

    perm: tuple
    signs: tuple

    def __post_init__(self):
        perm = tuple(int(p) for p in self.perm)
        signs = tuple(int(s) for s in self.signs)
        n = len(perm)
        if sorted(perm) != list(range(1, n + 1)):
            raise ValueError(f"perm must be a bijection on 1..{n}, got {perm}")
        if len(signs) != n or any(s not in (1, -1) for s in signs):
            raise ValueError("signs must be a sequence of +1/-1 of the same length as perm")
        object.__setattr__(self, "perm", perm)
        object.__setattr__(self, "signs", signs)

    @property
    def n(self) -> int:
        return len(self.perm)

    @classmethod
    def identity(cls, n: int) -> "SignedPermutation":
        return cls(tuple(range(1, n + 1)), (1,) * n)

    def matrix(self) -> np.ndarray:
        n = self.n
        V = np.zeros((n, n))
        for j, (p, s) in enumerate(zip(self.perm, self.signs)):
            V[p - 1, j] = s
        return _frozen(V)

    def embed(self, n: int, offset: int) -> np.ndarray:
        """Realization acting on positions ``offset+1 .. offset+self.n`` of size n."""
        V = np.eye(n)
        k = self.n
        V[offset:offset + k, offset:offset + k] = self.matrix()
        return _frozen(V)

    def determinant(self) -> int:
        return int(round(det(self.matrix())))

    def to_dict(self):
        return {"perm": list(self.perm), "signs": list(self.signs)}


def signed_permutations(n: int) -> Iterator[SignedPermutation]:
    """All 2^n n! signed permutations, lexicographic in (perm, signs) with + before -."""
    for perm in itertools.permutations(range(1, n + 1)):
        for signs in itertools.product((1, -1), repeat=n):
            yield SignedPermutation(perm, signs)


def matrix_to_json_obj(M) -> dict:
    M = np.asarray(M, dtype=np.float64)
    return {"n": int(M.shape[0]), "rows": [[float(x) for x in row] for row in M]}


def matrix_from_json_obj(obj) -> np.ndarray:
    """Parse ``{"n": int, "rows": [[...], ...]}``; rejects non-square or non-finite data."""
    if not isinstance(obj, dict) or "rows" not in obj:
        raise InvalidMatrix('matrix JSON must be an object with "n" and "rows"')
    rows = obj["rows"]
    n = obj.get("n", len(rows) if isinstance(rows, list) else None)
    if isinstance(n, bool) or not isinstance(n, int) or n < 1:
        raise InvalidMatrix(f'"n" must be a positive integer, got {n!r}')
    if n > MAX_JSON_SIZE:
        raise InvalidMatrix(f"matrix size {n} exceeds the limit of {MAX_JSON_SIZE}")
    if not isinstance(rows, list) or len(rows) != n or any(
        not isinstance(r, list) or len(r) != n for r in rows
    ):
        raise InvalidMatrix(f"rows must form a square array of size {n}")
    for r in rows:
        for x in r:
            if isinstance(x, bool) or not isinstance(x, (int, float)):
                raise InvalidMatrix(f"matrix entries must be numbers, got {x!r}")
    return as_matrix(rows)


def matrix_from_json(text: str) -> np.ndarray:
    try:
        obj = json.loads(text)
    except json.JSONDecodeError as exc:
        raise InvalidMatrix(f"invalid JSON: {exc}") from None
    return matrix_from_json_obj(obj)


def embed_block(n: int, offset: int, B) -> np.ndarray:
    """Identity of size n with ``B`` placed on the diagonal starting at 0-based ``offset``."""
    B = np.asarray(B, dtype=np.float64)
    V = np.eye(n)
    k = B.shape[0]
    V[offset:offset + k, offset:offset + k] = B
    return V


def diag_residual(M, positions: Sequence[int]) -> float:
    """Largest absolute diagonal entry over the given 1-based positions (0 if none)."""
    M = np.asarray(M, dtype=np.float64)
    if not positions:
        return 0.0
    return float(max(abs(M[p - 1, p - 1]) for p in positions))
