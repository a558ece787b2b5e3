"""Pure-Python versions of the compiled kernels in ``_kernels.pyx``.

Both modules expose the same functions with the same argument order and
return values; ``hollowkit.kernels`` picks one at import time.
"""
from __future__ import annotations

import math

import numpy as np

# x1 candidates beyond the data-dependent ones, tried in this order
FIXED_X1 = (0.0, 1.0, -1.0, 2.0, -2.0, 10.0, -10.0, 100.0, -100.0)
N_DECADES = 65  # 10**e for e = -8, -7.75, ..., 8

BRANCH_NONE = 0
BRANCH_D33 = 1
BRANCH_DD11 = 2
BRANCH_GENERAL = 3


def _x1_candidates(d22, d33, d23):
    if d33 != 0.0:
        vertex = -d23 / d33
        yield vertex
        disc = d23 * d23 - d33 * d22
        if d33 > 0.0 and disc > 0.0:
            half = math.sqrt(disc) / abs(d33)
            for f in (0.5, -0.5, 0.9, -0.9):
                yield vertex + f * half
    yield from FIXED_X1
    for k in range(N_DECADES):
        p = 10.0 ** (-8.0 + 0.25 * k)
        yield p
        yield -p


def find_x1(m11, m12, m13, m22, m23, m33, zero_tol, disc_clamp):
    """First candidate x1 with a usable radicand and denominator, NaN if none."""
    s = math.sqrt(m11 * m11 + m22 * m22 + m33 * m33 + 2.0 * (m12 * m12 + m13 * m13 + m23 * m23))
    if s == 0.0:
        return math.nan
    d22 = m11 * m33 - m13 * m13
    d33 = m11 * m22 - m12 * m12
    d23 = m11 * m23 - m12 * m13
    for x1 in _x1_candidates(d22, d33, d23):
        w = 1.0 + x1 * x1
        rad = -d33 * x1 * x1 - 2.0 * d23 * x1 - d22
        den = m22 * x1 * x1 + 2.0 * m23 * x1 + m33
        if rad / w >= -disc_clamp * s * s and abs(den) / w > zero_tol * s:
            return x1
    return math.nan


def _t2_root(m11, m12, m13, m22, m23, m33, c1, s1, clamp):
    A = s1 * s1 * m22 + 2.0 * s1 * c1 * m23 + c1 * c1 * m33
    B = s1 * m12 + c1 * m13
    C = m11
    D = B * B - A * C
    if D < 0.0:
        if D < -clamp:
            return math.nan
        D = 0.0
    q = -(B + math.copysign(math.sqrt(D), B))
    if q == 0.0:
        # B = 0 and A*C = 0: with C != 0 the quadratic has lost its leading term
        # and the remaining root sits at infinity
        return 0.0 if C == 0.0 else math.inf
    return C / q


def zero11_angles(m11, m12, m13, m22, m23, m33, zero_tol, disc_clamp):
    """Euler angles zeroing entry (1, 1) of the symmetric matrix given by its upper triangle.

    Returns ``(branch, theta1, theta2, x1, residual)``.  ``branch`` is the
    first construction whose residual is inside ``zero_tol * ||S||_F``; when
    none is, it is the negated code of the best attempt (``BRANCH_NONE`` if no
    attempt had a real root).
    """
    s = math.sqrt(m11 * m11 + m22 * m22 + m33 * m33 + 2.0 * (m12 * m12 + m13 * m13 + m23 * m23))
    s2 = s * s
    band = zero_tol * s
    clamp = disc_clamp * s2
    d11 = m22 * m33 - m23 * m23
    d33 = m11 * m22 - m12 * m12
    d12 = m12 * m33 - m13 * m23
    d = m11 * d11 - m12 * d12 + m13 * (m12 * m23 - m13 * m22)
    attempts = []
    if abs(d33) <= zero_tol * s2:
        attempts.append((BRANCH_D33, math.pi / 2, math.nan))
    if abs(d) <= zero_tol * s2 * s and abs(d11) <= zero_tol * s2 and m23 != 0.0:
        attempts.append((BRANCH_DD11, math.atan(-m33 / m23), math.nan))
    x1 = find_x1(m11, m12, m13, m22, m23, m33, zero_tol, disc_clamp)
    if not math.isnan(x1):
        attempts.append((BRANCH_GENERAL, math.atan2(x1, 1.0), x1))
    best = (BRANCH_NONE, math.nan, math.nan, math.nan, math.inf)
    for code, theta1, xx in attempts:
        c1, s1 = math.cos(theta1), math.sin(theta1)
        t = _t2_root(m11, m12, m13, m22, m23, m33, c1, s1, clamp)
        if math.isnan(t):
            continue
        theta2 = math.atan2(t, 1.0)
        c2, s2_ = math.cos(theta2), math.sin(theta2)
        r0, r1, r2 = c2, s2_ * s1, s2_ * c1
        res = (m11 * r0 * r0 + m22 * r1 * r1 + m33 * r2 * r2
               + 2.0 * (m12 * r0 * r1 + m13 * r0 * r2 + m23 * r1 * r2))
        if abs(res) <= band:
            return code, theta1, theta2, xx, res
        if abs(res) < abs(best[4]):
            best = (-code, theta1, theta2, xx, res)
    return best


def zero11_batch(S):
    """Vector of ``zero11_angles`` over a stack of symmetric 3x3 matrices, default tolerances."""
    S = np.asarray(S, dtype=np.float64)
    out = np.empty((S.shape[0], 5))
    for k in range(S.shape[0]):
        A = S[k]
        out[k] = zero11_angles(A[0, 0], A[0, 1], A[0, 2], A[1, 1], A[1, 2], A[2, 2], 1e-8, 1e-12)
    return out


def _pattern_objective(V, L, M, pl, pm):
    val = 0.0
    for i in pl:
        x = V[:, i] @ L @ V[:, i]
        val += x * x
    for j in pm:
        x = V[j] @ M @ V[j]
        val += x * x
    return val


def grid_o2(L, M, pl, pm, steps):
    """Best of the 2x2 rotations and reflections at angles ``2*pi*k/steps``.

    Returns ``(objective, k, reflect)``.
    """
    L = np.ascontiguousarray(L, dtype=np.float64)
    M = np.ascontiguousarray(M, dtype=np.float64)
    best = (math.inf, 0, 0)
    for reflect in (0, 1):
        for k in range(steps):
            th = 2.0 * math.pi * k / steps
            c, s = math.cos(th), math.sin(th)
            V = np.array([[c, s], [s, -c]]) if reflect else np.array([[c, -s], [s, c]])
            val = _pattern_objective(V, L, M, pl, pm)
            if val < best[0]:
                best = (val, k, reflect)
    return best


def euler_matrix(t1, t2, t3):
    c1, s1 = math.cos(t1), math.sin(t1)
    c2, s2 = math.cos(t2), math.sin(t2)
    c3, s3 = math.cos(t3), math.sin(t3)
    X3 = np.array([[1.0, 0.0, 0.0], [0.0, c3, -s3], [0.0, s3, c3]])
    Y2 = np.array([[c2, 0.0, s2], [0.0, 1.0, 0.0], [-s2, 0.0, c2]])
    X1 = np.array([[1.0, 0.0, 0.0], [0.0, c1, -s1], [0.0, s1, c1]])
    return X3 @ Y2 @ X1


def grid_o3(L, M, pl, pm, n1, n2, n3):
    """Best ``euler(t1, t2, t3) @ diag(+-1, 1, 1)`` over a regular Euler grid.

    t1 = 2*pi*i/n1, t2 = pi*j/(n2-1), t3 = 2*pi*k/n3.  Returns
    ``(objective, i, j, k, reflect)``.
    """
    L = np.ascontiguousarray(L, dtype=np.float64)
    M = np.ascontiguousarray(M, dtype=np.float64)
    t1 = 2.0 * np.pi * np.arange(n1) / n1
    t3 = 2.0 * np.pi * np.arange(n3) / n3
    best = (math.inf, 0, 0, 0, 0)
    for reflect in (0, 1):
        D = np.diag([-1.0, 1.0, 1.0]) if reflect else np.eye(3)
        for j in range(n2):
            th2 = math.pi * j / (n2 - 1)
            for i in range(n1):
                # stack over t3: V[k] = X3(t3_k) @ Y2 @ X1 @ D
                B = euler_matrix(t1[i], th2, 0.0) @ D
                c3, s3 = np.cos(t3), np.sin(t3)
                V = np.empty((n3, 3, 3))
                V[:, 0, :] = B[0]
                V[:, 1, :] = c3[:, None] * B[1] - s3[:, None] * B[2]
                V[:, 2, :] = s3[:, None] * B[1] + c3[:, None] * B[2]
                val = np.zeros(n3)
                for p in pl:
                    x = np.einsum("ka,ab,kb->k", V[:, :, p], L, V[:, :, p])
                    val += x * x
                for q in pm:
                    x = np.einsum("ka,ab,kb->k", V[:, q, :], M, V[:, q, :])
                    val += x * x
                k = int(np.argmin(val))
                if val[k] < best[0]:
                    best = (float(val[k]), i, j, k, reflect)
    return best
