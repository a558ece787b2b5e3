# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled kernels.  Semantics match ``_kernels_py`` exactly."""
import numpy as np
cimport numpy as cnp
from libc.math cimport sqrt, fabs, cos, sin, atan, atan2, copysign, pow, isnan, NAN, INFINITY, M_PI

cnp.import_array()

cdef enum:
    N_FIXED = 9
    N_DECADES = 65

cdef double FIXED_X1[N_FIXED]
FIXED_X1[:] = [0.0, 1.0, -1.0, 2.0, -2.0, 10.0, -10.0, 100.0, -100.0]

BRANCH_NONE = 0
BRANCH_D33 = 1
BRANCH_DD11 = 2
BRANCH_GENERAL = 3


cdef inline double _fro(double m11, double m12, double m13, double m22, double m23, double m33) nogil:
    return sqrt(m11 * m11 + m22 * m22 + m33 * m33 + 2.0 * (m12 * m12 + m13 * m13 + m23 * m23))


cdef inline bint _x1_ok(double x1, double m22, double m23, double m33,
                        double d22, double d33, double d23, double s, double zt, double dc) nogil:
    cdef double w = 1.0 + x1 * x1
    cdef double rad = -d33 * x1 * x1 - 2.0 * d23 * x1 - d22
    cdef double den = m22 * x1 * x1 + 2.0 * m23 * x1 + m33
    return rad / w >= -dc * s * s and fabs(den) / w > zt * s


cdef double _find_x1(double m11, double m12, double m13, double m22, double m23, double m33,
                     double zt, double dc) nogil:
    cdef double s = _fro(m11, m12, m13, m22, m23, m33)
    cdef double d22, d33, d23, vertex, disc, half, p
    cdef int k
    cdef double fr[4]
    if s == 0.0:
        return NAN
    d22 = m11 * m33 - m13 * m13
    d33 = m11 * m22 - m12 * m12
    d23 = m11 * m23 - m12 * m13
    if d33 != 0.0:
        vertex = -d23 / d33
        if _x1_ok(vertex, m22, m23, m33, d22, d33, d23, s, zt, dc):
            return vertex
        disc = d23 * d23 - d33 * d22
        if d33 > 0.0 and disc > 0.0:
            half = sqrt(disc) / fabs(d33)
            fr[0] = 0.5; fr[1] = -0.5; fr[2] = 0.9; fr[3] = -0.9
            for k in range(4):
                p = vertex + fr[k] * half
                if _x1_ok(p, m22, m23, m33, d22, d33, d23, s, zt, dc):
                    return p
    for k in range(N_FIXED):
        if _x1_ok(FIXED_X1[k], m22, m23, m33, d22, d33, d23, s, zt, dc):
            return FIXED_X1[k]
    for k in range(N_DECADES):
        p = pow(10.0, -8.0 + 0.25 * k)
        if _x1_ok(p, m22, m23, m33, d22, d33, d23, s, zt, dc):
            return p
        if _x1_ok(-p, m22, m23, m33, d22, d33, d23, s, zt, dc):
            return -p
    return NAN


def find_x1(double m11, double m12, double m13, double m22, double m23, double m33,
            double zero_tol, double disc_clamp):
    return _find_x1(m11, m12, m13, m22, m23, m33, zero_tol, disc_clamp)


cdef inline double _t2_root(double m11, double m12, double m13, double m22, double m23, double m33,
                            double c1, double s1, double clamp) nogil:
    cdef double A = s1 * s1 * m22 + 2.0 * s1 * c1 * m23 + c1 * c1 * m33
    cdef double B = s1 * m12 + c1 * m13
    cdef double C = m11
    cdef double D = B * B - A * C
    cdef double q
    if D < 0.0:
        if D < -clamp:
            return NAN
        D = 0.0
    q = -(B + copysign(sqrt(D), B))
    if q == 0.0:
        # B = 0 and A*C = 0: with C != 0 the quadratic has lost its leading term
        # and the remaining root sits at infinity
        return 0.0 if C == 0.0 else INFINITY
    return C / q


cdef void _zero11(double m11, double m12, double m13, double m22, double m23, double m33,
                  double zt, double dc, double* out) nogil:
    cdef double s = _fro(m11, m12, m13, m22, m23, m33)
    cdef double s2 = s * s
    cdef double band = zt * s
    cdef double clamp = dc * s2
    cdef double d11 = m22 * m33 - m23 * m23
    cdef double d33 = m11 * m22 - m12 * m12
    cdef double d12 = m12 * m33 - m13 * m23
    cdef double d = m11 * d11 - m12 * d12 + m13 * (m12 * m23 - m13 * m22)
    cdef int codes[3]
    cdef double th1s[3]
    cdef double xs[3]
    cdef int na = 0, a
    cdef double x1, c1, s1, t, th2, c2, sn2, r0, r1, r2, res
    if fabs(d33) <= zt * s2:
        codes[na] = 1; th1s[na] = M_PI / 2; xs[na] = NAN; na += 1
    if fabs(d) <= zt * s2 * s and fabs(d11) <= zt * s2 and m23 != 0.0:
        codes[na] = 2; th1s[na] = atan(-m33 / m23); xs[na] = NAN; na += 1
    x1 = _find_x1(m11, m12, m13, m22, m23, m33, zt, dc)
    if not isnan(x1):
        codes[na] = 3; th1s[na] = atan2(x1, 1.0); xs[na] = x1; na += 1
    out[0] = 0; out[1] = NAN; out[2] = NAN; out[3] = NAN; out[4] = INFINITY
    for a in range(na):
        c1 = cos(th1s[a]); s1 = sin(th1s[a])
        t = _t2_root(m11, m12, m13, m22, m23, m33, c1, s1, clamp)
        if isnan(t):
            continue
        th2 = atan2(t, 1.0)
        c2 = cos(th2); sn2 = sin(th2)
        r0 = c2; r1 = sn2 * s1; r2 = sn2 * c1
        res = (m11 * r0 * r0 + m22 * r1 * r1 + m33 * r2 * r2
               + 2.0 * (m12 * r0 * r1 + m13 * r0 * r2 + m23 * r1 * r2))
        if fabs(res) <= band:
            out[0] = codes[a]; out[1] = th1s[a]; out[2] = th2; out[3] = xs[a]; out[4] = res
            return
        if fabs(res) < fabs(out[4]):
            out[0] = -codes[a]; out[1] = th1s[a]; out[2] = th2; out[3] = xs[a]; out[4] = res


def zero11_angles(double m11, double m12, double m13, double m22, double m23, double m33,
                  double zero_tol, double disc_clamp):
    cdef double out[5]
    _zero11(m11, m12, m13, m22, m23, m33, zero_tol, disc_clamp, out)
    return int(out[0]), out[1], out[2], out[3], out[4]


def zero11_batch(S):
    cdef const double[:, :, ::1] A = np.ascontiguousarray(S, dtype=np.float64)
    cdef Py_ssize_t n = A.shape[0], k
    res = np.empty((n, 5))
    cdef double[:, ::1] R = res
    with nogil:
        for k in range(n):
            _zero11(A[k, 0, 0], A[k, 0, 1], A[k, 0, 2], A[k, 1, 1], A[k, 1, 2], A[k, 2, 2],
                    1e-8, 1e-12, &R[k, 0])
    return res


cdef inline double _quad3(double* v, const double[:, ::1] S, Py_ssize_t stride) nogil:
    cdef double acc = 0.0, row
    cdef Py_ssize_t a, b
    for a in range(3):
        row = 0.0
        for b in range(3):
            row = row + S[a, b] * v[b * stride]
        acc = acc + v[a * stride] * row
    return acc


def grid_o2(L, M, pl, pm, int steps):
    cdef const double[:, ::1] Lv = np.ascontiguousarray(L, dtype=np.float64)
    cdef const double[:, ::1] Mv = np.ascontiguousarray(M, dtype=np.float64)
    cdef const long[::1] P = np.asarray(list(pl), dtype=np.int64).reshape(-1)
    cdef const long[::1] Q = np.asarray(list(pm), dtype=np.int64).reshape(-1)
    cdef double best = INFINITY, val, x, th, c, s
    cdef double V[2][2]
    cdef int bk = 0, br = 0, k, reflect
    cdef Py_ssize_t i, a, b, idx
    with nogil:
        for reflect in range(2):
            for k in range(steps):
                th = 2.0 * M_PI * k / steps
                c = cos(th); s = sin(th)
                V[0][0] = c; V[1][0] = s
                if reflect:
                    V[0][1] = s; V[1][1] = -c
                else:
                    V[0][1] = -s; V[1][1] = c
                val = 0.0
                for i in range(P.shape[0]):
                    idx = P[i]
                    x = 0.0
                    for a in range(2):
                        for b in range(2):
                            x = x + V[a][idx] * Lv[a, b] * V[b][idx]
                    val = val + x * x
                for i in range(Q.shape[0]):
                    idx = Q[i]
                    x = 0.0
                    for a in range(2):
                        for b in range(2):
                            x = x + V[idx][a] * Mv[a, b] * V[idx][b]
                    val = val + x * x
                if val < best:
                    best = val; bk = k; br = reflect
    return best, bk, br


def grid_o3(L, M, pl, pm, int n1, int n2, int n3):
    cdef const double[:, ::1] Lv = np.ascontiguousarray(L, dtype=np.float64)
    cdef const double[:, ::1] Mv = np.ascontiguousarray(M, dtype=np.float64)
    cdef const long[::1] P = np.asarray(list(pl), dtype=np.int64).reshape(-1)
    cdef const long[::1] Q = np.asarray(list(pm), dtype=np.int64).reshape(-1)
    cdef double best = INFINITY, val, x, th1, th2, c1, s1, c2, s2, c3, s3, sg
    cdef double B[3][3]
    cdef double V[9]
    cdef int bi = 0, bj = 0, bk = 0, br = 0, i, j, k, reflect
    cdef Py_ssize_t t, a
    cos3 = np.cos(2.0 * np.pi * np.arange(n3) / n3)
    sin3 = np.sin(2.0 * np.pi * np.arange(n3) / n3)
    cdef double[::1] C3 = cos3
    cdef double[::1] S3 = sin3
    with nogil:
        for reflect in range(2):
            sg = -1.0 if reflect else 1.0
            for j in range(n2):
                th2 = M_PI * j / (n2 - 1)
                c2 = cos(th2); s2 = sin(th2)
                for i in range(n1):
                    th1 = 2.0 * M_PI * i / n1
                    c1 = cos(th1); s1 = sin(th1)
                    # B = Y2 @ X1 @ diag(sg, 1, 1)
                    B[0][0] = c2 * sg; B[0][1] = s2 * s1; B[0][2] = s2 * c1
                    B[1][0] = 0.0; B[1][1] = c1; B[1][2] = -s1
                    B[2][0] = -s2 * sg; B[2][1] = c2 * s1; B[2][2] = c2 * c1
                    for k in range(n3):
                        c3 = C3[k]; s3 = S3[k]
                        for a in range(3):
                            V[a] = B[0][a]
                            V[3 + a] = c3 * B[1][a] - s3 * B[2][a]
                            V[6 + a] = s3 * B[1][a] + c3 * B[2][a]
                        val = 0.0
                        for t in range(P.shape[0]):
                            x = _quad3(&V[P[t]], Lv, 3)
                            val = val + x * x
                        for t in range(Q.shape[0]):
                            x = _quad3(&V[3 * Q[t]], Mv, 1)
                            val = val + x * x
                        if val < best:
                            best = val; bi = i; bj = j; bk = k; br = reflect
    return best, bi, bj, bk, br
