"""Neutral vectors of a symmetric 3x3 quadratic form.

A unit vector v is neutral for S when ``v^T S v = 0``.  Up to sign, the
neutral unit vectors of a 3x3 form are one of: nothing (definite form), a
closed curve on the sphere (signature (2,1) or (1,2)), one or two great
circles (rank one, or rank two indefinite), a single antipodal pair (rank two
semidefinite), or the whole sphere (zero form).

The routines here give, for a coordinate k, the exact range of ``|v_k|`` over
the neutral set and produce a neutral vector hitting any value in that range.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import List, Optional, Tuple

import numpy as np
from scipy.optimize import brentq, minimize_scalar

_SAMPLES = 256


class Loop:
    """A closed neutral curve ``t -> point(t)``, t in [0, 2*pi), with unit tangent.

    A great circle is ``d cos t + z sin t``; a cone section is the
    normalisation of ``a cos t + b sin t + c``.
    """

    def __init__(self, a, b, c=None):
        self.a = np.asarray(a, dtype=np.float64)
        self.b = np.asarray(b, dtype=np.float64)
        self.c = None if c is None else np.asarray(c, dtype=np.float64)

    @property
    def great_circle(self) -> bool:
        return self.c is None

    def points(self, ts) -> np.ndarray:
        ts = np.asarray(ts, dtype=np.float64)[..., None]
        y = self.a * np.cos(ts) + self.b * np.sin(ts)
        if self.c is not None:
            y = y + self.c
            y = y / np.linalg.norm(y, axis=-1, keepdims=True)
        return y

    def tangents(self, ts) -> np.ndarray:
        ts = np.asarray(ts, dtype=np.float64)[..., None]
        dy = -self.a * np.sin(ts) + self.b * np.cos(ts)
        if self.c is not None:
            u = self.points(ts[..., 0])
            dy = dy - u * np.sum(u * dy, axis=-1, keepdims=True)
            dy = dy / np.linalg.norm(dy, axis=-1, keepdims=True)
        return dy

    def point(self, t: float) -> np.ndarray:
        return self.points(np.array([t]))[0]

    def tangent(self, t: float) -> np.ndarray:
        return self.tangents(np.array([t]))[0]


@dataclass
class NeutralSet:
    kind: str  # "empty", "all", "loops", "point"
    loops: List[Loop]
    point: Optional[np.ndarray] = None

    @property
    def empty(self) -> bool:
        return self.kind == "empty"


def _cone(a, b, c) -> Loop:
    return Loop(a, b, c)


def _circle(d, z) -> Loop:
    return Loop(d, z)


def neutral_set(S: np.ndarray, rel_tol: float = 1e-12) -> NeutralSet:
    S = (np.asarray(S, dtype=np.float64) + np.asarray(S, dtype=np.float64).T) / 2.0
    w, U = np.linalg.eigh(S)
    scale = float(np.abs(w).max())
    if scale == 0.0:
        return NeutralSet("all", [])
    band = rel_tol * scale
    pos = [i for i in range(3) if w[i] > band]
    neg = [i for i in range(3) if w[i] < -band]
    zer = [i for i in range(3) if abs(w[i]) <= band]
    if len(pos) == 3 or len(neg) == 3:
        return NeutralSet("empty", [])
    if not zer:
        odd = neg[0] if len(neg) == 1 else pos[0]
        o = [i for i in range(3) if i != odd]
        a = U[:, o[0]] / math.sqrt(abs(w[o[0]]))
        b = U[:, o[1]] / math.sqrt(abs(w[o[1]]))
        c = U[:, odd] / math.sqrt(abs(w[odd]))
        return NeutralSet("loops", [_cone(a, b, c)])
    if len(zer) == 2:
        return NeutralSet("loops", [_circle(U[:, zer[0]], U[:, zer[1]])])
    z = U[:, zer[0]]
    if len(pos) == 1 and len(neg) == 1:
        loops = []
        # neutral planes are spanned by z and a null direction of the +/- block
        for sgn in (1.0, -1.0):
            d = U[:, pos[0]] / math.sqrt(w[pos[0]]) + sgn * U[:, neg[0]] / math.sqrt(-w[neg[0]])
            loops.append(_circle(d / np.linalg.norm(d), z))
        return NeutralSet("loops", loops)
    return NeutralSet("point", [], point=z.copy())


def _loop_extremes(loop: Loop, k: int) -> Tuple[float, float, float, float]:
    """(min |v_k|, t at min, max |v_k|, t at max) along a loop."""
    if loop.great_circle:
        d, z = loop.point(0.0), loop.point(math.pi / 2)
        rho = math.hypot(d[k], z[k])
        phi = math.atan2(z[k], d[k])
        return 0.0, phi + math.pi / 2, rho, phi
    ts = np.linspace(0.0, 2 * math.pi, _SAMPLES, endpoint=False)
    g = loop.points(ts)[:, k]
    h = 2 * math.pi / _SAMPLES
    out = []
    for sign in (1.0, -1.0):
        # extremes of the signed coordinate; |g| extremes follow from these
        i = int(np.argmin(sign * g))
        r = minimize_scalar(
            lambda t: sign * loop.point(t)[k], bounds=(ts[i] - h, ts[i] + h),
            method="bounded", options={"xatol": 1e-13},
        )
        val = sign * r.fun
        if sign * val > sign * g[i]:
            val, tt = g[i], ts[i]
        else:
            tt = float(r.x)
        out.append((val, tt))
    (gmin, tmin), (gmax, tmax) = out
    if gmin <= 0.0 <= gmax:
        lo, tlo = 0.0, brentq(lambda t: loop.point(t)[k], *_bracket(tmin, tmax))
    elif gmin > 0.0:
        lo, tlo = gmin, tmin
    else:
        lo, tlo = -gmax, tmax
    if abs(gmax) >= abs(gmin):
        hi, thi = abs(gmax), tmax
    else:
        hi, thi = abs(gmin), tmin
    return lo, tlo, hi, thi


def _bracket(t0: float, t1: float) -> Tuple[float, float]:
    return (t0, t1) if t0 < t1 else (t1, t0)


def component_range(ns: NeutralSet, k: int) -> Optional[Tuple[float, float]]:
    """Range ``[lo, hi]`` of ``|v_k|`` over neutral unit vectors, None when empty."""
    if ns.kind == "empty":
        return None
    if ns.kind == "all":
        return 0.0, 1.0
    if ns.kind == "point":
        v = abs(float(ns.point[k]))
        return v, v
    lo, hi = math.inf, 0.0
    for loop in ns.loops:
        a, _, b, _ = _loop_extremes(loop, k)
        lo, hi = min(lo, a), max(hi, b)
    return lo, hi


def neutral_with_component(ns: NeutralSet, k: int, s: float) -> np.ndarray:
    """A neutral unit vector v with ``v_k`` as close to ``s >= 0`` as the set allows."""
    if ns.kind == "empty":
        raise ValueError("no neutral vectors")
    if ns.kind == "all":
        s = min(max(s, 0.0), 1.0)
        v = np.zeros(3)
        v[k] = s
        v[(k + 1) % 3] = math.sqrt(max(0.0, 1.0 - s * s))
        return v
    if ns.kind == "point":
        v = ns.point.copy()
        return v if v[k] >= 0 else -v
    best = None
    for loop in ns.loops:
        lo, tlo, hi, thi = _loop_extremes(loop, k)
        if lo <= s <= hi:
            f = lambda t: abs(loop.point(t)[k]) - s
            flo, fhi = f(tlo), f(thi)
            if flo >= 0.0:
                t = tlo
            elif fhi <= 0.0:
                t = thi
            else:
                t = brentq(f, *_bracket(tlo, thi), xtol=1e-15, rtol=4 * np.finfo(float).eps)
            v = loop.point(t)
            return v if v[k] >= 0 else -v
        # remember the nearest reachable endpoint in case s is just outside
        for t, val in ((tlo, lo), (thi, hi)):
            gap = abs(val - s)
            if best is None or gap < best[0]:
                best = (gap, loop.point(t))
    v = best[1]
    return v if v[k] >= 0 else -v
