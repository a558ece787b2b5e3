import numpy as np
import pytest

from hollowkit import neutral

from conftest import nondefinite_sym3, rotation


def test_kinds():
    assert neutral.neutral_set(np.eye(3)).kind == "empty"
    assert neutral.neutral_set(np.zeros((3, 3))).kind == "all"
    assert neutral.neutral_set(np.diag([1.0, 1.0, 0.0])).kind == "point"
    assert neutral.neutral_set(np.diag([1.0, -1.0, 2.0])).kind == "loops"


def test_semidefinite_rank_two_gives_null_vector():
    ns = neutral.neutral_set(np.diag([1.0, 1.0, 0.0]))
    np.testing.assert_allclose(np.abs(ns.point), [0, 0, 1])
    assert neutral.component_range(ns, 2) == (1.0, 1.0)


def test_loop_points_are_neutral_unit_vectors(rng):
    for _ in range(200):
        S = nondefinite_sym3(rng)
        ns = neutral.neutral_set(S)
        ts = np.linspace(0, 2 * np.pi, 33)
        for loop in ns.loops:
            P = loop.points(ts)
            np.testing.assert_allclose(np.linalg.norm(P, axis=1), 1.0, atol=1e-12)
            vals = np.einsum("ij,jk,ik->i", P, S, P)
            assert np.abs(vals).max() <= 1e-12 * np.linalg.norm(S)
            T = loop.tangents(ts)
            assert np.abs(np.sum(P * T, axis=1)).max() <= 1e-12


def test_component_range_is_tight(rng):
    # dense sampling never leaves the range, and the endpoints are attained
    for _ in range(100):
        S = nondefinite_sym3(rng)
        ns = neutral.neutral_set(S)
        for k in range(3):
            lo, hi = neutral.component_range(ns, k)
            assert 0.0 <= lo <= hi <= 1.0 + 1e-15
            traces = [np.abs(l.points(np.linspace(0, 2 * np.pi, 4001))[:, k]) for l in ns.loops]
            samples = np.concatenate(traces)
            assert samples.min() >= lo - 1e-12 and samples.max() <= hi + 1e-12
            # a continuous trace gets within one sample step of its extremes
            step = max(np.abs(np.diff(t)).max() for t in traces)
            assert samples.min() - lo <= step and hi - samples.max() <= step
            for s in np.linspace(lo, hi, 5):
                v = neutral.neutral_with_component(ns, k, s)
                assert v[k] == pytest.approx(s, abs=1e-9)
                assert abs(v @ S @ v) <= 1e-11 * np.linalg.norm(S)


def test_rank_one_indefinite_splits_into_circles(rng):
    Q = rotation(3, rng)
    S = Q @ np.diag([1.0, -1.0, 0.0]) @ Q.T
    ns = neutral.neutral_set(S)
    assert ns.kind == "loops"
    assert all(l.great_circle for l in ns.loops)


def test_empty_set_has_no_vectors():
    ns = neutral.neutral_set(np.eye(3))
    assert neutral.component_range(ns, 0) is None
    with pytest.raises(ValueError):
        neutral.neutral_with_component(ns, 0, 0.5)
