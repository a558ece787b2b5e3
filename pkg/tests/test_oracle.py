import math

import numpy as np
import pytest

from hollowkit import conjugate, data, oracle
from hollowkit.conjugate import ZeroingCertificate
from hollowkit.definiteness import conditions_B
from hollowkit.matrix import givens

from conftest import nondefinite_sym3, traceless


def _floor(name):
    fx = data.load_fixture(name)
    L, M = data.pair(name)
    return L, M, fx


def test_canonical_pair_has_positive_floor():
    L, M, fx = _floor("canonical_pair_2x2")
    res = oracle.brute_force_conj(L, M, fx["patternL"], fx["patternM"])
    assert res.bestResidual >= 0.1
    assert res.bestResidual == pytest.approx(fx["measuredFloor"], rel=1e-6)
    np.testing.assert_allclose(res.bestV.T @ res.bestV, np.eye(2), atol=1e-12)


def test_nonzeroable_pair_floor():
    L, M, fx = _floor("nonzeroable_pair_3x3")
    res = oracle.brute_force_conj(L, M, fx["patternL"], fx["patternM"])
    assert res.bestResidual >= fx["measuredFloor"] / 2


def test_traceless_pair_floor():
    L, M, fx = _floor("traceless_not_cohollowizable_3x3")
    res = oracle.brute_force_conj(L, M, fx["patternL"], fx["patternM"])
    assert res.bestResidual >= fx["measuredFloor"] / 2


def test_traceless_2x2_alone_reaches_zero(rng):
    for _ in range(20):
        L = traceless(2, rng)
        res = oracle.brute_force_conj(L, np.eye(2), [1, 2], [])
        assert res.bestResidual <= 1e-10


def test_random_restart_method_matches_hollowize(rng):
    L = traceless(5, rng)
    res = oracle.brute_force_conj(L, np.zeros((5, 5)), range(1, 6), [], method="randomRestartRefine")
    assert res.bestResidual <= 1e-20 * np.linalg.norm(L) ** 2


def test_grid_rejects_large_sizes():
    with pytest.raises(ValueError):
        oracle.brute_force_conj(np.eye(4), np.eye(4), [1], [1], method="grid")


@pytest.mark.parametrize("seed", range(5))
def test_floor_is_stable_across_seeds(seed):
    L, M, fx = _floor("traceless_not_cohollowizable_3x3")
    res = oracle.brute_force_conj(L, M, fx["patternL"], fx["patternM"], seed=seed)
    assert abs(res.bestResidual - fx["measuredFloor"]) <= 0.1 * fx["measuredFloor"]


# certificates


def test_verify_accepts_valid_certificate(rng):
    cert = conjugate.hollowize(traceless(4, rng))
    ok, report = oracle.verify_certificate(cert)
    assert ok
    assert set(report) >= {"orthogonality", "pattern", "trace", "factors"}


def test_verify_rejects_perturbed_psi(rng):
    cert = conjugate.hollowize(traceless(4, rng))
    d = cert.to_dict()
    bad = ZeroingCertificate.from_dict(d)
    bad.psi = bad.psi + 1e-3 * rng.standard_normal((4, 4))
    ok, report = oracle.verify_certificate(bad)
    assert not ok and not report["orthogonality"]["ok"]


def test_verify_rejects_false_claim(rng):
    cert = conjugate.hollowize(traceless(4, rng))
    bad = ZeroingCertificate.from_dict(cert.to_dict())
    bad.claimedL = np.array(bad.claimedL, copy=True)
    bad.claimedL[1, 1] = 0.1
    ok, report = oracle.verify_certificate(bad)
    assert not ok and not report["pattern"]["ok"]


def test_verify_rejects_wrong_input(rng):
    cert = conjugate.hollowize(traceless(4, rng))
    bad = ZeroingCertificate.from_dict(cert.to_dict())
    bad.L = np.array(bad.L, copy=True)
    bad.L[0, 0] += 0.1
    bad.L[1, 1] -= 0.1
    assert not oracle.verify_certificate(bad)[0]


# closed-form predicates on 3x3 minors


def test_elim_examples():
    assert oracle.check_elimA_equivalence(np.eye(3))
    assert not oracle.elim_predicate(np.eye(3))
    F = np.array([[0.0, 1, 1], [1, 1, 1], [1, 1, 0]])
    assert oracle.check_elimA_equivalence(F)


def test_elim_random(rng):
    for _ in range(2000):
        S = rng.standard_normal((3, 3))
        assert oracle.check_elimA_equivalence(S)
        assert oracle.check_elimA_equivalence(nondefinite_sym3(rng))


def test_elim_form_is_discriminant(rng):
    # discriminant in w of the quadratic m22 w^2 + 2(m12 v + m23 z) w + (m11 v^2 + 2 m13 v z + m33 z^2)
    S = oracle._sym(rng.standard_normal((3, 3)))
    F = oracle.elim_form(S)
    for v, z in rng.standard_normal((20, 2)):
        b = S[0, 1] * v + S[1, 2] * z
        c = S[0, 0] * v * v + 2 * S[0, 2] * v * z + S[2, 2] * z * z
        assert np.array([v, z]) @ F @ np.array([v, z]) == pytest.approx(b * b - S[1, 1] * c, abs=1e-12)


def test_x1_conditions_examples():
    assert not oracle.x1_conditions_predicate(np.eye(3))
    assert oracle.x1_conditions_predicate(np.diag([1.0, -1.0, 1.0]))
    assert oracle.check_x1_conditions_equivalence(np.diag([1.0, 2.0, 3.0]))
    assert oracle.check_x1_conditions_equivalence(np.diag([1.0, -2.0, 3.0]))


def test_x1_conditions_random(rng):
    for _ in range(2000):
        w = rng.uniform(0.1, 10, 3) * rng.choice([-1.0, 1.0], 3)
        Q, _ = np.linalg.qr(rng.standard_normal((3, 3)))
        S = Q @ np.diag(w) @ Q.T
        if oracle.x1_conditions_applicable(S):
            assert oracle.check_x1_conditions_equivalence(S)


# which (p, q) can be zeroed together


def test_nonzeroable_pair_has_no_achievable_entries():
    L, M, fx = _floor("nonzeroable_pair_3x3")
    assert oracle.achievable_pq(L, M) == set()
    assert fx["achievable"] == []


def test_partially_zeroable_set():
    L, M, fx = _floor("partially_zeroable_3x3")
    assert oracle.achievable_pq(L, M) == {tuple(x) for x in fx["achievable"]}


def test_hollow_pair_achieves_everything():
    H = np.array([[0.0, 1, 2], [1, 0, 3], [2, 3, 0]])
    assert oracle.achievable_pq(H, H) == {(p, q) for p in (1, 2, 3) for q in (1, 2, 3)}


def test_zero_pair_achieves_everything():
    assert len(oracle.achievable_pq(np.zeros((3, 3)), np.zeros((3, 3)))) == 9


def test_exclusion_pattern():
    assert oracle.exclusion_pattern(1, 2) == {(2, 2), (2, 3), (1, 1), (3, 1)}
    for p0 in (1, 2, 3):
        for q0 in (1, 2, 3):
            assert len(oracle.exclusion_pattern(p0, q0)) == 4


def test_zeroable_fixture_rotations_work():
    for name in ("zeroable_without_conditions_21", "zeroable_without_conditions_11"):
        fx = data.load_fixture(name)
        L, M = data.pair(name)
        R = data.matrix(fx["R"])
        p, q = fx["p"] - 1, fx["q"] - 1
        assert abs((R.T @ L @ R)[p, p]) <= 1e-10 and abs((R @ M @ R.T)[q, q]) <= 1e-10
        assert (fx["p"], fx["q"]) in oracle.achievable_pq(L, M)


def test_o2_reflection_is_orthogonal():
    for th in np.linspace(0, 2 * math.pi, 7):
        for r in (0, 1):
            V = oracle._o2_matrix(th, r)
            np.testing.assert_allclose(V.T @ V, np.eye(2), atol=1e-15)
            assert np.linalg.det(V) == pytest.approx(-1.0 if r else 1.0)
    np.testing.assert_allclose(oracle._o2_matrix(0.3, 0), givens(2, 1, 2, 0.3), atol=1e-15)


def test_conditions_b_pair_missing_an_unexcluded_entry():
    # both 2x2 tests hold at (2, 2), yet (1, 1), outside the exclusion pattern, cannot be zeroed
    L = np.array([[0.639008, 0.208550, 0.340154],
                  [0.208550, -0.076194, -0.173865],
                  [0.340154, -0.173865, -0.411387]])
    M = np.array([[-0.004477, -0.202055, 0.096649],
                  [-0.202055, -1.175075, 0.176736],
                  [0.096649, 0.176736, -0.816655]])
    assert conditions_B(L, M, 2, 2)
    assert (1, 1) not in oracle.exclusion_pattern(2, 2)
    assert (1, 1) not in oracle.achievable_pq(L, M)
    assert oracle.brute_force_conj(L, M, [1], [1]).bestResidual > 1e-3
