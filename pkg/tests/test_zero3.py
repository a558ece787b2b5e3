import itertools
import math

import numpy as np
import pytest

from hollowkit import data, zero3
from hollowkit.definiteness import conditions_A, conditions_B, is_nondefinite
from hollowkit.errors import (
    ConditionsNotMet,
    DefiniteInput,
    GivensInfeasible,
    NotFound,
    ZeroingInfeasible,
)
from hollowkit.matrix import det, orthogonality_residual
from hollowkit.zero3 import Branch

from conftest import nondefinite_sym3, rotation

HOLLOW = np.ones((3, 3)) - np.eye(3)
SINGULAR_BLOCK = np.array([[1.0, 0, 0], [0, 1, 1], [0, 1, 1]])
TRACELESS_DIAG = np.diag([1.0, 1.0, -2.0])
TRACELESS_OFFDIAG = np.array([[0.0, 1, 0], [1, 0, 2], [0, 2, 0]])


def entry11(T, M):
    return (T.T @ M @ T)[0, 0]


# zeroing entry (1, 1)


def test_zero_entry_already_zero():
    c = zero3.zero_entry_1_1(np.diag([0.0, 1.0, 1.0]))
    assert c.branch is Branch.AlreadyZeroDiagonal
    np.testing.assert_array_equal(c.transform, np.eye(3))


def test_zero_entry_moves_existing_zero_to_front():
    c = zero3.zero_entry_1_1(np.diag([2.0, 0.0, -1.0]))
    assert c.branch is Branch.AlreadyZeroDiagonal
    assert entry11(c.transform, np.diag([2.0, 0.0, -1.0])) == 0.0
    assert det(c.transform) == 1.0


def test_zero_entry_general_roots():
    M = np.diag([1.0, -1.0, 1.0])
    c = zero3.zero_entry_1_1(M)
    assert c.branch is Branch.GeneralRoots
    assert abs(entry11(c.transform, M)) <= 1e-10
    # the radicand at the chosen x1 is nonnegative
    assert zero3.radicand(M, c.parameters["x1"]) >= 0


def test_zero_entry_d33_branch():
    M = np.array([[1.0, 1, 0], [1, 1, 2], [0, 2, 1]])
    c = zero3.zero_entry_1_1(M)
    assert c.branch is Branch.D33ZeroBranch
    assert c.parameters["theta1"] == pytest.approx(math.pi / 2)
    assert c.parameters["x2"] == pytest.approx(-1.0)
    assert abs(entry11(c.transform, M)) <= 1e-10


def test_zero_entry_dd11_branch():
    c = zero3.zero_entry_1_1(SINGULAR_BLOCK)
    assert c.branch is Branch.DD11ZeroBranch
    # the only neutral direction is (0, 1, -1), reached with x2 at infinity
    assert c.parameters["theta2"] == pytest.approx(math.pi / 2)
    assert c.parameters["x2"] is None
    assert abs(entry11(c.transform, SINGULAR_BLOCK)) <= 1e-12


def test_zero_entry_rejects_definite():
    with pytest.raises(DefiniteInput):
        zero3.zero_entry_1_1(np.eye(3))
    with pytest.raises(DefiniteInput):
        zero3.zero_entry_1_1(-np.diag([1.0, 2.0, 3.0]))


def test_zero_entry_on_nonsymmetric_input(rng):
    for _ in range(50):
        S = nondefinite_sym3(rng)
        K = rng.standard_normal((3, 3))
        A = S + (K - K.T)
        T = zero3.zero_entry_1_1(A).transform
        assert abs(entry11(T, A)) <= 1e-8 * np.linalg.norm(A)


def test_zero_entry_json():
    d = zero3.zero_entry_1_1(np.diag([1.0, -1.0, 1.0])).to_dict()
    assert d["branch"] == "GeneralRoots"
    assert set(d["parameters"]) == {"theta1", "theta2", "x1", "x2"}
    assert d["transform"]["n"] == 3


def test_zero_entry_random_batch(rng):
    worst = 0.0
    for _ in range(2_000):
        M = nondefinite_sym3(rng)
        c = zero3.zero_entry_1_1(M)
        worst = max(worst, abs(entry11(c.transform, M)) / np.linalg.norm(M))
        assert orthogonality_residual(c.transform) <= 3e-11
        assert abs(det(c.transform) - 1.0) <= 1e-10
    assert worst <= 1e-8


# x1 search


def test_find_x1_example():
    M = np.diag([1.0, -1.0, 1.0])
    x1 = zero3.find_x1(M)
    assert zero3.radicand(M, x1) >= 0
    assert abs(zero3.denominator(M, x1)) > 0


def test_find_x1_upward_parabola_uses_large_candidate():
    # d33 < 0 so the radicand opens upward; any large |x1| works
    M = np.array([[1.0, 2.0, 0.3], [2.0, 1.0, 0.1], [0.3, 0.1, 1.0]])
    x1 = zero3.find_x1(M)
    assert zero3.radicand(M, x1) >= -1e-12 * np.linalg.norm(M) ** 2


def test_find_x1_vertex_on_axis_with_vanishing_denominator():
    # radicand -(x+1)^2 touches zero only at x = -1, where the denominator vanishes
    assert zero3.radicand(SINGULAR_BLOCK, -1.0) == 0.0
    assert zero3.denominator(SINGULAR_BLOCK, -1.0) == 0.0
    with pytest.raises(NotFound):
        zero3.find_x1(SINGULAR_BLOCK)


# one entry on each side


@pytest.mark.parametrize("p,q", list(itertools.product((1, 2, 3), repeat=2)))
def test_hollow_pair_every_pq(p, q):
    R = zero3.build_R_condA(HOLLOW, HOLLOW, p, q)
    assert abs((R.T @ HOLLOW @ R)[p - 1, p - 1]) <= 1e-10
    assert abs((R @ HOLLOW @ R.T)[q - 1, q - 1]) <= 1e-10
    assert orthogonality_residual(R) <= 3e-11


def test_cond_a_traceless_example():
    R = zero3.build_R_condA(TRACELESS_DIAG, TRACELESS_OFFDIAG, 1, 1)
    assert abs((R.T @ TRACELESS_DIAG @ R)[0, 0]) <= 1e-10
    assert abs((R @ TRACELESS_OFFDIAG @ R.T)[0, 0]) <= 1e-10


def test_cond_a_and_b_reject_nonzeroable_pair():
    L, M = data.pair("nonzeroable_pair_3x3")
    for p, q in itertools.product((1, 2, 3), repeat=2):
        with pytest.raises(ConditionsNotMet):
            zero3.build_R_condA(L, M, p, q)
        with pytest.raises(ConditionsNotMet):
            zero3.build_R_condB(L, M, p, q)


def test_cond_b_identity_rejected():
    with pytest.raises(ConditionsNotMet):
        zero3.build_R_condB(np.eye(3), np.eye(3), 1, 1)


def test_cond_b_zero_shared_entry():
    R = zero3.build_R_condB(SINGULAR_BLOCK, SINGULAR_BLOCK, 1, 1)
    assert abs(R[0, 0]) <= 1e-12
    assert abs((R.T @ SINGULAR_BLOCK @ R)[0, 0]) <= 1e-10
    assert abs((R @ SINGULAR_BLOCK @ R.T)[0, 0]) <= 1e-10


def test_singular_block_pair_has_no_22_or_33_zeroing():
    for i in (2, 3):
        f = zero3.pq_feasibility(SINGULAR_BLOCK, SINGULAR_BLOCK, 1, i)
        assert not f.feasible
        with pytest.raises(ZeroingInfeasible):
            zero3.conjugate_zero_pq(SINGULAR_BLOCK, SINGULAR_BLOCK, 1, i)


def test_zeroing_without_either_condition():
    # stored pairs where both sufficient conditions fail but a rotation exists
    for name in ("zeroable_without_conditions_21", "zeroable_without_conditions_11"):
        d = data.load_fixture(name)
        L, M, R = data.matrix(d["L"]), data.matrix(d["M"]), data.matrix(d["R"])
        p, q = d["p"], d["q"]
        assert not conditions_A(L, M, p)
        assert not conditions_B(L, M, p, q)
        assert abs((R.T @ L @ R)[p - 1, p - 1]) < 1e-12
        assert abs((R @ M @ R.T)[q - 1, q - 1]) < 1e-12
        c = zero3.conjugate_zero_pq(L, M, p, q)
        assert abs((c.transform.T @ L @ c.transform)[p - 1, p - 1]) < 1e-10


def _cond_b_pair(rng):
    while True:
        L, M = nondefinite_sym3(rng), nondefinite_sym3(rng)
        pq = [(p, q) for p in (1, 2, 3) for q in (1, 2, 3) if conditions_B(L, M, p, q)]
        if pq:
            return L, M, pq


def test_cond_b_random_residuals(rng):
    for _ in range(300):
        L, M, pq = _cond_b_pair(rng)
        for p, q in pq:
            try:
                R = zero3.build_R_condB(L, M, p, q)
            except ZeroingInfeasible:
                # the 2x2 test at (p, q) guarantees the swapped pair (q, p) only
                assert p != q and not conditions_B(L, M, q, p)
                continue
            scale = np.linalg.norm(L) + np.linalg.norm(M)
            assert abs((R.T @ L @ R)[p - 1, p - 1]) <= 1e-8 * scale
            assert abs((R @ M @ R.T)[q - 1, q - 1]) <= 1e-8 * scale
            if p == q:
                assert abs(R[q - 1, p - 1]) <= 1e-9


def test_cond_b_guarantees_swapped_pair(rng):
    for _ in range(1_000):
        L, M, pq = _cond_b_pair(rng)
        for p, q in pq:
            assert zero3.pq_feasibility(L, M, q, p).feasible


def test_cond_a_random_residuals(rng):
    done = 0
    while done < 300:
        L, M = nondefinite_sym3(rng), nondefinite_sym3(rng)
        for p in (1, 2, 3):
            if not conditions_A(L, M, p):
                continue
            done += 1
            for q in (1, 2, 3):
                try:
                    R = zero3.build_R_condA(L, M, p, q)
                except ZeroingInfeasible:
                    continue
                scale = np.linalg.norm(L) + np.linalg.norm(M)
                assert abs((R.T @ L @ R)[p - 1, p - 1]) <= 1e-8 * scale
                assert abs((R @ M @ R.T)[q - 1, q - 1]) <= 1e-8 * scale


def test_feasibility_matches_interval():
    f = zero3.pq_feasibility(HOLLOW, HOLLOW, 1, 1)
    lo, hi = f.interval
    assert f.feasible and 0.0 <= lo <= hi <= 1.0


# Givens completion


def test_givens_zero_examples():
    G = zero3.find_givens_zero(np.diag([1.0, -1.0, 5.0]), 1, 2)
    A = G.T @ np.diag([1.0, -1.0, 5.0]) @ G
    assert A[0, 0] == pytest.approx(0.0, abs=1e-15)
    assert abs(abs(G[0, 0]) - math.sqrt(0.5)) < 1e-15
    G = zero3.find_givens_zero(np.array([[0.0, 1, 0], [1, 0, 0], [0, 0, 1]]), 1, 2)
    np.testing.assert_array_equal(G, np.eye(3))
    B = np.array([[1.0, 2, 0], [2, 1, 0], [0, 0, 7]])
    for c in (1, 2):
        G = zero3.find_givens_zero(B, 1, 2, c=c)
        assert abs((G.T @ B @ G)[c - 1, c - 1]) <= 1e-12


def test_givens_zero_infeasible():
    with pytest.raises(GivensInfeasible):
        zero3.find_givens_zero(np.eye(3), 1, 2)
    with pytest.raises(IndexError):
        zero3.find_givens_zero(HOLLOW, 1, 2, c=3)


def test_givens_angle_smallest_root():
    assert zero3.givens_angle(0.0, 1.0, 0.0) == 0.0
    assert zero3.givens_angle(1.0, 0.0, 1.0) is None


# three zeros spread over a pair


@pytest.mark.parametrize("variant", ["A", "B", "C"])
def test_omega_on_traceless_equal_pair(variant, rng):
    for _ in range(10):
        A = rng.standard_normal((3, 3))
        T = (A + A.T) / 2
        T -= np.trace(T) / 3 * np.eye(3)
        W = zero3.build_omega(T, T, variant, 1, 2, 3)
        L_out, M_out = W.T @ T @ W, W @ T @ W.T
        assert orthogonality_residual(W) <= 3e-11
        s = np.linalg.norm(T)
        if variant == "A":
            assert max(abs(L_out[0, 0]), abs(M_out[1, 1]), abs(M_out[2, 2])) <= 1e-8 * s
        else:
            assert max(abs(L_out[1, 1]), abs(L_out[2, 2]), abs(M_out[0, 0])) <= 1e-8 * s


def test_omega_rejects_definite():
    for v in "ABC":
        with pytest.raises(ConditionsNotMet):
            zero3.build_omega(np.eye(3), np.eye(3), v, 1, 2, 3)


def test_two_one_solver_on_hollow_frame(rng):
    Q = rotation(3, rng)
    L = Q @ HOLLOW @ Q.T
    W = zero3.solve_two_one(L, L, (2, 3), 1)
    assert W is not None
    assert max(abs((W.T @ L @ W)[1, 1]), abs((W.T @ L @ W)[2, 2]), abs((W @ L @ W.T)[0, 0])) <= 1e-8 * 3


def test_two_one_solver_reports_impossible():
    L, M = data.pair("traceless_not_cohollowizable_3x3")
    # the shipped counterexamples defeat the (2,3)/(1) pattern
    d = data.load_fixture("hollow_almost_hollow_counterexamples_3x3")
    for pr in d["pairs"]:
        assert zero3.solve_two_one(data.matrix(pr["L"]), data.matrix(pr["M"]), (2, 3), 1) is None
    assert is_nondefinite(L) and is_nondefinite(M)
