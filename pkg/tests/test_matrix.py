import itertools
import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st
from hypothesis.extra.numpy import arrays

from hollowkit import matrix as mx
from hollowkit.errors import InvalidMatrix, SizeMismatch

from conftest import rotation

finite = st.floats(-10, 10, allow_nan=False, allow_infinity=False)
# magnitudes whose squares do not underflow in a Frobenius norm
entries = st.one_of(st.just(0.0), st.floats(1e-6, 10), st.floats(-10, -1e-6))


def square(n_min=1, n_max=5):
    return st.integers(n_min, n_max).flatmap(lambda n: arrays(np.float64, (n, n), elements=entries))


def test_symmetrize_examples():
    np.testing.assert_array_equal(mx.symmetrize([[0, 2], [0, 0]]), [[0, 1], [1, 0]])
    swap = np.array([[0.0, 1.0], [1.0, 0.0]])
    np.testing.assert_array_equal(mx.symmetrize(swap), swap)


def test_results_are_read_only():
    S = mx.symmetrize(np.eye(2))
    with pytest.raises(ValueError):
        S[0, 0] = 3.0


def test_conjugate_quarter_turn_makes_hollow():
    G = mx.givens(2, 1, 2, math.pi / 4)
    out = mx.conjugate(G, np.diag([1.0, -1.0]))
    np.testing.assert_allclose(out, [[0, -1], [-1, 0]], atol=1e-15)


def test_conjugate_flipped_and_identity(rng):
    M = rng.standard_normal((4, 4))
    np.testing.assert_array_equal(mx.conjugate(np.eye(4), M), M)
    V = rotation(4, rng)
    np.testing.assert_allclose(mx.conjugate(V, M, flipped=True), V @ M @ V.T)
    with pytest.raises(SizeMismatch):
        mx.conjugate(np.eye(3), M)


def test_conjugate_with_stored_rotation_zeros_entry():
    from hollowkit import data

    d = data.load_fixture("zeroable_without_conditions_21")
    R, L = data.matrix(d["R"]), data.matrix(d["L"])
    assert abs(mx.conjugate(R, L)[1, 1]) < 1e-12


def test_minor_examples():
    assert mx.minor(np.eye(3), 1, 1) == 1.0
    assert mx.minor([[1, 0, 0], [0, 1, 1], [0, 1, 1]], 1, 1) == 0.0
    assert mx.minor([[0, 1, 0], [1, 0, 2], [0, 2, 0]], 1, 1) == -4.0
    with pytest.raises(IndexError):
        mx.minor(np.eye(3), 0, 1)
    with pytest.raises(IndexError):
        mx.minor(np.eye(3), 1, 4)


@pytest.mark.parametrize("n", [1, 2, 3, 4, 5, 6])
def test_det_matches_numpy(n, rng):
    for _ in range(20):
        A = rng.standard_normal((n, n))
        assert mx.det(A) == pytest.approx(np.linalg.det(A), rel=1e-10, abs=1e-12)


def test_principal_submatrix():
    M = np.arange(9.0).reshape(3, 3)
    np.testing.assert_array_equal(mx.principal_submatrix(M, [1, 2, 3]), M)
    np.testing.assert_array_equal(mx.principal_submatrix(np.diag([1.0, 2, 3]), {1, 3}), np.diag([1.0, 3]))
    L = np.array([[2.0, -1, -1], [-1, 1, 0], [-1, 0, 1]])
    np.testing.assert_array_equal(mx.principal_submatrix(L, [2, 3]), np.eye(2))
    with pytest.raises(InvalidMatrix):
        mx.principal_submatrix(M, [])


def test_givens():
    np.testing.assert_array_equal(mx.givens(3, 1, 2, 0.0), np.eye(3))
    np.testing.assert_allclose(mx.givens(2, 1, 2, math.pi / 2), [[0, -1], [1, 0]], atol=1e-16)
    G = mx.givens(3, 1, 2, math.pi / 4)
    np.testing.assert_array_equal(G[2], [0, 0, 1])
    np.testing.assert_array_equal(G[:, 2], [0, 0, 1])
    assert mx.det(G) == pytest.approx(1.0)
    with pytest.raises(IndexError):
        mx.givens(3, 2, 2, 0.1)


def test_euler():
    np.testing.assert_array_equal(mx.euler(0, 0, 0), np.eye(3))
    np.testing.assert_allclose(mx.euler(0, math.pi / 2, 0), [[0, 0, 1], [0, 1, 0], [-1, 0, 0]], atol=1e-16)


@given(st.tuples(finite, finite, finite))
def test_euler_is_special_orthogonal(angles):
    E = mx.euler(*angles)
    assert mx.orthogonality_residual(E) <= 3 * mx.DEFAULT_TOL.orth_tol
    assert mx.det(E) == pytest.approx(1.0, abs=1e-12)


def test_shift_diagonal(rng):
    M = rng.standard_normal((4, 4))
    np.testing.assert_array_equal(mx.shift_diagonal(M, 0.0), M)
    np.testing.assert_array_equal(mx.shift_diagonal(np.eye(3), -1.0), np.zeros((3, 3)))
    assert abs(np.trace(mx.shift_diagonal(M, -np.trace(M) / 4))) < 1e-14


def test_signed_permutation():
    sp = mx.SignedPermutation((2, 3, 1), (1, -1, 1))
    V = sp.matrix()
    np.testing.assert_array_equal(V.T @ V, np.eye(3))
    np.testing.assert_array_equal(V @ np.array([1.0, 0, 0]), [0, 1, 0])
    assert sp.determinant() == -1  # even cycle, one sign flip
    with pytest.raises(ValueError):
        mx.SignedPermutation((1, 1, 2), (1, 1, 1))
    with pytest.raises(ValueError):
        mx.SignedPermutation((1, 2), (1, 0))
    E = sp.embed(5, 1)
    np.testing.assert_array_equal(E[1:4, 1:4], V)
    assert E[0, 0] == E[4, 4] == 1.0


def test_signed_permutation_enumeration_order():
    all3 = list(mx.signed_permutations(3))
    assert len(all3) == 48
    assert all3[0] == mx.SignedPermutation.identity(3)
    assert all3[1].signs == (1, 1, -1)
    assert len({(p.perm, p.signs) for p in all3}) == 48


def test_json_round_trip_and_rejection():
    M = mx.matrix_from_json('{"n": 2, "rows": [[1, 2], [3, 4.5]]}')
    np.testing.assert_array_equal(M, [[1, 2], [3, 4.5]])
    assert mx.matrix_to_json_obj(M) == {"n": 2, "rows": [[1.0, 2.0], [3.0, 4.5]]}
    bad = [
        '{"n": 2, "rows": [[1, 2]]}',
        '{"n": 2, "rows": [[1, 2], [3]]}',
        '{"n": 1, "rows": [["x"]]}',
        '{"n": 1, "rows": [[true]]}',
        '{"rows": 5}',
        '[1, 2]',
        '{"n": 65, "rows": []}',
        'not json',
    ]
    for text in bad:
        with pytest.raises(InvalidMatrix):
            mx.matrix_from_json(text)
    with pytest.raises(InvalidMatrix):
        mx.as_matrix([[1.0, float("nan")], [0.0, 1.0]])
    with pytest.raises(InvalidMatrix):
        mx.as_matrix(np.ones((2, 3)))


def test_tolerance_config_rejects_nonpositive():
    for kw in ({"zero_tol": 0.0}, {"orth_tol": -1.0}, {"disc_clamp": float("inf")}):
        with pytest.raises(ValueError):
            mx.ToleranceConfig(**kw)


# invariants under orthogonal similarity


@given(square(), st.floats(-5, 5), st.booleans(), st.integers(0, 2 ** 32 - 1))
def test_translation_commutes_with_conjugation(M, c, flipped, seed):
    n = M.shape[0]
    V = rotation(n, np.random.default_rng(seed))
    lhs = mx.conjugate(V, mx.shift_diagonal(M, c), flipped)
    rhs = mx.conjugate(V, M, flipped) + c * np.eye(n)
    assert np.abs(lhs - rhs).max() <= 1e-12 * (np.linalg.norm(M) + abs(c) * n) + 1e-300


@given(square(), st.booleans(), st.integers(0, 2 ** 32 - 1))
def test_symmetric_part_has_same_conjugated_diagonal(M, flipped, seed):
    V = rotation(M.shape[0], np.random.default_rng(seed))
    a = np.diag(mx.conjugate(V, M, flipped))
    b = np.diag(mx.conjugate(V, mx.symmetrize(M), flipped))
    assert np.abs(a - b).max() <= 1e-12 * max(np.linalg.norm(M), 1e-300)


@pytest.mark.parametrize("n", [2, 3, 4])
def test_signed_permutations_preserve_principal_minor_multisets(n, rng):
    M = rng.standard_normal((n, n))
    s = np.linalg.norm(M)
    for sp in mx.signed_permutations(n):
        S = sp.matrix()
        C = S.T @ M @ S
        for k in range(1, n + 1):
            a = np.sort(mx.principal_minors(M, k))
            b = np.sort(mx.principal_minors(C, k))
            assert np.abs(a - b).max() <= 1e-10 * s ** k


def test_orthogonality_of_builders(rng):
    for n in range(2, 6):
        for i, j in itertools.permutations(range(1, n + 1), 2):
            G = mx.givens(n, i, j, rng.uniform(-4, 4))
            assert mx.is_orthogonal(G)
        for sp in itertools.islice(mx.signed_permutations(n), 50):
            assert mx.orthogonality_residual(sp.matrix()) == 0.0
