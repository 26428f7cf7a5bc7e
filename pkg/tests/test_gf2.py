import itertools

import numpy as np
import pytest

from peposd import gf2


def naive_mat_vec(v, M):
    out = np.zeros(M.shape[1], dtype=np.uint8)
    for j in range(M.shape[1]):
        acc = 0
        for i in range(M.shape[0]):
            acc ^= int(v[i]) & int(M[i, j])
        out[j] = acc
    return out


def row_space(M):
    """All GF(2) row-space members of a small matrix, as a set of tuples."""
    rows, _ = M.shape
    members = set()
    for coeffs in itertools.product([0, 1], repeat=rows):
        w = np.zeros(M.shape[1], dtype=np.uint8)
        for c, row in zip(coeffs, M):
            if c:
                w ^= row
        members.add(tuple(w))
    return members


def random_full_rank(rng, rows, cols):
    while True:
        M = rng.integers(0, 2, (rows, cols), dtype=np.uint8)
        if gf2.gf2_rank(M) == rows:
            return M


def test_mat_vec_mul_zero_vector():
    M = np.array([[1, 0, 1], [0, 1, 1]], dtype=np.uint8)
    assert np.array_equal(gf2.mat_vec_mul([0, 0], M), [0, 0, 0])


def test_mat_vec_mul_hand_xor():
    M = np.array([[1, 0, 1], [0, 1, 1]], dtype=np.uint8)
    assert np.array_equal(gf2.mat_vec_mul([1, 1], M), [1, 1, 0])


def test_mat_vec_mul_matches_naive_oracle():
    rng = np.random.default_rng(1)
    for _ in range(50):
        v = rng.integers(0, 2, 8, dtype=np.uint8)
        M = rng.integers(0, 2, (8, 16), dtype=np.uint8)
        assert np.array_equal(gf2.mat_vec_mul(v, M), naive_mat_vec(v, M))


def test_mat_vec_mul_naive_oracle_large_sizes():
    rng = np.random.default_rng(2)
    for rows, cols in [(16, 32), (64, 128)]:
        v = rng.integers(0, 2, rows, dtype=np.uint8)
        M = rng.integers(0, 2, (rows, cols), dtype=np.uint8)
        assert np.array_equal(gf2.mat_vec_mul(v, M), naive_mat_vec(v, M))


def test_mat_vec_mul_dimension_mismatch():
    with pytest.raises(ValueError):
        gf2.mat_vec_mul([1, 0, 1], np.eye(2, dtype=np.uint8))


def test_apply_identity_permutation():
    v = np.arange(5)
    assert np.array_equal(gf2.apply_permutation(gf2.identity_permutation(5), v), v)


def test_apply_permutation_definition():
    out = gf2.apply_permutation([2, 0, 1], np.array(["a", "b", "c"]))
    assert list(out) == ["c", "a", "b"]


def test_apply_permutation_length_mismatch():
    with pytest.raises(ValueError):
        gf2.apply_permutation([0, 1], [1, 2, 3])


def test_permutation_round_trip():
    rng = np.random.default_rng(3)
    for _ in range(20):
        perm = rng.permutation(64)
        v = rng.normal(size=64)
        inv = gf2.invert_permutation(perm)
        assert np.array_equal(gf2.apply_permutation(inv, gf2.apply_permutation(perm, v)), v)
        assert np.array_equal(gf2.invert_permutation(inv), perm)


def test_systematic_form_already_systematic():
    P = np.array([[1, 0], [1, 1], [0, 1]], dtype=np.uint8)
    G = np.hstack([np.eye(3, dtype=np.uint8), P])
    Gt, lam2, _ = gf2.systematic_form(G)
    assert np.array_equal(Gt, G)
    assert np.array_equal(lam2, np.arange(5))


def test_systematic_form_identity_block_and_row_space():
    rng = np.random.default_rng(4)
    for _ in range(30):
        G = random_full_rank(rng, 6, 12)
        Gt, lam2, _ = gf2.systematic_form(G)
        assert np.array_equal(Gt[:, :6], np.eye(6, dtype=np.uint8))
        assert row_space(Gt) == row_space(G[:, lam2])


def test_systematic_form_exhaustive_row_space_small():
    rng = np.random.default_rng(5)
    for _ in range(10):
        G = random_full_rank(rng, 8, 16)
        col_order = rng.permutation(16)
        Gt, lam2, _ = gf2.systematic_form(G, col_order=col_order)
        assert np.array_equal(Gt[:, :8], np.eye(8, dtype=np.uint8))
        assert row_space(Gt) == row_space(G[:, col_order][:, lam2])


def test_systematic_form_rank_deficient():
    G = np.array([[1, 0, 1, 0], [1, 0, 1, 0]], dtype=np.uint8)
    with pytest.raises(gf2.StructuralError):
        gf2.systematic_form(G)


@pytest.mark.parametrize("n,km,expected", [
    (64, 38, 43264),
    (64, 50, 12544),
    (64, 59, 1600),
    (128, 119, 10368),
])
def test_ge_op_count_reference_codes(n, km, expected):
    assert gf2.ge_op_count(n, km) == expected


def test_systematic_form_reports_formula_count():
    G = np.hstack([np.eye(6, dtype=np.uint8),
                   np.ones((6, 58), dtype=np.uint8)])
    _, _, ops = gf2.systematic_form(G)
    assert ops == 64 * min(6, 58) ** 2
