import numpy as np
import pytest
from pydantic import ValidationError

from swcoding.codes.ldpc_code import (
    SparseParityMatrix,
    describe_code,
    embed_code,
    gallager_construct,
    gf2_rank,
    identity_code,
    stack_codes,
    syndrome,
    systematic_rows,
)
from swcoding.errors import ConstructionError, DimensionError


def test_small_code_views(small_code):
    assert small_code.n == 3
    assert small_code.m == 2
    assert small_code.cols == ((0,), (0, 1), (1,))
    np.testing.assert_array_equal(small_code.to_dense(), [[1, 1, 0], [0, 1, 1]])
    assert SparseParityMatrix.from_dense(small_code.to_dense()) == small_code


def test_matrix_rejects_inconsistent_adjacency():
    with pytest.raises(ValidationError):
        SparseParityMatrix(n=3, m=1, rows=((0, 1),), cols=((0,), (), (0,)))
    with pytest.raises(ValidationError):
        SparseParityMatrix(n=3, m=1, rows=((1, 0),), cols=((0,), (0,), ()))
    with pytest.raises(ValidationError):
        SparseParityMatrix.from_rows(2, [[0], [1], [0, 1]])


@pytest.mark.parametrize("n,dv,dc", [(12, 3, 6), (96, 3, 6), (120, 4, 8), (64, 3, 12)])
def test_gallager_degrees(n, dv, dc):
    H = gallager_construct(n, dv, dc, seed=1)
    assert H.m == n * dv // dc
    assert set(H.col_weights()) == {dv}
    assert set(H.row_weights()) == {dc}


def test_gallager_large_code_has_expected_shape():
    H = gallager_construct(1024, 3, 6, seed=7)
    assert (H.m, H.n) == (512, 1024)
    assert all(len(set(row)) == len(row) for row in H.rows)


def test_gallager_is_deterministic():
    assert gallager_construct(256, 3, 6, seed=7) == gallager_construct(256, 3, 6, seed=7)
    assert gallager_construct(256, 3, 6, seed=7) != gallager_construct(256, 3, 6, seed=8)


@pytest.mark.parametrize("n,dv,dc", [(10, 3, 4), (12, 1, 6), (12, 6, 6), (4, 3, 6)])
def test_gallager_rejects_impossible_parameters(n, dv, dc):
    with pytest.raises(ValueError):
        gallager_construct(n, dv, dc, seed=0)


def test_gallager_gives_up_when_swaps_run_out():
    # with dc = n every check must hold each column exactly once, so almost every deal clashes
    for seed in range(50):
        try:
            gallager_construct(6, 3, 6, seed=seed, max_swaps=0)
        except ConstructionError:
            return
    pytest.fail("expected at least one seed to need a swap")


def test_syndrome_examples(small_code):
    np.testing.assert_array_equal(syndrome(small_code, [1, 1, 1]), [0, 0])
    np.testing.assert_array_equal(syndrome(small_code, [1, 0, 0]), [1, 0])
    np.testing.assert_array_equal(syndrome(small_code, [0, 0, 0]), [0, 0])
    assert syndrome(small_code, [0, 1, 0]).dtype == np.uint8


def test_syndrome_is_linear(regular_code, rng):
    n = regular_code.n
    for _ in range(1000):
        a = rng.integers(0, 2, n, dtype=np.uint8)
        b = rng.integers(0, 2, n, dtype=np.uint8)
        np.testing.assert_array_equal(syndrome(regular_code, a ^ b),
                                      syndrome(regular_code, a) ^ syndrome(regular_code, b))


def test_syndrome_matches_dense_product(regular_code, rng):
    u = rng.integers(0, 2, regular_code.n, dtype=np.uint8)
    expected = (regular_code.to_dense().astype(int) @ u.astype(int)) % 2
    np.testing.assert_array_equal(syndrome(regular_code, u), expected)


def test_syndrome_rejects_wrong_length(small_code):
    with pytest.raises(DimensionError):
        syndrome(small_code, [1, 0])


def test_gf2_rank():
    assert gf2_rank(identity_code(10)) == 10
    assert gf2_rank(SparseParityMatrix.from_rows(3, [[0, 1], [1, 2], [0, 2]])) == 2
    # with even dv the rows of a regular code sum to zero
    H = gallager_construct(64, 4, 8, seed=2)
    assert gf2_rank(H) < H.m


def test_describe_code(regular_code):
    description = describe_code(regular_code)
    assert description["n"] == 96
    assert description["m"] == 48
    assert description["rate"] == 0.5
    assert description["column_weights"] == {3: 96}
    assert description["row_weights"] == {6: 48}
    assert description["rank"] <= 48
    assert description["effective_rate"] == description["rank"] / 96


def test_identity_and_stacked_codes(rng):
    u = rng.integers(0, 2, 16, dtype=np.uint8)
    np.testing.assert_array_equal(syndrome(identity_code(16), u), u)

    revealed = systematic_rows(16, range(8, 16))
    np.testing.assert_array_equal(syndrome(revealed, u), u[8:])

    H = gallager_construct(16, 3, 6, seed=4)
    stacked = stack_codes(H, revealed)
    assert stacked.m == H.m + 8
    np.testing.assert_array_equal(syndrome(stacked, u), np.concatenate([syndrome(H, u), u[8:]]))

    with pytest.raises(DimensionError):
        stack_codes(H, identity_code(8))


def test_embed_code_shifts_columns(small_code):
    embedded = embed_code(small_code, 5, 2)
    assert (embedded.m, embedded.n) == (2, 5)
    assert embedded.rows == ((2, 3), (3, 4))
    u = np.array([1, 1, 1, 0, 1], dtype=np.uint8)
    np.testing.assert_array_equal(syndrome(embedded, u), syndrome(small_code, u[2:]))
    with pytest.raises(DimensionError):
        embed_code(small_code, 4, 2)
