import math

import numpy as np
import pytest

from swcoding.codes.ldpc_code import SparseParityMatrix, identity_code, syndrome
from swcoding.correlation.correlation_model import CorrelationModel
from swcoding.decoding.brute_force import brute_force_marginals
from swcoding.errors import DimensionError, OracleError


def test_single_bit_with_known_first_source():
    # u1 = 1 revealed, u2 free: Pr(u2 = 1) = Pr(u1 = u2) = p
    H1 = identity_code(1)
    H2 = SparseParityMatrix.from_rows(1, [])
    marginals = brute_force_marginals(H1, H2, CorrelationModel(p=0.8), [1], [])
    assert marginals.u1_one[0] == 1.0
    assert marginals.u2_one[0] == pytest.approx(0.8, abs=1e-12)
    np.testing.assert_array_equal(marginals.map_u1, [1])
    np.testing.assert_array_equal(marginals.map_u2, [1])
    assert marginals.candidates1 == 1
    assert marginals.candidates2 == 2


def test_corner_point_by_hand(small_code):
    # u1 = 101 is sent in full; H2 u2 = 11 leaves u2 in {101, 010}, weighted p^3 and (1-p)^3
    p = 0.9
    u1 = np.array([1, 0, 1], dtype=np.uint8)
    marginals = brute_force_marginals(identity_code(3), small_code, CorrelationModel(p=p), u1, [1, 1])
    assert marginals.candidates1 == 1
    assert marginals.candidates2 == 2
    agree, disagree = p ** 3, (1 - p) ** 3
    np.testing.assert_allclose(marginals.u1_one, [1.0, 0.0, 1.0], atol=1e-12)
    np.testing.assert_allclose(marginals.u2_one, np.array([agree, disagree, agree]) / (agree + disagree), rtol=1e-12)
    np.testing.assert_array_equal(marginals.map_u2, [1, 0, 1])


def test_relabeling_the_sources_swaps_the_marginals(rng):
    n = 6
    H = SparseParityMatrix.from_rows(n, [[0, 1, 3], [1, 2, 4], [3, 4, 5]])
    s = syndrome(H, rng.integers(0, 2, n, dtype=np.uint8))
    marginals = brute_force_marginals(H, H, CorrelationModel(p=0.85), s, s)
    np.testing.assert_allclose(marginals.u1_one, marginals.u2_one, atol=1e-12)

    # Pr(bit = 0) recovered from the LLR completes each marginal to one
    ones = np.concatenate([marginals.u1_one, marginals.u2_one])
    zeros = ones * np.exp(marginals.llrs())
    np.testing.assert_allclose(ones + zeros, 1.0, atol=1e-12)


def test_llrs_follow_the_p0_over_p1_convention():
    H1 = identity_code(1)
    H2 = SparseParityMatrix.from_rows(1, [])
    llrs = brute_force_marginals(H1, H2, CorrelationModel(p=0.9), [0], []).llrs()
    assert llrs[0] == math.inf
    assert llrs[1] == pytest.approx(math.log(9.0), abs=1e-12)


def test_parity_pair(small_code):
    # both sources share the 2x3 code; syndromes select cosets of {000, 111}
    model = CorrelationModel(p=0.9)
    u1 = np.array([1, 0, 0], dtype=np.uint8)
    u2 = np.array([1, 0, 0], dtype=np.uint8)
    marginals = brute_force_marginals(small_code, small_code, model, syndrome(small_code, u1),
                                      syndrome(small_code, u2))
    assert marginals.candidates1 == 2
    assert marginals.candidates2 == 2
    np.testing.assert_array_equal(marginals.map_u1, [0, 1, 1])
    np.testing.assert_array_equal(marginals.map_u2, [0, 1, 1])
    # (011, 011) and (100, 100) tie, so every bit is a coin flip
    np.testing.assert_allclose(marginals.u1_one, [0.5, 0.5, 0.5], atol=1e-12)
    np.testing.assert_allclose(marginals.u2_one, [0.5, 0.5, 0.5], atol=1e-12)


def test_map_ties_go_to_the_lexicographically_smallest_pair():
    H = SparseParityMatrix.from_rows(2, [[0, 1]])
    marginals = brute_force_marginals(H, H, CorrelationModel(p=0.5), [1], [1])
    np.testing.assert_array_equal(marginals.map_u1, [0, 1])
    np.testing.assert_array_equal(marginals.map_u2, [0, 1])


def test_marginals_are_probabilities(rng):
    n = 8
    H1 = SparseParityMatrix.from_rows(n, [[0, 1, 2], [2, 3, 4], [5, 6, 7]])
    H2 = SparseParityMatrix.from_rows(n, [[0, 4], [1, 5, 6], [3, 7]])
    u1 = rng.integers(0, 2, n, dtype=np.uint8)
    u2 = u1 ^ (rng.random(n) < 0.2).astype(np.uint8)
    marginals = brute_force_marginals(H1, H2, CorrelationModel(p=0.8), syndrome(H1, u1), syndrome(H2, u2))
    assert np.all((marginals.u1_one >= 0) & (marginals.u1_one <= 1))
    assert np.all((marginals.u2_one >= 0) & (marginals.u2_one <= 1))
    np.testing.assert_array_equal(syndrome(H1, marginals.map_u1), syndrome(H1, u1))
    np.testing.assert_array_equal(syndrome(H2, marginals.map_u2), syndrome(H2, u2))
    assert marginals.candidates1 == 2 ** (n - 3)


def test_oracle_refuses_large_blocks():
    H = identity_code(17)
    with pytest.raises(OracleError):
        brute_force_marginals(H, H, CorrelationModel(p=0.9), np.zeros(17), np.zeros(17))
    with pytest.raises(OracleError):
        brute_force_marginals(identity_code(4), identity_code(4), CorrelationModel(p=0.9),
                              np.zeros(4), np.zeros(4), max_n=3)


def test_oracle_reports_inconsistent_syndromes():
    H = SparseParityMatrix.from_rows(2, [[0, 1], [0, 1]])
    with pytest.raises(OracleError):
        brute_force_marginals(H, H, CorrelationModel(p=0.9), [0, 1], [0, 0])


def test_oracle_checks_dimensions(small_code):
    with pytest.raises(DimensionError):
        brute_force_marginals(small_code, identity_code(4), CorrelationModel(p=0.9), [0, 0], [0] * 4)
    with pytest.raises(DimensionError):
        brute_force_marginals(small_code, small_code, CorrelationModel(p=0.9), [0], [0, 0])
