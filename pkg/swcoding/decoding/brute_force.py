import logging

import numpy as np
from pydantic import BaseModel, ConfigDict

from swcoding.codes.ldpc_code import SparseParityMatrix
from swcoding.config.config import ORACLE_CONFIG
from swcoding.correlation.correlation_model import CorrelationModel
from swcoding.errors import DimensionError, OracleError

logger = logging.getLogger(__name__)

# pairs scored per block while enumerating
BLOCK_PAIRS = 1 << 20


class ExactMarginals(BaseModel):
    """Exact posterior Pr(bit = 1) for every bit of both sources, plus the MAP pair."""
    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    u1_one: np.ndarray
    u2_one: np.ndarray
    map_u1: np.ndarray
    map_u2: np.ndarray
    candidates1: int
    candidates2: int

    def llrs(self):
        """ln(P0/P1) for u1 then u2; +-inf where the marginal is a point mass."""
        ones = np.concatenate([self.u1_one, self.u2_one])
        with np.errstate(divide="ignore"):
            return np.log1p(-ones) - np.log(ones)


def _all_words(n):
    """Every n-bit word, in lexicographic order of the bit sequence."""
    shifts = np.arange(n - 1, -1, -1)
    return ((np.arange(1 << n)[:, None] >> shifts) & 1).astype(np.uint8)


def _solutions(H: SparseParityMatrix, s, words):
    s = np.asarray(s, dtype=np.uint8)
    if len(s) != H.m:
        raise DimensionError(f"syndrome has length {len(s)}, code has {H.m} rows")
    syndromes = (words.astype(np.int64) @ H.to_dense().T.astype(np.int64)) % 2
    return words[(syndromes == s).all(axis=1)]


def brute_force_marginals(H1: SparseParityMatrix, H2: SparseParityMatrix, model: CorrelationModel,
                          s1, s2, max_n=None) -> ExactMarginals:
    """
    Enumerate every (u1, u2) consistent with both syndromes, weighting a pair by
    p^(agreements) (1-p)^(disagreements). Ties for the MAP pair go to the
    lexicographically smallest (u1, u2).
    """
    if H1.n != H2.n:
        raise DimensionError(f"codes have different lengths: {H1.n} and {H2.n}")
    n = H1.n
    max_n = ORACLE_CONFIG["max_n"] if max_n is None else max_n
    if n > max_n:
        raise OracleError(f"brute force enumeration is limited to n <= {max_n}, got n = {n}")

    words = _all_words(n)
    first = _solutions(H1, s1, words)
    second = _solutions(H2, s2, words)
    if len(first) == 0 or len(second) == 0:
        raise OracleError("no source pair satisfies both syndromes")

    # weight relative to the best possible pair keeps every exponent <= 0
    log_ratio = np.log(model.p) - np.log1p(-model.p)
    reference = n if log_ratio > 0 else 0
    second_int = second.astype(np.int64)

    total = 0.0
    u1_mass = np.zeros(n)
    u2_mass = np.zeros(n)
    best_score, best_pair = -np.inf, None
    block = max(1, BLOCK_PAIRS // len(second))
    for start in range(0, len(first), block):
        chunk = first[start:start + block]
        agreements = n - (chunk[:, None, :] != second[None, :, :]).sum(axis=2)
        scores = (agreements - reference) * log_ratio
        weights = np.exp(scores)
        total += weights.sum()
        u1_mass += weights.sum(axis=1) @ chunk.astype(np.int64)
        u2_mass += weights.sum(axis=0) @ second_int
        flat = int(np.argmax(scores))
        if scores.flat[flat] > best_score:
            best_score = scores.flat[flat]
            best_pair = (start + flat // len(second), flat % len(second))

    logger.debug(f"brute force over {len(first)} x {len(second)} candidate pairs")
    return ExactMarginals(
        u1_one=u1_mass / total,
        u2_one=u2_mass / total,
        map_u1=first[best_pair[0]].copy(),
        map_u2=second[best_pair[1]].copy(),
        candidates1=len(first),
        candidates2=len(second),
    )
