import logging
from collections import Counter
from typing import Tuple

import numpy as np
from pydantic import BaseModel, ConfigDict, model_validator

from swcoding.config.config import CONSTRUCTION_CONFIG
from swcoding.errors import ConstructionError, DimensionError

logger = logging.getLogger(__name__)

SEED_MASK = (1 << 64) - 1


class SparseParityMatrix(BaseModel):
    """
    Binary m x n parity-check matrix kept as sorted row and column adjacency.

    rows[j] lists the columns of the ones in row j, cols[i] lists the rows of the
    ones in column i. Both views describe the same entries. m == n is allowed for
    the identity code (uncompressed source).
    """
    model_config = ConfigDict(frozen=True)

    n: int
    m: int
    rows: Tuple[Tuple[int, ...], ...]
    cols: Tuple[Tuple[int, ...], ...]

    @model_validator(mode="after")
    def check_structure(self):
        if self.n < 1:
            raise ValueError("a parity-check matrix needs at least one column")
        if self.m > self.n:
            raise ValueError(f"row count {self.m} exceeds column count {self.n}")
        if len(self.rows) != self.m or len(self.cols) != self.n:
            raise ValueError("adjacency lists do not match the declared dimensions")
        entries = set()
        for j, row in enumerate(self.rows):
            _check_sorted_indices(row, self.n, f"row {j}")
            entries.update((j, i) for i in row)
        count = 0
        for i, col in enumerate(self.cols):
            _check_sorted_indices(col, self.m, f"column {i}")
            for j in col:
                if (j, i) not in entries:
                    raise ValueError(f"entry ({j}, {i}) is listed for column {i} but not for row {j}")
            count += len(col)
        if count != len(entries):
            raise ValueError("row and column adjacency describe different entries")
        return self

    @classmethod
    def from_rows(cls, n, rows):
        rows = tuple(tuple(sorted(int(i) for i in row)) for row in rows)
        cols = [[] for _ in range(n)]
        for j, row in enumerate(rows):
            for i in row:
                if not 0 <= i < n:
                    raise ValueError(f"row {j} has column index {i} outside [0, {n})")
                cols[i].append(j)
        return cls(n=n, m=len(rows), rows=rows, cols=tuple(tuple(col) for col in cols))

    @classmethod
    def from_dense(cls, matrix):
        matrix = np.asarray(matrix)
        return cls.from_rows(matrix.shape[1], [np.flatnonzero(row) for row in matrix])

    @property
    def rate(self) -> float:
        """Compression rate m/n in syndrome bits per source bit."""
        return self.m / self.n

    def edges(self):
        """Row and column index arrays of the nonzero entries, row-major."""
        row_idx = np.repeat(np.arange(self.m), [len(row) for row in self.rows])
        col_idx = np.fromiter((i for row in self.rows for i in row), dtype=np.int64, count=len(row_idx))
        return row_idx, col_idx

    def to_dense(self):
        matrix = np.zeros((self.m, self.n), dtype=np.uint8)
        row_idx, col_idx = self.edges()
        matrix[row_idx, col_idx] = 1
        return matrix

    def row_weights(self):
        return [len(row) for row in self.rows]

    def col_weights(self):
        return [len(col) for col in self.cols]


def _check_sorted_indices(indices, bound, label):
    previous = -1
    for index in indices:
        if not 0 <= index < bound:
            raise ValueError(f"{label} has index {index} outside [0, {bound})")
        if index <= previous:
            raise ValueError(f"{label} is not strictly increasing (duplicate or unsorted index {index})")
        previous = index


def identity_code(n) -> SparseParityMatrix:
    """The uncompressed corner point: every source bit is its own syndrome bit."""
    return systematic_rows(n, range(n))


def systematic_rows(n, positions) -> SparseParityMatrix:
    return SparseParityMatrix.from_rows(n, [[int(i)] for i in positions])


def embed_code(H: SparseParityMatrix, n, offset) -> SparseParityMatrix:
    """H acting on positions [offset, offset + H.n) of a length-n word."""
    if offset < 0 or offset + H.n > n:
        raise DimensionError(f"a length-{H.n} code at offset {offset} does not fit in length {n}")
    return SparseParityMatrix.from_rows(n, [[j + offset for j in row] for row in H.rows])


def stack_codes(top: SparseParityMatrix, bottom: SparseParityMatrix) -> SparseParityMatrix:
    if top.n != bottom.n:
        raise DimensionError(f"cannot stack codes of lengths {top.n} and {bottom.n}")
    return SparseParityMatrix.from_rows(top.n, top.rows + bottom.rows)


def gallager_construct(n, dv, dc, seed, max_swaps=None) -> SparseParityMatrix:
    """
    Random (dv, dc)-regular parity-check matrix.

    Every column gets dv sockets, the sockets are shuffled and dealt to the
    m = n*dv/dc checks in groups of dc. A check that receives the same column
    twice (a parallel edge) has one of the clashing sockets swapped with a
    random socket elsewhere, provided the swap creates no new clash. 4-cycles
    are not removed.
    """
    if dv < 2:
        raise ValueError(f"variable degree must be at least 2, got {dv}")
    if dc <= dv:
        raise ValueError(f"check degree {dc} must exceed variable degree {dv}")
    if n < dc:
        raise ValueError(f"code length {n} is shorter than the check degree {dc}")
    if (n * dv) % dc:
        raise ValueError(f"n*dv = {n * dv} is not divisible by dc = {dc}")
    if max_swaps is None:
        max_swaps = CONSTRUCTION_CONFIG["max_swaps"]

    m = n * dv // dc
    rng = np.random.default_rng(int(seed) & SEED_MASK)
    sockets = np.repeat(np.arange(n), dv)
    rng.shuffle(sockets)
    slots = sockets.reshape(m, dc)

    swaps = 0
    for attempt in range(max_swaps + 1):
        ordered = np.sort(slots, axis=1)
        clashing = np.flatnonzero((ordered[:, 1:] == ordered[:, :-1]).any(axis=1))
        if clashing.size == 0:
            break
        if attempt == max_swaps:
            raise ConstructionError(
                f"could not remove parallel edges from a ({dv},{dc}) code of length {n} "
                f"within {max_swaps} swap attempts"
            )
        row = clashing[0]
        values, counts = np.unique(slots[row], return_counts=True)
        column = values[counts > 1][0]
        position = np.flatnonzero(slots[row] == column)[0]
        other_row = rng.integers(m)
        other_position = rng.integers(dc)
        other_column = slots[other_row, other_position]
        if other_row == row or other_column in slots[row] or column in slots[other_row]:
            continue
        slots[row, position] = other_column
        slots[other_row, other_position] = column
        swaps += 1

    logger.debug(f"({dv},{dc}) code n={n} seed={seed}: {swaps} swaps to remove parallel edges")
    return SparseParityMatrix.from_rows(n, slots.tolist())


def syndrome(H: SparseParityMatrix, u):
    """s = H u over GF(2)."""
    u = np.asarray(u, dtype=np.uint8)
    if u.ndim != 1 or len(u) != H.n:
        raise DimensionError(f"source block has length {u.size}, code expects {H.n}")
    row_idx, col_idx = H.edges()
    counts = np.bincount(row_idx, weights=u[col_idx], minlength=H.m)
    return (counts.astype(np.int64) % 2).astype(np.uint8)


def gf2_rank(H: SparseParityMatrix):
    basis = {}
    for row in H.rows:
        vector = 0
        for i in row:
            vector |= 1 << i
        while vector:
            lead = vector.bit_length() - 1
            if lead not in basis:
                basis[lead] = vector
                break
            vector ^= basis[lead]
    return len(basis)


def describe_code(H: SparseParityMatrix):
    rank = gf2_rank(H)
    return {
        "n": H.n,
        "m": H.m,
        "rate": H.rate,
        "rank": rank,
        "effective_rate": rank / H.n,
        "column_weights": dict(sorted(Counter(H.col_weights()).items())),
        "row_weights": dict(sorted(Counter(H.row_weights()).items())),
    }
