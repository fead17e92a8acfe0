"""
alist reading and writing (MacKay's sparse matrix format).

    n m
    max_column_weight max_row_weight
    n column weights
    m row weights
    n lines of 1-based row indices, one line per column (zero padding allowed)
    m lines of 1-based column indices, one line per row (zero padding allowed)

save_alist writes the canonical form: sorted indices, single spaces, no
padding, newline-terminated lines.
"""
import logging

from swcoding.codes.ldpc_code import SparseParityMatrix
from swcoding.errors import AlistFormatError

logger = logging.getLogger(__name__)


def _parse_ints(line_no, text, what):
    try:
        values = [int(word) for word in text.split()]
    except ValueError:
        raise AlistFormatError(line_no, f"{what} must contain only integers, got {text.strip()!r}") from None
    if any(value < 0 for value in values):
        raise AlistFormatError(line_no, f"{what} contains a negative number")
    return values


def load_alist(text) -> SparseParityMatrix:
    lines = text.splitlines()
    while lines and not lines[-1].strip():
        lines.pop()

    def line_at(index, what):
        if index >= len(lines):
            raise AlistFormatError(index + 1, f"file ends before {what}")
        return index + 1, lines[index]

    line_no, header = line_at(0, "the 'n m' header")
    dims = _parse_ints(line_no, header, "header")
    if len(dims) != 2 or dims[0] < 1:
        raise AlistFormatError(line_no, f"header must be 'n m' with n >= 1, got {header.strip()!r}")
    n, m = dims

    line_no, text_max = line_at(1, "the maximum weights line")
    max_weights = _parse_ints(line_no, text_max, "maximum weights line")
    if len(max_weights) != 2:
        raise AlistFormatError(line_no, "maximum weights line must hold two integers")
    max_col, max_row = max_weights

    line_no, text_cw = line_at(2, "the column weights line")
    col_weights = _parse_ints(line_no, text_cw, "column weights line")
    if len(col_weights) != n:
        raise AlistFormatError(line_no, f"expected {n} column weights, got {len(col_weights)}")
    if max(col_weights, default=0) != max_col:
        raise AlistFormatError(line_no, f"maximum column weight is declared as {max_col} but the largest column weight is {max(col_weights, default=0)}")

    line_no, text_rw = line_at(3, "the row weights line")
    row_weights = _parse_ints(line_no, text_rw, "row weights line")
    if len(row_weights) != m:
        raise AlistFormatError(line_no, f"expected {m} row weights, got {len(row_weights)}")
    if max(row_weights, default=0) != max_row:
        raise AlistFormatError(line_no, f"maximum row weight is declared as {max_row} but the largest row weight is {max(row_weights, default=0)}")

    cols = []
    for i in range(n):
        line_no, text_col = line_at(4 + i, f"the entries of column {i + 1}")
        entries = [value for value in _parse_ints(line_no, text_col, f"column {i + 1}") if value]
        _check_entries(line_no, entries, m, col_weights[i], f"column {i + 1}", "row")
        cols.append(sorted(value - 1 for value in entries))

    rows = []
    for j in range(m):
        line_no, text_row = line_at(4 + n + j, f"the entries of row {j + 1}")
        entries = [value for value in _parse_ints(line_no, text_row, f"row {j + 1}") if value]
        _check_entries(line_no, entries, n, row_weights[j], f"row {j + 1}", "column")
        row = sorted(value - 1 for value in entries)
        for i in row:
            if j not in cols[i]:
                raise AlistFormatError(line_no, f"row {j + 1} lists column {i + 1} but column {i + 1} does not list row {j + 1}")
        rows.append(row)

    if sum(row_weights) != sum(col_weights):
        raise AlistFormatError(4 + n + m, f"row weights sum to {sum(row_weights)} but column weights sum to {sum(col_weights)}")

    if len(lines) > 4 + n + m:
        raise AlistFormatError(5 + n + m, "unexpected content after the last row")

    if m > n:
        raise AlistFormatError(1, f"row count {m} exceeds column count {n}")

    H = SparseParityMatrix(n=n, m=m, rows=tuple(tuple(row) for row in rows), cols=tuple(tuple(col) for col in cols))
    logger.debug(f"loaded alist with n={n} m={m}")
    return H


def _check_entries(line_no, entries, bound, weight, label, kind):
    if len(entries) != weight:
        raise AlistFormatError(line_no, f"{label} declares weight {weight} but lists {len(entries)} entries")
    seen = set()
    for value in entries:
        if value > bound:
            raise AlistFormatError(line_no, f"{label} has {kind} index {value} out of range [1, {bound}]")
        if value in seen:
            raise AlistFormatError(line_no, f"{label} lists {kind} {value} twice")
        seen.add(value)


def save_alist(H: SparseParityMatrix) -> str:
    col_weights = H.col_weights()
    row_weights = H.row_weights()
    lines = [
        f"{H.n} {H.m}",
        f"{max(col_weights, default=0)} {max(row_weights, default=0)}",
        " ".join(str(w) for w in col_weights),
        " ".join(str(w) for w in row_weights),
    ]
    lines.extend(" ".join(str(j + 1) for j in col) for col in H.cols)
    lines.extend(" ".join(str(i + 1) for i in row) for row in H.rows)
    return "\n".join(lines) + "\n"


def read_alist_file(path) -> SparseParityMatrix:
    with open(path, "rb") as reader:
        data = reader.read()
    try:
        text = data.decode("ascii")
    except UnicodeDecodeError as e:
        raise AlistFormatError(data.count(b"\n", 0, e.start) + 1, f"non-ASCII byte 0x{data[e.start]:02x}") from e
    return load_alist(text)


def write_alist_file(path, H: SparseParityMatrix):
    with open(path, "w", encoding="ascii", newline="\n") as writer:
        writer.write(save_alist(H))
