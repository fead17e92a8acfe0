import pytest

from swcoding.codes.alist import load_alist, read_alist_file, save_alist, write_alist_file
from swcoding.codes.ldpc_code import gallager_construct, identity_code
from swcoding.errors import AlistFormatError

SMALL_ALIST = "3 2\n2 2\n1 2 1\n2 2\n1\n1 2\n2\n1 2\n2 3\n"


def test_small_code_canonical_text(small_code):
    text = save_alist(small_code)
    assert text == SMALL_ALIST
    lines = text.splitlines()
    assert lines[0] == "3 2"
    assert lines[1] == "2 2"


def test_round_trip_is_byte_identical(regular_code):
    text = save_alist(regular_code)
    assert load_alist(text) == regular_code
    assert save_alist(load_alist(text)) == text


def test_identity_code_round_trip():
    H = identity_code(5)
    assert load_alist(save_alist(H)) == H


def test_zero_padding_and_spacing_are_canonicalised(small_code):
    padded = "3  2\n2 2\n1 2 1\n2 2\n1 0\n1 2\n2 0\n1   2\n2 3\n\n\n"
    H = load_alist(padded)
    assert H == small_code
    assert save_alist(H) == SMALL_ALIST


def test_column_weight_mismatch_names_the_column():
    text = "3 2\n2 2\n1 2 1\n2 2\n1\n1\n2\n1 2\n2 3\n"
    with pytest.raises(AlistFormatError) as excinfo:
        load_alist(text)
    assert excinfo.value.line == 6
    assert "column 2" in str(excinfo.value)
    assert "weight 2" in str(excinfo.value)


@pytest.mark.parametrize("text,line", [
    ("", 1),
    ("3\n", 1),
    ("3 x\n", 1),
    ("3 2\n2 2\n1 2\n", 3),
    ("3 2\n3 2\n1 2 1\n2 2\n1\n1 2\n2\n1 2\n2 3\n", 3),
    ("3 2\n2 2\n1 2 1\n2 2\n1\n1 3\n2\n1 2\n2 3\n", 6),
    ("3 2\n2 2\n1 2 1\n2 2\n1\n1 2\n2\n1 3\n2 3\n", 8),
    ("3 2\n2 2\n1 2 1\n2 2\n1\n1 2\n2\n1 2\n", 9),
    ("3 2\n2 2\n1 2 1\n2 2\n1\n1 2\n2\n1 2\n2 3\n1\n", 10),
])
def test_malformed_alist_reports_line(text, line):
    with pytest.raises(AlistFormatError) as excinfo:
        load_alist(text)
    assert excinfo.value.line == line
    assert str(excinfo.value).startswith(f"line {line}: ")


def test_file_round_trip(tmp_path):
    H = gallager_construct(48, 3, 6, seed=3)
    path = tmp_path / "code.alist"
    write_alist_file(path, H)
    assert read_alist_file(path) == H
    assert path.read_bytes() == save_alist(H).encode("ascii")
