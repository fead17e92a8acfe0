import numpy as np

from swcoding.errors import BitsFormatError


def load_bits(text, path=None):
    """One block per line, ASCII '0'/'1' characters."""
    lines = text.splitlines()
    while lines and not lines[-1].strip():
        lines.pop()
    blocks = []
    for line_no, line in enumerate(lines, start=1):
        line = line.strip()
        if not line:
            raise BitsFormatError(line_no, "empty block", path)
        if set(line) - {"0", "1"}:
            raise BitsFormatError(line_no, "blocks may contain only '0' and '1'", path)
        blocks.append(np.frombuffer(line.encode("ascii"), dtype=np.uint8) - ord("0"))
    return blocks


def dump_bits(blocks):
    return "".join("".join("1" if bit else "0" for bit in block) + "\n" for block in blocks)


def read_bits_file(path):
    with open(path, "rb") as reader:
        data = reader.read()
    try:
        text = data.decode("ascii")
    except UnicodeDecodeError as e:
        raise BitsFormatError(data.count(b"\n", 0, e.start) + 1, f"non-ASCII byte 0x{data[e.start]:02x}", path) from e
    return load_bits(text, path=path)


def write_bits_file(path, blocks):
    with open(path, "w", encoding="ascii", newline="\n") as writer:
        writer.write(dump_bits(blocks))


def check_block_lengths(blocks, length, path=None):
    for line_no, block in enumerate(blocks, start=1):
        if len(block) != length:
            raise BitsFormatError(line_no, f"block has {len(block)} bits, expected {length}", path)
