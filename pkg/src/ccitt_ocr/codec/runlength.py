"""Run-length representation of a coding line and its Modified Huffman code."""

from __future__ import annotations

from itertools import accumulate
from typing import Sequence

import numpy as np

from ..errors import InvalidCode, Overrun, SumMismatch, TruncatedStream
from . import tables
from .bitio import BitReader, BitWriter

WHITE, BLACK = 0, 1

_CODES = {WHITE: tables.WHITE_CODES, BLACK: tables.BLACK_CODES}
_CODE_INTS = {
    color: {run: (int(bits, 2), len(bits)) for run, bits in codes.items()}
    for color, codes in _CODES.items()
}
_LOOKUP = {
    color: tuple(a.tolist() for a in tables.lookup_table(codes)) for color, codes in _CODES.items()
}


def changing_elements(line) -> np.ndarray:
    """Columns where a pixel differs from its left neighbour (an imaginary white pixel before column 0)."""
    line = np.asarray(line, dtype=np.int8)
    prev = np.concatenate(([0], line[:-1]))
    return np.flatnonzero(line != prev)


def runlength_encode_line(line_pixels: Sequence[int]) -> list[int]:
    """Alternating white/black run lengths; the first (white) run may be zero."""
    line = np.asarray(line_pixels)
    if line.ndim != 1 or line.size < 1:
        raise ValueError("line must be a non-empty 1-D sequence")
    edges = np.concatenate(([0], changing_elements(line), [line.size]))
    return [int(r) for r in np.diff(edges)]


def runlength_decode_line(runs: Sequence[int], width: int) -> np.ndarray:
    if sum(runs) != width:
        raise SumMismatch(f"runs sum to {sum(runs)}, expected width {width}")
    if any(r < 0 for r in runs) or any(r == 0 for r in runs[1:]):
        raise ValueError("only the first run may be zero and none may be negative")
    colors = np.arange(len(runs)) % 2
    return np.repeat(colors, runs).astype(np.uint8)


def write_run(writer: BitWriter, run: int, color: int) -> None:
    """Emit make-up codes as needed followed by one terminating code."""
    codes = _CODE_INTS[color]
    while run > tables.MAX_MAKEUP + 63:
        writer.write(*codes[tables.MAX_MAKEUP])
        run -= tables.MAX_MAKEUP
    if run >= 64:
        writer.write(*codes[run - run % 64])
        run %= 64
    writer.write(*codes[run])


def read_run(reader: BitReader, color: int) -> int:
    values, lengths = _LOOKUP[color]
    total = 0
    while True:
        start = reader.pos
        key = reader.peek(tables.PEEK_BITS)
        n = lengths[key]
        if n == 0:
            if reader.remaining < tables.PEEK_BITS:
                raise TruncatedStream("coded data ended inside a run code", reader.row, start)
            raise InvalidCode(f"no {'black' if color else 'white'} run code matches", reader.row, start)
        reader.skip(n)
        run = values[key]
        total += run
        if run < 64:
            return total


def mh_encode_line(runs: Sequence[int], writer: BitWriter | None = None) -> BitWriter:
    writer = writer if writer is not None else BitWriter()
    for i, run in enumerate(runs):
        write_run(writer, run, i % 2)
    return writer


def mh_decode_line(reader: BitReader, width: int) -> list[int]:
    runs = []
    total, color = 0, WHITE
    while total < width or not runs:
        run = read_run(reader, color)
        total += run
        if total > width:
            raise Overrun(f"runs reach column {total} of a {width}-pixel line", reader.row, reader.pos)
        runs.append(run)
        color ^= 1
    return runs


def runs_to_changes(runs: Sequence[int]) -> list[int]:
    """Changing-element columns of a run-length line."""
    return list(accumulate(runs[:-1]))
