"""Two-dimensional (READ) line coding shared by Group 3 2-D and Group 4.

Positions follow the usual changing-element conventions: ``a0 = -1`` is the
imaginary white pixel in front of the line, and a changing element that does
not exist is reported at ``width``.
"""

from __future__ import annotations

from bisect import bisect_right
from dataclasses import dataclass
from typing import Callable, NamedTuple, Sequence, Union

import numpy as np

from ..errors import InvalidCode, Overrun, TruncatedStream
from . import tables
from .bitio import BitReader, BitWriter
from .runlength import read_run, write_run


@dataclass(frozen=True)
class Pass:
    kind = "pass"


@dataclass(frozen=True)
class Vertical:
    offset: int
    kind = "vertical"

    def __post_init__(self):
        if not -3 <= self.offset <= 3:
            raise ValueError(f"vertical offset {self.offset} outside -3..3")


@dataclass(frozen=True)
class Horizontal:
    run1: int
    run2: int
    kind = "horizontal"


CodingMode = Union[Pass, Vertical, Horizontal]
MODE_KINDS = ("pass", "vertical", "horizontal")


class ModeEvent(NamedTuple):
    """One coding decision: ``col`` is a1, or the column below b2 for a pass."""

    row: int
    col: int
    mode: CodingMode

    @property
    def kind(self) -> str:
        return self.mode.kind


EventSink = Callable[[ModeEvent], None]


@dataclass(frozen=True)
class CodingState:
    a0: int
    a0_color: int
    a1: int
    a2: int
    b1: int
    b2: int


def classify_mode(state: CodingState) -> CodingMode:
    if state.b2 < state.a1:
        return Pass()
    if abs(state.a1 - state.b1) <= 3:
        return Vertical(state.a1 - state.b1)
    return Horizontal(state.a1 - max(state.a0, 0), state.a2 - state.a1)


def line_changes(line) -> list[int]:
    line = np.asarray(line)
    changes = (np.flatnonzero(line[1:] != line[:-1]) + 1).tolist()
    if line[0]:
        changes.insert(0, 0)
    return changes


def reference_b1_b2(changes: list[int], a0: int, color: int, width: int) -> tuple[int, int]:
    """b1 and b2 on a reference line given by its changing-element columns.

    Changes alternate in colour starting with a change to black, so the
    colour of ``changes[j]`` is black exactly when ``j`` is even.
    """
    j = bisect_right(changes, a0)
    if j % 2 != color:
        j += 1
    n = len(changes)
    b1 = changes[j] if j < n else width
    b2 = changes[j + 1] if j + 1 < n else width
    return b1, b2


def coding_states(coding_line, reference_line):
    """Yield the sequence of (state, mode) the reference coder walks through for one line."""
    cur = np.asarray(coding_line, dtype=np.uint8)
    ref = np.asarray(reference_line, dtype=np.uint8)
    width = cur.size
    if ref.size != width:
        raise ValueError("coding and reference lines differ in width")
    cur_changes = line_changes(cur)
    ref_changes = line_changes(ref)
    n = len(cur_changes)
    a0, color = -1, 0
    while a0 < width:
        i = bisect_right(cur_changes, a0)
        a1 = cur_changes[i] if i < n else width
        a2 = cur_changes[i + 1] if i + 1 < n else width
        b1, b2 = reference_b1_b2(ref_changes, a0, color, width)
        state = CodingState(a0, color, a1, a2, b1, b2)
        mode = classify_mode(state)
        yield state, mode
        if isinstance(mode, Pass):
            a0 = b2
        elif isinstance(mode, Vertical):
            a0, color = a1, color ^ 1
        else:
            a0 = a2


def event_column(state: CodingState, mode: CodingMode) -> int:
    return state.b2 if isinstance(mode, Pass) else state.a1


_PASS_CODE = (int(tables.PASS, 2), len(tables.PASS))
_HORIZONTAL_CODE = (int(tables.HORIZONTAL, 2), len(tables.HORIZONTAL))
_VERTICAL_CODES = {d: (int(bits, 2), len(bits)) for d, bits in tables.VERTICAL.items()}


def write_mode(writer: BitWriter, mode: CodingMode, color: int) -> None:
    if isinstance(mode, Pass):
        writer.write(*_PASS_CODE)
    elif isinstance(mode, Vertical):
        writer.write(*_VERTICAL_CODES[mode.offset])
    else:
        writer.write(*_HORIZONTAL_CODE)
        write_run(writer, mode.run1, color)
        write_run(writer, mode.run2, color ^ 1)


def g2d_encode_line(coding_line, reference_line, writer: BitWriter | None = None, row: int = 0):
    """Code one line against its reference; returns ``(writer, events)``."""
    writer = writer if writer is not None else BitWriter()
    events = []
    for state, mode in coding_states(coding_line, reference_line):
        write_mode(writer, mode, state.a0_color)
        events.append(ModeEvent(row, event_column(state, mode), mode))
    return writer, events


_MODE_VALUES, _MODE_LENGTHS = (a.tolist() for a in tables.lookup_table(tables.MODE_CODES))


def read_mode(reader: BitReader) -> int:
    start = reader.pos
    key = reader.peek(tables.PEEK_BITS)
    n = _MODE_LENGTHS[key]
    if n == 0:
        if reader.remaining < tables.PEEK_BITS:
            raise TruncatedStream("coded data ended inside a mode code", reader.row, start)
        raise InvalidCode("no two-dimensional mode code matches", reader.row, start)
    value = _MODE_VALUES[key]
    if value == tables.MODE_EXTENSION:
        raise InvalidCode("extension (uncompressed mode) codes are not supported", reader.row, start)
    if value == tables.MODE_EOL:
        raise InvalidCode("EOL inside a two-dimensional line", reader.row, start)
    reader.skip(n)
    return value


def g2d_decode_line(
    reader: BitReader,
    reference_line: Sequence[int],
    width: int,
    tap: EventSink | None = None,
    row: int = 0,
) -> np.ndarray:
    """Decode one 2-D coded line into pixels, reporting each codeword to ``tap``."""
    ref_changes = line_changes(reference_line)
    line = np.zeros(width, dtype=np.uint8)
    a0, color = -1, 0
    while a0 < width:
        start = max(a0, 0)
        b1, b2 = reference_b1_b2(ref_changes, a0, color, width)
        value = read_mode(reader)
        if value == tables.MODE_PASS:
            if b2 >= width:
                raise InvalidCode("pass mode past the end of the line", row, reader.pos)
            line[start:b2] = color
            mode, col, a0 = Pass(), b2, b2
        elif value == tables.MODE_HORIZONTAL:
            run1 = read_run(reader, color)
            run2 = read_run(reader, color ^ 1)
            a1 = start + run1
            a2 = a1 + run2
            if a2 > width:
                raise Overrun(f"horizontal runs end at column {a2} of {width}", row, reader.pos)
            line[start:a1] = color
            line[a1:a2] = color ^ 1
            mode, col, a0 = Horizontal(run1, run2), a1, a2
            if a2 == start and a2 < width:
                raise InvalidCode("empty horizontal mode does not advance", row, reader.pos)
        else:
            a1 = b1 + value
            if a1 > width:
                raise Overrun(f"vertical mode reaches column {a1} of {width}", row, reader.pos)
            if a1 < start or (a1 == start and a0 >= 0):
                raise InvalidCode("vertical mode moves left of a0", row, reader.pos)
            line[start:a1] = color
            mode, col, a0 = Vertical(value), a1, a1
            color ^= 1
        if tap is not None:
            tap(ModeEvent(row, col, mode))
    return line
