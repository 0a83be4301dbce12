"""Coding-mode feature points read straight from the coded bitstream.

Lines are tracked as lists of changing-element columns (the first change is
always to black), never as pixels: the forward pass keeps only the reference
and the current list. The reverse direction and min-is-black pages are
handled by transforming those lists and re-running the mode coder on them.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable

import numpy as np

from .bitmap import Bitmap
from .codec import G3_1D, LSB_FIRST, CompressedPage, ModeEvent, Pass, Vertical, Horizontal
from .codec.bitio import BitReader
from .codec.page import G4, encode_page, line_framing
from .codec.runlength import mh_decode_line, read_run
from .codec.twod import MODE_KINDS, coding_states, event_column, read_mode
from .codec import tables
from .errors import FormatError, InvalidCode, No2DModes, Overrun

ALL_MODES = frozenset(MODE_KINDS)


def _parse_filter(mode_filter) -> frozenset[str]:
    if mode_filter is None:
        return ALL_MODES
    if isinstance(mode_filter, str):
        mode_filter = ALL_MODES if mode_filter == "all" else {mode_filter}
    modes = frozenset(mode_filter)
    unknown = modes - ALL_MODES
    if unknown:
        raise ValueError(f"unknown modes {sorted(unknown)}")
    return modes


class _RefScan:
    """Monotone cursor over a reference change list (b1/b2 only move right within a line)."""

    __slots__ = ("changes", "width", "i")

    def __init__(self, changes: list[int], width: int):
        self.changes = changes
        self.width = width
        self.i = 0

    def b1_b2(self, a0: int, color: int) -> tuple[int, int]:
        ch, n = self.changes, len(self.changes)
        # the cursor may sit one step right of the answer after a vertical-left
        while self.i > 0 and ch[self.i - 1] > a0:
            self.i -= 1
        i = self.i
        while i < n and ch[i] <= a0:
            i += 1
        # changes[i] has colour black when i is even
        if (i & 1) != color:
            i += 1
        self.i = min(i, n)
        b1 = ch[i] if i < n else self.width
        b2 = ch[i + 1] if i + 1 < n else self.width
        return b1, b2


def _push(changes: list[int], pos: int, width: int) -> None:
    if pos >= width:
        return
    if changes and changes[-1] == pos:
        changes.pop()  # zero-length run
    else:
        changes.append(pos)


def _decode_2d_changes(reader: BitReader, ref: list[int], width: int, row: int, emit) -> list[int]:
    cur: list[int] = []
    scan = _RefScan(ref, width)
    a0, color = -1, 0
    while a0 < width:
        start = a0 if a0 > 0 else 0
        b1, b2 = scan.b1_b2(a0, color)
        value = read_mode(reader)
        if value == tables.MODE_PASS:
            if b2 >= width:
                raise InvalidCode("pass mode past the end of the line", row, reader.pos)
            emit(row, b2, Pass())
            a0 = b2
        elif value == tables.MODE_HORIZONTAL:
            run1 = read_run(reader, color)
            run2 = read_run(reader, color ^ 1)
            a1 = start + run1
            a2 = a1 + run2
            if a2 > width:
                raise Overrun(f"horizontal runs end at column {a2} of {width}", row, reader.pos)
            if a2 == start and a2 < width:
                raise InvalidCode("empty horizontal mode does not advance", row, reader.pos)
            _push(cur, a1, width)
            _push(cur, a2, width)
            emit(row, a1, Horizontal(run1, run2))
            a0 = a2
        else:
            a1 = b1 + value
            if a1 > width:
                raise Overrun(f"vertical mode reaches column {a1} of {width}", row, reader.pos)
            if a1 < start or (a1 == start and a0 >= 0):
                raise InvalidCode("vertical mode moves left of a0", row, reader.pos)
            _push(cur, a1, width)
            emit(row, a1, Vertical(value))
            a0 = a1
            color ^= 1
    return cur


def _runs_changes(runs: list[int], width: int) -> list[int]:
    cur: list[int] = []
    pos = 0
    for run in runs[:-1]:
        pos += run
        _push(cur, pos, width)
    return cur


def iter_line_changes(page: CompressedPage, emit=None, stats: dict | None = None):
    """Yield the change list of every row; 2-D codewords go to ``emit(row, col, mode)``."""
    reader = BitReader(page.data, lsb_first=page.fill_order == LSB_FIRST)
    width = page.width
    ref: list[int] = []
    emit = emit or (lambda row, col, mode: None)
    peak = 0
    for row in range(page.height):
        reader.row = row
        if line_framing(reader, page, row):
            cur = _runs_changes(mh_decode_line(reader, width), width)
        else:
            cur = _decode_2d_changes(reader, ref, width, row, emit)
        peak = max(peak, len(cur) + len(ref))
        if stats is not None:
            stats["peak_changes"] = peak
            stats["line_buffers"] = 2
        yield cur
        ref = cur


def code_change_lines(lines: Iterable[list[int]], width: int, modes=ALL_MODES) -> list[ModeEvent]:
    """Run the 2-D mode coder over change lists; returns in-bounds events of the selected modes."""
    events = []
    ref: list[int] = []
    for row, cur in enumerate(lines):
        scan = _RefScan(ref, width)
        n = len(cur)
        i = 0
        a0, color = -1, 0
        while a0 < width:
            while i < n and cur[i] <= a0:
                i += 1
            a1 = cur[i] if i < n else width
            a2 = cur[i + 1] if i + 1 < n else width
            b1, b2 = scan.b1_b2(a0, color)
            if b2 < a1:
                mode, col = Pass(), b2
                a0 = b2
            elif abs(a1 - b1) <= 3:
                mode, col = Vertical(a1 - b1), a1
                a0, color = a1, color ^ 1
            else:
                mode, col = Horizontal(a1 - max(a0, 0), a2 - a1), a1
                a0 = a2
            if col < width and mode.kind in modes:
                events.append(ModeEvent(row, col, mode))
        ref = cur
    return events


def invert_changes(changes: list[int]) -> list[int]:
    return changes[1:] if changes and changes[0] == 0 else [0] + changes


def reverse_changes(changes: list[int], width: int) -> list[int]:
    """Change list of the mirrored line."""
    bounds = list(changes)
    if len(bounds) % 2:
        bounds.append(width)  # line ends black
    return sorted(width - p for p in bounds if p != 0)


def extract_events(page: CompressedPage, mode_filter=None, stats: dict | None = None) -> list[ModeEvent]:
    """Mode events of ``page`` in stream order, without decoding to a raster.

    Events at the end-of-line sentinel are dropped. For min-is-black pages
    the events are those of the normalised (0 = white) image.
    """
    if page.scheme == G3_1D:
        raise No2DModes("one-dimensional pages carry no two-dimensional coding modes")
    modes = _parse_filter(mode_filter)
    width = page.width
    if page.invert:
        lines = [invert_changes(c) for c in iter_line_changes(page, stats=stats)]
        return code_change_lines(lines, width, modes)
    events: list[ModeEvent] = []

    def emit(row, col, mode):
        if col < width and mode.kind in modes:
            events.append(ModeEvent(row, col, mode))

    for _ in iter_line_changes(page, emit, stats):
        pass
    return events


def page_change_lines(page: CompressedPage) -> list[list[int]]:
    lines = list(iter_line_changes(page))
    return [invert_changes(c) for c in lines] if page.invert else lines


@dataclass(frozen=True)
class FeatureGrid:
    width: int
    height: int
    points: frozenset

    def __post_init__(self):
        pts = frozenset((int(r), int(c)) for r, c in self.points)
        for r, c in pts:
            if not (0 <= r < self.height and 0 <= c < self.width):
                raise ValueError(f"point {(r, c)} outside {self.width}x{self.height} grid")
        object.__setattr__(self, "points", pts)

    @classmethod
    def from_events(cls, width: int, height: int, events: Iterable[ModeEvent]) -> FeatureGrid:
        return cls(width, height, frozenset((e.row, e.col) for e in events))

    def union(self, other: FeatureGrid) -> FeatureGrid:
        if (self.width, self.height) != (other.width, other.height):
            raise ValueError("cannot overlay grids of different sizes")
        return FeatureGrid(self.width, self.height, self.points | other.points)

    def sorted_points(self) -> list[tuple[int, int]]:
        return sorted(self.points)

    def to_array(self) -> np.ndarray:
        arr = np.zeros((self.height, self.width), dtype=np.uint8)
        if self.points:
            rc = np.array(self.sorted_points())
            arr[rc[:, 0], rc[:, 1]] = 1
        return arr

    def crop_rows(self, start: int, end: int) -> FeatureGrid:
        return FeatureGrid(self.width, end - start,
                           frozenset((r - start, c) for r, c in self.points if start <= r < end))

    def __len__(self):
        return len(self.points)


def _map_back(events: list[ModeEvent], width: int, height: int) -> set[tuple[int, int]]:
    return {(height - 1 - e.row, width - 1 - e.col) for e in events}


def extract_bidirectional(page: CompressedPage, mode_filter=None) -> FeatureGrid:
    """Overlay of top-down/left-to-right events and bottom-up/right-to-left events.

    The reverse pass codes the 180-degree rotated image, obtained by reversing
    the stored change lists, and maps its event coordinates back.
    """
    if page.scheme == G3_1D:
        raise No2DModes("one-dimensional pages carry no two-dimensional coding modes")
    modes = _parse_filter(mode_filter)
    lines = page_change_lines(page)
    width, height = page.width, page.height
    forward = extract_events(page, modes) if not page.invert else code_change_lines(lines, width, modes)
    rotated = [reverse_changes(c, width) for c in reversed(lines)]
    backward = code_change_lines(rotated, width, modes)
    points = {(e.row, e.col) for e in forward} | _map_back(backward, width, height)
    return FeatureGrid(width, height, frozenset(points))


def extract_strips(strips: list[CompressedPage], mode_filter=None, bidirectional: bool = True) -> FeatureGrid:
    """Feature grid of a page stored as several strips (each coded independently)."""
    if not strips:
        raise ValueError("no strips")
    if any(s.scheme == G3_1D for s in strips):
        raise No2DModes("one-dimensional pages carry no two-dimensional coding modes")
    modes = _parse_filter(mode_filter)
    width = strips[0].width
    height = sum(s.height for s in strips)
    points: set[tuple[int, int]] = set()
    lines: list[list[int]] = []
    top = 0
    for strip in strips:
        points |= {(e.row + top, e.col) for e in extract_events(strip, modes)}
        if bidirectional:
            lines.extend(page_change_lines(strip))
        top += strip.height
    if bidirectional:
        rotated = [reverse_changes(c, width) for c in reversed(lines)]
        points |= _map_back(code_change_lines(rotated, width, modes), width, height)
    return FeatureGrid(width, height, frozenset(points))


def raster_events(bitmap: Bitmap, mode_filter=None) -> list[ModeEvent]:
    """Events chosen by the pixel-domain reference coder (G4 framing, white first reference)."""
    modes = _parse_filter(mode_filter)
    events = []
    ref = np.zeros(bitmap.width, dtype=np.uint8)
    for row, line in enumerate(bitmap.pixels):
        for state, mode in coding_states(line, ref):
            col = event_column(state, mode)
            if mode.kind in modes and col < bitmap.width:
                events.append(ModeEvent(row, col, mode))
        ref = line
    return events


def raster_feature_grid(bitmap: Bitmap, mode_filter=None, bidirectional: bool = True) -> FeatureGrid:
    """Feature grid computed from the raster; the decompress-and-recode route."""
    pts = {(e.row, e.col) for e in raster_events(bitmap, mode_filter)}
    if bidirectional:
        pts |= _map_back(raster_events(bitmap.rotate180(), mode_filter), bitmap.width, bitmap.height)
    return FeatureGrid(bitmap.width, bitmap.height, frozenset(pts))


def compress_and_extract(bitmap: Bitmap, mode_filter=None, bidirectional: bool = True) -> FeatureGrid:
    page = encode_page(bitmap, G4)
    if bidirectional:
        return extract_bidirectional(page, mode_filter)
    return FeatureGrid.from_events(page.width, page.height, extract_events(page, mode_filter))


def grid_to_bitmap(grid: FeatureGrid) -> Bitmap:
    return Bitmap(grid.to_array())


def bitmap_to_grid(bitmap: Bitmap) -> FeatureGrid:
    rows, cols = np.nonzero(bitmap.pixels)
    return FeatureGrid(bitmap.width, bitmap.height, frozenset(zip(rows.tolist(), cols.tolist())))


def format_fgrid(grid: FeatureGrid) -> str:
    lines = [f"FGRID {grid.width} {grid.height}"]
    lines += [f"{r} {c}" for r, c in grid.sorted_points()]
    return "\n".join(lines) + "\n"


def parse_fgrid(text: str) -> FeatureGrid:
    lines = [ln for ln in text.splitlines() if ln.strip()]
    if not lines:
        raise FormatError("empty feature grid dump")
    head = lines[0].split()
    if len(head) != 3 or head[0] != "FGRID":
        raise FormatError("feature grid dump must start with 'FGRID <width> <height>'")
    try:
        width, height = int(head[1]), int(head[2])
        points = [tuple(int(v) for v in ln.split()) for ln in lines[1:]]
    except ValueError as exc:
        raise FormatError(f"bad feature grid dump: {exc}") from None
    if any(len(p) != 2 for p in points):
        raise FormatError("each feature point line must hold 'row col'")
    try:
        return FeatureGrid(width, height, frozenset(points))
    except ValueError as exc:
        raise FormatError(str(exc)) from None
