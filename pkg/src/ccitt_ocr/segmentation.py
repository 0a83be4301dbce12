"""Projection-profile segmentation of a feature grid into lines, words and cells."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import NamedTuple

import numpy as np

from .errors import FormatError
from .features import FeatureGrid
from .font import CELL_WIDTH

MIN_LINE_GAP = 8
MIN_WORD_GAP = 20
MIN_MASS = 2


class ProjectionProfile(NamedTuple):
    axis: str  # "horizontal" (one count per row) or "vertical" (one per column)
    counts: np.ndarray


class Band(NamedTuple):
    start: int
    end: int
    kind: str

    @property
    def span(self) -> int:
        return self.end - self.start


def _points(grid: FeatureGrid) -> np.ndarray:
    if not grid.points:
        return np.zeros((0, 2), dtype=np.int64)
    return np.array(grid.sorted_points(), dtype=np.int64)


def horizontal_profile(grid: FeatureGrid) -> ProjectionProfile:
    """Number of feature points in every row."""
    pts = _points(grid)
    return ProjectionProfile("horizontal", np.bincount(pts[:, 0], minlength=grid.height))


def vertical_profile(grid: FeatureGrid, rows: tuple[int, int] | None = None) -> ProjectionProfile:
    """Number of feature points in every column, optionally over ``rows = (start, end)`` only."""
    pts = _points(grid)
    if rows is not None:
        pts = pts[(pts[:, 0] >= rows[0]) & (pts[:, 0] < rows[1])]
    return ProjectionProfile("vertical", np.bincount(pts[:, 1], minlength=grid.width))


def profile_bands(counts, min_gap: int, min_mass: int, kind: str) -> list[Band]:
    """Runs of non-zero counts, bridging zero runs shorter than ``min_gap``."""
    if min_gap < 1:
        raise ValueError("min_gap must be at least 1")
    counts = np.asarray(counts)
    nz = np.flatnonzero(counts)
    if nz.size == 0:
        return []
    breaks = np.flatnonzero(np.diff(nz) - 1 >= min_gap)
    starts = np.concatenate(([nz[0]], nz[breaks + 1]))
    ends = np.concatenate((nz[breaks], [nz[-1]])) + 1
    cum = np.concatenate(([0], np.cumsum(counts)))
    return [
        Band(int(s), int(e), kind)
        for s, e in zip(starts, ends)
        if cum[e] - cum[s] >= min_mass
    ]


def segment_lines(grid: FeatureGrid, min_gap: int = MIN_LINE_GAP, min_mass: int = MIN_MASS) -> list[Band]:
    return profile_bands(horizontal_profile(grid).counts, min_gap, min_mass, "line")


def segment_words(grid: FeatureGrid, line: Band, min_gap: int = MIN_WORD_GAP) -> list[Band]:
    counts = vertical_profile(grid, (line.start, line.end)).counts
    return profile_bands(counts, min_gap, 1, "word")


def segment_chars(grid: FeatureGrid, word: Band, cell_width: int = CELL_WIDTH) -> list[Band]:
    if cell_width < 1:
        raise ValueError("cell_width must be at least 1")
    return [
        Band(s, min(s + cell_width, word.end), "char")
        for s in range(word.start, word.end, cell_width)
    ]


@dataclass
class WordSegment:
    band: Band
    chars: list[Band] = field(default_factory=list)


@dataclass
class LineSegment:
    band: Band
    words: list[WordSegment] = field(default_factory=list)

    @property
    def n_chars(self) -> int:
        return sum(len(w.chars) for w in self.words)


def segment_page(
    grid: FeatureGrid,
    min_line_gap: int = MIN_LINE_GAP,
    min_word_gap: int = MIN_WORD_GAP,
    min_mass: int = MIN_MASS,
    cell_width: int = CELL_WIDTH,
) -> list[LineSegment]:
    out = []
    for line in segment_lines(grid, min_line_gap, min_mass):
        words = [
            WordSegment(word, segment_chars(grid, word, cell_width))
            for word in segment_words(grid, line, min_word_gap)
        ]
        out.append(LineSegment(line, words))
    return out


def format_segmentation(lines: list[LineSegment]) -> str:
    out = []
    for line in lines:
        r0, r1 = line.band.start, line.band.end
        out.append(f"LINE {r0} {r1}")
        for word in line.words:
            out.append(f"WORD {r0} {r1} {word.band.start} {word.band.end}")
            out += [f"CHAR {r0} {r1} {c.start} {c.end}" for c in word.chars]
    return "".join(s + "\n" for s in out)


def parse_segmentation(text: str) -> list[LineSegment]:
    lines: list[LineSegment] = []
    for n, raw in enumerate(text.splitlines(), 1):
        parts = raw.split()
        if not parts or parts[0] not in ("LINE", "WORD", "CHAR"):
            continue  # other records (e.g. TEXT in truth files) are not ours
        try:
            nums = [int(v) for v in parts[1:]]
        except ValueError:
            raise FormatError(f"line {n}: non-integer coordinates") from None
        kind = parts[0]
        if kind == "LINE" and len(nums) == 2:
            lines.append(LineSegment(Band(nums[0], nums[1], "line")))
        elif kind in ("WORD", "CHAR") and len(nums) == 4:
            if not lines or (nums[0], nums[1]) != (lines[-1].band.start, lines[-1].band.end):
                raise FormatError(f"line {n}: {kind} outside its LINE record")
            if kind == "WORD":
                lines[-1].words.append(WordSegment(Band(nums[2], nums[3], "word")))
            elif not lines[-1].words:
                raise FormatError(f"line {n}: CHAR before any WORD")
            else:
                lines[-1].words[-1].chars.append(Band(nums[2], nums[3], "char"))
        else:
            raise FormatError(f"line {n}: malformed {kind} record")
    return lines
