"""The embedded 25x16 glyph face and glyph directories."""

from __future__ import annotations

import re
from dataclasses import dataclass
from functools import lru_cache
from importlib import resources
from pathlib import Path

import numpy as np

from .bitmap import Bitmap, read_pbm, write_pbm
from .errors import FormatError, UnknownGlyph

CELL_HEIGHT = 25
CELL_WIDTH = 16

LETTERS_UPPER = "ABCDEFGHIJKLMNOPQRSTUVWXYZ"
LETTERS_LOWER = "abcdefghijklmnopqrstuvwxyz"
DIGITS = "0123456789"
PUNCTUATION = '().,!?"'
SYMBOLS = LETTERS_UPPER + LETTERS_LOWER + DIGITS + PUNCTUATION


@dataclass(frozen=True)
class GlyphFont:
    glyphs: dict[str, np.ndarray]
    cell_height: int = CELL_HEIGHT
    cell_width: int = CELL_WIDTH

    def __post_init__(self):
        for ch, g in self.glyphs.items():
            if g.shape != (self.cell_height, self.cell_width):
                raise ValueError(f"glyph {ch!r} is {g.shape}, expected {(self.cell_height, self.cell_width)}")

    def glyph(self, ch: str) -> np.ndarray:
        try:
            return self.glyphs[ch]
        except KeyError:
            raise UnknownGlyph(f"no glyph for {ch!r}") from None

    @property
    def symbols(self) -> str:
        return "".join(self.glyphs)


def parse_font(text: str) -> GlyphFont:
    lines = text.splitlines()
    if not lines or not lines[0].startswith("FONT "):
        raise FormatError("font file must start with 'FONT <height> <width>'")
    _, h, w = lines[0].split()
    h, w = int(h), int(w)
    glyphs = {}
    i = 1
    while i < len(lines):
        if not lines[i].startswith("GLYPH "):
            raise FormatError(f"expected GLYPH record at line {i + 1}")
        ch = lines[i][len("GLYPH "):]
        rows = lines[i + 1:i + 1 + h]
        if len(ch) != 1 or len(rows) != h or any(len(r) != w for r in rows):
            raise FormatError(f"malformed glyph {ch!r}")
        glyphs[ch] = np.array([[c == "#" for c in r] for r in rows], dtype=np.uint8)
        i += 1 + h
    return GlyphFont(glyphs, h, w)


@lru_cache(maxsize=1)
def default_font() -> GlyphFont:
    text = resources.files("ccitt_ocr").joinpath("data/font_25x16.txt").read_text()
    return parse_font(text)


_GLYPH_NAME = re.compile(r"^(?:U\+)?([0-9A-Fa-f]{4,6})(?:_\d+)?\.pbm$")


def glyph_filename(ch: str, index: int | None = None) -> str:
    suffix = "" if index is None else f"_{index}"
    return f"U+{ord(ch):04X}{suffix}.pbm"


def write_glyph_dir(font: GlyphFont, directory: str | Path) -> None:
    directory = Path(directory)
    directory.mkdir(parents=True, exist_ok=True)
    for ch, g in font.glyphs.items():
        write_pbm(directory / glyph_filename(ch), Bitmap(g))


def read_glyph_dir(directory: str | Path) -> list[tuple[str, Bitmap]]:
    """All ``U+XXXX[_n].pbm`` glyph samples in ``directory``, sorted by file name."""
    directory = Path(directory)
    if not directory.is_dir():
        raise FormatError(f"{directory} is not a directory")
    samples = []
    for path in sorted(directory.iterdir()):
        m = _GLYPH_NAME.match(path.name)
        if m:
            samples.append((chr(int(m.group(1), 16)), read_pbm(path)))
    if not samples:
        raise FormatError(f"no glyph files (U+XXXX.pbm) in {directory}")
    return samples
