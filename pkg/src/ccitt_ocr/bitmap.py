"""Binary rasters and PBM (P4) input/output."""

from __future__ import annotations

import re
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .errors import FormatError


@dataclass(frozen=True, eq=False)
class Bitmap:
    """A binary page or glyph, row-major, 0 = white and 1 = black."""

    pixels: np.ndarray

    def __post_init__(self):
        px = np.asarray(self.pixels)
        if px.ndim != 2 or px.shape[0] < 1 or px.shape[1] < 1:
            raise ValueError(f"bitmap must be a non-empty 2-D array, got shape {px.shape}")
        if px.dtype != np.uint8:
            if not np.isin(px, (0, 1)).all():
                raise ValueError("bitmap pixels must be 0 or 1")
            px = px.astype(np.uint8)
        elif px.max(initial=0) > 1:
            raise ValueError("bitmap pixels must be 0 or 1")
        px = np.ascontiguousarray(px)
        px.setflags(write=False)
        object.__setattr__(self, "pixels", px)

    @property
    def width(self) -> int:
        return self.pixels.shape[1]

    @property
    def height(self) -> int:
        return self.pixels.shape[0]

    @classmethod
    def blank(cls, width: int, height: int) -> Bitmap:
        return cls(np.zeros((height, width), dtype=np.uint8))

    @classmethod
    def from_rows(cls, rows: list[str], black: str = "#") -> Bitmap:
        """Build a bitmap from strings such as ``["#..#", ".##."]``."""
        return cls(np.array([[ch == black for ch in row] for row in rows], dtype=np.uint8))

    def to_rows(self, black: str = "#", white: str = ".") -> list[str]:
        return ["".join(black if v else white for v in row) for row in self.pixels]

    def rotate180(self) -> Bitmap:
        return Bitmap(self.pixels[::-1, ::-1])

    def invert(self) -> Bitmap:
        return Bitmap(1 - self.pixels)

    def __eq__(self, other):
        if not isinstance(other, Bitmap):
            return NotImplemented
        return self.pixels.shape == other.pixels.shape and bool(np.array_equal(self.pixels, other.pixels))

    def __hash__(self):
        return hash((self.pixels.shape, self.pixels.tobytes()))

    def __repr__(self):
        return f"Bitmap({self.width}x{self.height}, black={int(self.pixels.sum())})"


_PBM_HEADER = re.compile(rb"\AP4(?:\s|#[^\n]*\n)+(\d+)(?:\s|#[^\n]*\n)+(\d+)\s")


def pbm_bytes(bitmap: Bitmap) -> bytes:
    packed = np.packbits(bitmap.pixels, axis=1)
    return b"P4\n%d %d\n" % (bitmap.width, bitmap.height) + packed.tobytes()


def parse_pbm(data: bytes) -> Bitmap:
    m = _PBM_HEADER.match(data)
    if not m:
        raise FormatError("not a binary PBM (P4) file")
    width, height = int(m.group(1)), int(m.group(2))
    if width < 1 or height < 1:
        raise FormatError(f"bad PBM dimensions {width}x{height}")
    row_bytes = (width + 7) // 8
    body = data[m.end():m.end() + row_bytes * height]
    if len(body) != row_bytes * height:
        raise FormatError("PBM raster is truncated")
    packed = np.frombuffer(body, dtype=np.uint8).reshape(height, row_bytes)
    return Bitmap(np.unpackbits(packed, axis=1)[:, :width])


def write_pbm(path: str | Path, bitmap: Bitmap) -> None:
    Path(path).write_bytes(pbm_bytes(bitmap))


def read_pbm(path: str | Path) -> Bitmap:
    return parse_pbm(Path(path).read_bytes())
