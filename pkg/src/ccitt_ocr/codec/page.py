"""Page framing for the three coding schemes."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ..bitmap import Bitmap
from ..errors import CodecError, InvalidCode, TruncatedStream
from . import tables
from .bitio import REVERSED_BYTES, BitReader, BitWriter
from .runlength import mh_decode_line, mh_encode_line, runlength_encode_line
from .twod import EventSink, g2d_decode_line, g2d_encode_line

G3_1D = "G3_1D"
G3_2D = "G3_2D"
G4 = "G4"
SCHEMES = (G3_1D, G3_2D, G4)

MSB_FIRST = 1
LSB_FIRST = 2

_EOL = int(tables.EOL, 2)


@dataclass(frozen=True)
class CompressedPage:
    """A coded page.

    ``k`` is the 1-D resync interval of G3_2D. ``align_rows`` means each row
    starts on a byte boundary: without EOLs the padding precedes the row, with
    EOLs the fill goes in front of the EOL. ``invert`` marks data coded from
    the complemented raster (TIFF min-is-black), undone on decode.
    """

    data: bytes
    scheme: str
    width: int
    height: int
    k: int = 2
    fill_order: int = MSB_FIRST
    eol_present: bool = False
    align_rows: bool = False
    invert: bool = False

    def __post_init__(self):
        if self.scheme not in SCHEMES:
            raise ValueError(f"unknown scheme {self.scheme!r}")
        if self.width < 1 or self.height < 1:
            raise ValueError("page dimensions must be positive")
        if self.scheme == G3_2D and self.k < 1:
            raise ValueError("G3_2D needs k >= 1")
        if self.fill_order not in (MSB_FIRST, LSB_FIRST):
            raise ValueError(f"fill order must be 1 or 2, got {self.fill_order}")


def encode_page(
    bitmap: Bitmap,
    scheme: str = G4,
    *,
    k: int = 2,
    eol: bool | None = None,
    align_rows: bool = False,
    fill_order: int = MSB_FIRST,
    invert: bool = False,
) -> CompressedPage:
    """Code ``bitmap``; ``eol`` defaults to on for G3 and is ignored for G4."""
    if scheme not in SCHEMES:
        raise ValueError(f"unknown scheme {scheme!r}")
    eol = (scheme != G4) if eol is None else (eol and scheme != G4)
    px = bitmap.pixels ^ 1 if invert else bitmap.pixels
    width = bitmap.width
    writer = BitWriter()
    ref = np.zeros(width, dtype=np.uint8)
    for row in range(bitmap.height):
        line = px[row]
        one_d = scheme == G3_1D or (scheme == G3_2D and row % k == 0)
        if eol:
            if align_rows:
                writer.pad_for_aligned_end(len(tables.EOL))
            writer.write(_EOL, len(tables.EOL))
        elif align_rows and scheme != G4:
            writer.align()
        if scheme == G3_2D:
            writer.write(1 if one_d else 0, 1)
        if one_d:
            mh_encode_line(runlength_encode_line(line), writer)
        else:
            g2d_encode_line(line, ref, writer, row)
        ref = line
    if scheme == G4:
        writer.write(_EOL, 12)
        writer.write(_EOL, 12)
    data = writer.getvalue()
    if fill_order == LSB_FIRST:
        data = data.translate(REVERSED_BYTES)
    return CompressedPage(
        data, scheme, width, bitmap.height, k=k, fill_order=fill_order,
        eol_present=eol, align_rows=align_rows, invert=invert,
    )


def skip_eol(reader: BitReader) -> None:
    """Consume optional fill zeros and one EOL."""
    start = reader.pos
    if reader.peek(12) == _EOL and reader.remaining >= 12:
        reader.pos += 12
        return
    zeros = 0
    while reader.peek(1) == 0:
        if reader.remaining <= 0:
            raise TruncatedStream("stream ended while looking for EOL", reader.row, start)
        reader.skip(1)
        zeros += 1
    if zeros < 11:
        raise InvalidCode("expected EOL", reader.row, start)
    reader.skip(1)


def line_framing(reader: BitReader, page: CompressedPage, row: int) -> bool:
    """Consume the per-row framing; returns True when the row is 1-D coded."""
    if page.eol_present:
        skip_eol(reader)
    elif page.align_rows and page.scheme != G4:
        reader.align()
    if page.scheme == G3_1D:
        return True
    if page.scheme == G3_2D:
        return reader.read(1) == 1
    return False


def decode_page(page: CompressedPage, tap: EventSink | None = None) -> Bitmap:
    """Decode to a raster; every 2-D codeword is reported to ``tap``."""
    reader = BitReader(page.data, lsb_first=page.fill_order == LSB_FIRST)
    width = page.width
    out = np.zeros((page.height, width), dtype=np.uint8)
    ref = np.zeros(width, dtype=np.uint8)
    for row in range(page.height):
        reader.row = row
        try:
            if line_framing(reader, page, row):
                runs = mh_decode_line(reader, width)
                line = np.repeat(np.arange(len(runs)) % 2, runs).astype(np.uint8)
            else:
                line = g2d_decode_line(reader, ref, width, tap, row)
        except CodecError as exc:
            if exc.row is None:
                exc.row = row
            raise
        out[row] = line
        ref = line
    if page.invert:
        out ^= 1
    return Bitmap(out)
