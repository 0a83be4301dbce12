"""Baseline bilevel TIFF: locate CCITT strips and write fixture files."""

from __future__ import annotations

import struct
from dataclasses import dataclass, field

import numpy as np

from .bitmap import Bitmap
from .codec import G3_1D, G3_2D, G4, MSB_FIRST, CompressedPage, decode_page, encode_page
from .errors import BadMagic, PageOutOfRange, TiffError, TruncatedIfd, UnsupportedCompression

IMAGE_WIDTH = 256
IMAGE_LENGTH = 257
BITS_PER_SAMPLE = 258
COMPRESSION = 259
PHOTOMETRIC = 262
FILL_ORDER = 266
STRIP_OFFSETS = 273
SAMPLES_PER_PIXEL = 277
ROWS_PER_STRIP = 278
STRIP_BYTE_COUNTS = 279
T4_OPTIONS = 292
T6_OPTIONS = 293

COMPRESSION_MH = 2
COMPRESSION_T4 = 3
COMPRESSION_T6 = 4

T4_2D = 1
T4_UNCOMPRESSED = 2
T4_FILL = 4
T6_UNCOMPRESSED = 2

MIN_IS_WHITE = 0
MIN_IS_BLACK = 1

# type id -> (struct code, size)
_TYPES = {1: ("B", 1), 2: ("B", 1), 3: ("H", 2), 4: ("I", 4), 6: ("b", 1), 7: ("B", 1),
          8: ("h", 2), 9: ("i", 4), 16: ("Q", 8)}
_MAX_PAGES = 4096


@dataclass
class PageDirectory:
    width: int
    height: int
    compression: int
    strip_offsets: list[int]
    strip_byte_counts: list[int]
    rows_per_strip: int
    t4_options: int = 0
    t6_options: int = 0
    fill_order: int = 1
    photometric: int = MIN_IS_WHITE
    bits_per_sample: int = 1
    samples_per_pixel: int = 1


@dataclass
class TiffDocument:
    byte_order: str  # "<" or ">"
    pages: list[PageDirectory] = field(default_factory=list)
    data: bytes = b""


def _read_ifd(buf: bytes, offset: int, bo: str) -> tuple[dict[int, list[int]], int]:
    if offset + 2 > len(buf):
        raise TruncatedIfd(f"IFD at {offset} lies outside the file")
    (count,) = struct.unpack_from(bo + "H", buf, offset)
    end = offset + 2 + 12 * count
    if end + 4 > len(buf):
        raise TruncatedIfd(f"IFD at {offset} with {count} entries is truncated")
    tags = {}
    for i in range(count):
        tag, typ, n, raw = struct.unpack_from(bo + "HHI4s", buf, offset + 2 + 12 * i)
        if typ not in _TYPES:
            continue  # unknown type: skip per TIFF 6.0
        code, size = _TYPES[typ]
        nbytes = size * n
        if nbytes <= 4:
            src, pos = raw, 0
        else:
            (pos,) = struct.unpack(bo + "I", raw)
            if pos + nbytes > len(buf):
                raise TruncatedIfd(f"tag {tag} values at {pos} run past the end of the file")
            src = buf
        tags[tag] = list(struct.unpack_from(f"{bo}{n}{code}", src, pos))
    (next_offset,) = struct.unpack_from(bo + "I", buf, end)
    return tags, next_offset


def _one(tags, tag, default=None):
    values = tags.get(tag)
    if not values:
        if default is None:
            raise TiffError(f"required tag {tag} is missing")
        return default
    return values[0]


def _directory(tags, buf_len: int) -> PageDirectory:
    compression = _one(tags, COMPRESSION, 1)
    if compression not in (COMPRESSION_MH, COMPRESSION_T4, COMPRESSION_T6):
        raise UnsupportedCompression(f"compression {compression} is not CCITT 2, 3 or 4")
    bps = _one(tags, BITS_PER_SAMPLE, 1)
    spp = _one(tags, SAMPLES_PER_PIXEL, 1)
    if bps != 1 or spp != 1:
        raise UnsupportedCompression(f"only bilevel images are supported (bits {bps}, samples {spp})")
    width = _one(tags, IMAGE_WIDTH)
    height = _one(tags, IMAGE_LENGTH)
    if width < 1 or height < 1:
        raise TiffError(f"bad image size {width}x{height}")
    offsets = tags.get(STRIP_OFFSETS)
    counts = tags.get(STRIP_BYTE_COUNTS)
    if not offsets or not counts or len(offsets) != len(counts):
        raise TiffError("strip offsets and byte counts are missing or differ in length")
    for off, n in zip(offsets, counts):
        if off + n > buf_len:
            raise TruncatedIfd(f"strip at {off}+{n} runs past the end of the file")
    rows = min(_one(tags, ROWS_PER_STRIP, height), height) or height
    if -(-height // rows) != len(offsets):
        raise TiffError(f"{len(offsets)} strips do not cover {height} rows at {rows} rows per strip")
    return PageDirectory(
        width=width, height=height, compression=compression,
        strip_offsets=offsets, strip_byte_counts=counts, rows_per_strip=rows,
        t4_options=_one(tags, T4_OPTIONS, 0),
        t6_options=_one(tags, T6_OPTIONS, 0),
        fill_order=_one(tags, FILL_ORDER, 1),
        photometric=_one(tags, PHOTOMETRIC, MIN_IS_WHITE),
        bits_per_sample=bps, samples_per_pixel=spp,
    )


def parse_tiff(data: bytes) -> TiffDocument:
    if len(data) < 8:
        raise BadMagic("file is too short to be a TIFF")
    if data[:2] == b"II":
        bo = "<"
    elif data[:2] == b"MM":
        bo = ">"
    else:
        raise BadMagic("missing II/MM byte-order mark")
    magic, offset = struct.unpack_from(bo + "HI", data, 2)
    if magic != 42:
        raise BadMagic(f"magic number is {magic}, not 42")
    doc = TiffDocument(bo, data=bytes(data))
    seen = set()
    while offset:
        if offset in seen or len(seen) >= _MAX_PAGES:
            raise TiffError("IFD chain loops")
        seen.add(offset)
        tags, offset = _read_ifd(data, offset, bo)
        if FILL_ORDER in tags and _one(tags, FILL_ORDER) not in (1, 2):
            raise TiffError(f"bad fill order {tags[FILL_ORDER][0]}")
        doc.pages.append(_directory(tags, len(data)))
    if not doc.pages:
        raise TruncatedIfd("file has no image directory")
    return doc


def page_scheme(page: PageDirectory) -> str:
    if page.compression == COMPRESSION_MH:
        return G3_1D
    if page.compression == COMPRESSION_T4:
        if page.t4_options & T4_UNCOMPRESSED:
            raise UnsupportedCompression("T.4 uncompressed mode is not supported")
        return G3_2D if page.t4_options & T4_2D else G3_1D
    if page.t6_options & T6_UNCOMPRESSED:
        raise UnsupportedCompression("T.6 uncompressed mode is not supported")
    return G4


def page_to_compressed(doc: TiffDocument, page_index: int = 0) -> list[CompressedPage]:
    """One :class:`CompressedPage` per strip, each coded against a white first reference."""
    if not 0 <= page_index < len(doc.pages):
        raise PageOutOfRange(f"page {page_index} of {len(doc.pages)}")
    page = doc.pages[page_index]
    scheme = page_scheme(page)
    out = []
    for i, (off, n) in enumerate(zip(page.strip_offsets, page.strip_byte_counts)):
        rows = min(page.rows_per_strip, page.height - i * page.rows_per_strip)
        out.append(CompressedPage(
            data=doc.data[off:off + n],
            scheme=scheme,
            width=page.width,
            height=rows,
            # G3_2D resync interval is implied by the per-row tag bits
            k=1,
            fill_order=page.fill_order,
            eol_present=page.compression == COMPRESSION_T4,
            align_rows=page.compression == COMPRESSION_MH or bool(page.t4_options & T4_FILL),
            invert=page.photometric == MIN_IS_BLACK,
        ))
    return out


def decode_tiff_page(doc: TiffDocument, page_index: int = 0) -> Bitmap:
    strips = [decode_page(p).pixels for p in page_to_compressed(doc, page_index)]
    return Bitmap(np.vstack(strips))


def _entry(bo: str, tag: int, typ: int, values: list[int], extra: bytearray, extra_base: int) -> bytes:
    code, size = _TYPES[typ]
    payload = struct.pack(f"{bo}{len(values)}{code}", *values)
    if len(payload) <= 4:
        return struct.pack(bo + "HHI", tag, typ, len(values)) + payload.ljust(4, b"\0")
    offset = extra_base + len(extra)
    extra += payload
    if len(extra) % 2:
        extra += b"\0"
    return struct.pack(bo + "HHII", tag, typ, len(values), offset)


def write_tiff(
    bitmap_pages: list[tuple[Bitmap, str]],
    *,
    photometric: int = MIN_IS_WHITE,
    k: int = 2,
    rows_per_strip: int | None = None,
    byte_order: str = "<",
    g3_1d_eol: bool = False,
) -> bytes:
    """Serialise pages as a baseline bilevel TIFF.

    Strip data comes first, then one IFD per page, so truncating the file
    anywhere breaks either the directory chain or a strip range.
    """
    if not bitmap_pages:
        raise ValueError("write_tiff needs at least one page")
    bo = byte_order
    out = bytearray(b"II*\0" if bo == "<" else b"MM\0*")
    out += b"\0\0\0\0"
    layouts = []
    for bitmap, scheme in bitmap_pages:
        rows = min(rows_per_strip or bitmap.height, bitmap.height)
        offsets, counts = [], []
        for top in range(0, bitmap.height, rows):
            strip = Bitmap(bitmap.pixels[top:top + rows])
            invert = photometric == MIN_IS_BLACK
            if scheme == G3_1D and not g3_1d_eol:
                # Compression=2: byte-aligned rows, no EOLs
                coded = encode_page(strip, scheme, eol=False, align_rows=True, invert=invert)
            else:
                coded = encode_page(strip, scheme, k=k, invert=invert)
            offsets.append(len(out))
            counts.append(len(coded.data))
            out += coded.data
            if len(out) % 2:
                out += b"\0"
        layouts.append((bitmap, scheme, rows, offsets, counts))

    ifd_offsets = []
    for bitmap, scheme, rows, offsets, counts in layouts:
        compression = {G3_1D: COMPRESSION_MH, G3_2D: COMPRESSION_T4, G4: COMPRESSION_T6}[scheme]
        if scheme == G3_1D and g3_1d_eol:
            compression = COMPRESSION_T4
        entries = [
            (IMAGE_WIDTH, 4, [bitmap.width]),
            (IMAGE_LENGTH, 4, [bitmap.height]),
            (BITS_PER_SAMPLE, 3, [1]),
            (COMPRESSION, 3, [compression]),
            (PHOTOMETRIC, 3, [photometric]),
            (FILL_ORDER, 3, [MSB_FIRST]),
            (STRIP_OFFSETS, 4, offsets),
            (SAMPLES_PER_PIXEL, 3, [1]),
            (ROWS_PER_STRIP, 4, [rows]),
            (STRIP_BYTE_COUNTS, 4, counts),
        ]
        if compression == COMPRESSION_T4:
            entries.append((T4_OPTIONS, 4, [T4_2D if scheme == G3_2D else 0]))
        elif scheme == G4:
            entries.append((T6_OPTIONS, 4, [0]))
        ifd_at = len(out)
        ifd_offsets.append(ifd_at)
        extra = bytearray()
        extra_base = ifd_at + 2 + 12 * len(entries) + 4
        body = b"".join(_entry(bo, tag, typ, vals, extra, extra_base) for tag, typ, vals in entries)
        out += struct.pack(bo + "H", len(entries)) + body + b"\0\0\0\0" + extra
    struct.pack_into(bo + "I", out, 4, ifd_offsets[0])
    for here, nxt in zip(ifd_offsets, ifd_offsets[1:]):
        n = struct.unpack_from(bo + "H", out, here)[0]
        struct.pack_into(bo + "I", out, here + 2 + 12 * n, nxt)
    return bytes(out)


def read_tiff_pages(data: bytes) -> list[Bitmap]:
    doc = parse_tiff(data)
    return [decode_tiff_page(doc, i) for i in range(len(doc.pages))]
