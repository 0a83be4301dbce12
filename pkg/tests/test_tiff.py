import struct

import numpy as np
import pytest

from ccitt_ocr.bitmap import Bitmap
from ccitt_ocr.codec import G3_1D, G3_2D, G4, decode_page
from ccitt_ocr.errors import BadMagic, PageOutOfRange, TiffError, TruncatedIfd, UnsupportedCompression
from ccitt_ocr.tiff import (
    COMPRESSION, FILL_ORDER, MIN_IS_BLACK, T4_OPTIONS, decode_tiff_page, page_scheme,
    page_to_compressed, parse_tiff, read_tiff_pages, write_tiff,
)


def random_bitmap(seed, h=21, w=35, density=0.3):
    rng = np.random.default_rng(seed)
    return Bitmap((rng.random((h, w)) < density).astype(np.uint8))


def patch_tag(data: bytes, tag: int, value: int) -> bytes:
    """Overwrite the first value of ``tag`` in the first IFD of a little-endian file."""
    buf = bytearray(data)
    (ifd,) = struct.unpack_from("<I", buf, 4)
    (n,) = struct.unpack_from("<H", buf, ifd)
    for i in range(n):
        at = ifd + 2 + 12 * i
        t, typ, count = struct.unpack_from("<HHI", buf, at)
        if t == tag:
            struct.pack_into("<H" if typ == 3 else "<I", buf, at + 8, value)
            return bytes(buf)
    raise KeyError(tag)


@pytest.mark.parametrize("scheme", [G3_1D, G3_2D, G4])
@pytest.mark.parametrize("photometric", [0, MIN_IS_BLACK])
@pytest.mark.parametrize("byte_order", ["<", ">"])
def test_round_trip(scheme, photometric, byte_order):
    bm = random_bitmap(hash((scheme, photometric, byte_order)) % 1000)
    data = write_tiff([(bm, scheme)], photometric=photometric, byte_order=byte_order)
    assert read_tiff_pages(data) == [bm]


def test_single_strip_directory_fields():
    bm = random_bitmap(1)
    doc = parse_tiff(write_tiff([(bm, G4)]))
    (page,) = doc.pages
    assert (page.width, page.height, page.compression) == (35, 21, 4)
    assert page.rows_per_strip == 21 and len(page.strip_offsets) == 1
    assert (page.fill_order, page.photometric, page.bits_per_sample) == (1, 0, 1)


def test_big_endian_variant_has_the_same_pages():
    bm = random_bitmap(2)
    le = parse_tiff(write_tiff([(bm, G4)]))
    be = parse_tiff(write_tiff([(bm, G4)], byte_order=">"))
    assert (le.byte_order, be.byte_order) == ("<", ">")
    assert le.pages == be.pages
    assert decode_tiff_page(be) == bm


def test_multi_page():
    pages = [(random_bitmap(i), s) for i, s in enumerate([G4, G3_2D, G3_1D])]
    data = write_tiff(pages)
    assert read_tiff_pages(data) == [b for b, _ in pages]
    doc = parse_tiff(data)
    assert [page_scheme(p) for p in doc.pages] == [G4, G3_2D, G3_1D]


def test_multi_strip_heights_sum_to_page_height():
    bm = random_bitmap(3, h=50)
    doc = parse_tiff(write_tiff([(bm, G4)], rows_per_strip=16))
    strips = page_to_compressed(doc, 0)
    assert [s.height for s in strips] == [16, 16, 16, 2]
    assert np.array_equal(np.vstack([decode_page(s).pixels for s in strips]), bm.pixels)


def test_scheme_mapping():
    bm = random_bitmap(4)
    assert page_to_compressed(parse_tiff(write_tiff([(bm, G4)])))[0].scheme == G4
    assert page_to_compressed(parse_tiff(write_tiff([(bm, G3_2D)])))[0].scheme == G3_2D
    g31 = parse_tiff(write_tiff([(bm, G3_1D)], g3_1d_eol=True))
    assert g31.pages[0].compression == 3 and page_scheme(g31.pages[0]) == G3_1D
    assert decode_tiff_page(g31) == bm
    mh = parse_tiff(write_tiff([(bm, G3_1D)]))
    assert mh.pages[0].compression == 2 and decode_tiff_page(mh) == bm


def test_lzw_is_unsupported():
    data = patch_tag(write_tiff([(random_bitmap(5), G4)]), COMPRESSION, 5)
    with pytest.raises(UnsupportedCompression):
        parse_tiff(data)


def test_uncompressed_t4_option_is_unsupported():
    data = patch_tag(write_tiff([(random_bitmap(5), G3_2D)]), T4_OPTIONS, 3)
    doc = parse_tiff(data)
    with pytest.raises(UnsupportedCompression):
        page_to_compressed(doc, 0)


def test_fill_order_two():
    bm = random_bitmap(6)
    data = write_tiff([(bm, G4)])
    doc = parse_tiff(data)
    off, n = doc.pages[0].strip_offsets[0], doc.pages[0].strip_byte_counts[0]
    flipped = bytearray(data)
    flipped[off:off + n] = bytes(int(f"{b:08b}"[::-1], 2) for b in data[off:off + n])
    flipped = patch_tag(bytes(flipped), FILL_ORDER, 2)
    assert decode_tiff_page(parse_tiff(flipped)) == bm


def test_bad_magic():
    with pytest.raises(BadMagic):
        parse_tiff(b"GIF89a\0\0\0\0")
    with pytest.raises(BadMagic):
        parse_tiff(b"II\x2b\x00\x08\x00\x00\x00")
    with pytest.raises(BadMagic):
        parse_tiff(b"II")


def test_missing_ifd():
    with pytest.raises(TruncatedIfd):
        parse_tiff(b"II*\0\0\0\0\0")
    with pytest.raises(TruncatedIfd):
        parse_tiff(b"II*\0\xff\0\0\0")


def test_ifd_loop():
    data = bytearray(write_tiff([(random_bitmap(7), G4)]))
    (ifd,) = struct.unpack_from("<I", data, 4)
    (n,) = struct.unpack_from("<H", data, ifd)
    struct.pack_into("<I", data, ifd + 2 + 12 * n, ifd)
    with pytest.raises(TiffError):
        parse_tiff(bytes(data))


def test_page_out_of_range():
    doc = parse_tiff(write_tiff([(random_bitmap(8), G4)]))
    with pytest.raises(PageOutOfRange):
        page_to_compressed(doc, 1)


def test_every_truncation_is_an_error():
    data = write_tiff([(random_bitmap(9, h=12, w=20), G4), (random_bitmap(10, h=9, w=17), G3_2D)])
    for cut in range(len(data)):
        with pytest.raises(TiffError):
            parse_tiff(data[:cut])


def test_write_tiff_needs_a_page():
    with pytest.raises(ValueError):
        write_tiff([])
