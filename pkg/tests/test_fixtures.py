import random

import numpy as np
import pytest

from ccitt_ocr.bitmap import Bitmap, parse_pbm, pbm_bytes
from ccitt_ocr.errors import FormatError, UnknownGlyph
from ccitt_ocr.fixtures import (
    MARGIN, BENCHMARK_COUNTS, PageSpec, check_spec, corpus_text, format_page_spec, format_truth,
    parse_page_spec, parse_truth, random_line, random_page_specs, render_page, benchmark_spec, vocabulary,
)
from ccitt_ocr.font import (
    CELL_HEIGHT, CELL_WIDTH, SYMBOLS, default_font, glyph_filename, parse_font, read_glyph_dir, write_glyph_dir,
)


def test_font_covers_the_alphabet_at_cell_size():
    font = default_font()
    assert font.symbols == SYMBOLS and len(SYMBOLS) == 69
    for ch in SYMBOLS:
        g = font.glyph(ch)
        assert g.shape == (CELL_HEIGHT, CELL_WIDTH) and g.any()
        # a blank border keeps neighbouring cells from touching
        assert not g[:, 0].any() and not g[:, -1].any() and not g[0].any() and not g[-1].any()
    assert len({font.glyph(c).tobytes() for c in SYMBOLS}) == 69


def test_unknown_glyph():
    with pytest.raises(UnknownGlyph):
        default_font().glyph("~")


def test_font_parse_errors():
    with pytest.raises(FormatError):
        parse_font("GLYPH a\n")
    with pytest.raises(FormatError):
        parse_font("FONT 2 2\nGLYPH a\n##\n")


def test_glyph_dir_round_trip(tmp_path):
    write_glyph_dir(default_font(), tmp_path)
    samples = read_glyph_dir(tmp_path)
    assert "".join(sorted(ch for ch, _ in samples)) == "".join(sorted(SYMBOLS))
    assert glyph_filename("A") == "U+0041.pbm" and glyph_filename("a", 2) == "U+0061_2.pbm"
    for ch, bm in samples:
        assert np.array_equal(bm.pixels, default_font().glyph(ch))


def test_empty_glyph_dir(tmp_path):
    with pytest.raises(FormatError):
        read_glyph_dir(tmp_path)


def test_pbm_round_trip():
    bm = Bitmap.from_rows(["#..#.#.#.#", ".########."])
    assert parse_pbm(pbm_bytes(bm)) == bm


def test_empty_spec_renders_blank_page():
    bm, truth = render_page(PageSpec())
    assert not bm.pixels.any()
    assert truth.lines == [] and truth.bands == []


def test_ab_cells():
    bm, truth = render_page(PageSpec(("ab",)))
    assert truth.cells[0] == [(MARGIN, MARGIN + 25, MARGIN, MARGIN + 16),
                              (MARGIN, MARGIN + 25, MARGIN + 16, MARGIN + 32)]
    assert np.array_equal(bm.pixels[MARGIN:MARGIN + 25, MARGIN:MARGIN + 16], default_font().glyph("a"))


def test_rendering_is_deterministic():
    spec = benchmark_spec()
    a, ta = render_page(spec)
    b, tb = render_page(spec)
    assert a == b and format_truth(ta) == format_truth(tb)
    assert random_page_specs(4, 3) == random_page_specs(4, 3)


def test_benchmark_counts():
    spec = benchmark_spec()
    _, truth = render_page(spec)
    assert list(zip(truth.n_chars, truth.n_words)) == BENCHMARK_COUNTS
    assert spec == benchmark_spec(1)


def test_random_line_counts():
    rng = random.Random(0)
    vocab = vocabulary()
    for chars, words in BENCHMARK_COUNTS:
        line = random_line(rng, vocab, chars, words)
        assert len(line.replace(" ", "")) == chars and len(line.split()) == words
        assert all(w in vocab for w in line.split())


def test_vocabulary_is_renderable():
    vocab = vocabulary()
    assert vocab and all(c in SYMBOLS for w in vocab for c in w)
    assert len(vocab) == len(set(vocab))
    assert "quiet" in corpus_text()


def test_truth_round_trip():
    _, truth = render_page(PageSpec(("The quay", "fills with crates")))
    back = parse_truth(format_truth(truth))
    assert back.lines == truth.lines and back.cells == truth.cells and back.bands == truth.bands


def test_page_spec_file():
    spec = PageSpec(("hello there", "world."), line_spacing=14, word_spacing=30, margin=5)
    assert parse_page_spec(format_page_spec(spec)) == spec
    assert parse_page_spec("# note\n\nfirst line\n@margin 9\n") == PageSpec(("first line",), margin=9)
    with pytest.raises(FormatError):
        parse_page_spec("@colour red\n")


def test_spacing_below_segmentation_gaps_is_rejected():
    with pytest.raises(ValueError):
        PageSpec(("a b",), word_spacing=8)
    with pytest.raises(ValueError):
        PageSpec(("a",), line_spacing=3)
    with pytest.raises(ValueError):
        PageSpec(("a", "   "))


def test_check_spec_catches_foreign_characters():
    with pytest.raises(UnknownGlyph):
        check_spec(PageSpec(("semi;colon",)))
    with pytest.raises(UnknownGlyph):
        render_page(PageSpec(("tab~",)))
