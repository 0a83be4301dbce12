"""Ground-truth labelled page fixtures rendered from the glyph font."""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from functools import lru_cache
from importlib import resources

import numpy as np

from .bitmap import Bitmap
from .errors import FormatError, UnknownGlyph
from .features import FeatureGrid, raster_feature_grid
from .font import CELL_HEIGHT, CELL_WIDTH, GlyphFont, default_font
from .segmentation import MIN_LINE_GAP, MIN_WORD_GAP, Band, LineSegment, WordSegment, format_segmentation, parse_segmentation, segment_chars

LINE_SPACING = 12
WORD_SPACING = 24
MARGIN = 16

# (characters excluding spaces, words) for each line of the reference document
BENCHMARK_COUNTS = [
    (14, 4), (17, 4), (34, 6), (35, 7), (40, 9), (40, 7),
    (46, 8), (50, 10), (50, 11), (51, 9), (55, 14),
]
BENCHMARK_SEED = 1


@dataclass(frozen=True)
class PageSpec:
    lines: tuple[str, ...] = ()
    line_spacing: int = LINE_SPACING
    word_spacing: int = WORD_SPACING
    margin: int = MARGIN

    def __post_init__(self):
        object.__setattr__(self, "lines", tuple(" ".join(s.split()) for s in self.lines))
        if any(not s for s in self.lines):
            raise ValueError("page lines must not be blank")
        if self.line_spacing < MIN_LINE_GAP or self.word_spacing < MIN_WORD_GAP:
            raise ValueError(
                f"spacing must be at least the segmentation gaps ({MIN_LINE_GAP} rows, {MIN_WORD_GAP} columns)"
            )
        if self.margin < 1:
            raise ValueError("margin must be positive")


@dataclass
class PageTruth:
    """What a rendered page contains.

    ``cells`` are the geometric glyph cells of each line as ``(r0, r1, c0, c1)``.
    ``bands`` are the lines, words and character cuts that segmentation of the
    pass-mode feature grid must recover.
    """

    lines: list[str] = field(default_factory=list)
    cells: list[list[tuple[int, int, int, int]]] = field(default_factory=list)
    bands: list[LineSegment] = field(default_factory=list)

    @property
    def n_chars(self) -> list[int]:
        return [len(s.replace(" ", "")) for s in self.lines]

    @property
    def n_words(self) -> list[int]:
        return [len(s.split()) for s in self.lines]


def _layout(spec: PageSpec):
    """Word boxes per line as lists of ``(text, c0)``, and the page size."""
    rows = []
    width = 0
    for text in spec.lines:
        x = spec.margin
        words = []
        for word in text.split():
            words.append((word, x))
            x += len(word) * CELL_WIDTH + spec.word_spacing
        if words:
            x -= spec.word_spacing
        rows.append(words)
        width = max(width, x - spec.margin)
    n = len(spec.lines)
    height = n * CELL_HEIGHT + max(n - 1, 0) * spec.line_spacing
    return rows, width + 2 * spec.margin, height + 2 * spec.margin


def _extent(values: np.ndarray, lo: int, hi: int) -> tuple[int, int] | None:
    inside = values[(values >= lo) & (values < hi)]
    if inside.size == 0:
        return None
    return int(inside.min()), int(inside.max()) + 1


def expected_bands(spec: PageSpec, grid: FeatureGrid) -> list[LineSegment]:
    """Bands implied by the layout: the extent of feature points inside each box."""
    rows, _, _ = _layout(spec)
    pts = np.array(grid.sorted_points(), dtype=np.int64).reshape(-1, 2)
    out = []
    for i, words in enumerate(rows):
        top = spec.margin + i * (CELL_HEIGHT + spec.line_spacing)
        in_line = pts[(pts[:, 0] >= top) & (pts[:, 0] < top + CELL_HEIGHT)]
        ext = _extent(in_line[:, 0], top, top + CELL_HEIGHT)
        if ext is None:
            continue
        line = LineSegment(Band(*ext, "line"))
        for word, c0 in words:
            wext = _extent(in_line[:, 1], c0, c0 + len(word) * CELL_WIDTH)
            if wext is None:
                continue
            band = Band(*wext, "word")
            line.words.append(WordSegment(band, segment_chars(grid, band)))
        out.append(line)
    return out


def render_page(spec: PageSpec, font: GlyphFont | None = None) -> tuple[Bitmap, PageTruth]:
    font = font or default_font()
    if (font.cell_height, font.cell_width) != (CELL_HEIGHT, CELL_WIDTH):
        raise ValueError("fixtures are laid out for 25x16 cells")
    rows, width, height = _layout(spec)
    px = np.zeros((height, width), dtype=np.uint8)
    truth = PageTruth()
    for i, (text, words) in enumerate(zip(spec.lines, rows)):
        top = spec.margin + i * (CELL_HEIGHT + spec.line_spacing)
        cells = []
        for word, c0 in words:
            for j, ch in enumerate(word):
                x = c0 + j * CELL_WIDTH
                px[top:top + CELL_HEIGHT, x:x + CELL_WIDTH] = font.glyph(ch)
                cells.append((top, top + CELL_HEIGHT, x, x + CELL_WIDTH))
        truth.lines.append(text)
        truth.cells.append(cells)
    bitmap = Bitmap(px)
    truth.bands = expected_bands(spec, raster_feature_grid(bitmap, "pass", bidirectional=True))
    return bitmap, truth


def format_truth(truth: PageTruth) -> str:
    out = [f"TEXT {s}\n" for s in truth.lines]
    for i, cells in enumerate(truth.cells):
        out += [f"CELL {i} {r0} {r1} {c0} {c1}\n" for r0, r1, c0, c1 in cells]
    return "".join(out) + format_segmentation(truth.bands)


def parse_truth(text: str) -> PageTruth:
    truth = PageTruth()
    for n, raw in enumerate(text.splitlines(), 1):
        if raw.startswith("TEXT"):
            truth.lines.append(raw[5:])
        elif raw.startswith("CELL "):
            try:
                i, *box = (int(v) for v in raw.split()[1:])
            except ValueError:
                raise FormatError(f"line {n}: malformed CELL record") from None
            if len(box) != 4 or not 0 <= i < len(truth.lines):
                raise FormatError(f"line {n}: malformed CELL record")
            while len(truth.cells) <= i:
                truth.cells.append([])
            truth.cells[i].append(tuple(box))
    while len(truth.cells) < len(truth.lines):
        truth.cells.append([])
    truth.bands = parse_segmentation(text)
    return truth


_DIRECTIVES = {"line_spacing", "word_spacing", "margin"}


def parse_page_spec(text: str) -> PageSpec:
    """Text lines are page lines; ``@name value`` lines set spacing; ``#`` starts a comment."""
    lines, opts = [], {}
    for n, raw in enumerate(text.splitlines(), 1):
        if raw.startswith("#"):
            continue
        if raw.startswith("@"):
            parts = raw[1:].split()
            if len(parts) != 2 or parts[0] not in _DIRECTIVES or not parts[1].isdigit():
                raise FormatError(f"line {n}: bad directive {raw!r}")
            opts[parts[0]] = int(parts[1])
            continue
        if raw.strip():
            lines.append(raw)
    return PageSpec(tuple(lines), **opts)


def format_page_spec(spec: PageSpec) -> str:
    head = f"@line_spacing {spec.line_spacing}\n@word_spacing {spec.word_spacing}\n@margin {spec.margin}\n"
    return head + "".join(s + "\n" for s in spec.lines)


def check_spec(spec: PageSpec, font: GlyphFont | None = None) -> None:
    font = font or default_font()
    for s in spec.lines:
        for ch in s.replace(" ", ""):
            if ch not in font.glyphs:
                raise UnknownGlyph(f"no glyph for {ch!r}")


@lru_cache(maxsize=1)
def corpus_text() -> str:
    return resources.files("ccitt_ocr").joinpath("data/corpus.txt").read_text()


def vocabulary(corpus: str | None = None, symbols: str | None = None) -> list[str]:
    """Distinct whitespace-separated tokens of the corpus that the font can render."""
    corpus = corpus_text() if corpus is None else corpus
    symbols = set(symbols or default_font().symbols)
    seen = {}
    for tok in corpus.split():
        if all(c in symbols for c in tok):
            seen.setdefault(tok, None)
    return list(seen)


def random_line(rng: random.Random, vocab: list[str], n_chars: int, n_words: int, tries: int = 10000) -> str:
    """Random words from ``vocab`` with exactly ``n_words`` words and ``n_chars`` glyphs."""
    by_len: dict[int, list[str]] = {}
    for w in vocab:
        by_len.setdefault(len(w), []).append(w)
    for _ in range(tries):
        words = [rng.choice(vocab) for _ in range(n_words - 1)]
        rest = n_chars - sum(map(len, words))
        if rest in by_len:
            words.append(rng.choice(by_len[rest]))
            rng.shuffle(words)
            return " ".join(words)
    raise ValueError(f"cannot draw {n_words} words totalling {n_chars} characters")


def benchmark_spec(seed: int | None = None) -> PageSpec:
    """An 11-line page with the character and word counts of the reference table.

    Without a seed this is the shipped page (``data/benchmark_page.txt``).
    """
    if seed is None:
        return parse_page_spec(resources.files("ccitt_ocr").joinpath("data/benchmark_page.txt").read_text())
    rng = random.Random(seed)
    vocab = vocabulary()
    return PageSpec(tuple(random_line(rng, vocab, c, w) for c, w in BENCHMARK_COUNTS))


def random_page_spec(rng: random.Random, n_lines: int | None = None, min_words: int = 3, max_words: int = 8) -> PageSpec:
    vocab = vocabulary()
    n_lines = n_lines or rng.randint(2, 6)
    lines = tuple(
        " ".join(rng.choice(vocab) for _ in range(rng.randint(min_words, max_words)))
        for _ in range(n_lines)
    )
    return PageSpec(lines)


def random_page_specs(seed: int, count: int, **kw) -> list[PageSpec]:
    rng = random.Random(seed)
    return [random_page_spec(rng, **kw) for _ in range(count)]
