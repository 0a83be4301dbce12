"""From feature grids to text: observations, registration and per-word decoding."""

from __future__ import annotations

from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .bitmap import Bitmap
from .codec import G4, encode_page
from .features import FeatureGrid, extract_bidirectional
from .font import GlyphFont, read_glyph_dir
from .hmm import DECODERS, Alphabet, HmmModel, build_model, emission_matrix
from .segmentation import LineSegment, segment_page

GLYPH_MARGIN = 8
# Search range for where the glyph cell sits relative to the feature bands
MAX_DY = 12
MAX_DX = 8


def glyph_features(glyph: np.ndarray, mode_filter="pass", margin: int = GLYPH_MARGIN) -> np.ndarray:
    """Feature cell of one glyph: coded alone on a blank page, extracted in the compressed domain."""
    h, w = glyph.shape
    px = np.zeros((h + 2 * margin, w + 2 * margin), dtype=np.uint8)
    px[margin:margin + h, margin:margin + w] = glyph
    grid = extract_bidirectional(encode_page(Bitmap(px), G4), mode_filter)
    return grid.to_array()[margin:margin + h, margin:margin + w]


def training_samples(glyphs, mode_filter="pass") -> list[tuple[str, np.ndarray]]:
    return [(ch, glyph_features(np.asarray(g.pixels if isinstance(g, Bitmap) else g), mode_filter))
            for ch, g in glyphs]


def train_from_font(font: GlyphFont, corpus: str, alphabet: Alphabet | None = None,
                    mode_filter="pass") -> HmmModel:
    return build_model(training_samples(font.glyphs.items(), mode_filter), corpus, alphabet)


def train_from_glyph_dir(directory: str | Path, corpus: str, alphabet: Alphabet | None = None,
                         mode_filter="pass") -> HmmModel:
    return build_model(training_samples(read_glyph_dir(directory), mode_filter), corpus, alphabet)


def cell_at(dense: np.ndarray, top: int, left: int, h: int, w: int) -> np.ndarray:
    """``h`` x ``w`` window of ``dense`` at (top, left), zero-padded outside the page."""
    out = np.zeros((h, w), dtype=np.uint8)
    H, W = dense.shape
    r0, r1 = max(top, 0), min(top + h, H)
    c0, c1 = max(left, 0), min(left + w, W)
    if r0 < r1 and c0 < c1:
        out[r0 - top:r1 - top, c0 - left:c1 - left] = dense[r0:r1, c0:c1]
    return out


def word_observations(dense: np.ndarray, top: int, left: int, n: int, h: int, w: int) -> list[np.ndarray]:
    return [cell_at(dense, top, left + i * w, h, w) for i in range(n)]


def _fit_score(model: HmmModel, obs: list[np.ndarray]) -> float:
    return float(emission_matrix(model, obs).max(axis=1).sum())


def register_line(model: HmmModel, dense: np.ndarray, line: LineSegment, max_dy: int = MAX_DY,
                  max_dx: int = MAX_DX) -> tuple[int, list[int]]:
    """Cell offsets above the line band and left of each word band.

    Each candidate is scored by the best per-cell emission log-likelihood
    summed over the cells it produces; ties go to the smaller offset.
    """
    h, w = model.cell_height, model.cell_width
    if not line.words:
        return 0, []
    best_dy, best = 0, -np.inf
    for dy in range(max_dy + 1):
        score = 0.0
        for word in line.words:
            top = line.band.start - dy
            score += max(_fit_score(model, word_observations(dense, top, word.band.start - dx, len(word.chars), h, w))
                         for dx in range(max_dx + 1))
        if score > best:
            best_dy, best = dy, score
    top = line.band.start - best_dy
    dxs = []
    for word in line.words:
        scores = [_fit_score(model, word_observations(dense, top, word.band.start - dx, len(word.chars), h, w))
                  for dx in range(max_dx + 1)]
        dxs.append(int(np.argmax(scores)))
    return best_dy, dxs


@dataclass
class RecognizedLine:
    text: str
    words: list[tuple[int, int]] = field(default_factory=list)  # word column bands


def recognize_page(model: HmmModel, grid: FeatureGrid, segmentation: list[LineSegment],
                   decoder: str = "viterbi", register: bool = True) -> list[RecognizedLine]:
    """Decode every word of every segmented line; words are joined with single spaces.

    With ``register=False`` cells are taken exactly at the character bands,
    top-aligned to the line band.
    """
    decode = DECODERS[decoder]
    dense = grid.to_array()
    h, w = model.cell_height, model.cell_width
    out = []
    for line in segmentation:
        dy, dxs = register_line(model, dense, line) if register else (0, [0] * len(line.words))
        top = line.band.start - dy
        words = []
        for word, dx in zip(line.words, dxs):
            if not word.chars:
                continue
            left = word.band.start - dx
            words.append(decode(model, word_observations(dense, top, left, len(word.chars), h, w)))
        out.append(RecognizedLine(" ".join(words), [(wd.band.start, wd.band.end) for wd in line.words]))
    return out


def recognize_grid(model: HmmModel, grid: FeatureGrid, decoder: str = "viterbi", **seg_kw) -> list[RecognizedLine]:
    return recognize_page(model, grid, segment_page(grid, **seg_kw), decoder)
