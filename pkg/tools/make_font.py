"""Rasterise the shipped 25x16 glyph face from DejaVu Sans Mono.

Development-time only (needs Pillow and matplotlib's bundled fonts); the
output file is committed so the library itself never renders text.

    python tools/make_font.py src/ccitt_ocr/data/font_25x16.txt
"""

import sys
from pathlib import Path

import matplotlib
import numpy as np
from PIL import Image, ImageDraw, ImageFont

CELL_H, CELL_W = 25, 16
SIZE = 23
BASELINE = 19
SYMBOLS = (
    "ABCDEFGHIJKLMNOPQRSTUVWXYZ"
    "abcdefghijklmnopqrstuvwxyz"
    "0123456789"
    '().,!?"'
)


def render(font, ch):
    canvas = Image.new("L", (64, 64), 0)
    draw = ImageDraw.Draw(canvas)
    draw.text((16, 40), ch, fill=255, font=font, anchor="ls")
    ink = np.array(canvas) >= 128
    rows = np.flatnonzero(ink.any(axis=1))
    cols = np.flatnonzero(ink.any(axis=0))
    cell = np.zeros((CELL_H, CELL_W), dtype=np.uint8)
    top = BASELINE - (40 - rows[0])
    left = (CELL_W - (cols[-1] - cols[0] + 1)) // 2
    glyph = ink[rows[0]:rows[-1] + 1, cols[0]:cols[-1] + 1]
    h, w = glyph.shape
    if top < 1 or top + h > CELL_H - 1 or left < 1 or left + w > CELL_W - 1:
        raise SystemExit(f"glyph {ch!r} does not fit: top={top} h={h} left={left} w={w}")
    cell[top:top + h, left:left + w] = glyph
    return cell


def main(out):
    path = Path(matplotlib.get_data_path()) / "fonts/ttf/DejaVuSansMono.ttf"
    font = ImageFont.truetype(str(path), SIZE)
    lines = [f"FONT {CELL_H} {CELL_W}"]
    for ch in SYMBOLS:
        cell = render(font, ch)
        lines.append(f"GLYPH {ch}")
        lines += ["".join("#" if v else "." for v in row) for row in cell]
    Path(out).write_text("\n".join(lines) + "\n")


if __name__ == "__main__":
    main(sys.argv[1])
