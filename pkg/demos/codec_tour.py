"""A short walk through the fax coder: runs, modes, and whole pages.

Run with ``python3 demos/codec_tour.py``.
"""

import numpy as np

from ccitt_ocr.bitmap import Bitmap
from ccitt_ocr.codec import G3_1D, G3_2D, G4, coding_states, decode_page, encode_page, tables


def show(bm):
    for row in bm.pixels:
        print("   ", "".join("#" if v else "." for v in row))


# One line as Modified Huffman: alternating white/black runs, white first.
print("white run 8 ->", tables.WHITE_CODES[8], " black run 8 ->", tables.BLACK_CODES[8])

# Two lines coded against each other.  The coder walks a0 along the line and
# picks pass, vertical or horizontal from where a1/a2 sit relative to b1/b2.
ref = np.array([0, 0, 1, 1, 1, 1, 0, 0, 0, 0, 1, 1, 0, 0, 0, 0], np.uint8)
cur = np.array([0, 0, 0, 1, 1, 1, 1, 0, 0, 0, 0, 0, 0, 1, 1, 0], np.uint8)
print("\nreference  ", "".join(map(str, ref)))
print("coding     ", "".join(map(str, cur)))
for state, mode in coding_states(cur, ref):
    print(f"  a0={state.a0:>3} a1={state.a1:>3} b1={state.b1:>3} b2={state.b2:>3} -> {mode}")

# Whole pages.  Sizes differ a lot between schemes on structured images.
rng = np.random.default_rng(0)
px = np.zeros((48, 64), np.uint8)
px[8:40, 10:14] = 1
px[20:24, 10:54] = 1
px += (rng.random(px.shape) < 0.01).astype(np.uint8)
bm = Bitmap(np.minimum(px, 1))
print("\npage:")
show(Bitmap(bm.pixels[::4, ::2]))
for scheme in (G3_1D, G3_2D, G4):
    page = encode_page(bm, scheme)
    assert decode_page(page) == bm
    print(f"{scheme:>6}: {len(page.data):4d} bytes (raw {bm.width * bm.height // 8})")
