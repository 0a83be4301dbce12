"""Lines and words from projection profiles of pass-mode points only."""

import numpy as np

from ccitt_ocr.codec import G4, encode_page
from ccitt_ocr.features import extract_bidirectional
from ccitt_ocr.fixtures import random_page_specs, render_page
from ccitt_ocr.segmentation import horizontal_profile, segment_page

spec = random_page_specs(seed=3, count=1, n_lines=3)[0]
bm, truth = render_page(spec)
grid = extract_bidirectional(encode_page(bm, G4), "pass")
print(f"{bm.width}x{bm.height} page, {len(grid)} pass points "
      f"({len(grid) / bm.pixels.sum():.1%} of ink pixels)")

# Row histogram, squashed to fit the terminal
prof = horizontal_profile(grid).counts
top = max(prof.max(), 1)
for r in np.flatnonzero(prof)[::2]:
    print(f"{r:4d} {'=' * int(40 * prof[r] / top)}")

for line, text in zip(segment_page(grid), spec.lines):
    words = [(w.band.start, w.band.end, len(w.chars)) for w in line.words]
    print(f"\nrows {line.band.start}-{line.band.end}: {text!r}")
    for (c0, c1, n), word in zip(words, text.split()):
        print(f"   cols {c0:4d}-{c1:4d}  {n:2d} cells  {word}")
