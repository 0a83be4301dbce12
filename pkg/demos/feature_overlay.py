"""Where the coding-mode events land on a line of text.

Each mode is drawn over the glyphs.  Pass events hug the top and bottom of
strokes, which is why they carry the shape information.
"""

from ccitt_ocr.codec import G4, encode_page
from ccitt_ocr.features import extract_bidirectional, extract_events
from ccitt_ocr.fixtures import PageSpec, render_page

bm, truth = render_page(PageSpec(("Quay",), margin=4))
page = encode_page(bm, G4)

for mode in ("pass", "vertical", "horizontal"):
    pts = {(e.row, e.col) for e in extract_events(page, mode)}
    both = extract_bidirectional(page, mode).points
    print(f"\n{mode}: {len(pts)} forward points, {len(both)} with the reverse pass")
    for r in range(bm.height):
        row = []
        for c in range(bm.width):
            if (r, c) in both:
                row.append("o" if (r, c) in pts else "x")
            else:
                row.append("#" if bm.pixels[r, c] else ".")
        print("   ", "".join(row))

print("\no = forward event, x = only seen coding the page upside down")
