"""Train on the built-in font, then read the 11-line page with each mode.

Prints the per-line table and the averages.  Takes a few seconds.
"""

import time

from ccitt_ocr.evaluation import run_experiment
from ccitt_ocr.fixtures import corpus_text, benchmark_spec
from ccitt_ocr.font import default_font
from ccitt_ocr.recognition import train_from_font

t = time.perf_counter()
model = train_from_font(default_font(), corpus_text())
print(f"model: {model.n_symbols} symbols, {model.cell_height}x{model.cell_width} cells "
      f"({time.perf_counter() - t:.2f} s)")

spec = benchmark_spec()
report = run_experiment([spec], model)
print()
print(report.format())

for mode in report.modes:
    print(f"--- {mode}")
    for want, got in list(zip(spec.lines, report.predictions[mode]))[:3]:
        print(f"   {want}\n   {got}\n")
print(f"total {time.perf_counter() - t:.1f} s")
