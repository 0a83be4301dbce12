"""Per-line character accuracy and the three-mode experiment."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence

from .codec import G4
from .features import extract_strips
from .fixtures import PageSpec, render_page
from .hmm import HmmModel
from .recognition import recognize_page
from .segmentation import segment_page
from .tiff import page_to_compressed, parse_tiff, write_tiff

MODES = ("horizontal", "vertical", "pass")


@dataclass
class EvalRow:
    n_chars: int
    n_words: int
    correct: dict[str, int] = field(default_factory=dict)

    def __post_init__(self):
        for mode, k in self.correct.items():
            if not 0 <= k <= self.n_chars:
                raise ValueError(f"{mode}: {k} correct out of {self.n_chars}")

    def accuracy(self, mode: str) -> float:
        return 100.0 * self.correct[mode] / self.n_chars if self.n_chars else 100.0


def count_correct(predicted: str, truth: str) -> int:
    """Index-aligned matches between the space-free strings, over the shorter length."""
    p, t = predicted.replace(" ", ""), truth.replace(" ", "")
    return sum(a == b for a, b in zip(p, t))


def evaluate(predicted: Sequence[str], truth: Sequence[str], mode: str = "pass") -> list[EvalRow]:
    """One row per truth line; missing predicted lines count as empty."""
    rows = []
    for i, t in enumerate(truth):
        p = predicted[i] if i < len(predicted) else ""
        rows.append(EvalRow(len(t.replace(" ", "")), len(t.split()), {mode: count_correct(p, t)}))
    return rows


def average_accuracy(rows: Sequence[EvalRow], mode: str) -> float | None:
    """Unweighted mean of the per-line accuracies."""
    if not rows:
        return None
    return sum(r.accuracy(mode) for r in rows) / len(rows)


@dataclass
class ExperimentReport:
    modes: tuple[str, ...]
    rows: list[EvalRow] = field(default_factory=list)
    predictions: dict[str, list[str]] = field(default_factory=dict)

    def average(self, mode: str) -> float | None:
        return average_accuracy(self.rows, mode)

    def format(self) -> str:
        head = f"{'line':>4}  {'chars/words':>11}" + "".join(f"  {m.capitalize():>18}" for m in self.modes)
        out = [head]
        for i, r in enumerate(self.rows, 1):
            cells = "".join(f"  {f'{r.correct[m]} ({r.accuracy(m):.2f}%)':>18}" for m in self.modes)
            out.append(f"{i:>4}  {f'{r.n_chars}/{r.n_words}':>11}{cells}")
        avgs = [self.average(m) for m in self.modes]
        out.append(f"{'':>4}  {'average':>11}" + "".join(
            f"  {'n/a' if a is None else f'{a:.2f}%':>18}" for a in avgs))
        return "\n".join(out) + "\n"


def page_strips(spec: PageSpec, scheme: str = G4):
    """Render, write as TIFF and re-open: what the recognizer sees is the coded file."""
    bitmap, truth = render_page(spec)
    doc = parse_tiff(write_tiff([(bitmap, scheme)]))
    return page_to_compressed(doc, 0), truth


def run_experiment(pages: Sequence[PageSpec], model: HmmModel, modes: Sequence[str] = MODES,
                   decoder: str = "viterbi", scheme: str = G4, **seg_kw) -> ExperimentReport:
    """Recognize every page once per feature mode and score each line."""
    report = ExperimentReport(tuple(modes), predictions={m: [] for m in modes})
    for spec in pages:
        strips, truth = page_strips(spec, scheme)
        rows = [EvalRow(c, w) for c, w in zip(truth.n_chars, truth.n_words)]
        for mode in modes:
            grid = extract_strips(strips, mode)
            lines = [r.text for r in recognize_page(model, grid, segment_page(grid, **seg_kw), decoder)]
            # the segmenter may find more or fewer lines than were rendered
            for row, scored in zip(rows, evaluate(lines, truth.lines, mode)):
                row.correct[mode] = scored.correct[mode]
            report.predictions[mode].extend(lines[:len(rows)] + [""] * (len(rows) - len(lines)))
        report.rows.extend(rows)
    return report
