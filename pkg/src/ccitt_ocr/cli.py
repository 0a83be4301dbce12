"""Command line: ``ccitt-ocr <command> ...``.

Exit status is 0 on success, 1 when the input is bad (unreadable, malformed
or unsupported files, invalid arguments) and 2 when an internal invariant
fails.
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

from .codec import SCHEMES, G4
from .errors import OcrError
from .evaluation import MODES, run_experiment
from .features import extract_strips, format_fgrid, parse_fgrid
from .fixtures import (
    check_spec, format_truth, parse_page_spec, random_page_specs, render_page, benchmark_spec,
)
from .font import default_font, write_glyph_dir
from .hmm import Alphabet, load_model, save_model
from .recognition import recognize_page, train_from_glyph_dir
from .segmentation import MIN_LINE_GAP, MIN_MASS, MIN_WORD_GAP, format_segmentation, segment_page
from .tiff import MIN_IS_BLACK, MIN_IS_WHITE, page_to_compressed, parse_tiff, write_tiff


def _emit(text: str, output: str | None) -> None:
    if output:
        Path(output).write_text(text)
    else:
        sys.stdout.write(text)


def _strips(path: str, page: int):
    return page_to_compressed(parse_tiff(Path(path).read_bytes()), page)


def cmd_extract(args) -> None:
    grid = extract_strips(_strips(args.input, args.page), args.mode, bidirectional=args.bidirectional)
    _emit(format_fgrid(grid), args.output)


def cmd_segment(args) -> None:
    grid = parse_fgrid(Path(args.input).read_text())
    seg = segment_page(grid, args.min_line_gap, args.min_word_gap, args.min_mass)
    _emit(format_segmentation(seg), args.output)


def cmd_train(args) -> None:
    corpus = Path(args.corpus).read_text()
    model = train_from_glyph_dir(args.glyph_dir, corpus, Alphabet.default(args.case_insensitive), args.mode)
    save_model(model, args.output)


def cmd_glyphs(args) -> None:
    write_glyph_dir(default_font(), args.output)


def cmd_recognize(args) -> None:
    model = load_model(args.model)
    grid = extract_strips(_strips(args.input, args.page), args.mode)
    seg = segment_page(grid, args.min_line_gap, args.min_word_gap, args.min_mass)
    lines = recognize_page(model, grid, seg, args.decoder)
    _emit("".join(line.text + "\n" for line in lines), args.output)


def _pages(arg: str, seed: int):
    if arg == "benchmark":
        return [benchmark_spec()]
    if arg.startswith("random:"):
        return random_page_specs(seed, int(arg[len("random:"):]))
    return [parse_page_spec(Path(arg).read_text())]


def cmd_eval(args) -> None:
    modes = [m.strip() for m in args.modes.split(",") if m.strip()]
    unknown = set(modes) - set(MODES)
    if unknown:
        raise ValueError(f"unknown modes: {', '.join(sorted(unknown))}")
    report = run_experiment(_pages(args.pages, args.seed), load_model(args.model), modes, args.decoder,
                            min_line_gap=args.min_line_gap, min_word_gap=args.min_word_gap,
                            min_mass=args.min_mass)
    _emit(report.format(), args.output)


def cmd_render(args) -> None:
    spec = parse_page_spec(Path(args.input).read_text())
    check_spec(spec)
    bitmap, truth = render_page(spec)
    photometric = MIN_IS_BLACK if args.min_is_black else MIN_IS_WHITE
    Path(args.output).write_bytes(write_tiff([(bitmap, args.scheme)], photometric=photometric))
    if args.truth:
        Path(args.truth).write_text(format_truth(truth))


def _seg_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--min-line-gap", type=int, default=MIN_LINE_GAP, help="rows (default %(default)s)")
    p.add_argument("--min-word-gap", type=int, default=MIN_WORD_GAP, help="columns (default %(default)s)")
    p.add_argument("--min-mass", type=int, default=MIN_MASS, help="points per line (default %(default)s)")


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        # bad arguments are bad input, not the argparse default of 2
        self.print_usage(sys.stderr)
        self.exit(1, f"{self.prog}: error: {message}\n")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="ccitt-ocr", description="OCR on CCITT-coded TIFF pages without decompressing them.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("extract", help="coding-mode feature points of a TIFF page")
    p.add_argument("input")
    p.add_argument("--mode", default="pass", choices=["pass", "vertical", "horizontal", "all"])
    p.add_argument("--bidirectional", action="store_true", help="also code the page bottom-up, right to left")
    p.add_argument("--page", type=int, default=0)
    p.add_argument("-o", "--output")
    p.set_defaults(func=cmd_extract)

    p = sub.add_parser("segment", help="line, word and character bands of a feature grid")
    p.add_argument("input")
    _seg_flags(p)
    p.add_argument("-o", "--output")
    p.set_defaults(func=cmd_segment)

    p = sub.add_parser("train", help="train a model from glyph samples and a text corpus")
    p.add_argument("--glyph-dir", required=True)
    p.add_argument("--corpus", required=True)
    p.add_argument("--case-insensitive", action="store_true")
    p.add_argument("--mode", default="pass", choices=["pass", "vertical", "horizontal", "all"])
    p.add_argument("-o", "--output", default="model.hmm")
    p.set_defaults(func=cmd_train)

    p = sub.add_parser("glyphs", help="write the built-in font as a glyph directory")
    p.add_argument("-o", "--output", required=True)
    p.set_defaults(func=cmd_glyphs)

    p = sub.add_parser("recognize", help="recognize the text of a TIFF page")
    p.add_argument("input")
    p.add_argument("--model", required=True)
    p.add_argument("--decoder", default="viterbi", choices=["viterbi", "simple"])
    p.add_argument("--mode", default="pass", choices=["pass", "vertical", "horizontal", "all"])
    p.add_argument("--page", type=int, default=0)
    _seg_flags(p)
    p.add_argument("-o", "--output")
    p.set_defaults(func=cmd_recognize)

    p = sub.add_parser("eval", help="per-line accuracy for each feature mode")
    p.add_argument("--pages", required=True, help="page spec file, 'benchmark' or 'random:N'")
    p.add_argument("--model", required=True)
    p.add_argument("--modes", default="horizontal,vertical,pass")
    p.add_argument("--decoder", default="viterbi", choices=["viterbi", "simple"])
    p.add_argument("--seed", type=int, default=0, help="seed for random:N pages")
    _seg_flags(p)
    p.add_argument("-o", "--output")
    p.set_defaults(func=cmd_eval)

    p = sub.add_parser("render", help="render a page spec to a TIFF fixture")
    p.add_argument("input")
    p.add_argument("-o", "--output", required=True)
    p.add_argument("--truth")
    p.add_argument("--scheme", default=G4, choices=SCHEMES)
    p.add_argument("--min-is-black", action="store_true")
    p.set_defaults(func=cmd_render)
    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        args.func(args)
    except (OcrError, OSError, ValueError, KeyError) as exc:
        print(f"ccitt-ocr: error: {exc}", file=sys.stderr)
        return 1
    except Exception as exc:  # anything else is a bug
        print(f"ccitt-ocr: internal error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 2
    return 0


if __name__ == "__main__":
    sys.exit(main())
