"""OCR of CCITT-coded bilevel TIFF pages, working on the coded bitstream."""

from .bitmap import Bitmap, read_pbm, write_pbm
from .codec import G3_1D, G3_2D, G4, CompressedPage, decode_page, encode_page
from .evaluation import EvalRow, ExperimentReport, evaluate, run_experiment
from .features import FeatureGrid, extract_bidirectional, extract_events, extract_strips
from .fixtures import PageSpec, PageTruth, render_page, benchmark_spec
from .font import GlyphFont, default_font
from .hmm import Alphabet, HmmModel, decode_simplified, decode_viterbi, emission_loglik, load_model, save_model
from .recognition import recognize_page, train_from_font, train_from_glyph_dir
from .segmentation import Band, horizontal_profile, segment_chars, segment_lines, segment_page, segment_words, vertical_profile
from .tiff import parse_tiff, read_tiff_pages, write_tiff

__version__ = "0.1.0"
