"""End-to-end acceptance checks, one test per criterion.

Each test records its verdict; the run ends with one PASS/FAIL line per
criterion (see conftest.py).
"""

import itertools
import random
import time
from contextlib import contextmanager

import numpy as np
import pytest

from conftest import ACCEPTANCE
from ccitt_ocr.bitmap import Bitmap
from ccitt_ocr.codec import G3_2D, G4, SCHEMES, BitReader, decode_page, encode_page, tables
from ccitt_ocr.codec.runlength import read_run
from ccitt_ocr.errors import OcrError, TiffError
from ccitt_ocr.evaluation import average_accuracy, EvalRow, run_experiment
from ccitt_ocr.features import extract_events, extract_strips
from ccitt_ocr.fixtures import corpus_text, random_page_specs, render_page, benchmark_spec
from ccitt_ocr.font import default_font
from ccitt_ocr.hmm import Alphabet, HmmModel, emission_loglik, viterbi_path, decode_viterbi
from ccitt_ocr.recognition import train_from_font
from ccitt_ocr.segmentation import format_segmentation, segment_page
from ccitt_ocr.tiff import decode_tiff_page, page_to_compressed, parse_tiff, write_tiff


@contextmanager
def criterion(n, note=""):
    ok = False
    try:
        yield
        ok = True
    finally:
        ACCEPTANCE[n] = (ok, note() if callable(note) else note)


def random_bitmap(rng, max_side=64):
    w, h = rng.integers(1, max_side + 1, 2)
    return Bitmap((rng.random((h, w)) < rng.random()).astype(np.uint8))


@pytest.fixture(scope="module")
def model():
    return train_from_font(default_font(), corpus_text())


def test_criterion_1_codec_round_trip():
    rng = np.random.default_rng(1)
    bitmaps = [random_bitmap(rng) for _ in range(1000)]
    elapsed = []
    with criterion(1, lambda: f"1000 bitmaps x {len(SCHEMES)} schemes in {elapsed[0]:.2f} s (< 10 s)"):
        start = time.perf_counter()
        bad = [(i, s) for i, b in enumerate(bitmaps) for s in SCHEMES
               if decode_page(encode_page(b, s, k=2)) != b]
        elapsed.append(time.perf_counter() - start)
        assert bad == []
        assert elapsed[0] < 10


def test_criterion_2_compressed_domain_oracle():
    rng = np.random.default_rng(2)
    pages = [encode_page(random_bitmap(rng), s) for s in (G4, G3_2D) for _ in range(100)]
    pages += [encode_page(render_page(spec)[0], G4) for spec in random_page_specs(2, 20)]
    counts = []
    with criterion(2, lambda: f"{len(pages)} pages, {sum(counts)} events, all set-identical"):
        for page in pages:
            seen = []
            decode_page(page, seen.append)
            tapped = {e for e in seen if e.col < page.width}
            extracted = extract_events(page)
            assert set(extracted) == tapped
            counts.append(len(extracted))
        assert sum(counts) > 0


# A second transcription, kept apart from both the module and test_tables.py.
T4_SPOT = {
    ("white", 0): "00110101", ("white", 1): "000111", ("white", 5): "1100", ("white", 18): "0100111",
    ("white", 26): "0010011", ("white", 33): "00010010", ("white", 45): "00000100", ("white", 58): "01011011",
    ("white", 62): "00110011", ("white", 192): "010111", ("white", 320): "00110110", ("white", 1664): "011000",
    ("black", 0): "0000110111", ("black", 3): "10", ("black", 17): "0000011000", ("black", 24): "00000010111",
    ("black", 33): "000001101011", ("black", 35): "000011010011",
    ("black", 48): "000001100100", ("black", 62): "000001100110",
    ("black", 192): "000011001001", ("black", 512): "0000001101100", ("black", 1536): "0000001011010",
    ("both", 1792): "00000001000", ("both", 2176): "000000010101", ("both", 2240): "000000010110", ("both", 2496): "000000011110",
}


def test_criterion_3_code_tables():
    with criterion(3, f"white 0 and {len(T4_SPOT) - 1} more codewords agree, each decodes to its run"):
        assert tables.WHITE_CODES[0] == "00110101"
        for (colour, run), code in T4_SPOT.items():
            for c in (["white", "black"] if colour == "both" else [colour]):
                table = tables.WHITE_CODES if c == "white" else tables.BLACK_CODES
                assert table[run] == code, (c, run)
                bits = code + ("0000" if run < 64 else tables.WHITE_CODES[0] if c == "white" else tables.BLACK_CODES[0])
                data = int(bits.ljust(-(-len(bits) // 8) * 8 + 16, "0"), 2).to_bytes(-(-len(bits) // 8) + 2, "big")
                assert read_run(BitReader(data), 0 if c == "white" else 1) == run
        assert len(T4_SPOT) >= 21


def test_criterion_4_tiff_interop_and_truncation():
    rng = np.random.default_rng(4)
    bitmaps = [(random_bitmap(rng, 200), s) for s in SCHEMES for _ in range(4)]
    data = write_tiff(bitmaps, rows_per_strip=40)
    while len(data) < 10_000:
        bitmaps.append((random_bitmap(rng, 200), G4))
        data = write_tiff(bitmaps, rows_per_strip=40)
    cuts = sorted(random.Random(4).sample(range(len(data)), 10_000))
    fuzz_outcomes = {"ok": 0, "error": 0}
    with criterion(4, lambda: f"{len(bitmaps)} pages read back, 10000 truncations rejected, "
                              f"fuzz {fuzz_outcomes['ok']} decoded / {fuzz_outcomes['error']} rejected"):
        doc = parse_tiff(data)
        assert [decode_tiff_page(doc, i) for i in range(len(bitmaps))] == [b for b, _ in bitmaps]
        for cut in cuts:
            with pytest.raises(TiffError):
                parse_tiff(data[:cut])
        # random byte damage may still decode, but only library errors are allowed out
        frng = random.Random(44)
        for _ in range(300):
            buf = bytearray(data)
            for _ in range(frng.randint(1, 8)):
                buf[frng.randrange(len(buf))] = frng.randrange(256)
            try:
                d = parse_tiff(bytes(buf))
                for i in range(len(d.pages)):
                    decode_tiff_page(d, i)
                fuzz_outcomes["ok"] += 1
            except OcrError:
                fuzz_outcomes["error"] += 1


def test_criterion_5_segmentation_closure():
    specs = random_page_specs(5, 50)
    with criterion(5, "50 multi-line pages through TIFF match ground truth, 14-char line gives 4 words"):
        for spec in specs:
            assert len(spec.lines) >= 2
            bitmap, truth = render_page(spec)
            strips = page_to_compressed(parse_tiff(write_tiff([(bitmap, G4)])), 0)
            segs = segment_page(extract_strips(strips, "pass"))
            assert format_segmentation(segs) == format_segmentation(truth.bands)
            for line, text in zip(segs, spec.lines):
                assert [len(w.chars) for w in line.words] == [len(w) for w in text.split()]
        bitmap, truth = render_page(benchmark_spec())
        (first, *_) = segment_page(extract_strips(page_to_compressed(parse_tiff(write_tiff([(bitmap, G4)])), 0), "pass"))
        assert truth.n_chars[0] == 14 and len(first.words) == 4 and first.n_chars == 14


def exhaustive_best(init, trans, emit):
    T, n = emit.shape
    best, best_path = -np.inf, None
    # strict improvement over reversed-lexicographic order is the decoder's tie-break
    for path in sorted(itertools.product(range(n), repeat=T), key=lambda p: p[::-1]):
        s = init[path[0]] + sum(trans[a, b] for a, b in zip(path, path[1:])) + sum(emit[t, q] for t, q in enumerate(path))
        if s > best:
            best, best_path = s, list(path)
    return best_path


def test_criterion_6_viterbi_oracle():
    rng = np.random.default_rng(6)
    checked = []
    with criterion(6, lambda: f"{len(checked)} toy instances, all equal to exhaustive enumeration"):
        for n in range(1, 5):
            for T in range(1, 5):
                for trial in range(60):
                    if trial % 2:
                        # small integers force ties
                        init, trans, emit = (rng.integers(-2, 1, s).astype(float) for s in (n, (n, n), (T, n)))
                    else:
                        init, trans, emit = (np.log(rng.random(s) + 1e-3) for s in (n, (n, n), (T, n)))
                    assert viterbi_path(init, trans, emit) == exhaustive_best(init, trans, emit)
                    checked.append(1)
        # and through the model-level decoder
        alphabet = Alphabet("abcd")
        for _ in range(50):
            norm = lambda x: np.log(x / x.sum(axis=-1, keepdims=True))
            m = HmmModel(alphabet, norm(rng.random(4) + .1), norm(rng.random(4) + .1), norm(rng.random((4, 4)) + .1),
                         np.log(rng.uniform(.05, .95, (4, 2, 2))))
            obs = [(rng.random((2, 2)) < .5).astype(np.uint8) for _ in range(rng.integers(1, 5))]
            emit = np.stack([emission_loglik(m, o) for o in obs])
            assert decode_viterbi(m, obs) == "".join("abcd"[i] for i in exhaustive_best(m.initial, m.transition, emit))
            checked.append(1)


def test_criterion_7_mode_ordering(model):
    report, avg, elapsed = [], {}, []
    with criterion(7, lambda: "averages " + ", ".join(f"{m} {avg[m]:.2f}%" for m in avg) + f" in {elapsed[0]:.1f} s"):
        start = time.perf_counter()
        m = train_from_font(default_font(), corpus_text())
        report.append(run_experiment([benchmark_spec()], m))
        elapsed.append(time.perf_counter() - start)
        avg.update({mode: report[0].average(mode) for mode in ("pass", "vertical", "horizontal")})
        print(report[0].format())
        assert avg["pass"] > avg["vertical"] > avg["horizontal"]
        assert avg["pass"] >= 90
        assert avg["horizontal"] <= 15
        assert elapsed[0] < 60


# reference per-line pass-mode figures: (chars, words, correct, printed percentage)
PUBLISHED_PASS = [(14, 4, 13, 92.85), (17, 4, 16, 94.11), (34, 6, 34, 100), (35, 7, 34, 97.14), (40, 9, 38, 95),
                  (40, 7, 37, 92.5), (46, 8, 43, 93.47), (50, 10, 48, 96), (50, 11, 48, 96), (51, 9, 48, 94.11),
                  (55, 14, 48, 87.27)]


def test_criterion_8_published_average():
    mean = []
    with criterion(8, lambda: f"mean of printed percentages {mean[0]:.4f}, recomputed {mean[1]:.4f} (94.40 +- 0.01)"):
        mean.append(sum(p for *_, p in PUBLISHED_PASS) / len(PUBLISHED_PASS))
        rows = [EvalRow(c, w, {"pass": k}) for c, w, k, _ in PUBLISHED_PASS]
        mean.append(average_accuracy(rows, "pass"))
        assert abs(mean[0] - 94.40) <= 0.01
        assert abs(mean[1] - 94.40) <= 0.01
        # each printed figure is within 0.01 of its count ratio
        assert all(abs(r.accuracy("pass") - p) < 0.01 for r, (*_, p) in zip(rows, PUBLISHED_PASS))


def test_criterion_9_probability_hygiene(model):
    worst = [0.0]
    with criterion(9, lambda: f"both trained models stochastic; max |loglik - brute force| = {worst[0]:.2e}"):
        ci = train_from_font(default_font(), corpus_text(), Alphabet.default(case_insensitive=True))
        for m in (model, ci):
            for dist in (m.initial, m.prior, *m.transition):
                assert abs(np.exp(dist).sum() - 1) <= 1e-9
            p = np.exp(m.emission)
            assert ((p > 0) & (p < 1)).all()
        rng = np.random.default_rng(9)
        p = np.exp(model.emission)
        for _ in range(100):
            obs = (rng.random((model.cell_height, model.cell_width)) < rng.random()).astype(np.uint8)
            direct = np.log([np.prod(np.where(obs == 1, p[s], 1 - p[s])) for s in range(model.n_symbols)])
            diff = np.max(np.abs(emission_loglik(model, obs) - direct))
            worst[0] = max(worst[0], float(diff))
        assert worst[0] <= 1e-9
