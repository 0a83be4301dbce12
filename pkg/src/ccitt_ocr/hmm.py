"""Naive-Bayes emissions, bigram language model and the two decoders."""

from __future__ import annotations

from dataclasses import dataclass
from pathlib import Path
from typing import Iterable, Sequence

import numpy as np

from .errors import DimensionMismatch, EmptyCorpus, FormatError, MissingSymbol
from .font import CELL_HEIGHT, CELL_WIDTH, DIGITS, LETTERS_LOWER, LETTERS_UPPER, PUNCTUATION

FORMAT_VERSION = "v1"


@dataclass(frozen=True)
class Alphabet:
    symbols: str
    case_insensitive: bool = False

    def __post_init__(self):
        if len(set(self.symbols)) != len(self.symbols) or not self.symbols:
            raise ValueError("alphabet symbols must be distinct and non-empty")
        if any(c.isspace() for c in self.symbols):
            raise ValueError("whitespace cannot be a symbol")
        object.__setattr__(self, "_index", {c: i for i, c in enumerate(self.symbols)})

    @classmethod
    def default(cls, case_insensitive: bool = False) -> Alphabet:
        if case_insensitive:
            return cls(LETTERS_LOWER + DIGITS + PUNCTUATION, True)
        return cls(LETTERS_UPPER + LETTERS_LOWER + DIGITS + PUNCTUATION)

    def __len__(self):
        return len(self.symbols)

    def normalize(self, ch: str) -> str:
        return ch.lower() if self.case_insensitive else ch

    def __contains__(self, ch: str) -> bool:
        return self.normalize(ch) in self._index

    def index(self, ch: str) -> int:
        return self._index[self.normalize(ch)]


def _check_log_stochastic(name: str, logv: np.ndarray) -> None:
    sums = np.exp(logv).sum(axis=-1)
    if not np.all(np.abs(sums - 1.0) <= 1e-9):
        raise ValueError(f"{name} does not sum to 1 (worst {sums.flat[np.argmax(np.abs(sums - 1))]!r})")


@dataclass(frozen=True)
class HmmModel:
    """Log-space parameters; ``emission`` holds log p of a feature point per cell pixel."""

    alphabet: Alphabet
    initial: np.ndarray     # (n,)
    prior: np.ndarray       # (n,) unigram log-probabilities, used by the simplified decoder
    transition: np.ndarray  # (n, n), row = from
    emission: np.ndarray    # (n, h, w)

    def __post_init__(self):
        n = len(self.alphabet)
        if self.initial.shape != (n,) or self.prior.shape != (n,) or self.transition.shape != (n, n):
            raise ValueError("parameter shapes do not match the alphabet")
        if self.emission.ndim != 3 or self.emission.shape[0] != n:
            raise ValueError("emission must be (n_symbols, cell_height, cell_width)")
        if not np.all(self.emission < 0):
            raise ValueError("Bernoulli parameters must lie strictly inside (0, 1)")
        _check_log_stochastic("initial", self.initial)
        _check_log_stochastic("prior", self.prior)
        _check_log_stochastic("transition row", self.transition)
        log_q = np.log1p(-np.exp(self.emission))
        if not np.all(np.isfinite(log_q)):
            raise ValueError("Bernoulli parameters must lie strictly inside (0, 1)")
        flat_p = self.emission.reshape(n, -1)
        flat_q = log_q.reshape(n, -1)
        object.__setattr__(self, "_weights", flat_p - flat_q)
        object.__setattr__(self, "_bias", flat_q.sum(axis=1))
        for arr in (self.initial, self.prior, self.transition, self.emission):
            arr.setflags(write=False)

    @property
    def cell_height(self) -> int:
        return self.emission.shape[1]

    @property
    def cell_width(self) -> int:
        return self.emission.shape[2]

    @property
    def n_symbols(self) -> int:
        return len(self.alphabet)


def train_emissions(
    samples: Iterable[tuple[str, np.ndarray]],
    alphabet: Alphabet,
    cell_height: int = CELL_HEIGHT,
    cell_width: int = CELL_WIDTH,
) -> np.ndarray:
    """Bernoulli parameters ``(count + 1) / (n + 2)`` per symbol and cell pixel."""
    n = len(alphabet)
    counts = np.zeros((n, cell_height, cell_width), dtype=np.int64)
    totals = np.zeros(n, dtype=np.int64)
    for ch, obs in samples:
        obs = np.asarray(obs)
        if obs.shape != (cell_height, cell_width):
            raise DimensionMismatch(f"sample for {ch!r} is {obs.shape}, expected {(cell_height, cell_width)}")
        if ch not in alphabet:
            continue
        i = alphabet.index(ch)
        counts[i] += obs != 0
        totals[i] += 1
    missing = [alphabet.symbols[i] for i in np.flatnonzero(totals == 0)]
    if missing:
        raise MissingSymbol(f"no training samples for {''.join(missing)!r}")
    return (counts + 1) / (totals[:, None, None] + 2)


def corpus_words(corpus: str, alphabet: Alphabet) -> list[list[int]]:
    """Maximal runs of alphabet symbols, as index lists; anything else separates words."""
    words, cur = [], []
    for ch in corpus:
        if ch in alphabet:
            cur.append(alphabet.index(ch))
        elif cur:
            words.append(cur)
            cur = []
    if cur:
        words.append(cur)
    return words


def train_language(corpus: str, alphabet: Alphabet) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Log initial (word starts), log transition (in-word bigrams) and log unigram prior, add-one smoothed."""
    words = corpus_words(corpus, alphabet)
    if not words:
        raise EmptyCorpus("corpus has no symbols from the alphabet")
    n = len(alphabet)
    init = np.ones(n)
    uni = np.ones(n)
    trans = np.ones((n, n))
    for w in words:
        init[w[0]] += 1
        np.add.at(uni, w, 1)
        np.add.at(trans, (w[:-1], w[1:]), 1)
    return (
        np.log(init / init.sum()),
        np.log(trans / trans.sum(axis=1, keepdims=True)),
        np.log(uni / uni.sum()),
    )


def build_model(samples, corpus: str, alphabet: Alphabet | None = None) -> HmmModel:
    alphabet = alphabet or Alphabet.default()
    samples = list(samples)
    h, w = np.asarray(samples[0][1]).shape if samples else (CELL_HEIGHT, CELL_WIDTH)
    p = train_emissions(samples, alphabet, h, w)
    initial, transition, prior = train_language(corpus, alphabet)
    return HmmModel(alphabet, initial, prior, transition, np.log(p))


def _check_obs(model: HmmModel, obs: np.ndarray) -> np.ndarray:
    obs = np.asarray(obs)
    if obs.shape != (model.cell_height, model.cell_width):
        raise DimensionMismatch(f"observation is {obs.shape}, model cells are {(model.cell_height, model.cell_width)}")
    return obs


def emission_loglik(model: HmmModel, obs: np.ndarray) -> np.ndarray:
    """``sum(obs ? log p : log(1 - p))`` over the cell, for every symbol."""
    obs = _check_obs(model, obs)
    return model._bias + model._weights @ (obs.reshape(-1) != 0)


def emission_matrix(model: HmmModel, observations: Sequence[np.ndarray]) -> np.ndarray:
    """``(T, n)`` log-likelihoods of a sequence of observations."""
    if len(observations) == 0:
        return np.zeros((0, model.n_symbols))
    x = np.stack([_check_obs(model, o).reshape(-1) != 0 for o in observations]).astype(float)
    return model._bias + x @ model._weights.T


def viterbi_path(log_init: np.ndarray, log_trans: np.ndarray, log_emit: np.ndarray) -> list[int]:
    """Most probable state sequence.

    Ties go to the lowest state index, both in every backpointer and in the
    final state, so among equally scored paths the one that is smallest when
    read from the last position backwards wins.
    """
    T = log_emit.shape[0]
    if T == 0:
        return []
    score = log_init + log_emit[0]
    back = np.empty((T, len(log_init)), dtype=np.int64)
    for t in range(1, T):
        cand = score[:, None] + log_trans  # from x to
        back[t] = np.argmax(cand, axis=0)
        score = cand[back[t], np.arange(cand.shape[1])] + log_emit[t]
    state = int(np.argmax(score))
    path = [state]
    for t in range(T - 1, 0, -1):
        state = int(back[t, state])
        path.append(state)
    return path[::-1]


def decode_viterbi(model: HmmModel, observations: Sequence[np.ndarray]) -> str:
    if len(observations) == 0:
        raise ValueError("need at least one observation")
    path = viterbi_path(model.initial, model.transition, emission_matrix(model, observations))
    return "".join(model.alphabet.symbols[i] for i in path)


def decode_simplified(model: HmmModel, observations: Sequence[np.ndarray]) -> str:
    if len(observations) == 0:
        raise ValueError("need at least one observation")
    best = np.argmax(emission_matrix(model, observations) + model.prior, axis=1)
    return "".join(model.alphabet.symbols[i] for i in best)


DECODERS = {"viterbi": decode_viterbi, "simple": decode_simplified}


def _row(values) -> str:
    return " ".join(f"{v:.12g}" for v in values)


def format_model(model: HmmModel) -> str:
    n, h, w = model.emission.shape
    out = [
        f"HMM {FORMAT_VERSION} {n} {h} {w}",
        f"ALPHABET {model.alphabet.symbols}",
        f"CASE {'insensitive' if model.alphabet.case_insensitive else 'sensitive'}",
        f"INITIAL {_row(model.initial)}",
        f"PRIOR {_row(model.prior)}",
    ]
    out += [f"TRANS {i} {_row(model.transition[i])}" for i in range(n)]
    out += [f"EMIT {i} {_row(model.emission[i].reshape(-1))}" for i in range(n)]
    return "\n".join(out) + "\n"


def parse_model(text: str) -> HmmModel:
    lines = text.splitlines()
    head = lines[0].split() if lines else []
    if len(head) != 5 or head[:2] != ["HMM", FORMAT_VERSION]:
        raise FormatError(f"not an HMM {FORMAT_VERSION} model file")
    try:
        n, h, w = (int(v) for v in head[2:])
        records: dict[str, list[str]] = {}
        rows: dict[str, dict[int, np.ndarray]] = {"TRANS": {}, "EMIT": {}}
        for raw in lines[1:]:
            key, _, rest = raw.partition(" ")
            if key in rows:
                i, _, vals = rest.partition(" ")
                rows[key][int(i)] = np.array(vals.split(), dtype=float)
            elif key:
                records[key] = rest
        alphabet = Alphabet(records["ALPHABET"], records.get("CASE", "sensitive") == "insensitive")
        initial = np.array(records["INITIAL"].split(), dtype=float)
        prior = np.array(records["PRIOR"].split(), dtype=float)
        if len(alphabet) != n or sorted(rows["TRANS"]) != list(range(n)) or sorted(rows["EMIT"]) != list(range(n)):
            raise FormatError("record count does not match the header")
        transition = np.stack([rows["TRANS"][i] for i in range(n)])
        emission = np.stack([rows["EMIT"][i] for i in range(n)]).reshape(n, h, w)
        return HmmModel(alphabet, initial, prior, transition, emission)
    except FormatError:
        raise
    except (KeyError, ValueError) as exc:
        raise FormatError(f"malformed model file: {exc}") from None


def save_model(model: HmmModel, path: str | Path) -> None:
    Path(path).write_text(format_model(model))


def load_model(path: str | Path) -> HmmModel:
    return parse_model(Path(path).read_text())
