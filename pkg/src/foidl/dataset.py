"""Verb-pair corpora: loading, synthesis and train/test splitting.

The corpus file format is one pair per line, ``base<TAB>past``, lowercase
letters only, with ``#`` comments.  Loading enforces functional
consistency: no input may appear with two different outputs.
"""

from __future__ import annotations

import random
import string
from dataclasses import dataclass, field
from typing import Optional

from .terms import Term, word, word_str


class CorpusError(Exception):
    def __init__(self, msg, line=None):
        super().__init__(msg if line is None else f"line {line}: {msg}")
        self.line = line


@dataclass(frozen=True)
class Example:
    """A ground base/past pair, both words as lists of letters."""

    input_word: Term
    output_word: Term

    @staticmethod
    def from_strings(base: str, past: str) -> "Example":
        if not base or not past:
            raise CorpusError("empty word in example")
        return Example(word(base), word(past))

    @property
    def input_str(self) -> str:
        return word_str(self.input_word)

    @property
    def output_str(self) -> str:
        return word_str(self.output_word)


@dataclass
class Corpus:
    examples: list
    alphabet: frozenset
    provenance: str = ""

    def __len__(self):
        return len(self.examples)

    def __iter__(self):
        return iter(self.examples)


def corpus_from_pairs(pairs, provenance: str = "") -> Corpus:
    seen: dict = {}
    examples = []
    letters = set()
    for base, past in pairs:
        prev = seen.get(base)
        if prev is not None:
            if prev != past:
                raise CorpusError(f"conflicting outputs for input {base!r}: {prev!r} vs {past!r}")
            continue
        seen[base] = past
        examples.append(Example.from_strings(base, past))
        letters.update(base)
        letters.update(past)
    return Corpus(examples, frozenset(letters), provenance)


def load_corpus(path, alphabet: Optional[frozenset] = None) -> Corpus:
    pairs = []
    allowed = alphabet or frozenset(string.ascii_lowercase)
    with open(path, encoding="utf-8") as f:
        for lineno, raw in enumerate(f, start=1):
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            parts = line.split("\t")
            if len(parts) != 2 or not parts[0] or not parts[1]:
                raise CorpusError("expected 'base<TAB>past'", lineno)
            base, past = parts
            bad = set(base + past) - allowed
            if bad:
                raise CorpusError(f"characters outside alphabet: {sorted(bad)}", lineno)
            pairs.append((base, past))
    try:
        return corpus_from_pairs(pairs, provenance=str(path))
    except CorpusError as e:
        raise CorpusError(str(e)) from e


def save_corpus(corpus: Corpus, path) -> None:
    with open(path, "w", encoding="utf-8") as f:
        for ex in corpus.examples:
            f.write(f"{ex.input_str}\t{ex.output_str}\n")


# ---------------------------------------------------------------------------
# Synthetic corpora

# Real irregular pairs, weighted toward learnable families (eep/ept,
# ow/ew, ing/ang) with a tail of one-off suppletives.  Sized so a
# 400-pair corpus can carry a 15% irregular share.
IRREGULAR_PAIRS = [
    ("keep", "kept"), ("sleep", "slept"), ("weep", "wept"), ("creep", "crept"),
    ("sweep", "swept"), ("feel", "felt"), ("kneel", "knelt"), ("deal", "dealt"),
    ("mean", "meant"), ("dream", "dreamt"), ("grow", "grew"), ("know", "knew"),
    ("throw", "threw"), ("blow", "blew"), ("draw", "drew"), ("sing", "sang"),
    ("ring", "rang"), ("spring", "sprang"), ("drink", "drank"), ("sink", "sank"),
    ("swim", "swam"), ("begin", "began"), ("arise", "arose"), ("rise", "rose"),
    ("drive", "drove"), ("ride", "rode"), ("write", "wrote"), ("go", "went"),
    ("do", "did"), ("say", "said"), ("make", "made"), ("take", "took"),
    ("stand", "stood"), ("run", "ran"), ("come", "came"), ("eat", "ate"),
    ("give", "gave"), ("see", "saw"), ("fall", "fell"), ("buy", "bought"),
    ("bring", "brought"), ("think", "thought"), ("seek", "sought"),
    ("teach", "taught"), ("catch", "caught"), ("fight", "fought"),
    ("sell", "sold"), ("tell", "told"), ("hold", "held"), ("hear", "heard"),
    ("find", "found"), ("grind", "ground"), ("wind", "wound"),
    ("bind", "bound"), ("speak", "spoke"), ("break", "broke"),
    ("steal", "stole"), ("wake", "woke"), ("choose", "chose"),
    ("freeze", "froze"), ("wear", "wore"), ("tear", "tore"),
    ("swear", "swore"), ("bear", "bore"), ("sit", "sat"), ("win", "won"),
    ("shoot", "shot"), ("lose", "lost"), ("leave", "left"), ("meet", "met"),
    ("feed", "fed"), ("lead", "led"), ("read", "read"), ("bleed", "bled"),
    ("breed", "bred"), ("speed", "sped"), ("hide", "hid"), ("bite", "bit"),
    ("light", "lit"), ("slide", "slid"), ("shine", "shone"),
    ("strike", "struck"), ("stick", "stuck"), ("dig", "dug"),
    ("swing", "swung"), ("sting", "stung"), ("hang", "hung"),
    ("spin", "spun"), ("stink", "stank"), ("shrink", "shrank"),
    ("fly", "flew"), ("slay", "slew"), ("lie", "lay"), ("bid", "bade"),
    ("forget", "forgot"), ("get", "got"),
]

_CONSONANTS = "bcdfghjklmnprstvwz"
_VOWELS = "aeiou"

# Stem shapes: C = consonant, V = vowel, plus literal endings.  Stems
# never end in vowel+y, so the regular fragment is exactly covered by the
# three standard rules (add "ed"; final "e" adds "d"; consonant+"y" to
# "ied") with no consonant doubling.
_STEM_SHAPES = ["CVC", "CVCVC", "CVCVCC", "CVCe", "CVCVCe", "CVCy", "CVCVCy", "CVCC"]


def regular_past(base: str) -> str:
    """Standard English regular inflection (without consonant doubling)."""
    if base.endswith("e"):
        return base + "d"
    if base.endswith("y") and len(base) > 1 and base[-2] not in _VOWELS:
        return base[:-1] + "ied"
    return base + "ed"


def _random_stem(rng: random.Random) -> str:
    shape = rng.choice(_STEM_SHAPES)
    return "".join(
        rng.choice(_CONSONANTS) if ch == "C" else rng.choice(_VOWELS) if ch == "V" else ch
        for ch in shape
    )


def synthesize_corpus(n: int, irregular_fraction: float, seed: int) -> Corpus:
    """A deterministic desk-scale corpus of regular + irregular pairs."""
    if not 0.0 <= irregular_fraction <= 1.0:
        raise ValueError("irregular_fraction must be in [0, 1]")
    rng = random.Random(seed)
    n_irregular = round(n * irregular_fraction)
    if n_irregular > len(IRREGULAR_PAIRS):
        raise CorpusError(
            f"only {len(IRREGULAR_PAIRS)} built-in irregular pairs, "
            f"{n_irregular} requested"
        )
    irregular = rng.sample(IRREGULAR_PAIRS, n_irregular)
    taken = {b for b, _ in IRREGULAR_PAIRS}
    stems = []
    attempts = 0
    while len(stems) < n - n_irregular:
        attempts += 1
        if attempts > 200 * n + 10_000:
            raise CorpusError(f"cannot generate {n} distinct stems")
        stem = _random_stem(rng)
        if stem in taken:
            continue
        taken.add(stem)
        stems.append(stem)
    pairs = [(s, regular_past(s)) for s in stems] + list(irregular)
    rng.shuffle(pairs)
    return Corpus(
        [Example.from_strings(b, p) for b, p in pairs],
        frozenset("".join(b + p for b, p in pairs)),
        provenance=f"synthetic(n={n}, irregular={irregular_fraction}, seed={seed})",
    )


# ---------------------------------------------------------------------------
# Trial splitting

@dataclass(frozen=True)
class SplitSpec:
    train_sizes: tuple
    test_size: int
    trials: int
    seed: int = 0

    def __post_init__(self):
        if not self.train_sizes or self.trials < 1 or self.test_size < 1:
            raise ValueError("degenerate split specification")


@dataclass(frozen=True)
class Trial:
    trial: int
    train_size: int
    train: tuple
    test: tuple


def split_trials(corpus: Corpus, spec: SplitSpec) -> list[Trial]:
    """Disjoint test set + nested training prefixes, per trial.

    Within a trial the training sample for a smaller size is a prefix of
    the sample for every larger size, which lowers variance across the
    learning curve.  Everything is derived deterministically from
    ``spec.seed`` plus the trial index.
    """
    need = spec.test_size + max(spec.train_sizes)
    if need > len(corpus):
        raise CorpusError(f"corpus has {len(corpus)} examples, split needs {need}")
    trials = []
    for t in range(spec.trials):
        rng = random.Random(f"{spec.seed}:{t}")
        shuffled = list(corpus.examples)
        rng.shuffle(shuffled)
        test = tuple(shuffled[: spec.test_size])
        pool = shuffled[spec.test_size:]
        for size in sorted(spec.train_sizes):
            trials.append(Trial(t, size, tuple(pool[:size]), test))
    return trials
