"""Seeded synthetic corpora for exercising the pipeline without the real dataset.

Documents are strings of pseudo-terms spelled over a closed set of Sorani
letters. Each class owns a disjoint block of "marker" terms that it emits
with elevated probability; all classes share a Zipf-weighted background.
Some posts get decorated with URLs, emoji, digits, mentions, hashtags or
Arabic-codepoint spellings, all of which preprocessing must undo.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .corpus_io import Label, LabeledCorpus, RawPost
from .errors import InvalidSpec

ALPHABET = "ابپتجچحخدرڕزژسشعغفڤقکگلڵمنوۆهەیێ"


@dataclass(frozen=True)
class SyntheticSpec:
    class_counts: tuple[int, ...] = (300, 300, 60)
    vocab_size: int = 500
    markers_per_class: int = 20
    marker_rate: float = 0.3  # chance a token is one of the doc's own class markers
    leak_rate: float = 0.0  # chance a token is a marker of some other class; off by default
    min_len: int = 8
    max_len: int = 20
    noise_rate: float = 0.2  # chance a post carries removable decorations
    seed: int = 42

    def validate(self):
        C = len(self.class_counts)
        if not 1 <= C <= len(Label):
            raise InvalidSpec(f"need 1..{len(Label)} classes, got {C}")
        if any(c <= 0 for c in self.class_counts):
            raise InvalidSpec("class counts must be positive")
        if self.markers_per_class < 1 or C * self.markers_per_class >= self.vocab_size:
            raise InvalidSpec("marker blocks must be nonempty, disjoint and leave background terms")
        if not (0 <= self.marker_rate and 0 <= self.leak_rate and self.marker_rate + self.leak_rate <= 1):
            raise InvalidSpec("marker_rate + leak_rate must lie in [0, 1]")
        if not 1 <= self.min_len <= self.max_len:
            raise InvalidSpec("need 1 <= min_len <= max_len")
        if not 0 <= self.noise_rate <= 1:
            raise InvalidSpec("noise_rate must lie in [0, 1]")


def pseudo_term(i: int) -> str:
    """Deterministic, distinct three-or-more letter spelling of integer ``i``."""
    base = len(ALPHABET)
    digits = []
    i += base * base  # guarantees at least three letters
    while i:
        i, r = divmod(i, base)
        digits.append(ALPHABET[r])
    return "".join(reversed(digits))


def marker_terms(spec: SyntheticSpec, c: int) -> list[str]:
    m = spec.markers_per_class
    return [pseudo_term(i) for i in range(c * m, (c + 1) * m)]


_EMOJI = ("😢", "💔", "😔", "🙂", "❤️")
_DIGITS = ("٢٠٢٤", "123", "۱۴", "7")


def _decorate(tokens: list[str], rng: np.random.Generator) -> str:
    toks = list(tokens)
    kind = int(rng.integers(0, 6))
    if kind == 0:
        toks.append(f"https://t.co/x{int(rng.integers(0, 10**6))}")
    elif kind == 1:
        toks.insert(int(rng.integers(0, len(toks) + 1)), _EMOJI[int(rng.integers(0, len(_EMOJI)))])
    elif kind == 2:
        toks.insert(int(rng.integers(0, len(toks) + 1)), _DIGITS[int(rng.integers(0, len(_DIGITS)))])
    elif kind == 3:
        toks.insert(0, f"@user_{int(rng.integers(0, 1000))}")
    elif kind == 4:
        j = int(rng.integers(0, len(toks)))
        toks[j] = "#" + toks[j]
    else:
        j = int(rng.integers(0, len(toks)))
        toks[j] = toks[j].replace("ک", "ك").replace("ی", "ي")
    return " ".join(toks)


def generate_synthetic_corpus(spec: SyntheticSpec = SyntheticSpec()) -> LabeledCorpus:
    spec.validate()
    C = len(spec.class_counts)
    rng = np.random.default_rng(spec.seed)
    n_markers = C * spec.markers_per_class
    background = [pseudo_term(i) for i in range(n_markers, spec.vocab_size)]
    weights = 1.0 / np.arange(1, len(background) + 1)
    weights /= weights.sum()
    markers = [marker_terms(spec, c) for c in range(C)]

    labels = np.concatenate([np.full(n, c) for c, n in enumerate(spec.class_counts)])
    labels = labels[rng.permutation(len(labels))]
    seen: set[tuple[str, ...]] = set()
    posts = []
    for i, c in enumerate(labels):
        c = int(c)
        while True:
            length = int(rng.integers(spec.min_len, spec.max_len + 1))
            u = rng.random(length)
            toks = []
            for x in u:
                if x < spec.marker_rate:
                    toks.append(markers[c][int(rng.integers(0, spec.markers_per_class))])
                elif x < spec.marker_rate + spec.leak_rate and C > 1:
                    other = int(rng.integers(0, C - 1))
                    other += other >= c
                    toks.append(markers[other][int(rng.integers(0, spec.markers_per_class))])
                else:
                    toks.append(background[int(rng.choice(len(background), p=weights))])
            if tuple(toks) not in seen:
                seen.add(tuple(toks))
                break
        text = _decorate(toks, rng) if rng.random() < spec.noise_rate else " ".join(toks)
        posts.append(RawPost(f"syn-{i:05d}", text, Label(c)))
    return LabeledCorpus(tuple(posts), provenance=f"synthetic {spec}")
