"""Sorani script normalization, noise stripping and corpus preprocessing."""

from __future__ import annotations

import re
import unicodedata
from dataclasses import dataclass, field
from pathlib import Path
from typing import Mapping, Optional

from .corpus_io import Label, LabeledCorpus
from .errors import InvalidTable, UnlabeledPost


@dataclass(frozen=True)
class NormalizationTable:
    """Codepoint rewrites applied before anything else.

    ``char_map`` values may be multi-codepoint strings; ``strip_set`` holds
    codepoints deleted outright. Every output of the map must be a fixed point
    so that normalizing twice is the same as normalizing once.
    """

    char_map: Mapping[str, str]
    strip_set: frozenset[str] = frozenset()

    def __post_init__(self):
        for src, dst in self.char_map.items():
            if len(src) != 1:
                raise InvalidTable(f"map source must be one codepoint, got {src!r}")
            for ch in dst:
                if ch in self.char_map or ch in self.strip_set:
                    raise InvalidTable(f"output U+{ord(ch):04X} of U+{ord(src):04X} is rewritten again")
        trans = {ord(k): v for k, v in self.char_map.items()}
        trans.update({ord(c): None for c in self.strip_set})
        object.__setattr__(self, "_trans", trans)

    def apply(self, text: str) -> str:
        return text.translate(self._trans)

    @classmethod
    def from_file(cls, path) -> "NormalizationTable":
        """Read ``from_hex,to_hex`` lines; an empty ``to_hex`` deletes the codepoint.

        ``to_hex`` may list several codepoints separated by spaces.
        """
        char_map, strip = {}, set()
        for n, line in enumerate(Path(path).read_text(encoding="utf-8").splitlines(), 1):
            line = line.strip()
            if not line or line.startswith("#") or line.lower().startswith("from_hex"):
                continue
            src, _, dst = line.partition(",")
            try:
                s = chr(int(src.strip(), 16))
                d = "".join(chr(int(h, 16)) for h in dst.split())
            except ValueError as e:
                raise InvalidTable(f"line {n}: {e}") from e
            if d:
                char_map[s] = d
            else:
                strip.add(s)
        return cls(char_map, frozenset(strip))

    def to_file(self, path) -> None:
        rows = ["from_hex,to_hex"]
        for src, dst in sorted(self.char_map.items()):
            rows.append(f"{ord(src):04X}," + " ".join(f"{ord(c):04X}" for c in dst))
        for src in sorted(self.strip_set):
            rows.append(f"{ord(src):04X},")
        Path(path).write_text("\n".join(rows) + "\n", encoding="utf-8")


DEFAULT_TABLE = NormalizationTable(
    char_map={
        "ك": "ک",  # Arabic kaf -> Kurdish kaf
        "ي": "ی",  # Arabic yeh -> Farsi yeh
        "ى": "ی",  # alef maksura -> Farsi yeh
    },
    strip_set=frozenset(
        ["ـ", "‌"] + [chr(c) for c in range(0x064B, 0x0660)]  # tatweel, ZWNJ, harakat
    ),
)


def normalize_script(text: str, table: NormalizationTable = DEFAULT_TABLE) -> str:
    return table.apply(text)


_URL_RE = re.compile(r"(?:\b[A-Za-z][A-Za-z0-9+.\-]*://|\bwww\.)\S*")
_MENTION_RE = re.compile(r"@\w+")
_LATIN_RE = re.compile(r"[A-Za-z]+")
_SPACE_RE = re.compile(r"\s+")

# Emoji blocks: misc symbols + dingbats, emoticons/pictographs/transport,
# supplemental symbols, plus regional indicators and emoji modifiers.
_EMOJI_RANGES = (
    (0x2600, 0x27BF),
    (0x1F000, 0x1F02F),
    (0x1F0A0, 0x1F0FF),
    (0x1F100, 0x1F1FF),
    (0x1F300, 0x1F6FF),
    (0x1F700, 0x1F77F),
    (0x1F780, 0x1F7FF),
    (0x1F800, 0x1F8FF),
    (0x1F900, 0x1F9FF),
    (0x1FA00, 0x1FAFF),
    (0xFE00, 0xFE0F),
    (0x200D, 0x200D),
    (0x20E3, 0x20E3),
)


def _is_emoji(cp: int) -> bool:
    return any(lo <= cp <= hi for lo, hi in _EMOJI_RANGES)


def _char_kind(ch: str) -> Optional[str]:
    cp = ord(ch)
    if _is_emoji(cp):
        return "emoji"
    cat = unicodedata.category(ch)
    if cat == "Nd" or cat == "No" and unicodedata.digit(ch, None) is not None:
        return "digits"
    if cat[0] == "P":
        return "punctuation"
    if cat[0] == "S":
        return "emoji"
    if cat == "Cf":
        return "format"
    return None


@dataclass
class StripCounts:
    urls: int = 0
    mentions: int = 0
    latin: int = 0
    emoji: int = 0
    digits: int = 0
    punctuation: int = 0
    format: int = 0

    def add(self, other: "StripCounts") -> None:
        for k in self.__dataclass_fields__:
            setattr(self, k, getattr(self, k) + getattr(other, k))


def strip_noise_counted(text: str) -> tuple[str, StripCounts]:
    """Like :func:`strip_noise`, also reporting how many items each rule removed.

    URL/mention/latin counts are matched runs; the rest count codepoints.
    """
    counts = StripCounts()
    text, counts.urls = _URL_RE.subn(" ", text)
    text, counts.mentions = _MENTION_RE.subn(" ", text)
    text, counts.latin = _LATIN_RE.subn(" ", text)
    out = []
    for ch in text:
        kind = _char_kind(ch)
        if kind is None:
            out.append(ch)
        else:
            setattr(counts, kind, getattr(counts, kind) + 1)
            out.append(" ")
    text = _SPACE_RE.sub(" ", "".join(out)).strip()
    return text, counts


def strip_noise(text: str) -> str:
    """Remove URLs, @-mentions, Latin-letter runs, emoji/symbols, digits and punctuation.

    Removed spans become spaces, then whitespace runs collapse and the result
    is trimmed. ``#`` goes away with punctuation but the hashtag word stays.
    """
    return strip_noise_counted(text)[0]


def tokenize(text: str) -> tuple[str, ...]:
    return tuple(text.split())


@dataclass(frozen=True)
class PreprocessOptions:
    normalize: bool = True
    strip: bool = True
    dedup: bool = True
    drop_empty: bool = True


@dataclass
class PreprocessStats:
    input: int = 0
    duplicates: int = 0
    empty: int = 0
    removed: StripCounts = field(default_factory=StripCounts)

    @property
    def dropped(self) -> int:
        return self.duplicates + self.empty

    def as_dict(self) -> dict:
        d = {"input": self.input, "duplicates": self.duplicates, "empty": self.empty}
        d.update({k: getattr(self.removed, k) for k in self.removed.__dataclass_fields__})
        return d


@dataclass(frozen=True)
class ProcessedDoc:
    id: str
    label: Optional[Label]
    tokens: tuple[str, ...]


@dataclass(frozen=True)
class ProcessedCorpus:
    docs: tuple[ProcessedDoc, ...]
    stats: PreprocessStats

    def __len__(self):
        return len(self.docs)

    @property
    def tokens(self) -> list[tuple[str, ...]]:
        return [d.tokens for d in self.docs]

    @property
    def labels(self) -> list[int]:
        return [int(d.label) for d in self.docs]


def clean_tokens(
    text: str,
    options: PreprocessOptions = PreprocessOptions(),
    table: NormalizationTable = DEFAULT_TABLE,
) -> tuple[tuple[str, ...], StripCounts]:
    if options.normalize:
        text = normalize_script(text, table)
    counts = StripCounts()
    if options.strip:
        text, counts = strip_noise_counted(text)
    return tokenize(text), counts


def preprocess_corpus(
    corpus: LabeledCorpus,
    options: PreprocessOptions = PreprocessOptions(),
    table: NormalizationTable = DEFAULT_TABLE,
    require_labels: bool = True,
) -> ProcessedCorpus:
    """Normalize, strip and tokenize each post; drop empties and repeated token sequences.

    The first occurrence of a duplicated token sequence is kept.
    """
    stats = PreprocessStats(input=len(corpus))
    seen: set[tuple[str, ...]] = set()
    docs = []
    for post in corpus.posts:
        if require_labels and post.label is None:
            raise UnlabeledPost(post.id)
        tokens, counts = clean_tokens(post.text, options, table)
        stats.removed.add(counts)
        if options.drop_empty and not tokens:
            stats.empty += 1
            continue
        if options.dedup:
            if tokens in seen:
                stats.duplicates += 1
                continue
            seen.add(tokens)
        docs.append(ProcessedDoc(post.id, post.label, tokens))
    return ProcessedCorpus(tuple(docs), stats)

