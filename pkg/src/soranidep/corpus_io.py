"""Loading, saving and summarizing labeled post collections."""

from __future__ import annotations

import csv
import enum
import io
import json
import os
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable, Optional, Sequence

from .errors import (
    DuplicateId,
    EmptyKeywordSet,
    IoFailure,
    MalformedRecord,
    MissingColumn,
    UnknownLabel,
    UnlabeledPost,
)


class Label(enum.IntEnum):
    SHOW = 0
    NOT_SHOW = 1
    SUSPICIOUS = 2

    @property
    def token(self) -> str:
        return _LABEL_TOKENS[self]

    @classmethod
    def from_token(cls, token: str) -> "Label":
        try:
            return _TOKEN_LABELS[token]
        except KeyError:
            raise ValueError(token) from None


_LABEL_TOKENS = {Label.SHOW: "show", Label.NOT_SHOW: "not_show", Label.SUSPICIOUS: "suspicious"}
_TOKEN_LABELS = {v: k for k, v in _LABEL_TOKENS.items()}

N_LABELS = len(Label)

# Depression-related search terms, in their published order.
DEFAULT_KEYWORDS = (
    "دڵتەنگی",
    "نەخۆشی دەرونی",
    "بێهیوایی",
    "خەمۆکی",
    "خۆکوشتن",
    "بێزاری لە ژیان",
    "بێتاقەت",
    "پەشیمانی",
    "نائومێدی",
    "غەمباری",
)


@dataclass(frozen=True)
class RawPost:
    id: str
    text: str
    label: Optional[Label] = None


@dataclass(frozen=True)
class LabeledCorpus:
    posts: tuple[RawPost, ...]
    provenance: str = ""

    def __post_init__(self):
        object.__setattr__(self, "posts", tuple(self.posts))
        seen = set()
        for p in self.posts:
            if not p.id:
                raise MalformedRecord(0, "empty id")
            if p.id in seen:
                raise DuplicateId(p.id)
            seen.add(p.id)

    def __len__(self) -> int:
        return len(self.posts)

    def __iter__(self):
        return iter(self.posts)

    @property
    def labels(self) -> list[Optional[Label]]:
        return [p.label for p in self.posts]

    def subset(self, keep: Iterable[int], note: str = "") -> "LabeledCorpus":
        posts = [self.posts[i] for i in keep]
        prov = self.provenance if not note else f"{self.provenance}; {note}".lstrip("; ")
        return LabeledCorpus(tuple(posts), prov)


@dataclass(frozen=True)
class KeywordSet:
    keywords: tuple[str, ...] = field(default=DEFAULT_KEYWORDS)

    def __post_init__(self):
        from .text import normalize_script

        kws = tuple(k.strip() for k in self.keywords)
        if not kws or any(not normalize_script(k) for k in kws):
            raise EmptyKeywordSet("keyword set must be nonempty with nonempty terms")
        object.__setattr__(self, "keywords", kws)

    @classmethod
    def from_file(cls, path) -> "KeywordSet":
        """One keyword per line; blank lines and ``#`` comments are skipped."""
        lines = Path(path).read_text(encoding="utf-8").splitlines()
        return cls(tuple(ln.strip() for ln in lines if ln.strip() and not ln.lstrip().startswith("#")))


def _parse_label(value, line: int) -> Optional[Label]:
    if value is None or value == "":
        return None
    try:
        return Label.from_token(value)
    except ValueError:
        raise UnknownLabel(value, line) from None


def _infer_format(path, fmt):
    if fmt:
        return fmt
    return "jsonl" if str(path).endswith((".jsonl", ".ndjson")) else "csv"


def load_corpus(path, format: Optional[str] = None) -> LabeledCorpus:
    """Read a corpus from a ``csv`` or ``jsonl`` file, keeping record order."""
    fmt = _infer_format(path, format)
    try:
        with open(path, "r", encoding="utf-8", newline="") as fh:
            if fmt == "csv":
                posts = _read_csv(fh)
            elif fmt == "jsonl":
                posts = _read_jsonl(fh)
            else:
                raise ValueError(f"unsupported format {fmt!r}")
    except UnicodeDecodeError as e:
        raise MalformedRecord(0, f"not UTF-8: {e}") from e
    except FileNotFoundError as e:
        raise IoFailure(str(e)) from e
    seen: dict[str, int] = {}
    for p, line in posts:
        if p.id in seen:
            raise DuplicateId(f"id {p.id!r} on line {line} already used on line {seen[p.id]}")
        seen[p.id] = line
    return LabeledCorpus(tuple(p for p, _ in posts), provenance=f"loaded from {os.fspath(path)}")


def _read_csv(fh):
    reader = csv.reader(fh, strict=True)
    try:
        header = next(reader)
    except StopIteration:
        raise MissingColumn("empty file: header `id,text[,label]` required") from None
    except csv.Error as e:
        raise MalformedRecord(1, str(e)) from e
    if header and header[0].startswith("﻿"):
        header[0] = header[0][1:]
    cols = {name: i for i, name in enumerate(header)}
    for required in ("id", "text"):
        if required not in cols:
            raise MissingColumn(required)
    label_col = cols.get("label")
    posts = []
    while True:
        try:
            row = next(reader)
        except StopIteration:
            break
        except csv.Error as e:
            raise MalformedRecord(reader.line_num, str(e)) from e
        line = reader.line_num
        if not row:
            continue
        if len(row) != len(header):
            raise MalformedRecord(line, f"expected {len(header)} fields, got {len(row)}")
        pid = row[cols["id"]]
        if not pid:
            raise MalformedRecord(line, "empty id")
        label = _parse_label(row[label_col], line) if label_col is not None else None
        posts.append((RawPost(pid, row[cols["text"]], label), line))
    return posts


def _read_jsonl(fh):
    posts = []
    for line, raw in enumerate(fh, start=1):
        if not raw.strip():
            continue
        try:
            rec = json.loads(raw)
        except json.JSONDecodeError as e:
            raise MalformedRecord(line, str(e)) from e
        if not isinstance(rec, dict):
            raise MalformedRecord(line, "record is not an object")
        for required in ("id", "text"):
            if required not in rec:
                raise MissingColumn(f"{required} (line {line})")
        pid, text = rec["id"], rec["text"]
        if not isinstance(pid, str) or not pid or not isinstance(text, str):
            raise MalformedRecord(line, "id must be a nonempty string and text a string")
        label = rec.get("label")
        if label is not None and not isinstance(label, str):
            raise UnknownLabel(label, line)
        posts.append((RawPost(pid, text, _parse_label(label, line)), line))
    return posts


def write_corpus(corpus: LabeledCorpus, path, format: Optional[str] = None) -> None:
    fmt = _infer_format(path, format)
    buf = io.StringIO(newline="")
    if fmt == "csv":
        w = csv.writer(buf, lineterminator="\r\n")
        w.writerow(["id", "text", "label"])
        for p in corpus.posts:
            w.writerow([p.id, p.text, p.label.token if p.label is not None else ""])
    elif fmt == "jsonl":
        for p in corpus.posts:
            rec = {"id": p.id, "text": p.text}
            if p.label is not None:
                rec["label"] = p.label.token
            buf.write(json.dumps(rec, ensure_ascii=False) + "\n")
    else:
        raise ValueError(f"unsupported format {fmt!r}")
    try:
        Path(path).parent.mkdir(parents=True, exist_ok=True)
        with open(path, "w", encoding="utf-8", newline="") as fh:
            fh.write(buf.getvalue())
    except OSError as e:
        raise IoFailure(str(e)) from e


def class_counts(corpus: LabeledCorpus | Sequence[RawPost]) -> dict[Label, int]:
    counts = {lab: 0 for lab in Label}
    for p in corpus:
        if p.label is None:
            raise UnlabeledPost(p.id)
        counts[p.label] += 1
    return counts


def filter_by_keywords(corpus: LabeledCorpus, keywords: KeywordSet = KeywordSet()) -> LabeledCorpus:
    """Keep posts whose script-normalized text contains any keyword as a substring."""
    from .text import normalize_script

    if not keywords.keywords:
        raise EmptyKeywordSet("no keywords")
    kws = [normalize_script(k) for k in keywords.keywords]
    keep = [i for i, p in enumerate(corpus.posts) if any(k in normalize_script(p.text) for k in kws)]
    return corpus.subset(keep, note=f"keyword filter ({len(kws)} terms)")
