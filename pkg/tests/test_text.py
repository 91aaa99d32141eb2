import random
import unicodedata

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from soranidep.corpus_io import Label, LabeledCorpus, RawPost
from soranidep.errors import InvalidTable, UnlabeledPost
from soranidep.text import (
    DEFAULT_TABLE,
    NormalizationTable,
    PreprocessOptions,
    normalize_script,
    preprocess_corpus,
    strip_noise,
    strip_noise_counted,
    tokenize,
)

# Arabic block, Latin, digits, emoji and format characters weighted toward the interesting ranges.
_CHARS = (
    [chr(c) for c in range(0x0600, 0x0700)]
    + list("abcXYZ019 .,!؟،\n\t")
    + ["‌", "‍", "ـ", "😢", "❤", "️", "٢", "۴"]
)


def _random_text(rng, n):
    return "".join(rng.choice(_CHARS) if rng.random() < 0.8 else chr(rng.randrange(0x20, 0x2FFFF))
                   for _ in range(n))


def test_mapping_vectors():
    assert normalize_script("كتيب") == "کتیب"
    assert normalize_script("ى") == "ی"
    assert normalize_script("") == ""


def test_tatweel_and_harakat_deleted():
    assert normalize_script("دــل") == "دل"
    for cp in range(0x064B, 0x0660):
        assert normalize_script("ب" + chr(cp) + "ا") == "با"


def test_zwnj_deleted():
    assert normalize_script("نا‌م") == "نام"


def test_normalization_idempotent_on_1000_texts():
    rng = random.Random(7)
    for _ in range(1000):
        s = _random_text(rng, rng.randrange(0, 40))
        once = normalize_script(s)
        assert normalize_script(once) == once
        assert len(once) <= len(s)


@given(st.text())
def test_normalization_idempotent_property(s):
    once = normalize_script(s)
    assert normalize_script(once) == once


def test_table_rejects_chained_mapping():
    with pytest.raises(InvalidTable):
        NormalizationTable({"a": "b", "b": "c"})


def test_table_file_roundtrip(tmp_path):
    p = tmp_path / "table.csv"
    DEFAULT_TABLE.to_file(p)
    loaded = NormalizationTable.from_file(p)
    assert dict(loaded.char_map) == dict(DEFAULT_TABLE.char_map)
    assert loaded.strip_set == DEFAULT_TABLE.strip_set


@pytest.mark.parametrize("text, expected", [
    ("hello دڵتەنگی http://t.co/x 123 😢", "دڵتەنگی"),
    ("https://example.com", ""),
    ("بێهیوایی، و ٢٠٢٤ بێزاری", "بێهیوایی و بێزاری"),
    ("@user1 خەم", "خەم"),
    ("www.site.org/a خەم", "خەم"),
    ("#خەمۆکی", "خەمۆکی"),
    ("ژیان۱۲۳ژیان", "ژیان ژیان"),
])
def test_strip_examples(text, expected):
    assert strip_noise(text) == expected


def test_strip_counts():
    _, c = strip_noise_counted("hello http://t.co/x @me 12 😢!")
    assert (c.urls, c.mentions, c.latin, c.digits, c.emoji, c.punctuation) == (1, 1, 1, 2, 1, 1)


@given(st.text())
def test_strip_output_invariants(s):
    out = strip_noise(s)
    assert "  " not in out
    assert out == out.strip()
    for ch in out:
        assert not ("a" <= ch.lower() <= "z")
        cat = unicodedata.category(ch)
        assert cat != "Nd"
        assert cat[0] not in "PS"


@pytest.mark.parametrize("text, expected", [
    ("دڵتەنگی زۆر", ("دڵتەنگی", "زۆر")),
    ("", ()),
    ("a  b", ("a", "b")),
])
def test_tokenize(text, expected):
    assert tokenize(text) == expected


def _corpus(texts, label=Label.SHOW):
    return LabeledCorpus(tuple(RawPost(f"p{i}", t, label) for i, t in enumerate(texts)))


def test_duplicate_dropped():
    out = preprocess_corpus(_corpus(["خەم زۆر", "خەم زۆر", "ژیان"]))
    assert [d.id for d in out.docs] == ["p0", "p2"]
    assert out.stats.duplicates == 1


def test_duplicate_detected_after_cleaning():
    out = preprocess_corpus(_corpus(["خەم زۆر!", "خەم   زۆر 😢"]))
    assert len(out) == 1 and out.stats.duplicates == 1


def test_url_only_post_dropped():
    out = preprocess_corpus(_corpus(["https://t.co/abc", "خەم"]))
    assert out.stats.empty == 1
    assert out.tokens == [("خەم",)]


def test_toggles_off_keep_everything():
    opts = PreprocessOptions(normalize=False, strip=False, dedup=False, drop_empty=False)
    out = preprocess_corpus(_corpus(["a", "a", ""]), opts)
    assert len(out) == 3 and out.stats.dropped == 0


def test_unlabeled_rejected():
    c = LabeledCorpus((RawPost("x", "خەم", None),))
    with pytest.raises(UnlabeledPost):
        preprocess_corpus(c)


@settings(max_examples=60)
@given(st.lists(st.sampled_from(["خەم", "خەم زۆر", "http://x.y", "😢", "كتيب", "کتیب", "a b", ""]), max_size=15))
def test_preprocess_invariants(texts):
    out = preprocess_corpus(_corpus(texts))
    toks = out.tokens
    assert len(set(toks)) == len(toks)
    assert all(toks)
    assert out.stats.dropped == len(texts) - len(out)
