import json

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from soranidep.corpus_io import (
    KeywordSet,
    Label,
    LabeledCorpus,
    RawPost,
    class_counts,
    filter_by_keywords,
    load_corpus,
    write_corpus,
)
from soranidep.errors import (
    DuplicateId,
    EmptyKeywordSet,
    MalformedRecord,
    MissingColumn,
    UnknownLabel,
    UnlabeledPost,
)


def _write(path, text):
    path.write_text(text, encoding="utf-8", newline="")
    return path


def test_two_line_csv(tmp_path):
    p = _write(tmp_path / "c.csv", "id,text,label\n1,خەم,show\n2,ژیان,not_show\n")
    c = load_corpus(p)
    assert [post.label for post in c] == [Label.SHOW, Label.NOT_SHOW]
    assert [int(post.label) for post in c] == [0, 1]


def test_unknown_label_names_line(tmp_path):
    p = _write(tmp_path / "c.csv", "id,text,label\n1,a,show\n2,b,maybe\n")
    with pytest.raises(UnknownLabel) as e:
        load_corpus(p)
    assert e.value.line == 3 and "maybe" in str(e.value)


def test_unknown_label_jsonl(tmp_path):
    p = _write(tmp_path / "c.jsonl", '{"id":"1","text":"a","label":"maybe"}\n')
    with pytest.raises(UnknownLabel):
        load_corpus(p)


@pytest.mark.parametrize("content, err", [
    ("text,label\nx,show\n", MissingColumn),
    ("", MissingColumn),
    ("id,text\n1,a\n1,b\n", DuplicateId),
    ("id,text\n1,a,extra\n", MalformedRecord),
    ('id,text\n1,"unterminated\n', MalformedRecord),
])
def test_csv_errors(tmp_path, content, err):
    with pytest.raises(err):
        load_corpus(_write(tmp_path / "c.csv", content))


def test_jsonl_malformed_line(tmp_path):
    p = _write(tmp_path / "c.jsonl", '{"id":"1","text":"a"}\n{not json\n')
    with pytest.raises(MalformedRecord) as e:
        load_corpus(p)
    assert e.value.line == 2


def test_bom_and_unlabeled_column(tmp_path):
    p = _write(tmp_path / "c.csv", "﻿id,text\n1,a\n")
    c = load_corpus(p)
    assert c.posts[0] == RawPost("1", "a", None)


def test_real_shape_file(tmp_path):
    labels = ["show"] * 363 + ["not_show"] * 369 + ["suspicious"] * 179
    lines = ["id,text,label"] + [f"t{i},پۆست {i},{lab}" for i, lab in enumerate(labels)]
    c = load_corpus(_write(tmp_path / "real.csv", "\n".join(lines) + "\n"))
    assert len(c) == 911
    assert class_counts(c) == {Label.SHOW: 363, Label.NOT_SHOW: 369, Label.SUSPICIOUS: 179}


@pytest.mark.parametrize("fmt", ["csv", "jsonl"])
def test_roundtrip_with_newlines(tmp_path, fmt):
    c = LabeledCorpus((RawPost("a", "یەک\nدوو, \"سێ\"", Label.SHOW), RawPost("b", "", None),
                       RawPost("c", "x\r\ny", Label.SUSPICIOUS)))
    p = tmp_path / f"c.{fmt}"
    write_corpus(c, p)
    assert load_corpus(p).posts == c.posts


@pytest.mark.parametrize("fmt", ["csv", "jsonl"])
def test_empty_corpus_roundtrip(tmp_path, fmt):
    p = tmp_path / f"e.{fmt}"
    write_corpus(LabeledCorpus(()), p)
    assert len(load_corpus(p)) == 0
    if fmt == "jsonl":
        assert p.read_text() == ""


# Python's csv module cannot carry NUL, so it is excluded from generated text.
_text = st.text(st.characters(blacklist_characters="\x00", blacklist_categories=("Cs",)))
_posts = st.lists(
    st.tuples(_text.filter(bool), _text, st.sampled_from([None, *Label])),
    max_size=8, unique_by=lambda t: t[0],
)


@settings(max_examples=80)
@given(_posts, st.sampled_from(["csv", "jsonl"]))
def test_roundtrip_property(tmp_path_factory, posts, fmt):
    c = LabeledCorpus(tuple(RawPost(*p) for p in posts))
    path = tmp_path_factory.mktemp("rt") / f"c.{fmt}"
    write_corpus(c, path)
    assert load_corpus(path).posts == c.posts


def test_class_counts_cases():
    assert class_counts(LabeledCorpus(())) == {lab: 0 for lab in Label}
    four = LabeledCorpus(tuple(RawPost(str(i), "x", Label.SUSPICIOUS) for i in range(4)))
    assert list(class_counts(four).values()) == [0, 0, 4]
    with pytest.raises(UnlabeledPost):
        class_counts(LabeledCorpus((RawPost("u", "x", None),)))


@given(st.lists(st.sampled_from(list(Label)), max_size=30))
def test_class_counts_sum(labels):
    c = LabeledCorpus(tuple(RawPost(str(i), "", lab) for i, lab in enumerate(labels)))
    assert sum(class_counts(c).values()) == len(c)


def _kw_corpus():
    return LabeledCorpus((
        RawPost("1", "ئەمڕۆ خەمۆکی زۆرە", Label.SHOW),
        RawPost("2", "ڕۆژێکی خۆش", Label.NOT_SHOW),
        RawPost("3", "بيهيوايی", Label.SUSPICIOUS),  # Arabic yeh where the keyword has Farsi yeh
        RawPost("4", "بێزاری لە ژیان", Label.SHOW),
    ))


def test_keyword_filter():
    out = filter_by_keywords(_kw_corpus(), KeywordSet(("خەمۆکی", "بیهیوایی", "بێزاری لە ژیان")))
    assert [p.id for p in out] == ["1", "3", "4"]


def test_default_keywords_keep_table_term():
    out = filter_by_keywords(_kw_corpus())
    assert [p.id for p in out] == ["1", "4"]


def test_keyword_filter_subset_and_idempotent():
    kws = KeywordSet(("خەم", "ژیان"))
    once = filter_by_keywords(_kw_corpus(), kws)
    assert set(once.posts) <= set(_kw_corpus().posts)
    assert filter_by_keywords(once, kws).posts == once.posts


def test_empty_keyword_set():
    with pytest.raises(EmptyKeywordSet):
        KeywordSet(())
    with pytest.raises(EmptyKeywordSet):
        KeywordSet(("  ",))


def test_keyword_file(tmp_path):
    p = _write(tmp_path / "kw.txt", "# comment\nخەم\n\nژیان\n")
    assert KeywordSet.from_file(p).keywords == ("خەم", "ژیان")


def test_jsonl_written_unescaped(tmp_path):
    p = tmp_path / "c.jsonl"
    write_corpus(LabeledCorpus((RawPost("1", "خەم", Label.SHOW),)), p)
    line = p.read_text(encoding="utf-8").strip()
    assert "خەم" in line and json.loads(line)["label"] == "show"
