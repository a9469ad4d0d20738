"""Cleaning, tokenization and stopword profile tests."""
import pytest
from hypothesis import given, settings, strategies as st

from cinesent.textprep import (
    StopwordSet,
    builtin_stopwords,
    clean_text,
    load_stopwords,
    remove_stopwords,
    tokenize,
)


def test_musical_note_marker_removed_and_lowercased():
    assert clean_text("♪ The enemy of one the enemy of all is") == \
        "the enemy of one the enemy of all is"


def test_clean_empty_string():
    assert clean_text("") == ""


def test_hashtag_emoji_and_url_removed():
    assert clean_text("Good night #fun 😀 http://x.y") == "good night"


def test_www_urls_removed():
    assert clean_text("see www.example.com/page now") == "see now"


def test_whitespace_collapsed():
    assert clean_text("a\t b\n\nc") == "a b c"


@settings(max_examples=300, deadline=None)
@given(st.text(max_size=80))
def test_clean_text_idempotent(text):
    once = clean_text(text)
    assert clean_text(once) == once


def test_tokenize_simple_pair():
    assert tokenize("let go") == ["let", "go"]


def test_tokenize_empty():
    assert tokenize("") == []


def test_tokenize_keeps_intraword_apostrophes():
    assert tokenize("that's my boy!") == ["that's", "my", "boy"]
    assert tokenize("don’t stop") == ["don’t", "stop"]


def test_tokenize_drops_pure_punctuation():
    assert tokenize("... -- !؟") == []


@settings(max_examples=300, deadline=None)
@given(st.text(max_size=80))
def test_tokenize_emits_no_empty_or_whitespace_tokens(text):
    for token in tokenize(clean_text(text)):
        assert token
        assert not any(ch.isspace() for ch in token)


def test_default_ngram_profile_contains_function_words():
    profile = builtin_stopwords("ngram")
    assert remove_stopwords(["the", "enemy", "of", "all"], profile) == ["enemy"]


def test_ngram_profile_keeps_dialogue_words():
    profile = builtin_stopwords("ngram")
    assert remove_stopwords(["yes", "sir"], profile) == ["yes", "sir"]
    for word in ("let", "go", "good", "night", "oh", "come", "hey"):
        assert word not in profile


def test_classify_profile_keeps_negations():
    profile = builtin_stopwords("classify")
    assert "the" in profile
    for negation in ("not", "no", "never"):
        assert negation not in profile


def test_empty_profile_is_identity():
    profile = StopwordSet(name="empty", words=frozenset())
    tokens = ["any", "words", "at", "all"]
    assert remove_stopwords(tokens, profile) == tokens


@settings(max_examples=200, deadline=None)
@given(st.lists(st.sampled_from(["a", "b", "the", "go", "night"]), max_size=20))
def test_remove_stopwords_output_is_subsequence(tokens):
    profile = StopwordSet(name="p", words=frozenset({"the", "a"}))
    filtered = remove_stopwords(tokens, profile)
    iterator = iter(tokens)
    assert all(any(token == candidate for candidate in iterator) for token in filtered)


def test_unknown_builtin_profile_raises():
    with pytest.raises(ValueError):
        builtin_stopwords("nope")


def test_load_stopwords_file_with_comments(tmp_path):
    path = tmp_path / "words.txt"
    path.write_text("# a comment\nfoo\nBAR  # trailing comment\n\n", encoding="utf-8")
    profile = load_stopwords(path, "custom")
    assert profile.name == "custom"
    assert profile.words == frozenset({"foo", "bar"})


def test_stopword_set_rejects_uppercase_entries():
    with pytest.raises(ValueError):
        StopwordSet(name="bad", words=frozenset({"Yes"}))
