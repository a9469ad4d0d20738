"""Abusive-word counting and abusive-time tests."""
import pytest

from cinesent.lexicon import AbuseLexicon, abusive_time, builtin_lexicon, count_abusive, load_lexicon
from cinesent.srt import SubtitleCue, SubtitleDocument
from cinesent.textprep import clean_text, tokenize


def lex(unigrams=(), bigrams=()):
    return AbuseLexicon(name="t", version="t-1", unigrams=frozenset(unigrams),
                        bigrams=frozenset(bigrams))


def test_direct_unigram_lookup():
    assert count_abusive(["you", "fool"], lex(unigrams={"fool"})) == (1, 2)


def test_empty_tokens():
    assert count_abusive([], lex(unigrams={"fool"})) == (0, 0)


def test_departed_line_counts_at_least_once_with_builtin():
    tokens = tokenize(clean_text("what the fuck are you doing?"))
    abusive, total = count_abusive(tokens, builtin_lexicon())
    assert abusive >= 1
    assert total == len(tokens)


def test_each_occurrence_counts():
    tokens = ["fucking", "hell", "fucking"]
    assert count_abusive(tokens, lex(unigrams={"fucking"}))[0] == 2


def test_bigram_match_consumes_tokens():
    lexicon = lex(unigrams={"piss"}, bigrams={("piss", "off")})
    assert count_abusive(["piss", "off"], lexicon) == (1, 2)
    assert count_abusive(["piss", "piss", "off"], lexicon) == (2, 3)


def test_left_greedy_bigram_priority():
    lexicon = lex(unigrams={"off"}, bigrams={("piss", "off")})
    # the bigram consumes "off", so the unigram cannot re-count it
    assert count_abusive(["piss", "off"], lexicon)[0] == 1
    assert count_abusive(["off", "piss", "off"], lexicon)[0] == 2


def test_abusive_count_never_exceeds_total():
    lexicon = lex(unigrams={"a", "b"}, bigrams={("a", "b")})
    for tokens in (["a"] * 5, ["a", "b"] * 3, ["c", "a", "b", "a"]):
        abusive, total = count_abusive(tokens, lexicon)
        assert abusive <= total


def test_adding_terms_is_monotone():
    tokens = tokenize("you damn fool get out of here")
    small = lex(unigrams={"damn"})
    bigger = lex(unigrams={"damn", "fool"})
    assert count_abusive(tokens, bigger)[0] >= count_abusive(tokens, small)[0]


def test_empty_lexicon_rejected():
    with pytest.raises(ValueError):
        lex()


def _doc(*spans):
    cues = tuple(
        SubtitleCue(index=i + 1, start_ms=start, end_ms=end, lines=(text,))
        for i, (start, end, text) in enumerate(spans)
    )
    return SubtitleDocument(film_id="f", cues=cues)


def test_abusive_time_no_flagged_cues():
    doc = _doc((0, 1000, "a"), (2000, 3000, "b"))
    assert abusive_time(doc, lambda cue: False) == (0, 3000)


def test_abusive_time_table_durations():
    # spans taken from the first two case-study rows: 2,093 ms and 4,403 ms
    doc = _doc(
        (1_652_684, 1_654_777, "Yeah, that's right, fancy."),
        (5_556_031, 5_560_434, "You pressure me to fear for my life"),
    )
    flagged_ms, total_ms = abusive_time(doc, lambda cue: True)
    assert flagged_ms == 2_093 + 4_403 == 6_496
    assert total_ms == 5_560_434


def test_abusive_time_flag_all_equals_sum_of_durations():
    doc = _doc((0, 1500, "a"), (1500, 1700, "b"), (9000, 9900, "c"))
    flagged_ms, _ = abusive_time(doc, lambda cue: True)
    assert flagged_ms == sum(cue.duration_ms for cue in doc.cues)
    partial_ms, _ = abusive_time(doc, lambda cue: "a" in cue.text)
    assert partial_ms <= flagged_ms


def test_abusive_time_empty_document():
    assert abusive_time(SubtitleDocument("f", ()), lambda cue: True) == (0, 0)


def test_load_lexicon_file(tmp_path):
    path = tmp_path / "words.txt"
    path.write_text(
        "# comment\nversion=night-2\nFOOL\npiss off\n\nscum # inline\n",
        encoding="utf-8",
    )
    lexicon = load_lexicon(path)
    assert lexicon.version == "night-2"
    assert lexicon.unigrams == frozenset({"fool", "scum"})
    assert lexicon.bigrams == frozenset({("piss", "off")})


def test_load_lexicon_rejects_trigrams(tmp_path):
    path = tmp_path / "words.txt"
    path.write_text("version=x\na b c\n", encoding="utf-8")
    with pytest.raises(ValueError):
        load_lexicon(path)


def test_builtin_lexicon_is_versioned():
    lexicon = builtin_lexicon()
    assert lexicon.version == "builtin-0.1"
    assert lexicon.size > 0
