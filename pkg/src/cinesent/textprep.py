"""Dialogue text normalization and tokenization.

``clean_text`` strips hashtags, URLs, emoji/symbol codepoints and musical
note markers, lowercases and collapses whitespace. ``tokenize`` splits on
non-alphanumeric boundaries but keeps intra-word apostrophes, so "don't"
stays one token.

Two stopword profiles ship with the package:

* ``ngram``: a small function-word list that keeps interjections and other
  dialogue words ("yes", "sir", "go", "oh") so frequent-bigram tables stay
  meaningful.
* ``classify``: a fuller list that keeps the negations "not", "no", "never"
  so classifier inputs do not lose polarity.
"""
from __future__ import annotations

import re
import unicodedata
from dataclasses import dataclass
from importlib import resources
from pathlib import Path
from typing import Iterable, Sequence

TokenSequence = list[str]

_URL = re.compile(r"(?:https?://|www\.)\S+")
_HASHTAG = re.compile(r"#\w+")
_WS = re.compile(r"\s+")
# Alphanumeric runs, optionally glued by apostrophes (ASCII or U+2019).
_TOKEN = re.compile(r"[^\W_]+(?:['’][^\W_]+)*")

# Unicode categories removed as emotion symbols / decoration: So covers
# emoji and pictographs (and the musical note), Sk covers modifier symbols,
# Cf covers invisible joiners left behind by emoji sequences.
_SYMBOL_CATEGORIES = ("So", "Sk", "Cf")


def clean_text(raw: str) -> str:
    """Normalize one piece of dialogue text. Idempotent."""
    text = raw.lower()
    text = _URL.sub(" ", text)
    text = _HASHTAG.sub(" ", text)
    text = "".join(
        ch for ch in text if unicodedata.category(ch) not in _SYMBOL_CATEGORIES
    )
    return _WS.sub(" ", text).strip()


def tokenize(clean: str) -> TokenSequence:
    """Split cleaned text into word tokens, dropping pure punctuation."""
    return _TOKEN.findall(clean)


@dataclass(frozen=True)
class StopwordSet:
    """Named profile of lowercase stopword tokens."""

    name: str
    words: frozenset[str]

    def __post_init__(self):
        object.__setattr__(self, "words", frozenset(self.words))
        if any(word != word.lower() for word in self.words):
            raise ValueError(f"stopword profile {self.name!r} has non-lowercase entries")

    def __contains__(self, token: str) -> bool:
        return token in self.words


def remove_stopwords(tokens: Sequence[str], profile: StopwordSet) -> TokenSequence:
    """Order-preserving filter dropping tokens found in the profile."""
    return [token for token in tokens if token not in profile]


def _parse_profile(name: str, lines: Iterable[str]) -> StopwordSet:
    words = set()
    for line in lines:
        entry = line.split("#", 1)[0].strip()
        if entry:
            words.add(entry.lower())
    return StopwordSet(name=name, words=frozenset(words))


def load_stopwords(path: str | Path, name: str | None = None) -> StopwordSet:
    """Read a profile file: one lowercase token per line, ``#`` comments allowed."""
    path = Path(path)
    with path.open(encoding="utf-8") as handle:
        return _parse_profile(name or path.stem, handle)


def builtin_stopwords(profile: str) -> StopwordSet:
    """Load one of the bundled profiles: ``ngram`` or ``classify``."""
    resource = resources.files("cinesent.data").joinpath(f"stopwords_{profile}.txt")
    try:
        text = resource.read_text(encoding="utf-8")
    except FileNotFoundError:
        raise ValueError(f"unknown builtin stopword profile {profile!r}") from None
    return _parse_profile(profile, text.splitlines())
