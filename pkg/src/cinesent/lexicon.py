"""Dictionary-based abusive word counting.

Lexicon files carry a ``version=<string>`` header line, then one lowercase
term per line (two space-separated tokens for bigrams), with ``#`` comments.
All lexicon-derived outputs should record the lexicon version.
"""
from __future__ import annotations

from dataclasses import dataclass
from importlib import resources
from pathlib import Path
from typing import Callable, Sequence

from .srt import SubtitleCue, SubtitleDocument


@dataclass(frozen=True)
class AbuseLexicon:
    name: str
    version: str
    unigrams: frozenset[str]
    bigrams: frozenset[tuple[str, str]]

    def __post_init__(self):
        object.__setattr__(self, "unigrams", frozenset(self.unigrams))
        object.__setattr__(self, "bigrams", frozenset(self.bigrams))
        if not self.unigrams and not self.bigrams:
            raise ValueError(f"lexicon {self.name!r} is empty")
        entries = list(self.unigrams) + [t for pair in self.bigrams for t in pair]
        if any(term != term.lower() for term in entries):
            raise ValueError(f"lexicon {self.name!r} has non-lowercase entries")

    @property
    def size(self) -> int:
        return len(self.unigrams) + len(self.bigrams)


def load_lexicon(path: str | Path, name: str | None = None) -> AbuseLexicon:
    path = Path(path)
    return _parse_lexicon(path.read_text(encoding="utf-8"), name or path.stem)


def builtin_lexicon() -> AbuseLexicon:
    """Small bundled list, intended for tests and fixtures."""
    text = resources.files("cinesent.data").joinpath("lexicon_default.txt").read_text("utf-8")
    return _parse_lexicon(text, "builtin")


def _parse_lexicon(text: str, name: str) -> AbuseLexicon:
    version = "unversioned"
    unigrams: set[str] = set()
    bigrams: set[tuple[str, str]] = set()
    for raw_line in text.splitlines():
        line = raw_line.split("#", 1)[0].strip()
        if not line:
            continue
        if line.startswith("version="):
            version = line.split("=", 1)[1].strip()
            continue
        tokens = line.lower().split()
        if len(tokens) == 1:
            unigrams.add(tokens[0])
        elif len(tokens) == 2:
            bigrams.add((tokens[0], tokens[1]))
        else:
            raise ValueError(f"lexicon {name!r}: terms must be unigrams or bigrams, got {line!r}")
    return AbuseLexicon(name=name, version=version, unigrams=unigrams, bigrams=bigrams)


def count_abusive(tokens: Sequence[str], lexicon: AbuseLexicon) -> tuple[int, int]:
    """(abusive occurrences, total token count) for one token sequence.

    Bigram matches are left-greedy and non-overlapping; a token consumed by
    a bigram match is not recounted as a unigram.
    """
    if lexicon.size == 0:
        raise ValueError("empty lexicon")
    abusive = 0
    i = 0
    while i < len(tokens):
        if i + 1 < len(tokens) and (tokens[i], tokens[i + 1]) in lexicon.bigrams:
            abusive += 1
            i += 2
        elif tokens[i] in lexicon.unigrams:
            abusive += 1
            i += 1
        else:
            i += 1
    return abusive, len(tokens)


def abusive_time(
    doc: SubtitleDocument, flagger: Callable[[SubtitleCue], bool]
) -> tuple[int, int]:
    """(summed duration of flagged cues, total film dialogue time), both in ms.

    Total dialogue time is the end of the last cue.
    """
    flagged_ms = sum(cue.duration_ms for cue in doc.cues if flagger(cue))
    return flagged_ms, doc.dialogue_span_ms
