"""Per-film windowed polarity/abuse series and cue-level abusive levels.

Films are cut into contiguous fixed-length windows (default 5 minutes) from
time zero; every cue lands in the window containing its start time. Empty
windows are kept, with absent polarity, so series across films align.

Abusive levels bucket a cue's abuse-positive probability into equal
tertiles: Low below 1/3, Medium from 1/3 to 2/3, High from 2/3 up.
"""
from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from typing import Sequence

from .errors import NoScoredContentError
from .srt import SubtitleDocument

DEFAULT_WINDOW_MINUTES = 5
ABUSE_POSITIVE_THRESHOLD = 0.5

_MS_PER_MINUTE = 60_000


class AbusiveLevel(str, enum.Enum):
    LOW = "Low"
    MEDIUM = "Medium"
    HIGH = "High"


def abusive_level(p: float) -> AbusiveLevel:
    """Tertile bucket of an abuse-positive probability."""
    if not 0.0 <= p <= 1.0:
        raise ValueError(f"probability {p} outside [0, 1]")
    if p >= 2.0 / 3.0:
        return AbusiveLevel.HIGH
    if p >= 1.0 / 3.0:
        return AbusiveLevel.MEDIUM
    return AbusiveLevel.LOW


@dataclass(frozen=True)
class TimelineWindow:
    start_minute: int
    cue_count: int
    mean_polarity: float | None
    abuse_count: int
    mean_abuse_probability: float | None


@dataclass(frozen=True)
class TimelineSeries:
    window_minutes: int
    windows: tuple[TimelineWindow, ...]

    @property
    def total_cues(self) -> int:
        return sum(window.cue_count for window in self.windows)


def film_timeline(
    doc: SubtitleDocument,
    cue_polarity: Sequence[float],
    cue_abuse: Sequence[float],
    window_minutes: int = DEFAULT_WINDOW_MINUTES,
) -> TimelineSeries:
    """Windowed mean polarity and abuse statistics for one film.

    ``cue_polarity`` and ``cue_abuse`` parallel ``doc.cues``. A window's
    abuse_count is the number of member cues whose probability is at least
    0.5.
    """
    if window_minutes < 1:
        raise ValueError("window_minutes must be >= 1")
    if not doc.cues:
        raise NoScoredContentError(f"film {doc.film_id!r} has no cues")
    if len(cue_polarity) != len(doc.cues) or len(cue_abuse) != len(doc.cues):
        raise ValueError("per-cue series must parallel the document's cues")

    window_ms = window_minutes * _MS_PER_MINUTE
    n_windows = math.ceil(doc.dialogue_span_ms / window_ms)
    polarity: list[list[float]] = [[] for _ in range(n_windows)]
    abuse: list[list[float]] = [[] for _ in range(n_windows)]
    for cue, pol, prob in zip(doc.cues, cue_polarity, cue_abuse):
        slot = cue.start_ms // window_ms
        polarity[slot].append(pol)
        abuse[slot].append(prob)

    windows = []
    for slot in range(n_windows):
        members = polarity[slot]
        probs = abuse[slot]
        windows.append(
            TimelineWindow(
                start_minute=slot * window_minutes,
                cue_count=len(members),
                mean_polarity=sum(members) / len(members) if members else None,
                abuse_count=sum(1 for p in probs if p >= ABUSE_POSITIVE_THRESHOLD),
                mean_abuse_probability=sum(probs) / len(probs) if probs else None,
            )
        )
    return TimelineSeries(window_minutes=window_minutes, windows=tuple(windows))


def timeline_csv_rows(series: TimelineSeries) -> list[list[str]]:
    """Header plus one row per window; absent values serialize as empty fields."""
    rows = [["window_start_min", "cue_count", "mean_polarity", "abuse_count",
             "mean_abuse_probability"]]
    for window in series.windows:
        rows.append([
            str(window.start_minute),
            str(window.cue_count),
            repr(window.mean_polarity) if window.mean_polarity is not None else "",
            str(window.abuse_count),
            repr(window.mean_abuse_probability) if window.mean_abuse_probability is not None else "",
        ])
    return rows
