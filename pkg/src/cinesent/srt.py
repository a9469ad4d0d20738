"""SRT subtitle parsing and canonical serialization.

Real subtitle files are noisy, so the parser skips malformed cue blocks
instead of aborting, and reports what it skipped. Formatting tags like
``<i>...</i>`` and ``{\\an8}`` are stripped because downstream analysis
works on words only.
"""
from __future__ import annotations

import logging
import re
from dataclasses import dataclass, field
from typing import IO

from .errors import SrtFormatError

logger = logging.getLogger(__name__)

_TIME_LINE = re.compile(
    r"^(\d{2,}):([0-5]\d):([0-5]\d),(\d{3})\s*-->\s*(\d{2,}):([0-5]\d):([0-5]\d),(\d{3})$"
)
_TAG = re.compile(r"<[^<>]*>|\{[^{}]*\}")


def timestamp_to_ms(h: int, m: int, s: int, ms: int) -> int:
    return ((h * 60 + m) * 60 + s) * 1000 + ms


def ms_to_timestamp(total_ms: int) -> str:
    """Format milliseconds as ``HH:MM:SS,mmm`` (comma separator, 3 digits)."""
    if total_ms < 0:
        raise ValueError("negative timestamp")
    s, ms = divmod(total_ms, 1000)
    m, s = divmod(s, 60)
    h, m = divmod(m, 60)
    return f"{h:02d}:{m:02d}:{s:02d},{ms:03d}"


@dataclass(frozen=True)
class SubtitleCue:
    """One timed subtitle block (an utterance span)."""

    index: int
    start_ms: int
    end_ms: int
    lines: tuple[str, ...]

    def __post_init__(self):
        object.__setattr__(self, "lines", tuple(self.lines))
        if self.index < 1:
            raise ValueError(f"cue index must be >= 1, got {self.index}")
        if not self.start_ms < self.end_ms:
            raise ValueError(f"cue start {self.start_ms} must precede end {self.end_ms}")
        if not self.lines or any(not line.strip() for line in self.lines):
            raise ValueError("cue lines must be non-empty after trimming")

    @property
    def duration_ms(self) -> int:
        return self.end_ms - self.start_ms

    @property
    def text(self) -> str:
        """All lines joined with single spaces."""
        return " ".join(self.lines)


@dataclass(frozen=True)
class SubtitleDocument:
    """Ordered timed dialogue cues for one film."""

    film_id: str
    cues: tuple[SubtitleCue, ...]

    def __post_init__(self):
        object.__setattr__(self, "cues", tuple(self.cues))

    @property
    def dialogue_span_ms(self) -> int:
        """End of the last cue; 0 for an empty document."""
        return self.cues[-1].end_ms if self.cues else 0


@dataclass
class ParseReport:
    """What the parser skipped or fixed up."""

    skipped_blocks: int = 0
    warnings: list[str] = field(default_factory=list)

    @property
    def clean(self) -> bool:
        return self.skipped_blocks == 0 and not self.warnings


def _parse_block(block_lines: list[str]) -> SubtitleCue:
    if len(block_lines) < 3:
        raise ValueError("cue block needs index, time line and text")
    if not block_lines[0].strip().isdigit():
        raise ValueError(f"bad cue index line: {block_lines[0]!r}")
    index = int(block_lines[0])
    match = _TIME_LINE.match(block_lines[1].strip())
    if match is None:
        raise ValueError(f"bad time line: {block_lines[1]!r}")
    parts = [int(g) for g in match.groups()]
    start_ms = timestamp_to_ms(*parts[:4])
    end_ms = timestamp_to_ms(*parts[4:])
    lines = []
    for raw_line in block_lines[2:]:
        line = _TAG.sub("", raw_line).strip()
        if line:
            lines.append(line)
    if not lines:
        raise ValueError("cue has no text after tag stripping")
    return SubtitleCue(index=index, start_ms=start_ms, end_ms=end_ms, lines=tuple(lines))


def parse_srt(raw: str | IO[str], film_id: str = "") -> tuple[SubtitleDocument, ParseReport]:
    """Parse SRT text (or a text stream) into a document plus a parse report.

    Malformed blocks are skipped and counted; cues are re-sorted by start time
    (stable) when the file is out of order. Raises :class:`SrtFormatError` if
    non-empty input produces zero well-formed cues.
    """
    text = raw.read() if hasattr(raw, "read") else raw
    text = text.lstrip("﻿").replace("\r\n", "\n").replace("\r", "\n")
    report = ParseReport()
    if not text.strip():
        return SubtitleDocument(film_id=film_id, cues=()), report

    cues = []
    for block in re.split(r"\n\s*\n", text):
        block_lines = [line for line in block.split("\n") if line.strip()]
        if not block_lines:
            continue
        try:
            cues.append(_parse_block(block_lines))
        except ValueError as exc:
            report.skipped_blocks += 1
            report.warnings.append(f"skipped block: {exc}")
            logger.warning("skipped malformed SRT block (%s): %s", film_id or "<anon>", exc)

    if not cues:
        raise SrtFormatError(f"no well-formed cues in non-empty input ({film_id or '<anon>'})")

    if any(a.start_ms > b.start_ms for a, b in zip(cues, cues[1:])):
        cues.sort(key=lambda cue: cue.start_ms)  # stable for equal starts
        report.warnings.append("cues were out of order and re-sorted by start time")

    return SubtitleDocument(film_id=film_id, cues=tuple(cues)), report


def serialize_srt(doc: SubtitleDocument) -> str:
    """Emit canonical SRT text; inverse of :func:`parse_srt` on valid documents."""
    if not doc.cues:
        return ""
    blocks = []
    for cue in doc.cues:
        time_line = f"{ms_to_timestamp(cue.start_ms)} --> {ms_to_timestamp(cue.end_ms)}"
        blocks.append("\n".join((str(cue.index), time_line, *cue.lines)))
    return "\n\n".join(blocks) + "\n"
