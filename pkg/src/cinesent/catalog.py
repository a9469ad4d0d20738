"""Film catalog loading and genre merging.

The catalog is a CSV with header ``film_id,title,year,award_class,genres``
where ``genres`` holds 1-3 ordered IMDb genre names separated by ``|`` and
``award_class`` is ``oscar`` or ``blockbuster`` (case-insensitive). Raw
genres are reduced to four analysis categories by :func:`merge_genre`.
"""
from __future__ import annotations

import csv
import enum
import logging
from collections import Counter
from dataclasses import dataclass
from pathlib import Path
from typing import Iterable, Sequence

from .errors import CatalogError, DuplicateFilmIdError, UnmappedGenreError

logger = logging.getLogger(__name__)

YEAR_MIN = 1950
YEAR_MAX = 2024

CATALOG_HEADER = ["film_id", "title", "year", "award_class", "genres"]


class Genre(str, enum.Enum):
    ACTION = "Action"
    COMEDY = "Comedy"
    DRAMA = "Drama"
    THRILLER = "Thriller"


class AwardClass(str, enum.Enum):
    OSCAR = "Oscar"
    BLOCKBUSTER = "Blockbuster"


# Reduction of raw IMDb genre names to the four analysis categories:
# action/adventure/crime collapse into Action, horror/thriller into Thriller.
_GENRE_MAP = {
    "action": Genre.ACTION,
    "adventure": Genre.ACTION,
    "crime": Genre.ACTION,
    "horror": Genre.THRILLER,
    "thriller": Genre.THRILLER,
    "comedy": Genre.COMEDY,
    "drama": Genre.DRAMA,
}


def merge_genre(raw_genres: Sequence[str]) -> Genre:
    """Map an ordered raw genre list to one of the four categories.

    The first raw genre decides; a first genre outside the mapping falls
    through to the first subsequent genre that maps. Raises
    :class:`UnmappedGenreError` when nothing in the list maps.
    """
    if not raw_genres:
        raise UnmappedGenreError(raw_genres)
    for raw in raw_genres:
        mapped = _GENRE_MAP.get(raw.strip().lower())
        if mapped is not None:
            return mapped
    raise UnmappedGenreError(raw_genres)


@dataclass(frozen=True)
class FilmCatalogEntry:
    film_id: str
    title: str
    year: int
    award_class: AwardClass
    raw_genres: tuple[str, ...]
    genre: Genre

    def __post_init__(self):
        object.__setattr__(self, "raw_genres", tuple(self.raw_genres))
        if not YEAR_MIN <= self.year <= YEAR_MAX:
            raise ValueError(f"year {self.year} outside [{YEAR_MIN}, {YEAR_MAX}]")
        if self.genre != merge_genre(self.raw_genres):
            raise ValueError(f"genre {self.genre} does not match merge_genre({self.raw_genres})")

    @property
    def decade(self) -> int:
        return (self.year // 10) * 10


def _parse_row(row: dict, line_no: int) -> FilmCatalogEntry:
    film_id = (row.get("film_id") or "").strip()
    title = (row.get("title") or "").strip()
    if not film_id or not title:
        raise CatalogError(f"row {line_no}: film_id and title are required")
    try:
        year = int((row.get("year") or "").strip())
    except ValueError:
        raise CatalogError(f"row {line_no}: bad year {row.get('year')!r}") from None
    if not YEAR_MIN <= year <= YEAR_MAX:
        raise CatalogError(f"row {line_no}: year {year} outside [{YEAR_MIN}, {YEAR_MAX}]")

    award_raw = (row.get("award_class") or "").strip().lower()
    try:
        award = AwardClass[award_raw.upper()]
    except KeyError:
        raise CatalogError(f"row {line_no}: unknown award_class {row.get('award_class')!r}") from None

    genres = tuple(g.strip() for g in (row.get("genres") or "").split("|") if g.strip())
    if not 1 <= len(genres) <= 3:
        raise CatalogError(f"row {line_no}: expected 1-3 genres, got {len(genres)}")
    try:
        genre = merge_genre(genres)
    except UnmappedGenreError as exc:
        raise CatalogError(f"row {line_no}: {exc}") from None

    return FilmCatalogEntry(
        film_id=film_id, title=title, year=year, award_class=award,
        raw_genres=genres, genre=genre,
    )


def load_catalog(path: str | Path) -> list[FilmCatalogEntry]:
    """Load and validate the film catalog CSV.

    Raises :class:`CatalogError` on malformed rows and
    :class:`DuplicateFilmIdError` on repeated film ids.
    """
    path = Path(path)
    entries: list[FilmCatalogEntry] = []
    seen: set[str] = set()
    with path.open(newline="", encoding="utf-8") as handle:
        reader = csv.DictReader(handle)
        if reader.fieldnames is None or [f.strip() for f in reader.fieldnames] != CATALOG_HEADER:
            raise CatalogError(f"bad catalog header {reader.fieldnames!r}, expected {CATALOG_HEADER}")
        for line_no, row in enumerate(reader, start=2):
            entry = _parse_row(row, line_no)
            if entry.film_id in seen:
                raise DuplicateFilmIdError(entry.film_id)
            seen.add(entry.film_id)
            entries.append(entry)
    logger.info("loaded catalog %s: %d films", path.name, len(entries))
    return entries


def genre_counts(entries: Iterable[FilmCatalogEntry]) -> dict[Genre, int]:
    """Number of films per merged genre; absent genres count 0."""
    counts = Counter(entry.genre for entry in entries)
    return {genre: counts.get(genre, 0) for genre in Genre}
