"""Exception types shared across the package."""


class CinesentError(Exception):
    """Base class for all package errors."""


class SrtFormatError(CinesentError):
    """Non-empty subtitle input yielded zero well-formed cues."""


class CatalogError(CinesentError):
    """Malformed catalog file or row."""


class DuplicateFilmIdError(CatalogError):
    def __init__(self, film_id: str):
        super().__init__(f"duplicate film_id in catalog: {film_id!r}")
        self.film_id = film_id


class UnmappedGenreError(CinesentError):
    """No genre in the list maps to one of the four target genres."""

    def __init__(self, raw_genres):
        super().__init__(f"no mappable genre in {list(raw_genres)!r}")
        self.raw_genres = list(raw_genres)


class EmptySelectionError(CinesentError):
    """A corpus selection (era, group) matched no films."""


class TrainingDivergedError(CinesentError):
    """Training produced a non-finite loss."""

    def __init__(self, epoch: int):
        super().__init__(f"non-finite training loss at epoch {epoch}")
        self.epoch = epoch


class UnsupportedForLossError(CinesentError):
    """Operation not defined for the model's loss kind (e.g. probabilities of a hinge model)."""


class NoScoredContentError(CinesentError):
    """A film has no scored cues to aggregate."""


class UnknownFilmError(CinesentError):
    """A film id was requested that the corpus does not contain."""


class TransportError(CinesentError):
    """Inference service unreachable or timed out."""

    def __init__(self, message: str, batch_span=None):
        super().__init__(message)
        self.batch_span = batch_span


class ProtocolError(CinesentError):
    """Inference service returned a malformed or out-of-contract response."""


class ConfigError(CinesentError):
    """Invalid or incomplete run configuration."""
