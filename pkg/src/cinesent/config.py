"""Run configuration: a flat ``key=value`` file.

Relative paths resolve against the config file's directory. The SHA-256 of
the raw file bytes becomes the run's config hash, which every output file
embeds, so reports are traceable to the exact configuration that produced
them.
"""
from __future__ import annotations

import hashlib
from dataclasses import dataclass
from pathlib import Path

from .client import BackendMode, BackendSelection
from .errors import ConfigError

_PATH_KEYS = (
    "corpus_root",
    "catalog",
    "output_dir",
    "stopwords_ngram",
    "stopwords_classify",
    "lexicon",
    "weights",
)
_KNOWN_KEYS = _PATH_KEYS + (
    "seed",
    "backend",
    "endpoint",
    "timeout_ms",
    "max_batch_size",
    "window_minutes",
    "threshold",
    "time_flagger",
)

# corpus_root and catalog must exist when the config is loaded; the other
# path keys are optional overrides of bundled defaults.
_REQUIRED_KEYS = ("corpus_root", "catalog", "output_dir")


@dataclass(frozen=True)
class RunConfig:
    corpus_root: Path
    catalog: Path
    output_dir: Path
    seed: int = 42
    backend: BackendMode = BackendMode.NATIVE
    endpoint: str = ""
    timeout_ms: int = 10_000
    max_batch_size: int = 64
    stopwords_ngram: Path | None = None
    stopwords_classify: Path | None = None
    lexicon: Path | None = None
    weights: Path | None = None
    window_minutes: int = 5
    threshold: float = 0.5
    time_flagger: str = "lexicon"
    config_hash: str = "unhashed"

    def backend_selection(self) -> BackendSelection:
        return BackendSelection(
            mode=self.backend,
            endpoint=self.endpoint,
            timeout_ms=self.timeout_ms,
            max_batch_size=self.max_batch_size,
        )

    @property
    def models_dir(self) -> Path:
        return self.output_dir / "models"

    @property
    def reports_dir(self) -> Path:
        return self.output_dir / "reports"

    @property
    def analysis_dir(self) -> Path:
        return self.output_dir / "analysis"


def _parse_items(text: str, source: str) -> dict[str, str]:
    items: dict[str, str] = {}
    for line_no, raw_line in enumerate(text.splitlines(), start=1):
        line = raw_line.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(f"{source}:{line_no}: expected key=value, got {raw_line!r}")
        key, value = (part.strip() for part in line.split("=", 1))
        if key not in _KNOWN_KEYS:
            raise ConfigError(f"{source}:{line_no}: unknown key {key!r}")
        if key in items:
            raise ConfigError(f"{source}:{line_no}: duplicate key {key!r}")
        items[key] = value
    return items


def load_config(path: str | Path) -> RunConfig:
    path = Path(path)
    try:
        raw = path.read_bytes()
    except OSError as exc:
        raise ConfigError(f"cannot read config {path}: {exc}") from exc
    items = _parse_items(raw.decode("utf-8"), str(path))

    for key in _REQUIRED_KEYS:
        if key not in items:
            raise ConfigError(f"{path}: missing required key {key!r}")

    base = path.parent

    def resolve(key: str) -> Path | None:
        value = items.get(key)
        return (base / value).resolve() if value else None

    config = RunConfig(
        corpus_root=resolve("corpus_root"),
        catalog=resolve("catalog"),
        output_dir=resolve("output_dir"),
        seed=int(items.get("seed", "42")),
        backend=_parse_backend(items.get("backend", "native"), path),
        endpoint=items.get("endpoint", ""),
        timeout_ms=int(items.get("timeout_ms", "10000")),
        max_batch_size=int(items.get("max_batch_size", "64")),
        stopwords_ngram=resolve("stopwords_ngram"),
        stopwords_classify=resolve("stopwords_classify"),
        lexicon=resolve("lexicon"),
        weights=resolve("weights"),
        window_minutes=int(items.get("window_minutes", "5")),
        threshold=float(items.get("threshold", "0.5")),
        time_flagger=items.get("time_flagger", "lexicon"),
        config_hash=hashlib.sha256(raw).hexdigest()[:16],
    )
    _check_paths(config)
    return config


def _parse_backend(value: str, source: Path) -> BackendMode:
    try:
        return BackendMode(value)
    except ValueError:
        modes = ", ".join(mode.value for mode in BackendMode)
        raise ConfigError(f"{source}: backend must be one of {modes}, got {value!r}") from None


def _check_paths(config: RunConfig) -> None:
    if not config.corpus_root.is_dir():
        raise ConfigError(f"corpus_root {config.corpus_root} is not a directory")
    if not config.catalog.is_file():
        raise ConfigError(f"catalog {config.catalog} does not exist")
    for name in ("stopwords_ngram", "stopwords_classify", "lexicon", "weights"):
        value = getattr(config, name)
        if value is not None and not value.is_file():
            raise ConfigError(f"{name} {value} does not exist")
    if not 0.0 < config.threshold < 1.0:
        raise ConfigError(f"threshold must be in (0, 1), got {config.threshold}")
    if config.window_minutes < 1:
        raise ConfigError("window_minutes must be >= 1")
    if config.time_flagger not in ("lexicon", "classifier"):
        raise ConfigError(f"time_flagger must be lexicon or classifier, got {config.time_flagger!r}")
