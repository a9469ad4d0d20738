"""End-to-end pipeline stages behind the CLI commands.

``ingest`` parses every catalogued subtitle file, ``train_task`` runs the
split / vectorize / train / evaluate protocol for one task, and the two
``analyze_*`` functions assemble the corpus-level and per-film report
bundles. All randomness flows from the run config's single seed, and the
bundles are plain JSON-ready dicts so re-running with identical inputs
reproduces identical bytes.
"""
from __future__ import annotations

import csv
import logging
from dataclasses import dataclass
from datetime import datetime, timezone
from pathlib import Path

import numpy as np

from . import linear, ngrams, tfidf
from .catalog import FilmCatalogEntry, Genre, genre_counts, load_catalog
from .client import BackendMode, InferenceClient, NativeModels
from .config import RunConfig
from .errors import (
    CinesentError,
    ConfigError,
    NoScoredContentError,
    SrtFormatError,
    UnknownFilmError,
)
from .evaluation import (
    MetricReport,
    compute_binary_metrics,
    compute_multilabel_metrics,
    iterative_stratified_split,
    stratified_binary_split,
)
from .lexicon import AbuseLexicon, builtin_lexicon, count_abusive, load_lexicon
from .scoring import (
    SENTIMENT_LABELS,
    SentimentWeights,
    builtin_weights,
    canonical_label,
    decade_average,
    load_weights,
    weighted_score,
)
from .srt import ParseReport, SubtitleDocument, ms_to_timestamp, parse_srt
from .textprep import (
    StopwordSet,
    builtin_stopwords,
    clean_text,
    load_stopwords,
    remove_stopwords,
    tokenize,
)
from .timeline import abusive_level, film_timeline
from .trends import (
    TrendSeries,
    abuse_probability_by_year,
    abuse_trend,
    cooccurrence,
    emotion_counts,
    normalized_abuse_by_genre,
    time_per_decade,
    words_per_decade,
)

logger = logging.getLogger(__name__)

ERA_PANELS = ((1950, 1969), (1970, 1989), (1990, 2009), (2010, 2024))
TOP_K = 10

SENTIMENT_DATA_HEADER = ("text",) + SENTIMENT_LABELS
ABUSE_DATA_HEADER = ("text", "abusive")


@dataclass
class RunResources:
    """Profiles and dictionaries resolved from a run config."""

    ngram_stopwords: StopwordSet
    classify_stopwords: StopwordSet | None
    lexicon: AbuseLexicon
    weights: SentimentWeights

    def classify_tokens(self, cleaned: str) -> list[str]:
        tokens = tokenize(cleaned)
        if self.classify_stopwords is not None:
            tokens = remove_stopwords(tokens, self.classify_stopwords)
        return tokens

    def ngram_tokens(self, cleaned: str) -> list[str]:
        return remove_stopwords(tokenize(cleaned), self.ngram_stopwords)


def load_resources(config: RunConfig) -> RunResources:
    ngram_profile = (
        load_stopwords(config.stopwords_ngram, "ngram")
        if config.stopwords_ngram else builtin_stopwords("ngram")
    )
    classify_profile = (
        load_stopwords(config.stopwords_classify, "classify")
        if config.stopwords_classify else None
    )
    lexicon = load_lexicon(config.lexicon) if config.lexicon else builtin_lexicon()
    weights = load_weights(config.weights) if config.weights else builtin_weights()
    return RunResources(
        ngram_stopwords=ngram_profile,
        classify_stopwords=classify_profile,
        lexicon=lexicon,
        weights=weights,
    )


def run_meta(config: RunConfig, resources: RunResources) -> dict:
    """The provenance block embedded in every output file."""
    return {
        "config_hash": config.config_hash,
        "lexicon_version": resources.lexicon.version,
        "weights_profile": resources.weights.name,
        "backend": config.backend.value,
    }


# -- corpus loading ------------------------------------------------------


@dataclass
class ParsedFilm:
    entry: FilmCatalogEntry
    doc: SubtitleDocument
    report: ParseReport


def load_corpus(config: RunConfig) -> tuple[list[ParsedFilm], list[str], list[str]]:
    """Parse every catalogued subtitle file under the corpus root.

    Returns (films sorted by film id, catalog ids with no subtitle file,
    subtitle files with no catalog row). Mismatches are reported, not fatal.
    """
    entries = load_catalog(config.catalog)
    films: list[ParsedFilm] = []
    missing: list[str] = []
    for entry in sorted(entries, key=lambda e: e.film_id):
        srt_path = config.corpus_root / f"{entry.film_id}.srt"
        if not srt_path.is_file():
            missing.append(entry.film_id)
            continue
        try:
            with srt_path.open(encoding="utf-8-sig") as handle:
                doc, report = parse_srt(handle, film_id=entry.film_id)
        except SrtFormatError as exc:
            missing.append(entry.film_id)
            logger.warning("unparseable subtitle file for %s: %s", entry.film_id, exc)
            continue
        films.append(ParsedFilm(entry=entry, doc=doc, report=report))

    known = {entry.film_id for entry in entries}
    orphans = sorted(
        path.stem for path in config.corpus_root.glob("*.srt") if path.stem not in known
    )
    return films, missing, orphans


def ingest(config: RunConfig, resources: RunResources) -> dict:
    """Build the corpus manifest: films parsed, cue counts, parse warnings."""
    films, missing, orphans = load_corpus(config)
    manifest = {
        "generated_at": datetime.now(timezone.utc).isoformat(),
        "meta": run_meta(config, resources),
        "film_count": len(films),
        "films": [
            {
                "film_id": film.entry.film_id,
                "title": film.entry.title,
                "year": film.entry.year,
                "award_class": film.entry.award_class.value,
                "genre": film.entry.genre.value,
                "cue_count": len(film.doc.cues),
                "skipped_blocks": film.report.skipped_blocks,
                "warnings": film.report.warnings,
            }
            for film in films
        ],
        "missing_subtitles": missing,
        "orphan_files": orphans,
        "genre_counts": {
            genre.value: count
            for genre, count in genre_counts(f.entry for f in films).items()
        },
    }
    return manifest


# -- training ------------------------------------------------------------


def load_sentiment_dataset(path: str | Path) -> tuple[list[str], np.ndarray]:
    """CSV with a text column and the ten label columns (aliases accepted)."""
    texts, rows = _read_labeled_csv(path, n_label_columns=len(SENTIMENT_LABELS))
    return texts, rows


def load_abuse_dataset(path: str | Path) -> tuple[list[str], np.ndarray]:
    """CSV with a text column and one binary ``abusive`` column."""
    texts, rows = _read_labeled_csv(path, n_label_columns=1)
    return texts, rows[:, 0]


def _read_labeled_csv(path: str | Path, n_label_columns: int):
    path = Path(path)
    with path.open(newline="", encoding="utf-8") as handle:
        reader = csv.reader(handle)
        header = next(reader, None)
        if header is None or header[0].strip().lower() != "text":
            raise CinesentError(f"{path}: expected a 'text' first column")
        label_names = [cell.strip() for cell in header[1:]]
        if n_label_columns == len(SENTIMENT_LABELS):
            resolved = [canonical_label(name) for name in label_names]
            if tuple(resolved) != SENTIMENT_LABELS:
                raise CinesentError(
                    f"{path}: label columns must follow the canonical order, got {label_names}"
                )
        elif len(label_names) != n_label_columns:
            raise CinesentError(f"{path}: expected {n_label_columns} label column(s)")
        texts: list[str] = []
        values: list[list[int]] = []
        for line_no, row in enumerate(reader, start=2):
            if not row:
                continue
            if len(row) != 1 + n_label_columns:
                raise CinesentError(f"{path}:{line_no}: wrong column count")
            texts.append(row[0])
            try:
                labels = [int(cell) for cell in row[1:]]
            except ValueError:
                raise CinesentError(f"{path}:{line_no}: labels must be 0/1") from None
            if any(v not in (0, 1) for v in labels):
                raise CinesentError(f"{path}:{line_no}: labels must be 0/1")
            values.append(labels)
    if not texts:
        raise CinesentError(f"{path}: dataset has no rows")
    return texts, np.asarray(values, dtype=np.int64)


@dataclass
class TrainResult:
    model_path: Path
    vocab_path: Path
    report_json: Path
    report_csv: Path
    metrics: MetricReport


def train_task(
    config: RunConfig,
    resources: RunResources,
    task: str,
    data_path: str | Path,
    loss: str = linear.LOSS_LOGISTIC,
    train_config: linear.TrainConfig | None = None,
) -> TrainResult:
    """Split, vectorize, train and evaluate one task; persist model and report."""
    if task == "sentiment":
        texts, Y = load_sentiment_dataset(data_path)
    elif task == "abuse":
        texts, Y = load_abuse_dataset(data_path)
    else:
        raise ConfigError(f"task must be sentiment or abuse, got {task!r}")

    token_lists = [resources.classify_tokens(clean_text(text)) for text in texts]
    if task == "sentiment":
        split = iterative_stratified_split(Y, seed=config.seed)
    else:
        split = stratified_binary_split(Y, seed=config.seed)

    vocab = tfidf.fit_vocabulary([token_lists[i] for i in split.train])
    X_train = tfidf.transform_many([token_lists[i] for i in split.train], vocab)
    X_test = tfidf.transform_many([token_lists[i] for i in split.test], vocab)
    Y_train, Y_test = Y[split.train], Y[split.test]

    if train_config is None:
        train_config = linear.TrainConfig(seed=config.seed)
    model = linear.train(X_train, Y_train, loss, train_config)

    if loss == linear.LOSS_LOGISTIC:
        predictions = linear.predict_labels_many(model, X_test, threshold=config.threshold)
    else:
        predictions = linear.predict_labels_many(model, X_test)
    if task == "sentiment":
        metrics = compute_multilabel_metrics(Y_test, predictions)
    else:
        metrics = compute_binary_metrics(Y_test, predictions[:, 0])

    meta = run_meta(config, resources)
    config.models_dir.mkdir(parents=True, exist_ok=True)
    config.reports_dir.mkdir(parents=True, exist_ok=True)
    model_path = config.models_dir / f"{task}.model.txt"
    vocab_path = config.models_dir / f"{task}.vocab.tsv"
    linear.save_model(model, model_path, meta=meta)
    tfidf.save_vocabulary(vocab, vocab_path, meta=meta)

    report = {
        "meta": meta,
        "task": task,
        "loss": loss,
        "seed": config.seed,
        "split_sizes": {
            "train": int(len(split.train)),
            "validation": int(len(split.validation)),
            "test": int(len(split.test)),
        },
        "metrics": metrics.to_dict(),
    }
    report_json = config.reports_dir / f"metrics_{task}.json"
    report_csv = config.reports_dir / f"metrics_{task}.csv"
    from .report import write_json, write_metrics_csv

    write_json(report_json, report)
    write_metrics_csv(report_csv, task, loss, metrics, meta)
    return TrainResult(model_path, vocab_path, report_json, report_csv, metrics)


# -- analysis ------------------------------------------------------------


def build_client(config: RunConfig, resources: RunResources,
                 transport=None) -> InferenceClient:
    """Native backends load the trained models from the run's output dir."""
    native = None
    if config.backend in (BackendMode.NATIVE, BackendMode.REMOTE_WITH_FALLBACK):
        native = NativeModels(
            sentiment_model=linear.load_model(config.models_dir / "sentiment.model.txt"),
            sentiment_vocab=tfidf.load_vocabulary(config.models_dir / "sentiment.vocab.tsv"),
            abuse_model=linear.load_model(config.models_dir / "abuse.model.txt"),
            abuse_vocab=tfidf.load_vocabulary(config.models_dir / "abuse.vocab.tsv"),
            tokenizer=resources.classify_tokens,
        )
    return InferenceClient(config.backend_selection(), native=native, transport=transport)


@dataclass
class ScoredFilm:
    film: ParsedFilm
    scored_cues: list[int]
    sentiment_probs: list[list[float]]
    abuse_probs: list[float]
    abusive_count: int
    total_tokens: int
    lexicon_flags: list[bool]

    @property
    def entry(self) -> FilmCatalogEntry:
        return self.film.entry


def score_film(film: ParsedFilm, client: InferenceClient,
               resources: RunResources) -> ScoredFilm:
    """Classify a film's cues and count its lexicon hits."""
    cleaned = [clean_text(cue.text) for cue in film.doc.cues]
    scored = [i for i, text in enumerate(cleaned) if text]
    texts = [cleaned[i] for i in scored]
    if texts:
        sentiment = client.classify_sentiment_batch(texts)
        abuse = client.classify_abuse_batch(texts)
    else:
        sentiment, abuse = [], []

    abusive_count = 0
    total_tokens = 0
    lexicon_flags = []
    for text in cleaned:
        hits, total = count_abusive(tokenize(text), resources.lexicon)
        abusive_count += hits
        total_tokens += total
        lexicon_flags.append(hits > 0)

    return ScoredFilm(
        film=film,
        scored_cues=scored,
        sentiment_probs=sentiment,
        abuse_probs=[p for p, _ in abuse],
        abusive_count=abusive_count,
        total_tokens=total_tokens,
        lexicon_flags=lexicon_flags,
    )


def _film_label_set(scored: ScoredFilm, threshold: float) -> list[int]:
    labels = [0] * len(SENTIMENT_LABELS)
    for probs in scored.sentiment_probs:
        for position, p in enumerate(probs):
            if p >= threshold:
                labels[position] = 1
    return labels


def _film_polarity(scored: ScoredFilm, weights: SentimentWeights) -> float | None:
    if not scored.sentiment_probs:
        return None
    values = [weighted_score(probs, weights).score for probs in scored.sentiment_probs]
    return sum(values) / len(values)


def _film_mean_abuse(scored: ScoredFilm) -> float | None:
    if not scored.abuse_probs:
        return None
    return sum(scored.abuse_probs) / len(scored.abuse_probs)


def _abusive_time_ms(scored: ScoredFilm, flagger: str, threshold: float = 0.5) -> int:
    doc = scored.film.doc
    if flagger == "classifier":
        positive = {
            cue_index
            for cue_index, p in zip(scored.scored_cues, scored.abuse_probs)
            if p >= threshold
        }
        return sum(cue.duration_ms for i, cue in enumerate(doc.cues) if i in positive)
    return sum(
        cue.duration_ms for cue, hit in zip(doc.cues, scored.lexicon_flags) if hit
    )


def _series_dict(series: TrendSeries) -> dict:
    return {
        "key_fields": list(series.key_fields),
        "value_fields": list(series.value_fields),
        "rows": [
            {"key": list(row.key), "values": list(row.values), "n": row.n}
            for row in series.rows
        ],
    }


def analyze_corpus(config: RunConfig, resources: RunResources,
                   client: InferenceClient) -> dict:
    """Corpus-scope report bundle: n-gram era tables, emotion counts,
    co-occurrence and all longitudinal trend series."""
    films, missing, orphans = load_corpus(config)
    if not films:
        raise CinesentError("no films to analyze; run ingest and check the corpus root")

    scored_films = [
        score_film(film, client, resources) for film in films
    ]

    ngram_tables: dict[str, dict[str, list]] = {}
    film_ngram_tokens = [
        (
            film.entry.year,
            [resources.ngram_tokens(clean_text(cue.text)) for cue in film.doc.cues],
        )
        for film in films
    ]
    for first, last in ERA_PANELS:
        era_films = [(year, cues) for year, cues in film_ngram_tokens if first <= year <= last]
        if not era_films:
            continue
        panel = f"{first}-{last}"
        ngram_tables[panel] = {
            str(n): [[text, count] for text, count in ngrams.era_table(era_films, (first, last), n, TOP_K)]
            for n in (2, 3)
        }

    label_sets = [_film_label_set(s, config.threshold) for s in scored_films]
    genres = [s.entry.genre.value for s in scored_films]
    counts_by_group = emotion_counts(
        label_sets, genres, allowed_groups=[g.value for g in Genre]
    )
    counts_corpus = emotion_counts(label_sets)["corpus"] if label_sets else None

    polarity_records = []
    probability_records = []
    for s in scored_films:
        polarity = _film_polarity(s, resources.weights)
        if polarity is not None:
            polarity_records.append((s.entry.year, s.entry.award_class.value, polarity))
        mean_abuse = _film_mean_abuse(s)
        if mean_abuse is not None:
            probability_records.append((s.entry.year, s.entry.award_class.value, mean_abuse))

    decade_stats = decade_average(polarity_records)
    sentiment_decades = [
        {
            "decade": decade,
            "award_class": award,
            "mean": stats.mean,
            "std": stats.std,
            "n": stats.n,
        }
        for (decade, award), stats in sorted(decade_stats.items())
    ]

    bundle = {
        "meta": run_meta(config, resources),
        "scope": "corpus",
        "film_count": len(films),
        "missing_subtitles": missing,
        "orphan_files": orphans,
        "films": [
            {
                "film_id": s.entry.film_id,
                "title": s.entry.title,
                "year": s.entry.year,
                "decade": s.entry.decade,
                "award_class": s.entry.award_class.value,
                "genre": s.entry.genre.value,
                "cue_count": len(s.film.doc.cues),
                "scored_cues": len(s.scored_cues),
                "abusive_count": s.abusive_count,
                "total_tokens": s.total_tokens,
                "polarity": _film_polarity(s, resources.weights),
                "mean_abuse_probability": _film_mean_abuse(s),
                "label_set": _film_label_set(s, config.threshold),
                "abusive_time_ms": _abusive_time_ms(s, config.time_flagger),
                "dialogue_time_ms": s.film.doc.dialogue_span_ms,
            }
            for s in scored_films
        ],
        "ngram_tables": ngram_tables,
        "emotion_counts": {
            "corpus": counts_corpus.tolist() if counts_corpus is not None else [],
            **{
                group: counts_by_group[group].tolist()
                for group in sorted(counts_by_group)
            },
        },
        "cooccurrence": cooccurrence(label_sets).tolist(),
        "sentiment_decades": sentiment_decades,
        "abuse_trend": _series_dict(abuse_trend(
            (s.entry.year, s.entry.award_class.value, s.abusive_count) for s in scored_films
        )),
        "abuse_probability": _series_dict(abuse_probability_by_year(probability_records)),
        "normalized_abuse": _series_dict(normalized_abuse_by_genre(
            (s.entry.genre.value, s.entry.year, s.abusive_count, s.total_tokens)
            for s in scored_films
        )),
        "words_per_decade": _series_dict(words_per_decade(
            (s.entry.year, s.abusive_count, s.total_tokens) for s in scored_films
        )),
        "time_per_decade": _series_dict(time_per_decade(
            (s.entry.year, _abusive_time_ms(s, config.time_flagger), s.film.doc.dialogue_span_ms)
            for s in scored_films
        )),
    }
    if client.events:
        bundle["client_events"] = client.events
    return bundle


def analyze_film(config: RunConfig, resources: RunResources,
                 client: InferenceClient, film_id: str) -> dict:
    """Film-scope bundle: the windowed timeline plus a per-cue table in the
    Start Time / End Time / Text / Sentiment / Abusive Level schema."""
    films, _, _ = load_corpus(config)
    by_id = {film.entry.film_id: film for film in films}
    if film_id not in by_id:
        raise UnknownFilmError(f"unknown film id {film_id!r}")
    film = by_id[film_id]
    scored = score_film(film, client, resources)
    if not scored.scored_cues:
        raise NoScoredContentError(f"film {film_id!r} has no scoreable cues")

    scored_doc = SubtitleDocument(
        film_id=film_id,
        cues=tuple(film.doc.cues[i] for i in scored.scored_cues),
    )
    polarities = [
        weighted_score(probs, resources.weights).score for probs in scored.sentiment_probs
    ]
    timeline = film_timeline(
        scored_doc, polarities, scored.abuse_probs, config.window_minutes
    )

    cue_rows = []
    for cue, probs, polarity, abuse_p in zip(
        scored_doc.cues, scored.sentiment_probs, polarities, scored.abuse_probs
    ):
        cue_rows.append({
            "start_time": ms_to_timestamp(cue.start_ms),
            "end_time": ms_to_timestamp(cue.end_ms),
            "text": cue.text,
            "sentiment": weighted_score(probs, resources.weights).sign.value,
            "abusive_level": abusive_level(abuse_p).value,
            "polarity": polarity,
            "abuse_probability": abuse_p,
            "sentiment_probs": probs,
        })

    bundle = {
        "meta": run_meta(config, resources),
        "scope": "film",
        "film": {
            "film_id": film.entry.film_id,
            "title": film.entry.title,
            "year": film.entry.year,
            "award_class": film.entry.award_class.value,
            "genre": film.entry.genre.value,
            "cue_count": len(film.doc.cues),
            "scored_cues": len(scored.scored_cues),
        },
        "window_minutes": timeline.window_minutes,
        "timeline": [
            {
                "start_minute": w.start_minute,
                "cue_count": w.cue_count,
                "mean_polarity": w.mean_polarity,
                "abuse_count": w.abuse_count,
                "mean_abuse_probability": w.mean_abuse_probability,
            }
            for w in timeline.windows
        ],
        "cues": cue_rows,
    }
    if client.events:
        bundle["client_events"] = client.events
    return bundle
