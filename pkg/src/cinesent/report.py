"""Report file writers.

Every file starts with (or contains) the run's provenance: config hash,
lexicon version, weights profile name and backend. CSVs carry it as a
leading ``#`` comment line; JSON files as a ``meta`` object. Floats are
written with ``repr`` so identical runs produce identical bytes.
"""
from __future__ import annotations

import csv
import json
from pathlib import Path

from .evaluation import MetricReport
from .scoring import SENTIMENT_LABELS


def write_json(path: str | Path, obj: dict) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(json.dumps(obj, indent=2, ensure_ascii=False) + "\n", encoding="utf-8")
    return path


def meta_line(meta: dict) -> str:
    parts = " ".join(f"{key}={meta[key]}" for key in sorted(meta))
    return f"# {parts}"


def _format_cell(value) -> str:
    if value is None:
        return ""
    if isinstance(value, float):
        return repr(value)
    return str(value)


def write_csv(path: str | Path, meta: dict, header: list[str], rows: list[list]) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with path.open("w", newline="", encoding="utf-8") as handle:
        handle.write(meta_line(meta) + "\n")
        writer = csv.writer(handle, lineterminator="\n")
        writer.writerow(header)
        for row in rows:
            writer.writerow([_format_cell(cell) for cell in row])
    return path


def write_metrics_csv(path: str | Path, task: str, loss: str,
                      metrics: MetricReport, meta: dict) -> Path:
    """One row in the report-table column order for the task."""
    model = f"tfidf_{loss}"
    if task == "sentiment":
        header = ["model", "subset_accuracy", "micro_precision", "micro_recall",
                  "micro_f1", "hamming_loss"]
        row = [model, *metrics.multilabel_row()]
    else:
        header = ["model", "accuracy", "precision", "recall", "f1"]
        row = [model, *metrics.binary_row()]
    return write_csv(path, meta, header, [row])


def _series_rows(series: dict) -> tuple[list[str], list[list]]:
    header = [*series["key_fields"], *series["value_fields"], "n"]
    rows = [[*row["key"], *row["values"], row["n"]] for row in series["rows"]]
    return header, rows


def export_bundle(bundle: dict, out_dir: str | Path) -> list[Path]:
    """Write the plot-ready CSV tables for a corpus or film bundle."""
    out_dir = Path(out_dir)
    meta = bundle["meta"]
    written: list[Path] = []

    if bundle["scope"] == "corpus":
        for panel, tables in bundle["ngram_tables"].items():
            stem = panel.replace("-", "_")
            for n, ranked in tables.items():
                rows = [[rank, text, count]
                        for rank, (text, count) in enumerate(ranked, start=1)]
                written.append(write_csv(
                    out_dir / f"ngrams_{stem}_{n}gram.csv", meta,
                    ["rank", "ngram", "count"], rows,
                ))
        emotion_rows = [
            [group, label, counts[position]]
            for group, counts in bundle["emotion_counts"].items()
            for position, label in enumerate(SENTIMENT_LABELS)
        ]
        written.append(write_csv(
            out_dir / "emotion_counts.csv", meta, ["group", "label", "count"], emotion_rows,
        ))
        matrix = bundle["cooccurrence"]
        written.append(write_csv(
            out_dir / "cooccurrence.csv", meta, ["label", *SENTIMENT_LABELS],
            [[label, *matrix[i]] for i, label in enumerate(SENTIMENT_LABELS)],
        ))
        written.append(write_csv(
            out_dir / "sentiment_decades.csv", meta,
            ["decade", "award_class", "mean", "std", "n"],
            [[r["decade"], r["award_class"], r["mean"], r["std"], r["n"]]
             for r in bundle["sentiment_decades"]],
        ))
        for name in ("abuse_trend", "abuse_probability", "normalized_abuse",
                     "words_per_decade", "time_per_decade"):
            header, rows = _series_rows(bundle[name])
            written.append(write_csv(out_dir / f"{name}.csv", meta, header, rows))
        return written

    film_id = bundle["film"]["film_id"]
    timeline_rows = [
        [w["start_minute"], w["cue_count"], w["mean_polarity"], w["abuse_count"],
         w["mean_abuse_probability"]]
        for w in bundle["timeline"]
    ]
    written.append(write_csv(
        out_dir / f"film_{film_id}_timeline.csv", meta,
        ["window_start_min", "cue_count", "mean_polarity", "abuse_count",
         "mean_abuse_probability"],
        timeline_rows,
    ))
    cue_rows = [
        [c["start_time"], c["end_time"], c["text"], c["sentiment"], c["abusive_level"]]
        for c in bundle["cues"]
    ]
    written.append(write_csv(
        out_dir / f"film_{film_id}_cues.csv", meta,
        ["Start Time", "End Time", "Text", "Sentiment", "Abusive Level"],
        cue_rows,
    ))
    return written
