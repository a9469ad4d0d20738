"""Corpus analysis engine for timed movie-subtitle files.

Parses SRT subtitle corpora and a film catalog, builds n-gram era profiles,
trains TF-IDF linear baselines for multi-label sentiment and binary abuse
classification, counts abusive words against a lexicon, computes weighted
sentiment polarity, and aggregates everything into decade, genre, award-class
and per-film timeline report tables.
"""

__version__ = "0.1.0"
