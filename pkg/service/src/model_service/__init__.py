"""Inference sidecar for the subtitle-analysis engine.

Serves a multi-label sentiment model and a binary abuse model over a small
HTTP + JSON protocol. Stub mode (fixed probability outputs) is first-class
so client test suites never need real checkpoints.
"""

__version__ = "0.1.0"
