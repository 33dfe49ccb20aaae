"""Extraction pipeline for UK Employment Tribunal judgments.

Loads judgment corpora, builds chat requests from versioned prompt
templates, dispatches them to a chat-completions endpoint (or a
record/replay cache), parses the eight-section responses, hosts the
two-part human quality check, computes accuracy statistics and exports
leakage-guarded outcome-prediction datasets.
"""

__version__ = "0.1.0"
