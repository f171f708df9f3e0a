"""Proof search with constraint-enriched sequent calculi."""

__version__ = "0.1.0"
