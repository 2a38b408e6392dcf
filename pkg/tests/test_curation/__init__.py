"""Tests for atomkit.curation."""
