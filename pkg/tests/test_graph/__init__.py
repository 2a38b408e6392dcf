"""Tests for graph features."""
