"""Tests for trajectory data."""
