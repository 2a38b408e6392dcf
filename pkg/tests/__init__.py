"""Tests for atomkit."""
