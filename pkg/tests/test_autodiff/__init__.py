"""Tests for the autodiff engine."""
