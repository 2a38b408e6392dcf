"""Tests for objectives, training loops and evaluation harnesses."""
