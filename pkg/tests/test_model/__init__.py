"""Tests for the trajectory operator."""
