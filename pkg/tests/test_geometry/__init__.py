"""Tests for molecular geometry and equivariance."""
