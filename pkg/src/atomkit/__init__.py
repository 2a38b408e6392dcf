"""
atomkit

A desk-scale transformer neural operator for molecular-dynamics trajectories:
a float64 autodiff engine, equivariant lifting, temporal rotary attention,
training loops, toy trajectory generation and fingerprint-based curation.
"""

from __future__ import annotations

__version__ = "0.1.0"
__author__ = "atomkit Contributors"
__all__ = ["__version__", "__author__"]
