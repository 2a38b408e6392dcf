"""Trajectories: the ATRJ format, window datasets, toy dynamics and stability analytics."""

from __future__ import annotations

from .atrj import decode_trajectory, encode_trajectory, load_trajectory, save_trajectory
from .loader import (
    WindowBatch,
    WindowDataset,
    frame_offsets,
    gather_batch,
    make_batches,
    prefetch,
    split_starts,
    split_windows,
)
from .stability import StabilityReport, stability_metrics, write_stability_csv
from .toy import (
    HarmonicPotential,
    PairwiseSpringPotential,
    Potential,
    ToySystem,
    VelocityVerlet,
    generate_toy_trajectory,
    make_toy_system,
    random_chain,
    total_energy,
)
from .trajectory import Trajectory

__all__ = [
    "HarmonicPotential",
    "PairwiseSpringPotential",
    "Potential",
    "StabilityReport",
    "ToySystem",
    "Trajectory",
    "VelocityVerlet",
    "WindowBatch",
    "WindowDataset",
    "decode_trajectory",
    "encode_trajectory",
    "frame_offsets",
    "gather_batch",
    "generate_toy_trajectory",
    "load_trajectory",
    "make_batches",
    "make_toy_system",
    "prefetch",
    "random_chain",
    "save_trajectory",
    "split_starts",
    "split_windows",
    "stability_metrics",
    "total_energy",
    "write_stability_csv",
]
