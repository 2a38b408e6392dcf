"""Objectives, discretization, sampling, metrics, training loops and evaluation harnesses."""

from __future__ import annotations

from .config import TrainRunConfig
from .discretization import (
    DiscretizationPlan,
    DiscretizationStrategy,
    TailDiscretization,
    UniformDiscretization,
    discretize,
)
from .manifest import (
    build_manifest,
    report_summary,
    sha256_file,
    write_manifest,
    write_metrics_csv,
)
from .metrics import (
    EpochRecord,
    MetricsReport,
    evaluate,
    frame_errors,
    s2s_mse,
    s2t_loss,
    s2t_mse,
    static_baseline,
)
from .sampling import add_label_noise, noise_batch, sample_loguniform
from .sweeps import (
    RotationReport,
    SweepRow,
    delta_t_sweep,
    log_grid,
    p_sweep,
    rotation_robustness,
    s2t_spread,
    write_sweep_csv,
)
from .trainer import (
    EarlyStopping,
    ParameterSnapshot,
    evaluate_zero_shot,
    evaluation_windows,
    log_epoch_record,
    make_optimizer,
    multitask_schedule,
    train_multitask,
    train_single_task,
    train_step,
)

__all__ = [
    "DiscretizationPlan",
    "DiscretizationStrategy",
    "EarlyStopping",
    "EpochRecord",
    "MetricsReport",
    "ParameterSnapshot",
    "RotationReport",
    "SweepRow",
    "TailDiscretization",
    "TrainRunConfig",
    "UniformDiscretization",
    "add_label_noise",
    "build_manifest",
    "delta_t_sweep",
    "discretize",
    "evaluate",
    "evaluate_zero_shot",
    "evaluation_windows",
    "frame_errors",
    "log_epoch_record",
    "log_grid",
    "make_optimizer",
    "multitask_schedule",
    "noise_batch",
    "p_sweep",
    "report_summary",
    "rotation_robustness",
    "s2s_mse",
    "s2t_loss",
    "s2t_mse",
    "s2t_spread",
    "sample_loguniform",
    "sha256_file",
    "static_baseline",
    "train_multitask",
    "train_single_task",
    "train_step",
    "write_manifest",
    "write_metrics_csv",
    "write_sweep_csv",
]
