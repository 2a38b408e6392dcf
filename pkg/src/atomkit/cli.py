"""
Command-line entry point.

Subcommands::

    atomkit gen-data     integrate a toy molecule and write an ATRJ file
    atomkit train        fit the operator (single-task or multitask)
    atomkit eval         score a checkpoint, optionally over a sweep
    atomkit analyze      centre-of-mass drift and per-step motion
    atomkit curate       similarity-window candidate selection
    atomkit fingerprint  on-bit counts and pairwise Tanimoto similarity

Every run that writes files also writes a JSON manifest. Exit codes: 0 on
success, 2 for usage, configuration, input or checkpoint errors, 3 when
training diverges.
"""

from __future__ import annotations

import argparse
import logging
import sys
from collections.abc import Callable, Sequence
from itertools import combinations
from pathlib import Path
from typing import Any

import numpy as np

from .autodiff.checkpoint import load_checkpoint, save_checkpoint
from .autodiff.optim import MULTITASK_EPS
from .core.config import load_json_config
from .core.errors import AtomkitError, ConfigurationError, NumericalDivergence
from .core.events import EventEmitter
from .core.log import configure_logging
from .core.runner import run_stage, stage_context
from .curation import (
    SelectionConfig,
    morgan_fingerprint,
    parse_smiles,
    read_smiles_file,
    select_candidates,
    tanimoto,
    write_rejection_log,
    write_selection_csv,
)
from .data import (
    Potential,
    generate_toy_trajectory,
    load_trajectory,
    save_trajectory,
    stability_metrics,
    write_stability_csv,
)
from .model import AtomModel, AtomModelConfig, load_config_sidecar, save_config_sidecar
from .training import (
    MetricsReport,
    TrainRunConfig,
    build_manifest,
    delta_t_sweep,
    evaluate_zero_shot,
    evaluation_windows,
    log_epoch_record,
    log_grid,
    p_sweep,
    report_summary,
    rotation_robustness,
    s2t_spread,
    train_multitask,
    train_single_task,
    write_manifest,
    write_metrics_csv,
    write_sweep_csv,
)

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_USAGE = 2
EXIT_NUMERICAL = 3

CHECKPOINT_NAME = "model.ckpt"
METRICS_NAME = "metrics.csv"
SWEEP_NAME = "sweep.csv"
MANIFEST_NAME = "manifest.json"


def _positive_int(text: str) -> int:
    value = int(text)
    if value < 1:
        raise argparse.ArgumentTypeError(f"must be a positive integer, got {value}")
    return value


def _positive_float(text: str) -> float:
    value = float(text)
    if not value > 0.0:
        raise argparse.ArgumentTypeError(f"must be > 0, got {value}")
    return value


def _sidecar_manifest(out: Path) -> Path:
    return out.with_name(out.name + ".manifest.json")


def _sections(path: str | None) -> dict[str, dict[str, Any]]:
    return load_json_config(path) if path else {}


# ----------------------------------------------------------------------
# gen-data
# ----------------------------------------------------------------------
def cmd_gen_data(args: argparse.Namespace) -> int:
    """Integrate a toy molecule and write it as ATRJ."""
    out = Path(args.out)
    seed = 0 if args.seed is None else args.seed
    traj = run_stage(
        lambda: generate_toy_trajectory(
            args.potential,
            args.atoms,
            args.steps,
            args.dt,
            seed,
            name=args.name,
            record_every=args.record_every,
        ),
        f"generate {args.potential} x{args.atoms}",
    )
    save_trajectory(traj, out)
    manifest = build_manifest(
        "gen-data",
        seed=seed,
        config={
            "potential": args.potential,
            "atoms": args.atoms,
            "steps": args.steps,
            "dt": args.dt,
            "record_every": args.record_every,
            "name": traj.name,
        },
        results={"frames": len(traj), "atoms": traj.n_atoms},
        outputs={"trajectory": out},
    )
    write_manifest(manifest, _sidecar_manifest(out))
    print(f"wrote {len(traj)} frames of {traj.n_atoms} atoms to {out}")
    return EXIT_OK


# ----------------------------------------------------------------------
# train
# ----------------------------------------------------------------------
def _train_config(args: argparse.Namespace, section: dict[str, Any]) -> TrainRunConfig:
    return TrainRunConfig.from_dict(
        section,
        seed=args.seed,
        epochs=args.epochs,
        batch_size=args.batch_size,
        horizon=args.horizon,
        n_steps=args.n_steps,
        label_noise=args.label_noise,
        lr=args.lr,
        stride=args.stride,
        show_progress=True if args.progress else None,
    )


def _print_report(name: str, report: MetricsReport) -> None:
    print(
        f"{name}: S2S {report.s2s:.6g}  S2T {report.s2t:.6g}  "
        f"(static S2S {report.baseline_s2s:.6g}  S2T {report.baseline_s2t:.6g})"
    )


def cmd_train(args: argparse.Namespace) -> int:
    """Train, then write checkpoint, config sidecar, metrics CSV and manifest."""
    sections = _sections(args.config)
    model_section = dict(sections.get("model", {}))
    train_section = dict(sections.get("train", {}))
    multitask = args.mode == "multi" and len(args.data) > 1
    if args.mode == "single" and len(args.data) != 1:
        raise ConfigurationError(f"single-task mode takes one trajectory, got {len(args.data)}")
    if multitask:
        model_section.setdefault("rwpe_enabled", True)
        train_section.setdefault("eps", MULTITASK_EPS)

    model_config = AtomModelConfig.from_dict(model_section)
    train_config = _train_config(args, train_section)
    trajectories = [load_trajectory(path) for path in args.data]
    holdout = load_trajectory(args.holdout) if args.holdout else None

    rng = np.random.default_rng(train_config.seed)
    model = AtomModel.initialize(model_config, rng)
    logger.info("model with %d parameters", model.num_parameters())
    events = EventEmitter()
    events.on("epoch_end", log_epoch_record)

    with stage_context(f"train ({'multitask' if multitask else 'single-task'})"):
        if args.mode == "multi":
            model, reports = train_multitask(
                trajectories, model, train_config, rng=rng, events=events
            )
        else:
            model, report = train_single_task(
                trajectories[0], model, train_config, rng=rng, events=events
            )
            reports = {trajectories[0].name: report}

    results: dict[str, Any] = {name: report_summary(r) for name, r in reports.items()}
    if holdout is not None:
        zero_shot = evaluate_zero_shot(model, holdout, train_config)
        results["zero_shot"] = {holdout.name: report_summary(zero_shot)}
        _print_report(f"{holdout.name} (unseen)", zero_shot)

    out_dir = Path(args.out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    checkpoint = save_checkpoint(out_dir / CHECKPOINT_NAME, model.state_dict())
    sidecar = save_config_sidecar(model_config, checkpoint)
    metrics = write_metrics_csv(next(iter(reports.values())).epochs, out_dir / METRICS_NAME)
    manifest = build_manifest(
        "train",
        seed=train_config.seed,
        inputs=[*args.data, *([args.holdout] if args.holdout else [])],
        config={
            "mode": "multi" if multitask else "single",
            "model": model_config.to_dict(),
            "train": train_config.to_dict(),
        },
        results=results,
        outputs={"checkpoint": checkpoint, "config": sidecar, "metrics": metrics},
    )
    write_manifest(manifest, out_dir / MANIFEST_NAME)
    for name, report in reports.items():
        _print_report(name, report)
    return EXIT_OK


# ----------------------------------------------------------------------
# eval
# ----------------------------------------------------------------------
def _load_model(checkpoint: str) -> AtomModel:
    config = load_config_sidecar(checkpoint)
    model = AtomModel.initialize(config, np.random.default_rng(0))
    model.load_state_dict(load_checkpoint(checkpoint))
    return model


def cmd_eval(args: argparse.Namespace) -> int:
    """Score a checkpoint on a trajectory, with an optional sweep CSV."""
    config = _train_config(args, dict(_sections(args.config).get("train", {})))
    model = _load_model(args.ckpt)
    traj = load_trajectory(args.data)
    report = run_stage(lambda: evaluate_zero_shot(model, traj, config), f"evaluate {traj.name}")
    _print_report(traj.name, report)

    out_dir = Path(args.out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    results: dict[str, Any] = {"evaluation": report_summary(report)}
    outputs: dict[str, str | Path] = {}
    if args.sweep is not None:
        with stage_context(f"{args.sweep} sweep"):
            if args.sweep == "deltaT":
                low = args.dt_min if args.dt_min is not None else config.n_steps * traj.dt
                horizons = log_grid(low, config.horizon, args.grid_size).tolist()
                rows = delta_t_sweep(model, traj, horizons, config.n_steps, stride=config.stride)
            elif args.sweep == "P":
                rows = p_sweep(model, traj, config.horizon, args.p_values, stride=config.stride)
                results["s2t_spread"] = s2t_spread(rows)
                print(f"max/min S2T over P = {results['s2t_spread']:.4g}")
            else:
                rotated = rotation_robustness(
                    model, evaluation_windows(traj, config), args.rotations, config.seed
                )
                rows = rotated.rows(report.baseline_s2t)
                results["rotation_ratio"] = rotated.ratio
                print(f"rotated / unrotated S2T = {rotated.ratio:.4g}")
        outputs["sweep"] = write_sweep_csv(rows, out_dir / SWEEP_NAME)
        results["sweep"] = [row.as_row() for row in rows]

    manifest = build_manifest(
        "eval",
        seed=config.seed,
        inputs=[args.ckpt, args.data],
        config={"train": config.to_dict(), "sweep": args.sweep},
        results=results,
        outputs=outputs,
    )
    write_manifest(manifest, out_dir / MANIFEST_NAME)
    return EXIT_OK


# ----------------------------------------------------------------------
# analyze
# ----------------------------------------------------------------------
def cmd_analyze(args: argparse.Namespace) -> int:
    """Stability report of one or more trajectories."""
    reports = [stability_metrics(load_trajectory(path)) for path in args.data]
    out = write_stability_csv(reports, args.out)
    for report in reports:
        print(
            f"{report.name}: COM drift {report.com_drift:.6g}, "
            f"per-step motion {report.per_step_motion:.6g}"
        )
    manifest = build_manifest(
        "analyze",
        seed=args.seed,
        inputs=args.data,
        results={
            r.name: {"com_drift": r.com_drift, "per_step_motion": r.per_step_motion}
            for r in reports
        },
        outputs={"stability": out},
    )
    write_manifest(manifest, _sidecar_manifest(out))
    return EXIT_OK


# ----------------------------------------------------------------------
# curate
# ----------------------------------------------------------------------
def _selection_config(args: argparse.Namespace) -> SelectionConfig:
    section = dict(_sections(args.config).get("selection", {}))
    if args.preset is not None:
        section["preset"] = args.preset
    return SelectionConfig.from_dict(
        section, accepted_cap=args.accepted_cap, max_accepted=args.max_accepted
    )


def cmd_curate(args: argparse.Namespace) -> int:
    """Select candidates from a pool and write the acceptance CSV and rejection log."""
    cfg = _selection_config(args)
    seeds = read_smiles_file(args.seeds)
    pool = read_smiles_file(args.pool)
    result = run_stage(
        lambda: select_candidates(seeds, pool, cfg, workers=args.workers),
        f"curate {len(pool)} candidates",
    )
    out = write_selection_csv(result.accepted, args.out)
    rejections = Path(args.rejections) if args.rejections else out.with_suffix(".rejected.csv")
    write_rejection_log(result.rejected, rejections)
    manifest = build_manifest(
        "curate",
        seed=args.seed,
        inputs=[args.seeds, args.pool],
        config={"selection": cfg.to_dict()},
        results={
            "accepted": len(result.accepted),
            "rejected": len(result.rejected),
            "screened": result.screened,
        },
        outputs={"accepted": out, "rejected": rejections},
    )
    write_manifest(manifest, _sidecar_manifest(out))
    print(f"accepted {len(result.accepted)} of {result.screened} screened candidates")
    return EXIT_OK


# ----------------------------------------------------------------------
# fingerprint
# ----------------------------------------------------------------------
def cmd_fingerprint(args: argparse.Namespace) -> int:
    """Print on-bit counts and pairwise Tanimoto similarities."""
    prints = [morgan_fingerprint(parse_smiles(s), args.radius, args.nbits) for s in args.smiles]
    for smiles, fp in zip(args.smiles, prints, strict=True):
        print(f"{smiles}\t{fp.popcount}")
    pairs = [
        (args.smiles[i], args.smiles[j], tanimoto(prints[i], prints[j]))
        for i, j in combinations(range(len(prints)), 2)
    ]
    for a, b, similarity in pairs:
        print(f"{a}\t{b}\t{similarity:.6f}")
    if args.out:
        out = Path(args.out)
        out.write_text(
            "a,b,tanimoto\n" + "".join(f"{a},{b},{s!r}\n" for a, b, s in pairs), encoding="utf-8"
        )
        manifest = build_manifest(
            "fingerprint",
            seed=args.seed,
            config={"radius": args.radius, "nbits": args.nbits, "smiles": list(args.smiles)},
            results={s: fp.popcount for s, fp in zip(args.smiles, prints, strict=True)},
            outputs={"pairs": out},
        )
        write_manifest(manifest, _sidecar_manifest(out))
    return EXIT_OK


# ----------------------------------------------------------------------
# parser
# ----------------------------------------------------------------------
def _add_run_options(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--config", help="JSON config with model/train/selection sections")
    parser.add_argument("--epochs", type=int, help="training epochs")
    parser.add_argument("--batch-size", type=_positive_int, help="windows per step")
    parser.add_argument("--horizon", type=_positive_float, help="prediction horizon dT")
    parser.add_argument("--n-steps", type=_positive_int, help="query timestamps P")
    parser.add_argument("--label-noise", type=float, help="label-noise std")
    parser.add_argument("--lr", type=float, help="learning rate")
    parser.add_argument("--stride", type=_positive_int, help="frames between window starts")


def build_parser() -> argparse.ArgumentParser:
    """The ``atomkit`` argument parser."""
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--seed", type=int, help="seed of the run's random generator")
    common.add_argument("--log-level", default="INFO", help="logging level (default INFO)")
    common.add_argument("--progress", action="store_true", help="show progress bars")

    parser = argparse.ArgumentParser(
        prog="atomkit", description="Desk-scale trajectory operator toolkit."
    )
    sub = parser.add_subparsers(dest="command", required=True)

    gen = sub.add_parser("gen-data", parents=[common], help="generate a toy trajectory")
    gen.add_argument("--potential", choices=Potential.available(), default="pairwise-spring")
    gen.add_argument("--atoms", type=_positive_int, default=5)
    gen.add_argument("--steps", type=_positive_int, default=5000, help="recorded frames")
    gen.add_argument("--dt", type=_positive_float, default=0.05)
    gen.add_argument("--record-every", type=_positive_int, default=1)
    gen.add_argument("--name", help="trajectory name (one word)")
    gen.add_argument("--out", required=True, help="ATRJ file to write")
    gen.set_defaults(handler=cmd_gen_data)

    train = sub.add_parser("train", parents=[common], help="train the operator")
    train.add_argument("--mode", choices=("single", "multi"), default="single")
    train.add_argument("--data", nargs="+", required=True, help="ATRJ trajectories")
    train.add_argument("--holdout", help="unseen trajectory for zero-shot evaluation")
    train.add_argument("--out-dir", required=True)
    _add_run_options(train)
    train.set_defaults(handler=cmd_train)

    ev = sub.add_parser("eval", parents=[common], help="evaluate a checkpoint")
    ev.add_argument("--ckpt", required=True)
    ev.add_argument("--data", required=True)
    ev.add_argument("--sweep", choices=("deltaT", "P", "rotation"))
    ev.add_argument("--p-values", type=_positive_int, nargs="+", default=[4, 8, 16])
    ev.add_argument("--grid-size", type=_positive_int, default=10)
    ev.add_argument("--dt-min", type=_positive_float, help="smallest horizon of the deltaT sweep")
    ev.add_argument("--rotations", type=_positive_int, default=8)
    ev.add_argument("--out-dir", required=True)
    _add_run_options(ev)
    ev.set_defaults(handler=cmd_eval)

    analyze = sub.add_parser("analyze", parents=[common], help="trajectory stability report")
    analyze.add_argument("--data", nargs="+", required=True)
    analyze.add_argument("--out", required=True, help="CSV to write")
    analyze.set_defaults(handler=cmd_analyze)

    curate = sub.add_parser("curate", parents=[common], help="select candidate molecules")
    curate.add_argument("--seeds", required=True, help="seed SMILES file")
    curate.add_argument("--pool", required=True, help="candidate SMILES file")
    curate.add_argument("--config", help="JSON config with a selection section")
    curate.add_argument("--preset", choices=sorted(SelectionConfig.PRESETS))
    curate.add_argument("--accepted-cap", type=float)
    curate.add_argument(
        "--max-accepted", type=_positive_int, help="stop once this many candidates are accepted"
    )
    curate.add_argument("--workers", type=_positive_int)
    curate.add_argument("--out", required=True, help="acceptance CSV")
    curate.add_argument("--rejections", help="rejection log (default: <out>.rejected.csv)")
    curate.set_defaults(handler=cmd_curate)

    fp = sub.add_parser("fingerprint", parents=[common], help="fingerprint SMILES")
    fp.add_argument("smiles", nargs="+")
    fp.add_argument("--radius", type=int, default=2)
    fp.add_argument("--nbits", type=_positive_int, default=2048)
    fp.add_argument("--out", help="CSV of pairwise similarities")
    fp.set_defaults(handler=cmd_fingerprint)
    return parser


def main(argv: Sequence[str] | None = None) -> int:
    """Parse ``argv``, run the subcommand and map failures to exit codes."""
    args = build_parser().parse_args(argv)
    configure_logging(args.log_level)
    handler: Callable[[argparse.Namespace], int] = args.handler
    try:
        return handler(args)
    except NumericalDivergence as exc:
        logger.error("training diverged: %s", exc)
        return EXIT_NUMERICAL
    except (AtomkitError, OSError) as exc:
        logger.error("%s", exc)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
