"""
retrofit-prae - command-line entry point

Usage:
    retrofit-prae gen-data --scale desk --seed 0 --fold 1
    retrofit-prae train --out runs/desk --prae
    retrofit-prae eval --mode dsc2act
    retrofit-prae analyze
    retrofit-prae gradcheck
"""

import argparse
import sys
from pathlib import Path
from typing import Any, Dict, List, Optional, Sequence

from pydantic import ValidationError
from rich.console import Console
from rich.panel import Panel
from rich.table import Table

from retrofit_prae.cli.commands import (
    CONFIG_FILE,
    cmd_analyze,
    cmd_eval,
    cmd_gen_data,
    cmd_gradcheck,
    cmd_train,
)
from retrofit_prae.cli.config import SCALES, RunConfig, build_run_config
from retrofit_prae.cli.gradcheck import TOLERANCE, worst_case
from retrofit_prae.evalkit.evaluate import EvalMode
from retrofit_prae.evalkit.report import compare_reports, rich_table
from retrofit_prae.utils.config import get_settings
from retrofit_prae.utils.errors import RetrofitPraeError
from retrofit_prae.utils.logger import run_log, setup_logger

EXIT_OK = 0
EXIT_FAILURE = 1
EXIT_USAGE = 2

console = Console()


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", type=Path, help="JSON or YAML config file")
    common.add_argument("--scale", choices=SCALES, help="Preset (default: desk)")
    common.add_argument("--seed", type=int, help="Root seed")
    common.add_argument("--out", type=Path, help="Run directory")
    common.add_argument("--threads", type=int, help="Worker threads")
    common.add_argument("--fold", type=int, choices=range(1, 6), metavar="{1..5}", help="Fold / test word set")
    common.add_argument("--log-level", default=None, help="DEBUG, INFO, WARNING or ERROR")

    parser = argparse.ArgumentParser(
        prog="retrofit-prae",
        description="Paired recurrent autoencoders with a retrofit layer for action/description translation",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    sub.add_parser("gen-data", parents=[common], help="Generate the paired dataset and split manifest")

    p_train = sub.add_parser("train", parents=[common], help="Train rPRAE (or PRAE with --prae)")
    p_train.add_argument("--prae", action="store_true", help="Identity retrofit (PRAE ablation)")
    p_train.add_argument("--resume", type=Path, help="Checkpoint to resume from")
    p_train.add_argument("--data", type=Path, help="Dataset file (default: <out>/dataset.jsonl)")
    p_train.add_argument("--iterations", type=int, help="Override the number of iterations")

    p_eval = sub.add_parser("eval", parents=[common], help="Run the translation experiments")
    p_eval.add_argument("--mode", choices=[m.value for m in EvalMode] + ["both"], default="both")
    p_eval.add_argument("--checkpoint", type=Path, help="Checkpoint (default: <out>/checkpoint.json)")
    p_eval.add_argument("--data", type=Path, help="Dataset file (default: <out>/dataset.jsonl)")

    p_analyze = sub.add_parser("analyze", parents=[common], help="Cosine and PCA analysis of the word space")
    p_analyze.add_argument("--checkpoint", type=Path, help="Checkpoint (default: <out>/checkpoint.json)")
    p_analyze.add_argument("--embeddings", type=Path, help="Pre-trained word2vec file to compare against")

    sub.add_parser("gradcheck", parents=[common], help="Check analytic gradients against finite differences")
    return parser


def _overrides(args: argparse.Namespace) -> Dict[str, Any]:
    overrides: Dict[str, Any] = {
        "seed": args.seed,
        "fold": args.fold,
        "threads": args.threads,
        "out": str(args.out) if args.out is not None else None,
    }
    if getattr(args, "iterations", None) is not None:
        overrides["train"] = {"iterations": args.iterations}
    return overrides


def resolve_config(args: argparse.Namespace) -> RunConfig:
    """Preset < --config (or the run directory's snapshot for eval/analyze) < flags"""
    config_path: Optional[Path] = args.config
    if config_path is None and args.command in ("eval", "analyze") and args.out is not None:
        snapshot = args.out / CONFIG_FILE
        if snapshot.exists():
            config_path = snapshot
    return build_run_config(args.scale, config_path, _overrides(args))


def _print_manifest(manifest: dict) -> None:
    table = Table(title="Dataset")
    table.add_column("Cell", style="cyan")
    table.add_column("Patterns", justify="right")
    table.add_column("Sequences", justify="right")
    for cell, patterns in manifest["pattern_counts"].items():
        table.add_row(cell, str(patterns), str(manifest["sequence_counts"][cell]))
    console.print(table)


def _print_gradcheck(results) -> int:
    table = Table(title="Gradient check")
    table.add_column("Case", style="cyan")
    table.add_column("Max rel. error", justify="right")
    table.add_column("Status")
    for r in results:
        table.add_row(r.name, f"{r.max_rel_error:.2e}", "[green]ok[/green]" if r.passed else "[red]FAIL[/red]")
    console.print(table)
    worst = worst_case(results)
    console.print(f"Worst: {worst.name} ({worst.max_rel_error:.3e}, tolerance {TOLERANCE:.0e})")
    return EXIT_OK if all(r.passed for r in results) else EXIT_FAILURE


def run(args: argparse.Namespace) -> int:
    cfg = resolve_config(args)
    if args.command == "gradcheck":
        return _print_gradcheck(cmd_gradcheck(cfg.seed))
    with run_log(cfg.out_dir()):
        return _dispatch(args, cfg)


def _dispatch(args: argparse.Namespace, cfg: RunConfig) -> int:
    if args.command == "gen-data":
        result = cmd_gen_data(cfg)
        _print_manifest(result.manifest)
        console.print(f"[green]Wrote {result.lines} samples to {result.dataset_path}[/green]")
        return EXIT_OK

    if args.command == "train":
        result = cmd_train(cfg, prae=args.prae, resume=args.resume, data_path=args.data)
        losses = ", ".join(f"{k}={v:.4f}" for k, v in result.final_losses.items() if k.startswith("L_"))
        console.print(
            Panel(
                f"Iterations: {result.iterations}\nFinal: {losses or '-'}\n"
                f"Checkpoint: {result.checkpoint_path}\nLog: {result.log_path}",
                title="Training",
            )
        )
        return EXIT_OK

    if args.command == "eval":
        modes: List[EvalMode] = list(EvalMode) if args.mode == "both" else [EvalMode(args.mode)]
        reports = cmd_eval(cfg, checkpoint=args.checkpoint, data_path=args.data, modes=modes)
        for mode, report in reports.items():
            for metric in report.metrics():
                rows = compare_reports({"model": report}, metric, "count")
                console.print(rich_table(rows, f"{mode.value} {metric} by unseen-word count"))
        return EXIT_OK

    if args.command == "analyze":
        result = cmd_analyze(cfg, checkpoint=args.checkpoint, embeddings=args.embeddings)
        before, after = result.analysis.input_stats, result.analysis.retrofitted_stats
        table = Table(title="Word space")
        table.add_column("Statistic", style="cyan")
        table.add_column("Input", justify="right")
        table.add_column("Retrofitted", justify="right")
        table.add_row("intra-group cosine", f"{before.intra_mean:.3f}", f"{after.intra_mean:.3f}")
        table.add_row("inter-group cosine", f"{before.inter_mean:.3f}", f"{after.inter_mean:.3f}")
        table.add_row("slowly/fast cosine", f"{before.antonym_cosine:.3f}", f"{after.antonym_cosine:.3f}")
        console.print(table)
        return EXIT_OK

    raise ValueError(f"unknown command '{args.command}'")


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return int(e.code) if isinstance(e.code, int) else EXIT_USAGE

    setup_logger(log_level=args.log_level or get_settings().log_level)
    try:
        return run(args)
    except ValidationError as e:
        console.print(f"[red]Invalid configuration:[/red] {e}")
        return EXIT_USAGE
    except (RetrofitPraeError, OSError) as e:
        console.print(f"[red]Error:[/red] {e}")
        return EXIT_FAILURE


if __name__ == "__main__":
    sys.exit(main())
