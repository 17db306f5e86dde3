#!/usr/bin/env python3
"""
rPRAE vs PRAE experiment sweep

For every requested fold and seed:
1. Generate the paired dataset
2. Train rPRAE and the identity-retrofit PRAE on the same data
3. Evaluate both in both directions
4. Print side-by-side tables and write comparison CSVs
"""

import argparse
import sys
from pathlib import Path
from typing import Dict

from rich.console import Console
from rich.panel import Panel

ROOT = Path(__file__).resolve().parents[1]
sys.path.insert(0, str(ROOT / "src"))

from retrofit_prae.cli.commands import cmd_eval, cmd_gen_data, cmd_train  # noqa: E402
from retrofit_prae.cli.config import SCALES, RunConfig, build_run_config  # noqa: E402
from retrofit_prae.evalkit.evaluate import EvalMode, EvalReport  # noqa: E402
from retrofit_prae.evalkit.report import compare_reports, rich_table, write_rows  # noqa: E402
from retrofit_prae.utils.errors import RetrofitPraeError  # noqa: E402
from retrofit_prae.utils.logger import setup_logger  # noqa: E402

console = Console()

MODELS = {"rPRAE": False, "PRAE": True}
COMPARED = {
    EvalMode.ACT2DSC: (["description_success"], ["all"]),
    EvalMode.DSC2ACT: (["dtw", "task_success", "speed_success"], ["count", "pos"]),
}


def run_fold(base: RunConfig, out: Path) -> Dict[str, Dict[EvalMode, EvalReport]]:
    """Train and evaluate both models on one fold; returns reports per model"""
    data_cfg = base.model_copy(update={"out": str(out / "data")})
    dataset_path = cmd_gen_data(data_cfg).dataset_path

    reports: Dict[str, Dict[EvalMode, EvalReport]] = {}
    for label, prae in MODELS.items():
        cfg = base.model_copy(update={"out": str(out / label)})
        console.print(f"[dim]Training {label} (fold {cfg.fold}, seed {cfg.seed})...[/dim]")
        cmd_train(cfg, prae=prae, data_path=dataset_path)
        trained = build_run_config(config_path=out / label / "config.json")
        reports[label] = cmd_eval(trained, data_path=dataset_path)
    return reports


def print_comparison(reports: Dict[str, Dict[EvalMode, EvalReport]], out: Path) -> None:
    for mode, (metrics, breakdowns) in COMPARED.items():
        by_model = {label: per_mode[mode] for label, per_mode in reports.items()}
        for metric in metrics:
            for breakdown in breakdowns:
                rows = compare_reports(by_model, metric, breakdown)
                console.print(rich_table(rows, f"{mode.value} {metric} by {breakdown}"))
                write_rows(rows, out / f"compare_{mode.value}_{metric}_{breakdown}.csv")


def main() -> int:
    parser = argparse.ArgumentParser(description="rPRAE vs PRAE fold/seed sweep")
    parser.add_argument("--scale", choices=SCALES, default="desk", help="Preset (default: desk)")
    parser.add_argument("--folds", type=int, nargs="+", default=[1], help="Folds to run (1-5)")
    parser.add_argument("--seeds", type=int, nargs="+", default=[0], help="Root seeds")
    parser.add_argument("--config", type=Path, help="JSON or YAML config file")
    parser.add_argument("--out", type=Path, default=Path("runs/experiment"), help="Output directory")
    parser.add_argument("--threads", type=int, default=1)
    args = parser.parse_args()

    setup_logger()
    console.print(Panel.fit("[bold cyan]rPRAE vs PRAE[/bold cyan]\n" f"scale={args.scale} folds={args.folds} seeds={args.seeds}"))

    try:
        for seed in args.seeds:
            for fold in args.folds:
                out = args.out / f"seed{seed}" / f"fold{fold}"
                base = build_run_config(args.scale, args.config, {"seed": seed, "fold": fold, "threads": args.threads})
                reports = run_fold(base, out)
                console.print(f"\n[bold]Seed {seed}, fold {fold}[/bold]")
                print_comparison(reports, out)
    except RetrofitPraeError as e:
        console.print(f"[red]Experiment failed: {e}[/red]")
        return 1

    console.print(f"\n[green]Done. Results under {args.out}[/green]")
    return 0


if __name__ == "__main__":
    sys.exit(main())
