"""Command-line front end: data generation, training, evaluation, analysis and gradient checks"""

from retrofit_prae.cli.commands import (
    build_embeddings,
    cmd_analyze,
    cmd_eval,
    cmd_gen_data,
    cmd_gradcheck,
    cmd_train,
)
from retrofit_prae.cli.config import ConfigFileError, EmbeddingConfig, RunConfig, build_run_config
from retrofit_prae.cli.gradcheck import CheckResult, run_gradcheck

__all__ = [
    "build_embeddings",
    "cmd_analyze",
    "cmd_eval",
    "cmd_gen_data",
    "cmd_gradcheck",
    "cmd_train",
    "ConfigFileError",
    "EmbeddingConfig",
    "RunConfig",
    "build_run_config",
    "CheckResult",
    "run_gradcheck",
]
