"""
Run Store - Manages the artifact files of one run directory

Every command writes into a run directory: config snapshot, dataset,
manifest, checkpoints, logs, reports and figures.
"""

from enum import Enum
from pathlib import Path
from typing import Any, List, Optional, Union

import orjson
from loguru import logger

from retrofit_prae.utils.config import get_settings


class ArtifactKind(str, Enum):
    """Artifact file types written by the commands"""

    JSON = "json"
    JSONL = "jsonl"
    CSV = "csv"
    SVG = "svg"
    TXT = "txt"


class RunStore:
    """
    File-based storage for run artifacts

    Manages:
    - The run directory layout
    - Deterministic JSON (sorted keys, round-trip floats)
    - Artifact listing
    """

    def __init__(self, base_path: Optional[Union[str, Path]] = None):
        """
        Initialize run store

        Args:
            base_path: Run directory; the settings' output directory by default
        """
        settings = get_settings()
        self.base_path = Path(base_path) if base_path is not None else settings.get_output_dir()
        self.base_path.mkdir(parents=True, exist_ok=True)

        logger.debug(f"RunStore initialized at {self.base_path}")

    def path(self, name: str) -> Path:
        """Path of an artifact, parent directories created"""
        file_path = self.base_path / name
        file_path.parent.mkdir(parents=True, exist_ok=True)
        return file_path

    def save_json(self, name: str, data: Any, indent: bool = True) -> Path:
        """
        Write JSON with sorted keys

        Args:
            name: File name relative to the run directory
            data: JSON-serializable data
            indent: Pretty-print with two-space indentation

        Returns:
            Path to saved file
        """
        option = orjson.OPT_SORT_KEYS | (orjson.OPT_INDENT_2 if indent else 0)
        file_path = self.path(name)
        file_path.write_bytes(orjson.dumps(data, option=option) + b"\n")
        logger.debug(f"Saved {file_path}")
        return file_path

    def load_json(self, name: str) -> Any:
        return orjson.loads((self.base_path / name).read_bytes())

    def save_text(self, name: str, content: str) -> Path:
        file_path = self.path(name)
        file_path.write_text(content, encoding="utf-8")
        return file_path

    def exists(self, name: str) -> bool:
        return (self.base_path / name).exists()

    def list_artifacts(self, kind: Optional[ArtifactKind] = None) -> List[Path]:
        """Artifact files, sorted, optionally of one kind"""
        pattern = f"*.{kind.value}" if kind else "*"
        return sorted(p for p in self.base_path.rglob(pattern) if p.is_file())
