"""Run-directory storage"""

from retrofit_prae.storage.file_store import ArtifactKind, RunStore

__all__ = ["ArtifactKind", "RunStore"]
