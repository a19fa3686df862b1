"""Atomic promotion of a run directory through a staging sibling."""

from __future__ import annotations

import logging
import shutil
import uuid
from collections.abc import Mapping
from errno import EXDEV
from pathlib import Path

logger = logging.getLogger(__name__)


def write_run_directory(target_path: Path, files: Mapping[str, bytes]) -> Path:
    """Write ``files`` into ``target_path`` so readers never see a partial directory.

    Files are written into ``<name>.tmp-<hex>`` next to the target, then the
    staging directory is renamed over the target. An existing target is moved
    aside first and restored if the promotion fails.
    """
    target_path = target_path.expanduser().resolve(strict=False)
    if target_path == target_path.parent:
        raise ValueError(f"Refusing to write a run directory at filesystem root: {target_path}")
    target_path.parent.mkdir(parents=True, exist_ok=True)
    staging_path = target_path.parent / f"{target_path.name}.tmp-{uuid.uuid4().hex}"

    try:
        staging_path.mkdir(parents=True, exist_ok=False)
        for name, payload in files.items():
            (staging_path / name).write_bytes(payload)
        _swap_staging_to_target(staging_path=staging_path, target_path=target_path)
    finally:
        _safe_cleanup(staging_path)
    logger.debug("Wrote %d file(s) to %s", len(files), target_path)
    return target_path


def _swap_staging_to_target(staging_path: Path, target_path: Path) -> None:
    """Promote staged output to the final target with rename operations."""
    backup_path = target_path.parent / f"{target_path.name}.bak-{uuid.uuid4().hex}"

    if not target_path.exists():
        try:
            staging_path.rename(target_path)
            return
        except OSError:
            # A concurrent writer promoted the same config first.
            if not target_path.exists():
                raise

    try:
        target_path.rename(backup_path)
        try:
            staging_path.rename(target_path)
        except OSError:
            backup_path.rename(target_path)
            raise
        _safe_cleanup(backup_path)
    except OSError as e:
        if e.errno != EXDEV:
            raise
        # Cross-device rename fallback: not atomic.
        if target_path.exists():
            shutil.rmtree(target_path)
        shutil.move(str(staging_path), str(target_path))


def _safe_cleanup(path: Path) -> None:
    """Best-effort removal of staging/backup leftovers."""
    if not path.exists():
        return
    try:
        shutil.rmtree(path)
    except OSError as e:
        logger.warning("Could not remove %s: %s", path, e)
