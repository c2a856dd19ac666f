"""Run manifests and atomic report writing.

Every report-producing command emits a manifest next to its outputs: the
command, the fully resolved configuration, a SHA-256 digest of every input
file, the tool version, and a timestamp.  Re-running with inputs matching
the recorded digests reproduces the report files byte for byte (the
timestamp is the only field that moves).
"""

from __future__ import annotations

import hashlib
import json
import os
import tempfile
from datetime import datetime, timezone
from pathlib import Path

from . import __version__


def sha256_file(path: str | os.PathLike) -> str:
    digest = hashlib.sha256()
    with open(path, "rb") as fh:
        for chunk in iter(lambda: fh.read(1 << 20), b""):
            digest.update(chunk)
    return digest.hexdigest()


def atomic_write_text(path: str | os.PathLike, text: str) -> None:
    """Write via a temporary file in the target directory, then rename."""
    target = Path(path)
    target.parent.mkdir(parents=True, exist_ok=True)
    fd, tmp = tempfile.mkstemp(dir=target.parent, prefix=target.name + ".", suffix=".tmp")
    try:
        with os.fdopen(fd, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
        os.replace(tmp, target)
    except BaseException:
        try:
            os.unlink(tmp)
        except OSError:
            pass
        raise


def build_manifest(command: str, config: dict, inputs: list[str | os.PathLike]) -> dict:
    return {
        "command": command,
        "config": config,
        "inputs": {str(p): sha256_file(p) for p in inputs},
        "tool_version": __version__,
        "timestamp": datetime.now(timezone.utc).isoformat(),
    }


def write_manifest(path: str | os.PathLike, manifest: dict) -> None:
    atomic_write_text(path, json.dumps(manifest, indent=2, sort_keys=True) + "\n")


def manifest_path_for(report_path: str | os.PathLike) -> Path:
    p = Path(report_path)
    return p.with_name(p.name + ".manifest.json")
