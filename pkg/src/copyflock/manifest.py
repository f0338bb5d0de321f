"""Run manifests: config, input digests and output digests per run.

A manifest pins everything that determines a run's outputs. Execution
knobs that cannot change results (worker count) are excluded, and paths
are recorded by file name, so reruns of the same config on the same
inputs produce byte-identical manifests wherever they are placed.
"""

from __future__ import annotations

from pathlib import Path
from typing import Iterable, Mapping

from . import __version__
from .util import sha256_file, stable_json

__all__ = ["build_manifest", "write_manifest"]


def _digests(paths: Iterable[str | Path]) -> dict[str, str]:
    out = {}
    for p in paths:
        p = Path(p)
        out[p.name] = sha256_file(p)
    return out


def build_manifest(
    command: str,
    config: Mapping,
    inputs: Iterable[str | Path],
    outputs: Iterable[str | Path],
) -> dict:
    return {
        "tool": "copyflock",
        "version": __version__,
        "command": command,
        "config": dict(config),
        "inputs": _digests(inputs),
        "outputs": _digests(outputs),
    }


def write_manifest(path: str | Path, manifest: Mapping) -> None:
    Path(path).write_text(stable_json(manifest), encoding="utf-8")
