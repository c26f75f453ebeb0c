"""Deterministic JSON/CSV writers and the per-directory manifest."""

from __future__ import annotations

import hashlib
import json
import math
import platform
from pathlib import Path

import numpy as np
import scipy

from . import __version__, kernels


def _clean(obj):
    """JSON-safe copy: numpy scalars/arrays to Python, non-finite floats to strings."""
    if isinstance(obj, dict):
        return {str(k): _clean(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_clean(v) for v in obj]
    if isinstance(obj, np.ndarray):
        return _clean(obj.tolist())
    if isinstance(obj, np.generic):
        return _clean(obj.item())
    if isinstance(obj, float) and not math.isfinite(obj):
        return repr(obj)
    return obj


def dumps(obj) -> str:
    return json.dumps(_clean(obj), indent=2, sort_keys=True) + "\n"


def versions() -> dict:
    return {"dyntrans": __version__, "numpy": np.__version__, "scipy": scipy.__version__,
            "python": platform.python_version(), "kernel_backend": kernels.BACKEND}


class OutputDir:
    """Collects written files and emits ``manifest.json`` with their hashes."""

    def __init__(self, root, command: str, config: dict, seed: int):
        self.root = Path(root)
        self.root.mkdir(parents=True, exist_ok=True)
        self.command, self.config, self.seed = command, config, seed
        self.files: list[dict] = []

    def path(self, rel) -> Path:
        p = self.root / rel
        p.parent.mkdir(parents=True, exist_ok=True)
        return p

    def record(self, rel, produced_by: str):
        p = self.root / rel
        data = p.read_bytes()
        self.files.append({"path": str(rel), "bytes": len(data), "sha256": hashlib.sha256(data).hexdigest(),
                           "produced_by": produced_by})

    def write_json(self, rel, obj, produced_by: str):
        self.path(rel).write_text(dumps(obj))
        self.record(rel, produced_by)

    def write_csv(self, rel, array, header: str, produced_by: str):
        np.savetxt(self.path(rel), np.asarray(array, float), delimiter=",", header=header, comments="",
                   fmt="%.17g")
        self.record(rel, produced_by)

    def manifest(self) -> dict:
        return {"command": self.command, "config": self.config, "seed": self.seed, "versions": versions(),
                "files": sorted(self.files, key=lambda f: f["path"])}

    def close(self):
        (self.root / "manifest.json").write_text(dumps(self.manifest()))
