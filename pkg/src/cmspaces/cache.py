"""Append-only JSON-lines cache of evaluated constants."""

from __future__ import annotations

import json
import os
import time
from pathlib import Path

from filelock import FileLock

CACHE_ENV = "CMSPACES_CACHE"


def default_cache_path() -> Path:
    env = os.environ.get(CACHE_ENV)
    if env:
        return Path(env)
    return Path.home() / ".cache" / "cmspaces" / "constants.jsonl"


def canonical_key(operation: str, params: dict, precision: int) -> str:
    """operation name, sorted parameters and precision; equal requests give equal keys."""
    parts = [operation]
    for name in sorted(params):
        parts.append(f"{name}={params[name]}")
    parts.append(f"prec={precision}")
    return "|".join(parts)


class ConstantCache:
    """Readers scan the file; writers append one line under a lock file."""

    def __init__(self, path: Path | str | None = None):
        self.path = Path(path) if path is not None else default_cache_path()
        self._lock = FileLock(str(self.path) + ".lock")

    def get(self, key: str, max_error_log2: int | None = None) -> dict | None:
        if not self.path.exists():
            return None
        hit = None
        with open(self.path, encoding="utf-8") as fh:
            for line in fh:
                try:
                    entry = json.loads(line)
                except json.JSONDecodeError:
                    continue  # a torn line from a crashed writer
                if isinstance(entry, dict) and entry.get("key") == key:
                    hit = entry
        if hit is None:
            return None
        err = hit.get("error_log2")
        if max_error_log2 is not None and (err is None or err > max_error_log2):
            return None
        return hit.get("result")

    def put(self, key: str, result: dict, error_log2: int | None) -> None:
        self.path.parent.mkdir(parents=True, exist_ok=True)
        entry = {"key": key, "error_log2": error_log2, "created": time.time(), "result": result}
        line = json.dumps(entry) + "\n"
        with self._lock:
            with open(self.path, "a", encoding="utf-8") as fh:
                fh.write(line)
