"""Persistent rank/dimension cache.

One JSON file per key under the cache directory.  Writes go through a
temporary file and ``os.replace`` so readers never observe a partial
entry; two writers racing on one key store the same deterministic value.
"""
from __future__ import annotations

import hashlib
import json
import logging
import os
import tempfile
from dataclasses import dataclass
from functools import lru_cache
from pathlib import Path

log = logging.getLogger(__name__)

# bump whenever basis orders or sign conventions change
ENGINE_VERSION = "veronese-2:grlex:colex:sign-(-1)^j"

KINDS = ("rank-alpha", "h0", "h1", "h2", "Kpq")


@dataclass(frozen=True)
class CacheEntry:
    key: tuple  # (n, d, kind, a, b, field-label)
    value: int
    certification: str
    engine_version: str = ENGINE_VERSION

    def to_json(self) -> dict:
        return {"key": list(self.key), "value": self.value,
                "certification": self.certification, "engine_version": self.engine_version}

    @classmethod
    def from_json(cls, obj: dict) -> CacheEntry:
        return cls(tuple(obj["key"]), int(obj["value"]), str(obj["certification"]),
                   str(obj["engine_version"]))


def _digest(key: tuple) -> str:
    return hashlib.sha1(json.dumps(list(key)).encode()).hexdigest()


class DiskCache:
    def __init__(self, directory: str | os.PathLike):
        self.directory = Path(directory)
        self.enabled = True
        try:
            self.directory.mkdir(parents=True, exist_ok=True)
            probe = tempfile.NamedTemporaryFile(dir=self.directory, delete=True)
            probe.close()
        except OSError as exc:
            log.warning("cache directory %s unusable (%s); caching disabled", directory, exc)
            self.enabled = False

    def _path(self, key: tuple) -> Path:
        return self.directory / f"{_digest(key)}.json"

    def get(self, key: tuple) -> CacheEntry | None:
        if not self.enabled:
            return None
        path = self._path(key)
        try:
            with open(path) as fh:
                entry = CacheEntry.from_json(json.load(fh))
        except FileNotFoundError:
            return None
        except (OSError, ValueError, KeyError, TypeError):
            log.warning("discarding corrupt cache entry %s", path)
            try:
                path.unlink()
            except OSError:
                pass
            return None
        if entry.engine_version != ENGINE_VERSION or entry.key != tuple(key):
            return None
        return entry

    def put(self, entry: CacheEntry) -> None:
        if not self.enabled:
            return
        path = self._path(entry.key)
        try:
            fd, tmp = tempfile.mkstemp(dir=self.directory, suffix=".tmp")
            with os.fdopen(fd, "w") as fh:
                json.dump(entry.to_json(), fh)
            os.replace(tmp, path)
        except OSError as exc:
            log.warning("cache write failed for %s: %s", path, exc)

    def __len__(self) -> int:
        if not self.enabled:
            return 0
        return sum(1 for _ in self.directory.glob("*.json"))

    def info(self) -> dict:
        kinds: dict[str, int] = {}
        if self.enabled:
            for path in sorted(self.directory.glob("*.json")):
                entry = self.get_path(path)
                if entry is not None:
                    kinds[entry.key[2]] = kinds.get(entry.key[2], 0) + 1
        return {"directory": str(self.directory), "enabled": self.enabled,
                "engine_version": ENGINE_VERSION, "entries": sum(kinds.values()), "by_kind": kinds}

    def get_path(self, path: Path) -> CacheEntry | None:
        try:
            with open(path) as fh:
                entry = CacheEntry.from_json(json.load(fh))
        except (OSError, ValueError, KeyError, TypeError):
            return None
        return entry if entry.engine_version == ENGINE_VERSION else None


@lru_cache(maxsize=16)
def open_cache(directory: str | None) -> DiskCache | None:
    if directory is None:
        return None
    return DiskCache(directory)
