"""Persistent cache of exact values (Bernoulli numbers, generalized Bernoulli
numbers, Cohen's H).

The cache is advisory: a missing, stale or corrupt file only costs time.
Every entry carries a checksum; entries that fail it are dropped with a
warning and recomputed.
"""

from __future__ import annotations

import hashlib
import json
import logging
import os
import threading
from dataclasses import dataclass, field
from pathlib import Path

log = logging.getLogger(__name__)

SCHEMA_VERSION = 1
CACHE_ENV = "PADIC_SIEGEL_LAB_CACHE"
CACHE_FILE = "values.json"
KINDS = ("bernoulli", "genbernoulli", "cohenH")


def checksum(kind: str, key: str, value: str) -> str:
    return hashlib.sha256(f"{kind}\x00{key}\x00{value}".encode()).hexdigest()[:16]


@dataclass
class CacheManifest:
    version: int = SCHEMA_VERSION
    entries: dict[tuple[str, str], str] = field(default_factory=dict)

    def to_json(self) -> str:
        rows = [
            {"kind": kind, "key": key, "value": value, "checksum": checksum(kind, key, value)}
            for (kind, key), value in sorted(self.entries.items())
        ]
        return json.dumps({"version": self.version, "entries": rows}, indent=1)

    @classmethod
    def from_json(cls, text: str) -> "CacheManifest":
        data = json.loads(text)
        if data.get("version") != SCHEMA_VERSION:
            log.warning("ignoring cache with schema version %r", data.get("version"))
            return cls()
        out = cls()
        for row in data.get("entries", []):
            try:
                kind, key, value = row["kind"], row["key"], row["value"]
                ok = kind in KINDS and row["checksum"] == checksum(kind, key, value)
            except (KeyError, TypeError):
                ok = False
            if not ok:
                log.warning("dropping corrupt cache entry %r", row)
                continue
            out.entries[(kind, key)] = value
        return out


class ValueCache:
    """In-memory map of string-encoded values, optionally backed by a directory."""

    def __init__(self, directory: str | os.PathLike | None = None):
        self.directory = Path(directory) if directory else None
        self._lock = threading.Lock()
        self._dirty = False
        self.manifest = CacheManifest()
        if self.directory is not None:
            self._load()

    @property
    def path(self) -> Path | None:
        return self.directory / CACHE_FILE if self.directory else None

    def _load(self) -> None:
        path = self.path
        if path is None or not path.exists():
            return
        try:
            self.manifest = CacheManifest.from_json(path.read_text(encoding="utf-8"))
        except (OSError, ValueError) as exc:
            log.warning("unreadable cache %s (%s); starting empty", path, exc)
            self.manifest = CacheManifest()

    def get(self, kind: str, key: str) -> str | None:
        return self.manifest.entries.get((kind, key))

    def put(self, kind: str, key: str, value: str) -> None:
        with self._lock:
            if self.manifest.entries.get((kind, key)) != value:
                self.manifest.entries[(kind, key)] = value
                self._dirty = True

    def flush(self) -> None:
        if self.directory is None or not self._dirty:
            return
        with self._lock:
            self.directory.mkdir(parents=True, exist_ok=True)
            tmp = self.path.with_suffix(".tmp")
            tmp.write_text(self.manifest.to_json(), encoding="utf-8")
            tmp.replace(self.path)
            self._dirty = False

    def __len__(self):
        return len(self.manifest.entries)


_active: ValueCache | None = None


def get_cache() -> ValueCache:
    global _active
    if _active is None:
        _active = ValueCache(os.environ.get(CACHE_ENV) or None)
    return _active


def configure_cache(directory: str | os.PathLike | None) -> ValueCache:
    """Install a fresh cache rooted at ``directory`` (``None``: memory only)."""
    global _active
    _active = ValueCache(directory)
    return _active
