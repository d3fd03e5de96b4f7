"""Content-addressed on-disk cache of JSON-serialisable results."""

from __future__ import annotations

import hashlib
import json
import os
import tempfile
import threading
from pathlib import Path

from .. import __version__

CACHE_ENV = "SELMER_EULER_CACHE"


def cache_key(operation: str, *parts) -> str:
    blob = json.dumps([operation, __version__, *parts], sort_keys=True, separators=(",", ":"))
    return hashlib.sha256(blob.encode()).hexdigest()


class CacheStore:
    """Reads go straight to disk; writes are serialised and land by atomic rename."""

    def __init__(self, directory):
        self.directory = Path(directory)
        self._lock = threading.Lock()

    @classmethod
    def from_env(cls) -> CacheStore | None:
        d = os.environ.get(CACHE_ENV)
        return cls(d) if d else None

    def _path(self, key: str) -> Path:
        return self.directory / key[:2] / f"{key}.json"

    def get(self, operation: str, *parts):
        path = self._path(cache_key(operation, *parts))
        try:
            return json.loads(path.read_text())
        except (FileNotFoundError, json.JSONDecodeError):
            return None

    def put(self, operation: str, value, *parts):
        path = self._path(cache_key(operation, *parts))
        data = json.dumps(value, sort_keys=True)
        with self._lock:
            path.parent.mkdir(parents=True, exist_ok=True)
            fd, tmp = tempfile.mkstemp(dir=path.parent, suffix=".tmp")
            with os.fdopen(fd, "w") as fh:
                fh.write(data)
            os.replace(tmp, path)
        return value

    def memo(self, operation: str, compute, *parts):
        hit = self.get(operation, *parts)
        if hit is not None:
            return hit
        return self.put(operation, compute(), *parts)
