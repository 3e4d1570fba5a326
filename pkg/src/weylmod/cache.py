"""On-disk JSON cache keyed by a content hash of (version, operation, parameters).

Entries carry a checksum of their payload. Anything unreadable, mismatched or
tampered with is deleted and recomputed; a cache hit is therefore always
byte-identical to a fresh computation.
"""

from __future__ import annotations

import hashlib
import json
import logging
import os
import tempfile
from pathlib import Path
from typing import Any, Callable

from . import __version__

log = logging.getLogger(__name__)


def _canonical(obj: Any) -> str:
    return json.dumps(obj, sort_keys=True, separators=(",", ":"))


def cache_key(operation: str, params: dict) -> str:
    blob = _canonical({"version": __version__, "operation": operation, "params": params})
    return hashlib.sha256(blob.encode()).hexdigest()


class JsonCache:
    def __init__(self, directory: str | os.PathLike | None):
        self.directory = Path(directory) if directory else None
        if self.directory is not None:
            self.directory.mkdir(parents=True, exist_ok=True)

    def _path(self, key: str) -> Path:
        return self.directory / f"{key}.json"

    def get(self, operation: str, params: dict) -> Any | None:
        if self.directory is None:
            return None
        key = cache_key(operation, params)
        path = self._path(key)
        if not path.exists():
            return None
        try:
            entry = json.loads(path.read_text())
            payload = entry["payload"]
            ok = entry["key"] == key and entry["checksum"] == hashlib.sha256(_canonical(payload).encode()).hexdigest()
        except (OSError, ValueError, KeyError, TypeError):
            ok = False
        if not ok:
            log.warning("discarding corrupt cache entry %s", path.name)
            path.unlink(missing_ok=True)
            return None
        return payload

    def put(self, operation: str, params: dict, payload: Any) -> None:
        if self.directory is None:
            return
        key = cache_key(operation, params)
        entry = {
            "key": key,
            "operation": operation,
            "params": params,
            "payload": payload,
            "checksum": hashlib.sha256(_canonical(payload).encode()).hexdigest(),
        }
        fd, tmp = tempfile.mkstemp(dir=self.directory, suffix=".tmp")
        with os.fdopen(fd, "w") as fh:
            fh.write(_canonical(entry))
        os.replace(tmp, self._path(key))

    def fetch(self, operation: str, params: dict, compute: Callable[[], Any]) -> Any:
        hit = self.get(operation, params)
        if hit is not None:
            return hit
        value = compute()
        self.put(operation, params, value)
        return value
