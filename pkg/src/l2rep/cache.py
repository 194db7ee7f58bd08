"""Small content-addressed JSON cache for expensive per-orbit computations.

Entries are written atomically (tmp file + rename) and carry a hash of
their own payload; a corrupted entry is treated as missing and recorded in
the cache's event list so callers can report the recomputation.
"""

from __future__ import annotations

import hashlib
import json
import os
import tempfile
from pathlib import Path


def cache_key(*parts) -> str:
    """Stable hex key from JSON-serializable parts."""
    blob = json.dumps(parts, sort_keys=True, separators=(",", ":"))
    return hashlib.sha256(blob.encode()).hexdigest()


class DiskCache:
    def __init__(self, root):
        self.root = Path(root)
        self.root.mkdir(parents=True, exist_ok=True)
        self.events: list[str] = []

    def _path(self, key: str) -> Path:
        return self.root / f"{key}.json"

    def get(self, key: str):
        path = self._path(key)
        try:
            with open(path) as fh:
                wrapper = json.load(fh)
            payload = wrapper["value"]
            blob = json.dumps(payload, sort_keys=True, separators=(",", ":"))
            if hashlib.sha256(blob.encode()).hexdigest() != wrapper["hash"]:
                self.events.append(f"corrupt:{key}")
                return None
            return payload
        except FileNotFoundError:
            return None
        except (json.JSONDecodeError, KeyError, TypeError):
            self.events.append(f"corrupt:{key}")
            return None

    def put(self, key: str, value) -> None:
        blob = json.dumps(value, sort_keys=True, separators=(",", ":"))
        wrapper = {"hash": hashlib.sha256(blob.encode()).hexdigest(), "value": value}
        fd, tmp = tempfile.mkstemp(dir=self.root, suffix=".tmp")
        try:
            with os.fdopen(fd, "w") as fh:
                json.dump(wrapper, fh)
            os.replace(tmp, self._path(key))
        except BaseException:
            if os.path.exists(tmp):
                os.unlink(tmp)
            raise
