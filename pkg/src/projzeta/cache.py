"""Content-addressed on-disk cache for emitted JSON payloads.

Keys hash the operation, its parameters and a fingerprint of the package
source, so results from older code never surface.  Entries are written
through a temporary file and renamed into place.
"""
from __future__ import annotations

import hashlib
import json
import logging
import os
import tempfile
from functools import lru_cache
from pathlib import Path
from typing import Callable

log = logging.getLogger(__name__)

ENV_VAR = "PROJZETA_CACHE"


@lru_cache(maxsize=1)
def code_version() -> str:
    """sha256 over the package's own source files."""
    h = hashlib.sha256()
    root = Path(__file__).parent
    for path in sorted(root.glob("*.py")):
        h.update(path.name.encode())
        h.update(path.read_bytes())
    return h.hexdigest()[:16]


def default_cache_dir() -> Path | None:
    env = os.environ.get(ENV_VAR)
    return Path(env) if env else None


class ResultCache:
    def __init__(self, root: Path | str | None, version: str | None = None):
        self.root = Path(root) if root is not None else None
        self.version = version or code_version()

    def key(self, op: str, params: dict) -> str:
        blob = json.dumps({"op": op, "params": params, "version": self.version}, sort_keys=True)
        return hashlib.sha256(blob.encode()).hexdigest()

    def _path(self, key: str) -> Path:
        assert self.root is not None
        return self.root / key[:2] / f"{key}.json"

    def load_or_compute(self, op: str, params: dict, compute: Callable[[], str]) -> str:
        """Return the cached text for (op, params), computing and storing it
        on a miss.  A corrupt entry is recomputed with a warning."""
        if self.root is None:
            return compute()
        key = self.key(op, params)
        path = self._path(key)
        if path.exists():
            try:
                text = path.read_text(encoding="utf-8")
                json.loads(text)
                return text
            except (OSError, ValueError) as exc:
                log.warning("corrupt cache entry %s (%s); recomputing", path, exc)
        text = compute()
        path.parent.mkdir(parents=True, exist_ok=True)
        atomic_write(path, text)
        return text


def atomic_write(path: Path, text: str) -> None:
    fd, tmp = tempfile.mkstemp(dir=path.parent, prefix=".tmp-", suffix=path.suffix)
    try:
        with os.fdopen(fd, "w", encoding="utf-8") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise
