"""On-disk cache for combinatorial tables.

Tables live under ``$RTNI_CACHE_DIR`` (default ``./.rtni-cache``).  Tables
shipped with the package under ``rtni/data`` are consulted as a read-only
fallback.
"""
from __future__ import annotations

import json
import logging
import os
import tempfile
from pathlib import Path

log = logging.getLogger(__name__)

ENV_VAR = "RTNI_CACHE_DIR"
DEFAULT_DIR = ".rtni-cache"
BUNDLED_DIR = Path(__file__).parent / "data"


def cache_dir() -> Path:
    return Path(os.environ.get(ENV_VAR) or DEFAULT_DIR)


def table_path(kind: str, p: int, root: Path | None = None) -> Path:
    return (root or cache_dir()) / kind / f"p{p:02d}.json"


def load_json(kind: str, p: int):
    """Return the cached table for ``(kind, p)`` or None when absent or unreadable."""
    for path in (table_path(kind, p), table_path(kind, p, BUNDLED_DIR)):
        if not path.is_file():
            continue
        try:
            with open(path, encoding="utf-8") as f:
                return json.load(f)
        except (OSError, ValueError) as exc:
            log.warning("ignoring unreadable cache file %s: %s", path, exc)
    return None


def atomic_write_json(path: Path, data) -> None:
    path.parent.mkdir(parents=True, exist_ok=True)
    fd, tmp = tempfile.mkstemp(dir=path.parent, prefix=path.name, suffix=".tmp")
    try:
        with os.fdopen(fd, "w", encoding="utf-8") as f:
            if isinstance(data, dict):
                json.dump(data, f, indent=1, sort_keys=True)
            else:
                f.write("[\n" + ",\n".join(json.dumps(row) for row in data) + "\n]")
            f.write("\n")
        os.replace(tmp, path)
    except BaseException:
        try:
            os.unlink(tmp)
        except OSError:
            pass
        raise


def store_json(kind: str, p: int, data) -> bool:
    """Persist a table; I/O failures are logged and reported as False."""
    path = table_path(kind, p)
    try:
        atomic_write_json(path, data)
    except OSError as exc:
        log.warning("could not write cache file %s: %s", path, exc)
        return False
    return True
