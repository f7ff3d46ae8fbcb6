"""engine.cache

Result cache keyed by the canonical run config.

Entries are complete report documents stored as the exact bytes that were
first written, so a cache hit reproduces the report byte for byte. Writes go
through a temporary file and os.replace (last writer wins).
"""

from __future__ import annotations

import json
import logging
import os
import tempfile
from pathlib import Path
from typing import Any, Dict, Optional

from core import API_VERSION
from core.rng import stable_digest

from .config import RunConfig, default_cache_dir

logger = logging.getLogger(__name__)


def cache_key(config: RunConfig) -> str:
    return stable_digest(config.to_dict(), API_VERSION, salt="odba-cache")


class ResultCache:
    def __init__(self, root: Optional[Path] = None) -> None:
        self.root = Path(root) if root is not None else default_cache_dir()

    def path_for(self, config: RunConfig) -> Path:
        return self.root / f"{cache_key(config)}.json"

    def load_text(self, config: RunConfig) -> Optional[str]:
        path = self.path_for(config)
        try:
            text = path.read_text(encoding="utf-8")
        except FileNotFoundError:
            logger.info("cache miss %s", path.name)
            return None
        except OSError as e:
            logger.warning("cache unreadable %s: %s", path, e)
            return None
        try:
            json.loads(text)
        except json.JSONDecodeError:
            logger.warning("cache entry %s is corrupt; ignoring it", path.name)
            return None
        logger.info("cache hit %s", path.name)
        return text

    def load(self, config: RunConfig) -> Optional[Dict[str, Any]]:
        text = self.load_text(config)
        return None if text is None else json.loads(text)

    def store_text(self, config: RunConfig, text: str) -> Optional[Path]:
        path = self.path_for(config)
        try:
            self.root.mkdir(parents=True, exist_ok=True)
            fd, tmp = tempfile.mkstemp(prefix=".tmp-", suffix=".json", dir=self.root)
            with os.fdopen(fd, "w", encoding="utf-8") as fh:
                fh.write(text)
            os.replace(tmp, path)
        except OSError as e:
            logger.warning("cache write failed for %s: %s", path, e)
            return None
        return path
