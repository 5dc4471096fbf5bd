"""
File-backed cache for CLI results.

Entries are keyed by the canonical JSON of (command, inputs, version) and kept
in one JSON document that is rewritten atomically on every insert. A file
written by another package version is discarded on load.
"""
import json
import os
import tempfile
import time
from typing import Any, Dict, Optional

from config.settings import settings
from src.utils.logging_config import get_logger

logger = get_logger(__name__)


class ResultCache:
    """Persistent cache of JSON-serializable payloads."""

    def __init__(self, path: Optional[str] = None, version: str = "0", enabled: Optional[bool] = None):
        self.path = os.path.expanduser(path if path is not None else settings.CACHE_PATH)
        self.version = version
        self.enabled = settings.CACHE_ENABLED if enabled is None else enabled
        self._entries: Optional[Dict[str, Dict[str, Any]]] = None

    def make_key(self, command: str, inputs: Dict[str, Any]) -> str:
        return json.dumps([command, inputs, self.version], sort_keys=True, separators=(',', ':'))

    def _load(self) -> Dict[str, Dict[str, Any]]:
        if self._entries is not None:
            return self._entries
        self._entries = {}
        if not os.path.exists(self.path):
            return self._entries
        try:
            with open(self.path, 'r', encoding='utf-8') as f:
                data = json.load(f)
        except (OSError, ValueError) as e:
            logger.warning(f"Ignoring unreadable cache file {self.path}: {e}")
            return self._entries
        if not isinstance(data, dict) or data.get('version') != self.version:
            logger.info(f"Discarding cache file {self.path} written by another version")
            return self._entries
        entries = data.get('entries')
        if isinstance(entries, dict):
            self._entries = entries
        return self._entries

    def get(self, command: str, inputs: Dict[str, Any]) -> Optional[Any]:
        """Return the cached payload for (command, inputs), or None."""
        if not self.enabled:
            return None
        entry = self._load().get(self.make_key(command, inputs))
        if entry is None:
            return None
        logger.info(f"Cache hit for {command}")
        return entry.get('payload')

    def set(self, command: str, inputs: Dict[str, Any], payload: Any) -> None:
        """Store a payload and flush the cache file."""
        if not self.enabled:
            return
        entries = self._load()
        entries[self.make_key(command, inputs)] = {'payload': payload, 'stored_at': time.time()}
        self._flush(entries)

    def clear(self) -> None:
        self._entries = {}
        if os.path.exists(self.path):
            os.remove(self.path)

    def _flush(self, entries: Dict[str, Dict[str, Any]]) -> None:
        directory = os.path.dirname(os.path.abspath(self.path))
        try:
            os.makedirs(directory, exist_ok=True)
            fd, tmp_path = tempfile.mkstemp(dir=directory, prefix='.cache-', suffix='.json')
        except OSError as e:
            logger.warning(f"Could not write cache file {self.path}: {e}")
            return
        try:
            with os.fdopen(fd, 'w', encoding='utf-8') as f:
                json.dump({'version': self.version, 'entries': entries}, f, sort_keys=True)
            os.replace(tmp_path, self.path)
        except OSError as e:
            logger.warning(f"Could not write cache file {self.path}: {e}")
            if os.path.exists(tmp_path):
                os.remove(tmp_path)
