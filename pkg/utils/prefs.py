"""Lightweight user preferences (JSON file in the app data dir).

Holds run defaults a user wants on every invocation without retyping
flags: worker count, output format and seed. Anything set here loses to an
explicit flag or environment variable. A missing or corrupt file reads as
empty, so it can never block a run.
"""

from __future__ import annotations

import json
import os

from utils.paths import get_data_dir

_KNOWN = ("workers", "format", "seed")


def _path() -> str:
    return os.path.join(get_data_dir(), "prefs.json")


def _load() -> dict:
    try:
        with open(_path(), encoding="utf-8") as f:
            data = json.load(f)
    except (OSError, json.JSONDecodeError):
        return {}
    return data if isinstance(data, dict) else {}


def _save(data: dict) -> None:
    try:
        with open(_path(), "w", encoding="utf-8") as f:
            json.dump(data, f, indent=2)
    except OSError:
        pass


def get_pref(name: str, default=None):
    """Return a saved preference, or `default` when unset or unknown."""
    if name not in _KNOWN:
        return default
    return _load().get(name, default)


def set_pref(name: str, value) -> None:
    if name not in _KNOWN:
        raise KeyError(f"unknown preference {name!r}; expected one of {_KNOWN}")
    data = _load()
    data[name] = value
    _save(data)
