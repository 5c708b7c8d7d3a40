"""Layered configuration: defaults < YAML file < environment variables.

Keys are dotted (``tiles.url``). Environment overrides use the prefix
``SOLARSCAN_`` with the dots replaced by underscores, e.g.
``SOLARSCAN_TILES_URL``. Explicit CLI flags beat everything.
"""

import os
from pathlib import Path

import yaml

DEFAULTS = {
    "geocoder": {"url": "https://nominatim.openstreetmap.org/search"},
    "overpass": {
        "url": "https://overpass-api.de/api/interpreter",
        "query_template": None,  # geodata.DEFAULT_OVERPASS_QUERY when unset
        "max_area_km2": 25.0,
    },
    "tiles": {
        "url": None,  # e.g. "https://tiles.example/{z}/{x}/{y}.png"
        "cache_dir": None,
        "size": 256,
    },
    "image": {"size": 1500, "zoom": 21},
    "detector": {
        "command": None,  # adapter command line, or "mock:<sidecar.json>"
        "prompt": "solar panel",
        "threshold": 0.70,
        "workers": 2,
    },
    "imagery": {"fanout": 8, "retries": 3, "backoff": 0.5},
    "tmy": {
        "url": "https://re.jrc.ec.europa.eu/api/v5_2/tmy?lat={lat}&lon={lon}&outputformat=csv",
        "file": None,
        "cache_dir": None,
    },
    "profile": {"year": 2023},
    "storage": {"dir": "./solarscan-data"},
    "scan": {"workers": 4},
    "rate_limit": {"requests_per_sec": 1.0},
}

ENV_PREFIX = "SOLARSCAN_"


class Config:
    def __init__(self, data: dict | None = None):
        self._data = _deep_merge(_copy(DEFAULTS), data or {})
        self._apply_env()

    @classmethod
    def load(cls, path: str | Path | None = None) -> "Config":
        data = {}
        if path is not None:
            loaded = yaml.safe_load(Path(path).read_text(encoding="utf-8"))
            if loaded is not None:
                if not isinstance(loaded, dict):
                    raise ValueError(f"config file {path} must be a mapping")
                data = loaded
        return cls(data)

    def _apply_env(self) -> None:
        for section, table in self._data.items():
            if not isinstance(table, dict):
                continue
            for key in table:
                env = f"{ENV_PREFIX}{section.upper()}_{key.upper()}"
                if env in os.environ:
                    table[key] = _coerce(os.environ[env], table[key])

    def get(self, dotted: str, default=None):
        node = self._data
        for part in dotted.split("."):
            if not isinstance(node, dict) or part not in node:
                return default
            node = node[part]
        return node if node is not None else default

    def set(self, dotted: str, value) -> None:
        parts = dotted.split(".")
        node = self._data
        for part in parts[:-1]:
            node = node.setdefault(part, {})
        node[parts[-1]] = value


def _coerce(raw: str, previous):
    if isinstance(previous, bool):
        return raw.lower() in ("1", "true", "yes", "on")
    if isinstance(previous, int) and not isinstance(previous, bool):
        return int(raw)
    if isinstance(previous, float):
        return float(raw)
    return raw


def _copy(d: dict) -> dict:
    return {k: _copy(v) if isinstance(v, dict) else v for k, v in d.items()}


def _deep_merge(base: dict, extra: dict) -> dict:
    for k, v in extra.items():
        if isinstance(v, dict) and isinstance(base.get(k), dict):
            _deep_merge(base[k], v)
        else:
            base[k] = v
    return base
