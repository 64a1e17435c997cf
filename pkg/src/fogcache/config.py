"""JSON configuration: device powers, PV panel and battery parameters.

Schema::

    {
      "description": "free text (optional)",
      "power": {<PowerConfig fields>},
      "pv":    {<PvConfig fields>},     (optional)
      "esd":   {<EsdConfig fields>}     (optional)
    }

Unknown keys at any level are errors so that typos fail fast.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field, fields
from importlib import resources
from pathlib import Path

from .energy import EsdConfig, PvConfig
from .netmodel import PowerConfig


class ConfigError(ValueError):
    """Malformed or inconsistent configuration file."""


@dataclass(frozen=True)
class FogcacheConfig:
    power: PowerConfig
    pv: PvConfig = field(default_factory=PvConfig)
    esd: EsdConfig = field(default_factory=EsdConfig)
    description: str = ""


_SECTIONS = {"power": PowerConfig, "pv": PvConfig, "esd": EsdConfig}


def _section(name: str, cls, raw, where: str):
    if not isinstance(raw, dict):
        raise ConfigError(f"{where}: section {name!r} must be an object")
    known = {f.name for f in fields(cls)}
    unknown = sorted(set(raw) - known)
    if unknown:
        raise ConfigError(f"{where}: unknown key(s) in {name!r}: {', '.join(unknown)}")
    try:
        return cls(**raw)
    except (TypeError, ValueError) as exc:
        raise ConfigError(f"{where}: invalid {name!r} section: {exc}") from exc


def parse_config(raw, where: str = "<config>") -> FogcacheConfig:
    if not isinstance(raw, dict):
        raise ConfigError(f"{where}: top level must be an object")
    unknown = sorted(set(raw) - set(_SECTIONS) - {"description"})
    if unknown:
        raise ConfigError(f"{where}: unknown top-level key(s): {', '.join(unknown)}")
    if "power" not in raw:
        raise ConfigError(f"{where}: missing required section 'power'")
    description = raw.get("description", "")
    if not isinstance(description, str):
        raise ConfigError(f"{where}: 'description' must be a string")
    parts = {name: _section(name, cls, raw[name], where)
             for name, cls in _SECTIONS.items() if name in raw}
    return FogcacheConfig(description=description, **parts)


def load_config(path: str | Path) -> FogcacheConfig:
    path = Path(path)
    try:
        raw = json.loads(path.read_text(encoding="utf-8"))
    except json.JSONDecodeError as exc:
        raise ConfigError(f"{path}: line {exc.lineno}: {exc.msg}") from exc
    return parse_config(raw, str(path))


def desk_config() -> FogcacheConfig:
    """The bundled desk-scale configuration (placeholder core device powers)."""
    with resources.as_file(resources.files("fogcache") / "data" / "desk.json") as p:
        return load_config(p)
