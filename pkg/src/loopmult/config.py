"""Run configuration: TOML input, dataclass defaults, command-line overrides."""
from __future__ import annotations

from dataclasses import asdict, dataclass, field, fields, replace
from pathlib import Path
from typing import Any, Mapping

try:
    import tomllib
except ImportError:  # Python < 3.11
    import tomli as tomllib

SCHEMA_VERSION = "1"

COMMANDS = ("group mul", "loop eval", "loop verify", "section check", "span dim",
            "kepka check", "kepka solve", "mult identify")

# sections each command reads; anything else in the file is a usage error
SECTIONS = {
    "group mul": ("group",),
    "loop eval": ("loop", "points"),
    "loop verify": ("loop",),
    "section check": ("loop", "section"),
    "span dim": ("span",),
    "kepka check": ("loop", "kepka"),
    "kepka solve": ("loop", "kepka"),
    "mult identify": ("loop",),
}


class ConfigError(ValueError):
    """Usage error; the message names the offending field."""


@dataclass(frozen=True)
class Caps:
    max_dim: int = 64
    max_degree: int = 24
    ansatz_degree: int = 3
    grid: int | None = None
    samples: int = 100
    seed: int = 0
    catalog_max_n: int = 8
    catalog_max_k: int = 8

    def __post_init__(self):
        for f in fields(self):
            v = getattr(self, f.name)
            if v is None and f.name == "grid":
                continue
            if not isinstance(v, int) or isinstance(v, bool):
                raise ConfigError(f"caps.{f.name} must be an integer, got {v!r}")
            if f.name != "seed" and v < (0 if f.name == "grid" else 1):
                raise ConfigError(f"caps.{f.name} must be positive, got {v}")


@dataclass(frozen=True)
class RunConfig:
    command: str
    loop: dict = field(default_factory=dict)
    section: dict = field(default_factory=dict)
    group: dict = field(default_factory=dict)
    kepka: dict = field(default_factory=dict)
    span: dict = field(default_factory=dict)
    points: dict = field(default_factory=dict)
    caps: Caps = field(default_factory=Caps)
    out: str | None = None

    def to_json(self) -> dict:
        data = asdict(self)
        data.pop("out")
        return {k: v for k, v in data.items() if v != {} or k == "caps"}


def _require_table(data: Mapping, key: str) -> dict:
    value = data.get(key, {})
    if not isinstance(value, dict):
        raise ConfigError(f"[{key}] must be a table")
    return dict(value)


def parse_config(command: str, data: Mapping[str, Any], overrides: Mapping[str, Any] | None = None,
                 out: str | None = None) -> RunConfig:
    if command not in COMMANDS:
        raise ConfigError(f"unknown command {command!r}; choose from {COMMANDS}")
    data = dict(data)
    file_cmd = data.pop("command", None)
    if file_cmd is not None and file_cmd != command:
        raise ConfigError(f"command: file says {file_cmd!r} but {command!r} was requested")
    wanted = SECTIONS[command]
    allowed = set(wanted) | {"caps"}
    for key in data:
        if key not in allowed:
            raise ConfigError(f"{key}: not used by {command!r} (expected {sorted(allowed)})")
    for key in wanted:
        if key not in data:
            raise ConfigError(f"[{key}] section is required for {command!r}")
    caps_data = _require_table(data, "caps")
    known = {f.name for f in fields(Caps)}
    for key in caps_data:
        if key not in known:
            raise ConfigError(f"caps.{key}: unknown cap (expected {sorted(known)})")
    caps = Caps(**caps_data)
    if overrides:
        caps = replace(caps, **{k: v for k, v in overrides.items() if v is not None})
    tables = {key: _require_table(data, key) for key in wanted}
    return RunConfig(command=command, caps=caps, out=out, **tables)


def load_config(path: str | Path, command: str, overrides: Mapping[str, Any] | None = None,
                out: str | None = None) -> RunConfig:
    path = Path(path)
    try:
        text = path.read_text()
    except OSError as exc:
        raise ConfigError(f"config: cannot read {path}: {exc.strerror}") from None
    try:
        data = tomllib.loads(text)
    except tomllib.TOMLDecodeError as exc:
        raise ConfigError(f"config: TOML parse error in {path}: {exc}") from None
    if not data:
        raise ConfigError(f"config: {path} is empty")
    return parse_config(command, data, overrides, out)
