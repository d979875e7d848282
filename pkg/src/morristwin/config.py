"""Minimal `key = value` configuration files.

Lines are `name = value`; blank lines and `#` comments are skipped. Keys
use the same names as the dataclass fields they override (CLI flags use
dashes, files use underscores). Values are coerced to the field's type.
Command-line flags always win over file values.
"""

import dataclasses
from pathlib import Path


class ConfigError(ValueError):
    pass


def parse_kv_file(path: str | Path) -> dict[str, str]:
    values: dict[str, str] = {}
    for lineno, raw in enumerate(Path(path).read_text().splitlines(), 1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        key, sep, value = line.partition("=")
        if not sep:
            raise ConfigError(f"{path}:{lineno}: expected 'key = value'")
        values[key.strip()] = value.strip()
    return values


def _coerce(text: str, field_type) -> object:
    if field_type in (int, "int"):
        return int(text)
    if field_type in (float, "float"):
        return float(text)
    if field_type in (bool, "bool"):
        return text.lower() in ("1", "true", "yes", "on")
    return text


def apply_overrides(instance, values: dict[str, str], strict: bool = False):
    """Set matching dataclass fields from string values; unknown keys are
    ignored unless strict."""
    fields = {f.name: f for f in dataclasses.fields(instance)}
    for key, text in values.items():
        field = fields.get(key)
        if field is None:
            if strict:
                raise ConfigError(f"unknown config key {key!r}")
            continue
        base = field.type
        if isinstance(base, str):
            base = base.split("|")[0].strip()
        try:
            setattr(instance, key, _coerce(text, base))
        except ValueError as exc:
            raise ConfigError(f"{key}: {exc}") from None
    return instance
