"""Size caps and worker budget, overridable through ``PALAB_*`` environment variables."""

from __future__ import annotations

import os
from dataclasses import dataclass, fields, replace


class ConfigError(ValueError):
    pass


@dataclass(frozen=True)
class Limits:
    topology_s_max: int = 4
    table_entry_max: int = 10**7
    congruence_s_max: int = 8
    search_budget: int = 10**9
    workers: int = 1

    def __post_init__(self):
        for f in fields(self):
            if getattr(self, f.name) < 1:
                raise ConfigError(f"{f.name} must be positive, got {getattr(self, f.name)}")

    @classmethod
    def from_env(cls, environ=None, **overrides) -> "Limits":
        environ = os.environ if environ is None else environ
        values = {}
        for f in fields(cls):
            key = "PALAB_" + f.name.upper()
            if key in environ:
                try:
                    values[f.name] = int(environ[key])
                except ValueError:
                    raise ConfigError(f"{key} must be an integer, got {environ[key]!r}") from None
        values.update({k: v for k, v in overrides.items() if v is not None})
        return cls(**values)

    def with_(self, **changes) -> "Limits":
        return replace(self, **changes)


DEFAULT = Limits()
