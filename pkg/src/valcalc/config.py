"""Runtime caps and defaults.

Caps are first-class because they show up in error messages and in the
acceptance report.  Values come from, in increasing priority: built-in
defaults, the key=value file named by ``VALCALC_CONFIG``, explicit overrides
(CLI flags).
"""

from __future__ import annotations

import configparser
import contextlib
import dataclasses
import os
from pathlib import Path
from typing import Iterator

from .errors import ValidationError

DEFAULT_SEED = 0xA15E5CE1


@dataclasses.dataclass(frozen=True)
class Config:
    max_dim: int = 6
    max_lattice_dim: int = 4
    max_complex_dim: int = 3
    max_facet_hyperplanes: int = 64
    weight_degree_cap: int = 4
    max_bodies: int = 4
    testset_version: int = 1
    seed: int = DEFAULT_SEED

    def replace(self, **changes) -> "Config":
        return dataclasses.replace(self, **changes)


def _parse_int(key: str, text: str) -> int:
    try:
        return int(text.strip(), 0)
    except ValueError:
        raise ValidationError(f"config key {key!r} needs an integer, got {text!r}") from None


def load_config(path: str | os.PathLike | None = None, **overrides) -> Config:
    """Build a Config from an optional key=value file plus overrides.

    The file has no section headers; ``#`` starts a comment.  Unknown keys
    are rejected so that typos do not silently fall back to defaults.
    """
    values: dict[str, int] = {}
    if path is None:
        path = os.environ.get("VALCALC_CONFIG") or None
    if path is not None:
        parser = configparser.ConfigParser(inline_comment_prefixes=("#",))
        parser.read_string("[valcalc]\n" + Path(path).read_text(encoding="utf-8"))
        known = {f.name for f in dataclasses.fields(Config)}
        for key, raw in parser["valcalc"].items():
            if key not in known:
                raise ValidationError(f"unknown config key {key!r}")
            values[key] = _parse_int(key, raw)
    known = {f.name for f in dataclasses.fields(Config)}
    for key, v in overrides.items():
        if key not in known:
            raise ValidationError(f"unknown config key {key!r}")
        if v is not None:
            values[key] = v
    return Config(**values)


_current = Config()


def get_config() -> Config:
    return _current


def set_config(cfg: Config) -> None:
    global _current
    _current = cfg


@contextlib.contextmanager
def using_config(cfg: Config) -> Iterator[Config]:
    prev = get_config()
    set_config(cfg)
    try:
        yield cfg
    finally:
        set_config(prev)
