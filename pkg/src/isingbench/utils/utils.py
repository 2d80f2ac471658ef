# Copyright (c) 2025 takotime808

from __future__ import annotations

import dataclasses
import json
import typing
from pathlib import Path
from typing import Any, Dict, Mapping, Type, TypeVar, Union

import numpy as np

from isingbench.errors import InvalidArgumentError

T = TypeVar("T")

_TRUE = {"1", "true", "yes", "on"}
_FALSE = {"0", "false", "no", "off", ""}


def derive_seed(master_seed: int, trial_index: int) -> int:
    """
    Derive the 64-bit seed of one trial from ``(master_seed, trial_index)``.

    The mixing function is numpy's :class:`~numpy.random.SeedSequence` entropy
    hash applied to the pair; the first 64-bit word of its generated state is
    the trial seed. Distinct pairs give statistically independent streams.

    Examples
    --------
    >>> derive_seed(1, 0) == derive_seed(1, 0)
    True
    >>> derive_seed(1, 0) != derive_seed(1, 1)
    True
    """
    if master_seed < 0 or trial_index < 0:
        raise InvalidArgumentError("seeds and trial indices must be non-negative")
    ss = np.random.SeedSequence([int(master_seed), int(trial_index)])
    return int(ss.generate_state(1, dtype=np.uint64)[0])


def make_rng(seed: int) -> np.random.Generator:
    """
    Build the project's deterministic generator: PCG64 seeded via SeedSequence.

    Parameters
    ----------
    seed
        Non-negative integer (typically 64-bit).
    """
    if seed < 0:
        raise InvalidArgumentError(f"seed must be non-negative, got {seed}")
    return np.random.Generator(np.random.PCG64(np.random.SeedSequence(int(seed))))


def json_dumps_safe(obj) -> str:
    """
    Serialize an object to JSON, falling back to ``str`` for values the
    encoder does not know (numpy scalars, paths, ...).

    Output is indented and key-sorted so files written from equal objects are
    byte-identical.

    Examples
    --------
    >>> json.loads(json_dumps_safe({"p": Path("x")}))
    {'p': 'x'}
    """
    def _default(o):
        if isinstance(o, np.integer):
            return int(o)
        if isinstance(o, np.floating):
            return float(o)
        return str(o)

    return json.dumps(obj, ensure_ascii=False, sort_keys=True, indent=2, default=_default)


def norm_ext(p: Union[str, Path]) -> str:
    """
    Normalize a file's extension to lowercase without the leading dot.

    Examples
    --------
    >>> norm_ext("cfg.JSON")
    'json'
    >>> norm_ext("noext")
    ''
    """
    return Path(p).suffix.lower().lstrip(".")


def parse_key_values(text: str) -> Dict[str, str]:
    """
    Parse flat ``key=value`` text. ``#`` starts a comment line; blank lines
    are ignored; whitespace around keys and values is stripped.
    """
    out: Dict[str, str] = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        if "=" not in line:
            raise InvalidArgumentError(f"config line {lineno}: expected key=value, got {raw!r}")
        key, value = line.split("=", 1)
        key = key.strip()
        if not key:
            raise InvalidArgumentError(f"config line {lineno}: empty key")
        out[key] = value.strip()
    return out


def load_config(path: Union[str, Path]) -> Dict[str, Any]:
    """
    Load a flat solver configuration file.

    ``.json`` files must hold a single object; anything else is read as
    ``key=value`` text. Values from ``key=value`` files stay strings and are
    coerced later by :func:`config_from_mapping`.
    """
    p = Path(path)
    if not p.exists() or not p.is_file():
        raise FileNotFoundError(f"Not a file: {p}")
    text = p.read_text(encoding="utf-8")
    if norm_ext(p) == "json":
        obj = json.loads(text)
        if not isinstance(obj, dict):
            raise InvalidArgumentError(f"{p}: JSON config must be an object")
        return dict(obj)
    return dict(parse_key_values(text))


def _coerce(value: Any, hint: Any, key: str) -> Any:
    origin = typing.get_origin(hint)
    if origin is Union:
        args = [a for a in typing.get_args(hint) if a is not type(None)]
        if value is None or (isinstance(value, str) and value.strip().lower() in {"none", "null", "auto"}):
            return None
        return _coerce(value, args[0], key)
    if origin is typing.Literal:
        allowed = typing.get_args(hint)
        if value not in allowed:
            raise InvalidArgumentError(f"{key}: expected one of {allowed}, got {value!r}")
        return value
    if hint is bool:
        if isinstance(value, bool):
            return value
        s = str(value).strip().lower()
        if s in _TRUE:
            return True
        if s in _FALSE:
            return False
        raise InvalidArgumentError(f"{key}: expected a boolean, got {value!r}")
    if hint in (int, float, str):
        try:
            if hint is int and isinstance(value, str):
                return int(value.strip(), 0)
            if hint is int and isinstance(value, float) and not value.is_integer():
                raise ValueError(value)
            return hint(value)
        except (TypeError, ValueError) as e:
            raise InvalidArgumentError(f"{key}: expected {hint.__name__}, got {value!r}") from e
    return value


def config_from_mapping(cls: Type[T], mapping: Mapping[str, Any], *, base: Any = None) -> T:
    """
    Build (or update) a config dataclass from a flat mapping.

    Values are coerced according to the dataclass type hints, so string
    values read from ``key=value`` files work. Unknown keys are an error.

    Parameters
    ----------
    cls
        Config dataclass type.
    mapping
        Field name → raw value.
    base
        Optional existing instance whose values serve as defaults.
    """
    hints = typing.get_type_hints(cls)
    names = {f.name for f in dataclasses.fields(cls)}
    kwargs: Dict[str, Any] = {}
    for key, raw in mapping.items():
        if key not in names:
            raise InvalidArgumentError(f"unknown {cls.__name__} key: {key!r}")
        kwargs[key] = _coerce(raw, hints[key], key)
    if base is not None:
        return dataclasses.replace(base, **kwargs)
    return cls(**kwargs)
