"""Canonical JSON serialization.

Every hash and signature in the system is computed over these bytes, so two
nodes that disagree here can never reproduce each other's ids. The rules are:
UTF-8, keys sorted by code point, no whitespace, and only values whose JSON
rendering is unique (strings, integers, booleans, lists, string-keyed maps).
Floats and null are rejected rather than risk locale/precision drift.
"""

from __future__ import annotations

import json
from typing import Any

from .errors import SerializationError

__all__ = ["canonical_serialize", "canonical_parse"]


def _check_tree(value: Any, path: str) -> None:
    # bool must be tested before int: bool is an int subclass.
    if isinstance(value, bool):
        return
    if isinstance(value, int):
        return
    if isinstance(value, str):
        return
    if isinstance(value, float):
        raise SerializationError(f"non-integer number at {path}")
    if value is None:
        raise SerializationError(f"null at {path}")
    if isinstance(value, (list, tuple)):
        for i, item in enumerate(value):
            _check_tree(item, f"{path}[{i}]")
        return
    if isinstance(value, dict):
        for key, item in value.items():
            if not isinstance(key, str):
                raise SerializationError(f"non-string key {key!r} at {path}")
            _check_tree(item, f"{path}.{key}")
        return
    raise SerializationError(f"unserializable {type(value).__name__} at {path}")


def canonical_serialize(document: Any) -> bytes:
    """Serialize a document tree to its unique canonical byte form."""
    _check_tree(document, "$")
    text = json.dumps(
        document, sort_keys=True, ensure_ascii=False, separators=(",", ":")
    )
    return text.encode("utf-8")


def canonical_parse(data: bytes | str) -> Any:
    """Inverse of canonical_serialize (accepts any valid JSON, canonical or not)."""
    if isinstance(data, bytes):
        data = data.decode("utf-8")
    return json.loads(data)
