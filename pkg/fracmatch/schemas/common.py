"""Shared field types and JSON helpers."""

import json
from fractions import Fraction
from typing import Annotated, Any

from pydantic import BaseModel, PlainSerializer, PlainValidator, WithJsonSchema


def _to_fraction(v: Any) -> Fraction:
    if isinstance(v, Fraction):
        return v
    if isinstance(v, bool):
        raise ValueError("booleans are not ratios")
    if isinstance(v, int | str):
        return Fraction(v)
    if isinstance(v, float):
        raise ValueError("floats are not exact ratios; pass 'p/q' strings")
    raise ValueError(f"cannot read a ratio from {type(v).__name__}")


RatioField = Annotated[
    Fraction,
    PlainValidator(_to_fraction),
    PlainSerializer(lambda r: str(r), return_type=str),
    WithJsonSchema({"type": "string", "pattern": r"^-?\d+(/\d+)?$"}),
]


def _default(obj: Any) -> Any:
    if isinstance(obj, Fraction):
        return str(obj)
    if isinstance(obj, BaseModel):
        return obj.model_dump(mode="python", by_alias=True)
    if isinstance(obj, set | frozenset):
        return sorted(obj)
    if hasattr(obj, "__dataclass_fields__"):
        return {name: getattr(obj, name) for name in obj.__dataclass_fields__}
    raise TypeError(f"{type(obj).__name__} is not JSON serializable")


def dumps(obj: Any, *, indent: int | None = None) -> str:
    """JSON text for models holding big integers, fractions and enclosures."""
    if isinstance(obj, BaseModel):
        obj = obj.model_dump(mode="python", by_alias=True)
    return json.dumps(obj, default=_default, indent=indent, sort_keys=indent is None)


def canonical_json(data: dict[str, Any]) -> str:
    """Stable text for digests: sorted keys, compact separators."""
    return json.dumps(data, default=_default, sort_keys=True, separators=(",", ":"))
