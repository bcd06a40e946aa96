"""Property values and property sets.

A property value is one of

* ``str`` (text),
* ``decimal.Decimal`` (number; ints and floats are converted on the way in),
* ``bool`` (flag),
* ``frozenset`` of ``str`` (string set),
* :class:`PropertyMap` (nested object).

Python treats ``True == 1``, so value comparisons go through :func:`value_key`,
which tags every value with its kind.
"""

from __future__ import annotations

import json
from collections.abc import Iterable, Iterator, Mapping
from dataclasses import dataclass
from decimal import Decimal
from typing import Any, Union

from .errors import DuplicatePropertyName, DuplicateSetMember, InvalidValue

PropertyValue = Union[str, Decimal, bool, frozenset, "PropertyMap"]

TEXT, NUMBER, FLAG, STRING_SET, NESTED = "text", "number", "flag", "stringSet", "nested"


def to_number(raw: Any) -> Decimal:
    if isinstance(raw, bool):
        raise InvalidValue(repr(raw), f"not a number: {raw!r}")
    if isinstance(raw, Decimal):
        number = raw
    elif isinstance(raw, int):
        number = Decimal(raw)
    elif isinstance(raw, float):
        number = Decimal(repr(raw))
    else:
        raise InvalidValue(repr(raw), f"not a number: {raw!r}")
    if not number.is_finite():
        raise InvalidValue(str(number), "numbers must be finite")
    return number


def coerce_value(raw: Any) -> PropertyValue:
    """Convert plain Python data into a property value."""
    if isinstance(raw, (bool, str, PropertyMap)):
        return raw
    if isinstance(raw, (int, float, Decimal)):
        return to_number(raw)
    if isinstance(raw, (set, frozenset, list, tuple)):
        members = list(raw)
        for member in members:
            if not isinstance(member, str):
                raise InvalidValue(repr(member), f"string sets hold strings only, got {member!r}")
        result = frozenset(members)
        if len(result) != len(members):
            dup = next(m for m in members if members.count(m) > 1)
            raise DuplicateSetMember(dup)
        return result
    if isinstance(raw, Mapping):
        return PropertyMap(raw)
    raise InvalidValue(repr(raw), f"unsupported property value {raw!r}")


def kind_of(value: Any) -> str | None:
    if isinstance(value, bool):
        return FLAG
    if isinstance(value, Decimal):
        return NUMBER
    if isinstance(value, str):
        return TEXT
    if isinstance(value, frozenset):
        return STRING_SET
    if isinstance(value, PropertyMap):
        return NESTED
    return None


def value_key(value: PropertyValue) -> tuple:
    """Hashable, kind-tagged form used for equality."""
    kind = kind_of(value)
    if kind is None:
        raise InvalidValue(repr(value), f"not a property value: {value!r}")
    if kind == NESTED:
        return (kind, value.key())
    return (kind, value)


def _strip_zeros(number: Decimal) -> Decimal:
    # Decimal.normalize() would round to the context precision
    sign, digits, exponent = number.as_tuple()
    digits = list(digits)
    while len(digits) > 1 and digits[-1] == 0:
        digits.pop()
        exponent += 1
    return Decimal((sign, tuple(digits), exponent))


def format_number(number: Decimal) -> str:
    if number.is_zero():
        return "0"
    number = _strip_zeros(number)
    # scientific form keeps 1E+999999 from expanding into a million digits
    if not -30 <= number.adjusted() < 30:
        return str(number)
    if number == number.to_integral_value():
        return str(int(number))
    return format(number, "f")


def canonical_text(value: PropertyValue) -> str:
    """Compact canonical JSON text of a value; also a total sort token."""
    kind = kind_of(value)
    if kind == FLAG:
        return "true" if value else "false"
    if kind == NUMBER:
        return format_number(value)
    if kind == TEXT:
        return json.dumps(value, ensure_ascii=False)
    if kind == STRING_SET:
        return "[" + ",".join(json.dumps(m, ensure_ascii=False) for m in sorted(value)) + "]"
    if kind == NESTED:
        return value.canonical_text()
    raise InvalidValue(repr(value), f"not a property value: {value!r}")


@dataclass(frozen=True, eq=False)
class Property:
    """A named property value."""

    name: str
    value: PropertyValue

    def __post_init__(self):
        if not isinstance(self.name, str) or not self.name:
            raise InvalidValue(repr(self.name), "property names must be non-empty strings")
        object.__setattr__(self, "value", coerce_value(self.value))

    def __eq__(self, other):
        if not isinstance(other, Property):
            return NotImplemented
        return self.name == other.name and value_key(self.value) == value_key(other.value)

    def __hash__(self):
        return hash((self.name, value_key(self.value)))


class PropertyMap(Mapping):
    """Immutable set of properties keyed by name.

    Used for entity properties, link descriptors and nested values alike.
    Accepts a mapping ``{name: value}`` or an iterable of :class:`Property`
    (or ``(name, value)`` pairs); a repeated name raises
    :class:`DuplicatePropertyName`.
    """

    __slots__ = ("_values", "_key")

    def __init__(self, properties: Mapping[str, Any] | Iterable[Any] = ()):
        values: dict[str, PropertyValue] = {}
        if isinstance(properties, Mapping):
            items = (Property(name, value) for name, value in properties.items())
        else:
            items = (p if isinstance(p, Property) else Property(*p) for p in properties)
        for prop in items:
            if prop.name in values:
                raise DuplicatePropertyName(prop.name)
            values[prop.name] = prop.value
        self._values = dict(sorted(values.items()))
        self._key = None

    def __getitem__(self, name: str) -> PropertyValue:
        return self._values[name]

    def __iter__(self) -> Iterator[str]:
        return iter(self._values)

    def __len__(self) -> int:
        return len(self._values)

    def properties(self) -> tuple[Property, ...]:
        return tuple(Property(n, v) for n, v in self._values.items())

    def key(self) -> tuple:
        if self._key is None:
            self._key = tuple((n, value_key(v)) for n, v in self._values.items())
        return self._key

    def canonical_text(self) -> str:
        body = ",".join(
            json.dumps(n, ensure_ascii=False) + ":" + canonical_text(v) for n, v in self._values.items()
        )
        return "{" + body + "}"

    def __eq__(self, other):
        if isinstance(other, PropertyMap):
            return self.key() == other.key()
        return NotImplemented

    def __hash__(self):
        return hash(self.key())

    def __repr__(self):
        return f"PropertyMap({self._values!r})"
