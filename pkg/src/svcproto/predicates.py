"""Unary predicates over property values, their text syntax and evaluation.

Text grammar::

    predicate := "=" literal | "!=" literal
               | (">" | ">=" | "<" | "<=") number
               | "superset" set | "subset" set
               | "contains" string | "in" set
    set       := "{" [element ("," element)*] "}"
    literal   := quoted-string | number | "true" | "false"

Set elements may also be bare words (``{Real-estate Developer}``).  The
symbols ``⊃ ⊇ ⊂ ⊆ ∈ ≠ ≥ ≤`` are accepted as aliases of the keywords and
operators.  ``superset`` is the non-strict relation.
"""

from __future__ import annotations

import json
import re
from collections.abc import Iterable, Mapping
from dataclasses import dataclass
from decimal import Decimal
from enum import Enum
from typing import TYPE_CHECKING, Any

from .errors import InvalidValue, PredicateSyntaxError
from .values import (
    FLAG,
    NESTED,
    NUMBER,
    STRING_SET,
    TEXT,
    PropertyMap,
    coerce_value,
    format_number,
    kind_of,
    to_number,
    value_key,
)

if TYPE_CHECKING:
    from .model import PropertyConstraint


class Op(str, Enum):
    EQ = "="
    NEQ = "!="
    GT = ">"
    GE = ">="
    LT = "<"
    LE = "<="
    SUPERSET = "superset"
    SUBSET = "subset"
    CONTAINS = "contains"
    IN = "in"


_COMPARISONS = {Op.GT, Op.GE, Op.LT, Op.LE}
_LITERAL_KINDS = (TEXT, NUMBER, FLAG)


def _literal(raw: Any):
    value = coerce_value(raw)
    if kind_of(value) not in _LITERAL_KINDS:
        raise InvalidValue(repr(raw), f"not a literal: {raw!r}")
    return value


def _literal_sort_key(value) -> tuple:
    kind = kind_of(value)
    return (_LITERAL_KINDS.index(kind), value)


@dataclass(frozen=True, eq=False)
class Predicate:
    """A predicate ``op operand``.

    Operand types: a literal for ``=``/``!=``, a ``Decimal`` for the ordered
    comparisons, a ``frozenset`` of ``str`` for ``superset``/``subset``, a
    ``str`` for ``contains`` and a sorted tuple of literals for ``in``.
    """

    op: Op
    operand: Any

    def __post_init__(self):
        op = Op(self.op)
        object.__setattr__(self, "op", op)
        raw = self.operand
        if op in (Op.EQ, Op.NEQ):
            operand = _literal(raw)
        elif op in _COMPARISONS:
            operand = to_number(raw)
        elif op in (Op.SUPERSET, Op.SUBSET):
            if isinstance(raw, str):
                raise InvalidValue(raw, f"{op.value} needs a set of strings")
            operand = coerce_value(frozenset(raw))
        elif op is Op.CONTAINS:
            if not isinstance(raw, str):
                raise InvalidValue(repr(raw), "contains needs a string")
            operand = raw
        else:
            if isinstance(raw, str):
                raise InvalidValue(raw, "in needs a set of literals")
            unique = {value_key(v): v for v in (_literal(r) for r in raw)}
            operand = tuple(sorted(unique.values(), key=_literal_sort_key))
        object.__setattr__(self, "operand", operand)

    def _key(self):
        if self.op is Op.IN:
            return (self.op, frozenset(value_key(v) for v in self.operand))
        if self.op in (Op.EQ, Op.NEQ):
            return (self.op, value_key(self.operand))
        return (self.op, self.operand)

    def __eq__(self, other):
        if not isinstance(other, Predicate):
            return NotImplemented
        return self._key() == other._key()

    def __hash__(self):
        return hash(self._key())

    def __str__(self):
        return print_predicate(self)

    def __call__(self, value) -> bool:
        return eval_predicate(self, value)


# -- printing ---------------------------------------------------------------

_BARE = re.compile(r'[^,{}"\s](?:[^,{}"]*[^,{}"\s])?')
_NUMBER = re.compile(r"-?(?:0|[1-9][0-9]*)(?:\.[0-9]+)?(?:[eE][+-]?[0-9]+)?")
_RESERVED_BARE = {"true", "false"}


def _quote(text: str) -> str:
    return json.dumps(text, ensure_ascii=False)


def _print_literal(value) -> str:
    kind = kind_of(value)
    if kind == FLAG:
        return "true" if value else "false"
    if kind == NUMBER:
        return format_number(value)
    return _quote(value)


def _print_string_element(text: str, *, typed: bool) -> str:
    if _BARE.fullmatch(text) and not (
        typed and (text in _RESERVED_BARE or _NUMBER.fullmatch(text))
    ):
        return text
    return _quote(text)


def print_predicate(predicate: Predicate) -> str:
    """Canonical text form; ``parse_predicate`` inverts it."""
    op, operand = predicate.op, predicate.operand
    if op in (Op.EQ, Op.NEQ):
        return f"{op.value} {_print_literal(operand)}"
    if op in _COMPARISONS:
        return f"{op.value} {format_number(operand)}"
    if op in (Op.SUPERSET, Op.SUBSET):
        inner = ", ".join(_print_string_element(m, typed=False) for m in sorted(operand))
        return f"{op.value} {{{inner}}}"
    if op is Op.CONTAINS:
        return f"contains {_quote(operand)}"
    parts = [
        _print_string_element(v, typed=True) if kind_of(v) == TEXT else _print_literal(v)
        for v in operand
    ]
    return "in {" + ", ".join(parts) + "}"


# -- parsing ----------------------------------------------------------------

_OPERATORS = [
    ("superset", Op.SUPERSET),
    ("subset", Op.SUBSET),
    ("contains", Op.CONTAINS),
    ("in", Op.IN),
    ("!=", Op.NEQ),
    (">=", Op.GE),
    ("<=", Op.LE),
    ("=", Op.EQ),
    (">", Op.GT),
    ("<", Op.LT),
    ("⊇", Op.SUPERSET),
    ("⊃", Op.SUPERSET),
    ("⊆", Op.SUBSET),
    ("⊂", Op.SUBSET),
    ("∈", Op.IN),
    ("≠", Op.NEQ),
    ("≥", Op.GE),
    ("≤", Op.LE),
]
_STRING = re.compile(r'"(?:[^"\\\x00-\x1f]|\\.)*"')
_WS = re.compile(r"\s*")


class _Parser:
    def __init__(self, text: str):
        self.text = text
        self.pos = 0

    def fail(self, expected: str, pos: int | None = None):
        at = self.pos if pos is None else pos
        raise PredicateSyntaxError(self.text, len(self.text[:at].encode("utf-8")), expected)

    def skip_ws(self):
        self.pos = _WS.match(self.text, self.pos).end()

    def peek(self, literal: str) -> bool:
        return self.text.startswith(literal, self.pos)

    def operator(self) -> Op:
        self.skip_ws()
        for token, op in _OPERATORS:
            if self.peek(token):
                end = self.pos + len(token)
                # keywords must not run into a following word character
                if token.isalpha() and end < len(self.text) and (
                    self.text[end].isalnum() or self.text[end] == "_"
                ):
                    continue
                self.pos = end
                return op
        self.fail("operator")

    def number(self) -> Decimal:
        self.skip_ws()
        m = _NUMBER.match(self.text, self.pos)
        if not m:
            self.fail("number")
        self.pos = m.end()
        return Decimal(m.group())

    def string(self) -> str:
        self.skip_ws()
        m = _STRING.match(self.text, self.pos)
        if not m:
            self.fail("quoted string")
        try:
            value = json.loads(m.group())
        except ValueError:
            self.fail("valid string escape")
        self.pos = m.end()
        return value

    def keyword_literal(self):
        for word, value in (("true", True), ("false", False)):
            if self.peek(word):
                end = self.pos + len(word)
                if end == len(self.text) or not (self.text[end].isalnum() or self.text[end] == "_"):
                    self.pos = end
                    return value
        return None

    def literal(self):
        self.skip_ws()
        if self.peek('"'):
            return self.string()
        flag = self.keyword_literal()
        if flag is not None:
            return flag
        if _NUMBER.match(self.text, self.pos):
            return self.number()
        self.fail("literal (quoted string, number, true or false)")

    def element(self, *, typed: bool):
        self.skip_ws()
        if self.peek('"'):
            return self.string()
        m = _BARE.match(self.text, self.pos)
        if not m:
            self.fail("set element")
        self.pos = m.end()
        word = m.group()
        if typed:
            if word in ("true", "false"):
                return word == "true"
            if _NUMBER.fullmatch(word):
                return Decimal(word)
        return word

    def set_(self, *, typed: bool) -> list:
        self.skip_ws()
        if not self.peek("{"):
            self.fail("'{'")
        self.pos += 1
        items = []
        self.skip_ws()
        if self.peek("}"):
            self.pos += 1
            return items
        while True:
            items.append(self.element(typed=typed))
            self.skip_ws()
            if self.peek(","):
                self.pos += 1
                continue
            if self.peek("}"):
                self.pos += 1
                return items
            self.fail("',' or '}'")

    def parse(self) -> Predicate:
        op = self.operator()
        if op in (Op.EQ, Op.NEQ):
            operand = self.literal()
        elif op in _COMPARISONS:
            operand = self.number()
        elif op in (Op.SUPERSET, Op.SUBSET):
            start = self.pos
            items = self.set_(typed=False)
            if len(set(items)) != len(items):
                self.fail("distinct set members", start)
            operand = items
        elif op is Op.CONTAINS:
            self.skip_ws()
            operand = self.string() if self.peek('"') else self.element(typed=False)
        else:
            operand = self.set_(typed=True)
        self.skip_ws()
        if self.pos != len(self.text):
            self.fail("end of predicate")
        return Predicate(op, operand)


def parse_predicate(text: str) -> Predicate:
    """Parse predicate text such as ``"> 15"`` or ``"superset {Architect}"``."""
    return _Parser(text).parse()


# -- evaluation -------------------------------------------------------------


def eval_predicate(predicate: Predicate, value: Any) -> bool:
    """Whether ``predicate`` holds of ``value``.

    Total: a value of the wrong kind, or something that is not a property
    value at all, simply yields ``False``.
    """
    try:
        value = coerce_value(value)
    except (InvalidValue, ValueError, TypeError):
        return False
    op, operand = predicate.op, predicate.operand
    kind = kind_of(value)
    if op is Op.EQ:
        return kind != NESTED and value_key(value) == value_key(operand)
    if op is Op.NEQ:
        return kind == kind_of(operand) and value_key(value) != value_key(operand)
    if op in _COMPARISONS:
        if kind != NUMBER:
            return False
        if op is Op.GT:
            return value > operand
        if op is Op.GE:
            return value >= operand
        if op is Op.LT:
            return value < operand
        return value <= operand
    if op is Op.SUPERSET:
        return kind == STRING_SET and value >= operand
    if op is Op.SUBSET:
        return kind == STRING_SET and value <= operand
    if op is Op.CONTAINS:
        return kind == STRING_SET and operand in value
    if kind not in _LITERAL_KINDS:
        return False
    key = value_key(value)
    return any(value_key(v) == key for v in operand)


# -- satisfaction and instancehood ------------------------------------------


def satisfies(prop, constraint: PropertyConstraint) -> bool:
    """A property satisfies a constraint iff names match and the predicate holds."""
    return prop.name == constraint.name and eval_predicate(constraint.predicate, prop.value)


def _property_map(obj) -> Mapping:
    if isinstance(obj, Mapping):
        return obj
    properties = getattr(obj, "properties", None)
    if isinstance(properties, Mapping):
        return properties
    descriptor = getattr(obj, "descriptor", None)
    if isinstance(descriptor, Mapping):
        return descriptor
    return PropertyMap(obj)


def _constraints(cls) -> Iterable[PropertyConstraint]:
    for attr in ("constraints", "descriptor_class"):
        found = getattr(cls, attr, None)
        if found is not None and not isinstance(found, Mapping):
            return found
    return cls


@dataclass(frozen=True)
class Unsatisfied:
    constraint: PropertyConstraint
    reason: str  # "missing" or "rejected"

    def __str__(self):
        if self.reason == "missing":
            return f"no property named {self.constraint.name!r}"
        return f"property {self.constraint.name!r} fails {self.constraint.predicate}"


def unsatisfied_constraints(obj, cls) -> list[Unsatisfied]:
    """Every constraint of ``cls`` that no property of ``obj`` satisfies."""
    props = _property_map(obj)
    failures = []
    for constraint in _constraints(cls):
        # names are unique per object, so the only candidate is props[name]
        if constraint.name not in props:
            failures.append(Unsatisfied(constraint, "missing"))
        elif not eval_predicate(constraint.predicate, props[constraint.name]):
            failures.append(Unsatisfied(constraint, "rejected"))
    return failures


def instance_of(obj, cls) -> bool:
    """``obj`` is an instance of ``cls`` iff every constraint is satisfied.

    ``obj`` may be an Entity, a Link (its descriptor), a PropertyMap, a
    mapping or an iterable of Property; ``cls`` may be an EntityClass, a
    LinkClass (its descriptor class) or an iterable of PropertyConstraint.
    Extra properties are ignored.
    """
    return not unsatisfied_constraints(obj, cls)
