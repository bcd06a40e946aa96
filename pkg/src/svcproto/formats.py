"""Canonical JSON documents.

Every document is an envelope::

    {"body": {...}, "formatVersion": "1", "kind": "network" | "schema" | "protocol" | "report"}

Canonical form: object keys sorted, arrays in deterministic order, two-space
indentation, UTF-8, trailing newline.  Numbers are read as exact decimals.
``docs/formats.md`` describes each body.
"""

from __future__ import annotations

import json
import os
import re
from dataclasses import dataclass
from decimal import Decimal
from typing import Any, Callable

from .compliance import ComplianceRelation, ComplianceReport, Level, SubnetworkMatch
from .errors import (
    EnactmentError,
    FormatError,
    ModelError,
    NotExecutable,
    ParseError,
    PredicateSyntaxError,
    SchemaViolation,
    UnknownState,
    UnsupportedVersion,
)
from .model import (
    Entity,
    EntityClass,
    Link,
    LinkClass,
    PropertyConstraint,
    ServiceNetwork,
    ServiceNetworkSchema,
    Violation,
)
from .predicates import parse_predicate, print_predicate
from .protocol import (
    AbstractProtocol,
    Classification,
    ProcessModel,
    ProtocolInstance,
    ProtocolLevel,
    PrototypeProtocol,
    ServiceDescription,
    ServiceOrientedSummary,
    abstract_violations,
    prototype_violations,
    replay,
    step,
)
from .values import NESTED, STRING_SET, PropertyMap, format_number, kind_of

FORMAT_VERSION = "1"
KINDS = ("network", "schema", "protocol", "report")


@dataclass(frozen=True)
class MatchReport:
    """Result of a compliant-subnetwork search."""

    matches: tuple[SubnetworkMatch, ...] = ()


# -- canonical writer -------------------------------------------------------


def _emit(value: Any, depth: int = 0) -> str:
    pad = "  " * (depth + 1)
    if isinstance(value, dict):
        if not value:
            return "{}"
        items = [
            f"{pad}{json.dumps(k, ensure_ascii=False)}: {_emit(v, depth + 1)}"
            for k, v in sorted(value.items())
        ]
        return "{\n" + ",\n".join(items) + "\n" + "  " * depth + "}"
    if isinstance(value, (list, tuple)):
        if not value:
            return "[]"
        items = [pad + _emit(v, depth + 1) for v in value]
        return "[\n" + ",\n".join(items) + "\n" + "  " * depth + "]"
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, (Decimal, int)):
        return format_number(Decimal(value))
    if isinstance(value, str):
        return json.dumps(value, ensure_ascii=False)
    if value is None:
        return "null"
    raise TypeError(f"cannot serialise {value!r}")


def dumps(document: Any) -> str:
    """Canonical text of a document object (network, schema, protocol or report)."""
    kind, body = _encode(document)
    return _emit({"kind": kind, "formatVersion": FORMAT_VERSION, "body": body}) + "\n"


def save(document: Any) -> bytes:
    return dumps(document).encode("utf-8")


def save_file(document: Any, path) -> None:
    with open(path, "wb") as fh:
        fh.write(save(document))


# -- encoders ---------------------------------------------------------------


def _value_json(value):
    kind = kind_of(value)
    if kind == STRING_SET:
        return sorted(value)
    if kind == NESTED:
        return _props_json(value)
    return value


def _props_json(props: PropertyMap) -> dict:
    return {name: _value_json(v) for name, v in props.items()}


def _constraints_json(constraints) -> list:
    return [{"name": c.name, "predicate": print_predicate(c.predicate)} for c in constraints]


def _network_json(network: ServiceNetwork) -> dict:
    links = []
    for link in network.links:
        item = {
            "source": link.source,
            "destination": link.destination,
            "descriptor": _props_json(link.descriptor),
        }
        if link.name:
            item["name"] = link.name
        links.append(item)
    return {
        "entities": [{"id": e.id, "properties": _props_json(e.properties)} for e in network.entities],
        "links": links,
    }


def _schema_json(schema: ServiceNetworkSchema) -> dict:
    link_classes = []
    for lc in schema.link_classes:
        item = {
            "source": lc.source,
            "destination": lc.destination,
            "descriptorClass": _constraints_json(lc.descriptor_class),
        }
        if lc.name:
            item["name"] = lc.name
        link_classes.append(item)
    return {
        "classes": [{"id": c.id, "constraints": _constraints_json(c.constraints)} for c in schema.classes],
        "linkClasses": link_classes,
    }


def _protocol_json(protocol) -> dict:
    abstract = protocol.abstract if isinstance(protocol, PrototypeProtocol) else protocol
    summary = abstract.summary
    pm = summary.process_model
    body = {
        "processModel": {
            "states": sorted(pm.states),
            "activities": sorted(pm.activities),
            "executability": [list(p) for p in sorted(pm.executability)],
            "transitions": [[s, a, t] for (s, a), t in sorted(pm.transitions.items())],
            "initialState": pm.initial_state,
        },
        "descriptions": [
            {"id": d.id, "consumer": d.consumer, "interface": d.interface, "provider": d.provider}
            for d in summary.descriptions
        ],
        "activityDescriptions": [[a, d] for a, d in sorted(summary.activity_descriptions.items())],
        "schema": _schema_json(abstract.schema),
        "elementClasses": [[e, c] for e, c in sorted(abstract.element_classes.items())],
    }
    if isinstance(protocol, PrototypeProtocol):
        body["network"] = _network_json(protocol.network)
        body["implementations"] = [list(p) for p in sorted(protocol.implementations)]
        body["classAssignments"] = [list(p) for p in sorted(protocol.class_assignments)]
    return body


def _witness_json(relation: ComplianceRelation) -> list:
    return [{"class": c, "entity": e} for e, c in relation]


def _violation_json(v: Violation) -> dict:
    return {"rule": v.rule, "subject": v.subject, "message": v.message}


def _encode(document) -> tuple[str, dict]:
    if isinstance(document, ServiceNetwork):
        return "network", _network_json(document)
    if isinstance(document, ServiceNetworkSchema):
        return "schema", _schema_json(document)
    if isinstance(document, (AbstractProtocol, PrototypeProtocol)):
        return "protocol", _protocol_json(document)
    if isinstance(document, ComplianceReport):
        return "report", {
            "type": "compliance",
            "level": document.level.value,
            "witness": _witness_json(document.witness),
            "covered": sorted(document.covered),
            "uncovered": sorted(document.uncovered),
            "diagnostics": list(document.diagnostics),
        }
    if isinstance(document, Classification):
        return "report", {
            "type": "classification",
            "level": document.level.value,
            "reasons": [_violation_json(v) for v in document.reasons],
        }
    if isinstance(document, MatchReport):
        return "report", {
            "type": "match",
            "matches": [
                {"entities": list(m.entities), "witness": _witness_json(m.witness)}
                for m in document.matches
            ],
        }
    if isinstance(document, ProtocolInstance):
        return "report", {
            "type": "instance",
            "protocol": _protocol_json(document.protocol),
            "startState": document.start_state,
            "currentState": document.current_state,
            "history": [{"activity": a, "performer": p} for a, p in document.history],
        }
    raise TypeError(f"not a document: {type(document).__name__}")


# -- reader helpers ---------------------------------------------------------


class _DuplicateKeys(dict):
    duplicates: list


def _pairs_hook(pairs):
    result: dict = {}
    duplicates = []
    for key, value in pairs:
        if key in result:
            duplicates.append(key)
        result[key] = value
    if duplicates:
        marked = _DuplicateKeys(result)
        marked.duplicates = duplicates
        return marked
    return result


def _reject_constant(name):
    raise SchemaViolation("$", f"non-finite number {name} is not allowed")


_IDENT = re.compile(r"[A-Za-z_][A-Za-z0-9_]*")


def _at(path: str, key) -> str:
    if isinstance(key, int):
        return f"{path}[{key}]"
    if _IDENT.fullmatch(key):
        return f"{path}.{key}"
    return f"{path}[{json.dumps(key, ensure_ascii=False)}]"


def _obj(node, path: str, required=(), optional=()) -> dict:
    if not isinstance(node, dict):
        raise SchemaViolation(path, "expected an object")
    if isinstance(node, _DuplicateKeys):
        raise SchemaViolation(_at(path, node.duplicates[0]), "duplicate key")
    for key in required:
        if key not in node:
            raise SchemaViolation(_at(path, key), "missing")
    allowed = set(required) | set(optional)
    if allowed:
        for key in node:
            if key not in allowed:
                raise SchemaViolation(_at(path, key), "unknown field")
    return node


def _arr(node, path: str) -> list:
    if not isinstance(node, list):
        raise SchemaViolation(path, "expected an array")
    return node


def _str(node, path: str) -> str:
    if not isinstance(node, str) or not node:
        raise SchemaViolation(path, "expected a non-empty string")
    return node


def _tuple(node, path: str, size: int) -> list[str]:
    items = _arr(node, path)
    if len(items) != size:
        raise SchemaViolation(path, f"expected an array of {size} strings")
    return [_str(item, _at(path, i)) for i, item in enumerate(items)]


def _unique(items: list, path: str, what: str, key: Callable = lambda x: x, field: str = "") -> None:
    seen = set()
    for i, item in enumerate(items):
        k = key(item)
        if k in seen:
            here = _at(path, i)
            raise SchemaViolation(_at(here, field) if field else here, f"duplicate {what} {k!r}")
        seen.add(k)


# -- decoders ---------------------------------------------------------------


def _value(node, path: str):
    if isinstance(node, (bool, str)):
        return node
    if isinstance(node, Decimal):
        return node
    if isinstance(node, list):
        members = [
            m if isinstance(m, str) else _fail(_at(path, i), "string sets hold strings only")
            for i, m in enumerate(node)
        ]
        _unique(members, path, "set member")
        return frozenset(members)
    if isinstance(node, dict):
        return _props(node, path)
    raise SchemaViolation(path, "expected a string, number, boolean, array of strings or object")


def _fail(path: str, message: str):
    raise SchemaViolation(path, message)


def _props(node, path: str) -> PropertyMap:
    node = _obj(node, path)
    values = {}
    for name, raw in node.items():
        if not name:
            raise SchemaViolation(path, "property names must be non-empty")
        values[name] = _value(raw, _at(path, name))
    return PropertyMap(values)


def _constraints(node, path: str) -> tuple[PropertyConstraint, ...]:
    items = _arr(node, path)
    out = []
    for i, raw in enumerate(items):
        here = _at(path, i)
        raw = _obj(raw, here, required=("name", "predicate"))
        name = _str(raw["name"], _at(here, "name"))
        text = raw["predicate"]
        if not isinstance(text, str):
            raise SchemaViolation(_at(here, "predicate"), "expected a predicate string")
        try:
            predicate = parse_predicate(text)
        except PredicateSyntaxError as exc:
            raise SchemaViolation(
                _at(here, "predicate"), f"syntax error at byte {exc.offset}: expected {exc.expected}"
            ) from exc
        out.append(PropertyConstraint(name, predicate))
    _unique(out, path, "constraint name", key=lambda c: c.name, field="name")
    return tuple(out)


def _network(node, path: str) -> ServiceNetwork:
    node = _obj(node, path, required=("entities", "links"))
    entities_path, links_path = _at(path, "entities"), _at(path, "links")
    entities = []
    for i, raw in enumerate(_arr(node["entities"], entities_path)):
        here = _at(entities_path, i)
        raw = _obj(raw, here, required=("id",), optional=("properties",))
        entity_id = _str(raw["id"], _at(here, "id"))
        props = _props(raw.get("properties", {}), _at(here, "properties"))
        entities.append(Entity(entity_id, props))
    _unique([e.id for e in entities], entities_path, "entity id", field="id")
    known = {e.id for e in entities}
    links = []
    for i, raw in enumerate(_arr(node["links"], links_path)):
        here = _at(links_path, i)
        raw = _obj(raw, here, required=("source", "destination"), optional=("descriptor", "name"))
        ends = []
        for end in ("source", "destination"):
            value = _str(raw[end], _at(here, end))
            if value not in known:
                raise SchemaViolation(_at(here, end), f"unknown entity {value!r}")
            ends.append(value)
        name = raw.get("name", "")
        if not isinstance(name, str):
            raise SchemaViolation(_at(here, "name"), "expected a string")
        descriptor = _props(raw.get("descriptor", {}), _at(here, "descriptor"))
        links.append(Link(ends[0], ends[1], descriptor, name))
    return _build(lambda: ServiceNetwork(tuple(entities), tuple(links)), path)


def _schema(node, path: str) -> ServiceNetworkSchema:
    node = _obj(node, path, required=("classes", "linkClasses"))
    classes_path, lcs_path = _at(path, "classes"), _at(path, "linkClasses")
    classes = []
    for i, raw in enumerate(_arr(node["classes"], classes_path)):
        here = _at(classes_path, i)
        raw = _obj(raw, here, required=("id",), optional=("constraints",))
        class_id = _str(raw["id"], _at(here, "id"))
        classes.append(EntityClass(class_id, _constraints(raw.get("constraints", []), _at(here, "constraints"))))
    _unique([c.id for c in classes], classes_path, "class id", field="id")
    known = {c.id for c in classes}
    link_classes = []
    for i, raw in enumerate(_arr(node["linkClasses"], lcs_path)):
        here = _at(lcs_path, i)
        raw = _obj(raw, here, required=("source", "destination"), optional=("descriptorClass", "name"))
        ends = []
        for end in ("source", "destination"):
            value = _str(raw[end], _at(here, end))
            if value not in known:
                raise SchemaViolation(_at(here, end), f"unknown class {value!r}")
            ends.append(value)
        name = raw.get("name", "")
        if not isinstance(name, str):
            raise SchemaViolation(_at(here, "name"), "expected a string")
        descriptor = _constraints(raw.get("descriptorClass", []), _at(here, "descriptorClass"))
        link_classes.append(LinkClass(ends[0], ends[1], descriptor, name=name))
    return _build(lambda: ServiceNetworkSchema(tuple(classes), tuple(link_classes)), path)


def _build(factory, path: str):
    try:
        return factory()
    except ModelError as exc:
        raise SchemaViolation(path, str(exc)) from exc


_VIOLATION_FIELDS = {
    "unknown_initial_state": "processModel.initialState",
    "unknown_activity": "processModel",
    "unknown_state": "processModel",
    "transition_not_executable": "processModel.transitions",
    "invalid_state": "processModel.states",
    "duplicate_description": "descriptions",
    "unmapped_activity": "activityDescriptions",
    "unknown_description": "activityDescriptions",
    "non_injective_activity_map": "activityDescriptions",
    "non_surjective_activity_map": "activityDescriptions",
    "unmapped_element": "elementClasses",
    "unknown_element": "elementClasses",
    "unknown_class": "elementClasses",
}

_PROTOCOL_FIELDS = (
    "processModel",
    "descriptions",
    "activityDescriptions",
    "schema",
    "elementClasses",
)
_PROTOTYPE_FIELDS = ("network", "implementations", "classAssignments")


def _pairs(node, path: str) -> list[tuple[str, str]]:
    pairs = [tuple(_tuple(item, _at(path, i), 2)) for i, item in enumerate(_arr(node, path))]
    _unique(pairs, path, "pair")
    return pairs


def _protocol(node, path: str):
    node = _obj(node, path, required=_PROTOCOL_FIELDS, optional=_PROTOTYPE_FIELDS)
    pm_path = _at(path, "processModel")
    pm = _obj(
        node["processModel"],
        pm_path,
        required=("states", "activities", "executability", "transitions", "initialState"),
    )
    states = [_str(s, _at(_at(pm_path, "states"), i)) for i, s in enumerate(_arr(pm["states"], _at(pm_path, "states")))]
    _unique(states, _at(pm_path, "states"), "state")
    activities_path = _at(pm_path, "activities")
    activities = [_str(a, _at(activities_path, i)) for i, a in enumerate(_arr(pm["activities"], activities_path))]
    _unique(activities, activities_path, "activity")
    executability = _pairs(pm["executability"], _at(pm_path, "executability"))
    transitions_path = _at(pm_path, "transitions")
    transitions = {}
    for i, item in enumerate(_arr(pm["transitions"], transitions_path)):
        state, activity, target = _tuple(item, _at(transitions_path, i), 3)
        if (state, activity) in transitions:
            raise SchemaViolation(_at(transitions_path, i), f"second transition from {state} by {activity}")
        transitions[state, activity] = target
    initial = _str(pm["initialState"], _at(pm_path, "initialState"))
    process_model = ProcessModel(states, activities, executability, transitions, initial)

    desc_path = _at(path, "descriptions")
    descriptions = []
    for i, raw in enumerate(_arr(node["descriptions"], desc_path)):
        here = _at(desc_path, i)
        raw = _obj(raw, here, required=("id", "consumer", "interface", "provider"))
        descriptions.append(ServiceDescription(*(_str(raw[k], _at(here, k)) for k in ("id", "consumer", "interface", "provider"))))
    activity_map_path = _at(path, "activityDescriptions")
    activity_pairs = _pairs(node["activityDescriptions"], activity_map_path)
    _unique([a for a, _ in activity_pairs], activity_map_path, "activity")
    summary = ServiceOrientedSummary(process_model, tuple(descriptions), dict(activity_pairs))

    schema = _schema(node["schema"], _at(path, "schema"))
    element_path = _at(path, "elementClasses")
    element_pairs = _pairs(node["elementClasses"], element_path)
    _unique([e for e, _ in element_pairs], element_path, "element")
    abstract = AbstractProtocol(summary, schema, dict(element_pairs))
    for violation in abstract_violations(abstract):
        here = path
        for part in _VIOLATION_FIELDS.get(violation.rule, "").split("."):
            here = _at(here, part) if part else here
        raise SchemaViolation(here, violation.message)

    present = [k for k in _PROTOTYPE_FIELDS if k in node]
    if not present:
        return abstract
    if "network" not in node:
        raise SchemaViolation(_at(path, "network"), f"missing ({present[0]} needs a network)")
    network = _network(node["network"], _at(path, "network"))
    implementations = _pairs(node.get("implementations", []), _at(path, "implementations"))
    assignments = _pairs(node.get("classAssignments", []), _at(path, "classAssignments"))
    proto = PrototypeProtocol(abstract, network, frozenset(implementations), frozenset(assignments))
    for violation in prototype_violations(proto):
        field = "classAssignments" if "assigned" in violation.message else "implementations"
        raise SchemaViolation(_at(path, field), violation.message)
    return proto


def _relation_json(node, path: str) -> ComplianceRelation:
    pairs = []
    for i, raw in enumerate(_arr(node, path)):
        here = _at(path, i)
        raw = _obj(raw, here, required=("class", "entity"))
        pairs.append((_str(raw["entity"], _at(here, "entity")), _str(raw["class"], _at(here, "class"))))
    _unique(pairs, path, "pair")
    return ComplianceRelation(pairs)


def _strings(node, path: str) -> list[str]:
    return [_str(s, _at(path, i)) for i, s in enumerate(_arr(node, path))]


def _enum(enum_type, node, path: str):
    try:
        return enum_type(node)
    except (ValueError, TypeError):
        choices = ", ".join(m.value for m in enum_type)
        raise SchemaViolation(path, f"expected one of {choices}") from None


def _report(node, path: str):
    node = _obj(node, path)
    if "type" not in node:
        raise SchemaViolation(_at(path, "type"), "missing")
    kind = node["type"]
    if kind == "compliance":
        _obj(node, path, required=("type", "level", "witness", "covered", "uncovered", "diagnostics"))
        witness = _relation_json(node["witness"], _at(path, "witness"))
        diagnostics = _arr(node["diagnostics"], _at(path, "diagnostics"))
        for i, d in enumerate(diagnostics):
            if not isinstance(d, str):
                raise SchemaViolation(_at(_at(path, "diagnostics"), i), "expected a string")
        return ComplianceReport(
            _enum(Level, node["level"], _at(path, "level")),
            witness,
            frozenset(_strings(node["covered"], _at(path, "covered"))),
            frozenset(_strings(node["uncovered"], _at(path, "uncovered"))),
            tuple(diagnostics),
        )
    if kind == "classification":
        _obj(node, path, required=("type", "level", "reasons"))
        reasons = []
        for i, raw in enumerate(_arr(node["reasons"], _at(path, "reasons"))):
            here = _at(_at(path, "reasons"), i)
            raw = _obj(raw, here, required=("rule", "subject", "message"))
            reasons.append(Violation(*(_str(raw[k], _at(here, k)) for k in ("rule", "subject", "message"))))
        return Classification(_enum(ProtocolLevel, node["level"], _at(path, "level")), tuple(reasons))
    if kind == "match":
        _obj(node, path, required=("type", "matches"))
        matches = []
        for i, raw in enumerate(_arr(node["matches"], _at(path, "matches"))):
            here = _at(_at(path, "matches"), i)
            raw = _obj(raw, here, required=("entities", "witness"))
            entities = _strings(raw["entities"], _at(here, "entities"))
            matches.append(SubnetworkMatch(tuple(entities), _relation_json(raw["witness"], _at(here, "witness"))))
        return MatchReport(tuple(matches))
    if kind == "instance":
        _obj(node, path, required=("type", "protocol", "startState", "currentState", "history"))
        protocol = _protocol(node["protocol"], _at(path, "protocol"))
        start = _str(node["startState"], _at(path, "startState"))
        current = _str(node["currentState"], _at(path, "currentState"))
        history_path = _at(path, "history")
        history = []
        for i, raw in enumerate(_arr(node["history"], history_path)):
            here = _at(history_path, i)
            raw = _obj(raw, here, required=("activity", "performer"))
            history.append((_str(raw["activity"], _at(here, "activity")), _str(raw["performer"], _at(here, "performer"))))
        if not isinstance(protocol, PrototypeProtocol):
            raise SchemaViolation(_at(path, "protocol"), "instance needs an executable protocol")
        try:
            instance = replay(protocol, [], start)
        except NotExecutable as exc:
            raise SchemaViolation(_at(path, "protocol"), str(exc)) from exc
        except UnknownState as exc:
            raise SchemaViolation(_at(path, "startState"), str(exc)) from exc
        for i, (activity, performer) in enumerate(history):
            try:
                instance = step(instance, activity, performer)
            except EnactmentError as exc:
                raise SchemaViolation(_at(history_path, i), str(exc)) from exc
        if instance.current_state != current:
            raise SchemaViolation(
                _at(path, "currentState"), f"history leads to {instance.current_state!r}, not {current!r}"
            )
        return instance
    raise SchemaViolation(_at(path, "type"), f"unknown report type {kind!r}")


_BODY_READERS = {"network": _network, "schema": _schema, "protocol": _protocol, "report": _report}


def loads(data: bytes | str):
    """Parse and validate one document; see :func:`load`."""
    if isinstance(data, bytes):
        try:
            text = data.decode("utf-8")
        except UnicodeDecodeError as exc:
            line = data[: exc.start].count(b"\n") + 1
            column = exc.start - (data.rfind(b"\n", 0, exc.start) + 1) + 1
            raise ParseError(line, column, "input is not UTF-8") from exc
    else:
        text = data
    try:
        document = json.loads(
            text,
            parse_float=Decimal,
            parse_int=Decimal,
            parse_constant=_reject_constant,
            object_pairs_hook=_pairs_hook,
        )
    except json.JSONDecodeError as exc:
        raise ParseError(exc.lineno, exc.colno, exc.msg) from exc
    document = _obj(document, "$")
    if "kind" not in document:
        raise SchemaViolation("$.kind", "missing")
    kind = document["kind"]
    if kind not in KINDS:
        raise SchemaViolation("$.kind", f"unknown kind {kind!r}")
    if "formatVersion" not in document:
        raise SchemaViolation("$.formatVersion", "missing")
    if document["formatVersion"] != FORMAT_VERSION:
        raise UnsupportedVersion(
            "$.formatVersion", f"unsupported version {document['formatVersion']!r} (expected {FORMAT_VERSION!r})"
        )
    _obj(document, "$", required=("kind", "formatVersion", "body"))
    return _BODY_READERS[kind](document["body"], "$.body")


def load(source):
    """Load a document from a path, bytes, or a binary/text stream.

    Returns a ServiceNetwork, ServiceNetworkSchema, AbstractProtocol,
    PrototypeProtocol, ComplianceReport, Classification, MatchReport or
    ProtocolInstance.  Raises ParseError, SchemaViolation or
    UnsupportedVersion (all FormatError, each with a JSON path).
    """
    if isinstance(source, (bytes, bytearray)):
        return loads(bytes(source))
    if isinstance(source, (str, os.PathLike)):
        with open(source, "rb") as fh:
            return loads(fh.read())
    return loads(source.read())


__all__ = [
    "FORMAT_VERSION",
    "FormatError",
    "MatchReport",
    "dumps",
    "load",
    "loads",
    "save",
    "save_file",
]
