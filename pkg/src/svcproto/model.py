"""Service networks (object-based graphs) and schemata (class-based graphs).

All types are immutable.  Collections are stored in canonical order (entities
and classes by id, links and link classes by endpoints then content), so
structural equality does not depend on construction order.
"""

from __future__ import annotations

from collections import defaultdict
from collections.abc import Iterable, Mapping
from dataclasses import dataclass, field
from typing import Any

from .errors import (
    DanglingLinkClassEndpoint,
    DanglingLinkEndpoint,
    DuplicateClassId,
    DuplicateConstraintName,
    DuplicateEntityId,
    InvalidValue,
    UnknownClass,
    UnknownEntity,
)
from .predicates import Predicate, parse_predicate
from .values import PropertyMap


def _check_id(value: Any, what: str) -> str:
    if not isinstance(value, str) or not value:
        raise InvalidValue(repr(value), f"{what} must be a non-empty string")
    return value


def _property_map(raw) -> PropertyMap:
    return raw if isinstance(raw, PropertyMap) else PropertyMap(raw)


@dataclass(frozen=True)
class Entity:
    """A service entity: an id plus a set of properties."""

    id: str
    properties: PropertyMap = field(default_factory=PropertyMap)

    def __post_init__(self):
        _check_id(self.id, "entity id")
        object.__setattr__(self, "properties", _property_map(self.properties))


@dataclass(frozen=True)
class Link:
    """A directed arc ``source -> destination`` described by a property set.

    ``name`` is a display label; parallel links between the same pair are
    allowed.
    """

    source: str
    destination: str
    descriptor: PropertyMap = field(default_factory=PropertyMap)
    name: str = ""

    def __post_init__(self):
        _check_id(self.source, "link source")
        _check_id(self.destination, "link destination")
        object.__setattr__(self, "descriptor", _property_map(self.descriptor))

    def sort_key(self) -> tuple:
        return (self.source, self.destination, self.name, self.descriptor.canonical_text())

    @property
    def label(self) -> str:
        arc = f"{self.source}->{self.destination}"
        return f"{self.name}({arc})" if self.name else arc


@dataclass(frozen=True)
class PropertyConstraint:
    name: str
    predicate: Predicate

    def __post_init__(self):
        if not isinstance(self.name, str) or not self.name:
            raise InvalidValue(repr(self.name), "constraint names must be non-empty strings")
        if isinstance(self.predicate, str):
            object.__setattr__(self, "predicate", parse_predicate(self.predicate))
        elif not isinstance(self.predicate, Predicate):
            raise InvalidValue(repr(self.predicate), "constraint predicate must be a Predicate")

    def __str__(self):
        return f"{self.name} {self.predicate}"


def constraint_set(raw) -> tuple[PropertyConstraint, ...]:
    """Normalise constraints given as a mapping ``{name: predicate}`` or an
    iterable of PropertyConstraint / ``(name, predicate)`` pairs."""
    if isinstance(raw, Mapping):
        items = [PropertyConstraint(n, p) for n, p in raw.items()]
    else:
        items = [c if isinstance(c, PropertyConstraint) else PropertyConstraint(*c) for c in raw]
    seen = set()
    for c in items:
        if c.name in seen:
            raise DuplicateConstraintName(c.name)
        seen.add(c.name)
    return tuple(sorted(items, key=lambda c: c.name))


def _constraints_text(constraints: tuple[PropertyConstraint, ...]) -> str:
    return "; ".join(str(c) for c in constraints)


@dataclass(frozen=True)
class EntityClass:
    """A class of service entities: a set of property constraints."""

    id: str
    constraints: tuple[PropertyConstraint, ...] = ()

    def __post_init__(self):
        _check_id(self.id, "class id")
        object.__setattr__(self, "constraints", constraint_set(self.constraints))


@dataclass(frozen=True)
class LinkClass:
    """A class of links ``source -> destination`` with a descriptor class.

    Identity is the triple (source, destination, descriptor class); ``name``
    is only a label and does not take part in equality.
    """

    source: str
    destination: str
    descriptor_class: tuple[PropertyConstraint, ...] = ()
    name: str = field(default="", compare=False)

    def __post_init__(self):
        _check_id(self.source, "link class source")
        _check_id(self.destination, "link class destination")
        object.__setattr__(self, "descriptor_class", constraint_set(self.descriptor_class))

    def sort_key(self) -> tuple:
        return (self.source, self.destination, _constraints_text(self.descriptor_class))

    @property
    def label(self) -> str:
        arc = f"{self.source}->{self.destination}"
        return f"{self.name}({arc})" if self.name else arc


@dataclass(frozen=True)
class ServiceNetwork:
    """A network of service entities; every link endpoint must exist."""

    entities: tuple[Entity, ...] = ()
    links: tuple[Link, ...] = ()
    _by_id: dict = field(init=False, repr=False, compare=False)
    _out: dict = field(init=False, repr=False, compare=False)
    _in: dict = field(init=False, repr=False, compare=False)
    _between: dict = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        by_id: dict[str, Entity] = {}
        for entity in self.entities:
            if entity.id in by_id:
                raise DuplicateEntityId(entity.id)
            by_id[entity.id] = entity
        links = tuple(sorted(self.links, key=Link.sort_key))
        out, inc, between = defaultdict(list), defaultdict(list), defaultdict(list)
        for link in links:
            for end in (link.source, link.destination):
                if end not in by_id:
                    raise DanglingLinkEndpoint(end)
            out[link.source].append(link)
            inc[link.destination].append(link)
            between[link.source, link.destination].append(link)
        object.__setattr__(self, "entities", tuple(sorted(by_id.values(), key=lambda e: e.id)))
        object.__setattr__(self, "links", links)
        object.__setattr__(self, "_by_id", dict(sorted(by_id.items())))
        object.__setattr__(self, "_out", dict(out))
        object.__setattr__(self, "_in", dict(inc))
        object.__setattr__(self, "_between", dict(between))

    @property
    def entity_ids(self) -> tuple[str, ...]:
        return tuple(self._by_id)

    def __contains__(self, entity_id) -> bool:
        return entity_id in self._by_id

    def entity(self, entity_id: str) -> Entity:
        try:
            return self._by_id[entity_id]
        except KeyError:
            raise UnknownEntity(entity_id) from None

    def outgoing(self, entity_id: str) -> list[Link]:
        return self._out.get(entity_id, [])

    def incoming(self, entity_id: str) -> list[Link]:
        return self._in.get(entity_id, [])

    def links_between(self, source: str, destination: str) -> list[Link]:
        return self._between.get((source, destination), [])

    def has_link(self, link: Link) -> bool:
        return link in self.links_between(link.source, link.destination)

    def neighbours(self, entity_id: str) -> set[str]:
        return {l.destination for l in self.outgoing(entity_id)} | {
            l.source for l in self.incoming(entity_id)
        }

    def induced(self, entity_ids: Iterable[str]) -> ServiceNetwork:
        """The subnetwork on ``entity_ids`` with every link among them."""
        keep = set(entity_ids)
        for entity_id in keep:
            self.entity(entity_id)
        return ServiceNetwork(
            tuple(self._by_id[i] for i in sorted(keep)),
            tuple(l for l in self.links if l.source in keep and l.destination in keep),
        )


@dataclass(frozen=True)
class ServiceNetworkSchema:
    """Classes of service entities and classes of links between them.

    Link classes form a set: duplicates (same triple) collapse to one.
    """

    classes: tuple[EntityClass, ...] = ()
    link_classes: tuple[LinkClass, ...] = ()
    _by_id: dict = field(init=False, repr=False, compare=False)
    _out: dict = field(init=False, repr=False, compare=False)
    _in: dict = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        by_id: dict[str, EntityClass] = {}
        for cls in self.classes:
            if cls.id in by_id:
                raise DuplicateClassId(cls.id)
            by_id[cls.id] = cls
        unique: dict[LinkClass, LinkClass] = {}
        for lc in self.link_classes:
            for end in (lc.source, lc.destination):
                if end not in by_id:
                    raise DanglingLinkClassEndpoint(end)
            unique.setdefault(lc, lc)
        link_classes = tuple(sorted(unique.values(), key=LinkClass.sort_key))
        out, inc = defaultdict(list), defaultdict(list)
        for lc in link_classes:
            out[lc.source].append(lc)
            inc[lc.destination].append(lc)
        object.__setattr__(self, "classes", tuple(sorted(by_id.values(), key=lambda c: c.id)))
        object.__setattr__(self, "link_classes", link_classes)
        object.__setattr__(self, "_by_id", dict(sorted(by_id.items())))
        object.__setattr__(self, "_out", dict(out))
        object.__setattr__(self, "_in", dict(inc))

    @property
    def class_ids(self) -> tuple[str, ...]:
        return tuple(self._by_id)

    def __contains__(self, class_id) -> bool:
        return class_id in self._by_id

    def entity_class(self, class_id: str) -> EntityClass:
        try:
            return self._by_id[class_id]
        except KeyError:
            raise UnknownClass(class_id) from None

    def outgoing(self, class_id: str) -> list[LinkClass]:
        return self._out.get(class_id, [])

    def incoming(self, class_id: str) -> list[LinkClass]:
        return self._in.get(class_id, [])

    def without_class(self, class_id: str) -> ServiceNetworkSchema:
        """Drop a class together with its incident link classes."""
        self.entity_class(class_id)
        return ServiceNetworkSchema(
            tuple(c for c in self.classes if c.id != class_id),
            tuple(lc for lc in self.link_classes if class_id not in (lc.source, lc.destination)),
        )


def build_network(entities: Iterable[Entity], links: Iterable[Link] = ()) -> ServiceNetwork:
    """Validate and assemble a network.

    Raises DuplicateEntityId, DanglingLinkEndpoint or DuplicatePropertyName.
    """
    return ServiceNetwork(tuple(entities), tuple(links))


def build_schema(
    classes: Iterable[EntityClass], link_classes: Iterable[LinkClass] = ()
) -> ServiceNetworkSchema:
    """Validate and assemble a schema.

    Raises DuplicateClassId, DanglingLinkClassEndpoint or DuplicateConstraintName.
    """
    return ServiceNetworkSchema(tuple(classes), tuple(link_classes))


@dataclass(frozen=True)
class Violation:
    """One failed rule, reported as data.

    ``rule`` is a short machine-readable code (``membership``, ``linkage``,
    ``coverage``, ``non_injective_activity_map`` ...), ``subject`` the offending id.
    """

    rule: str
    subject: str
    message: str

    def __str__(self):
        return f"{self.rule}: {self.message}"
