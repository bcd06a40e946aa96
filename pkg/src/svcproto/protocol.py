"""Process models, service-oriented summaries and service protocols.

Service description elements (consumer, interface and provider classes) are
identified by name; the union of element names across all descriptions is
the element set that the class mapping, the entity mapping and the
executability check range over.  A name used by two descriptions denotes one
element.
"""

from __future__ import annotations

from collections import Counter
from collections.abc import Iterable, Mapping
from dataclasses import dataclass, field, replace
from enum import Enum
from types import MappingProxyType
from typing import Optional, Union

from .compliance import ComplianceRelation, relation_violations
from .errors import (
    ActivityNotEnabled,
    InvalidAbstractProtocol,
    NoTransitionDefined,
    NotExecutable,
    PerformerNotAuthorized,
    UnknownClass,
    UnknownEntity,
    UnknownId,
    UnknownState,
)
from .model import (
    LinkClass,
    PropertyConstraint,
    ServiceNetwork,
    ServiceNetworkSchema,
    Violation,
)
from .predicates import Op, Predicate

PROVIDES = "provides"
IS_PROVIDED_BY = "isProvidedBy"


class Role(str, Enum):
    CONSUMER = "consumer"
    INTERFACE = "interface"
    PROVIDER = "provider"


def _frozen(mapping) -> Mapping:
    return MappingProxyType(dict(mapping))


@dataclass(frozen=True)
class ProcessModel:
    """States, activities, the executability relation and successor states.

    ``executability`` holds ``(activity, state)`` pairs: the activity may be
    executed in the state.  ``transitions`` maps ``(state, activity)`` to the
    successor state and must stay within ``executability``.
    """

    states: frozenset
    activities: frozenset
    executability: frozenset
    transitions: Mapping
    initial_state: str

    def __post_init__(self):
        object.__setattr__(self, "states", frozenset(self.states))
        object.__setattr__(self, "activities", frozenset(self.activities))
        object.__setattr__(self, "executability", frozenset(tuple(p) for p in self.executability))
        object.__setattr__(
            self, "transitions", _frozen({tuple(k): v for k, v in dict(self.transitions).items()})
        )

    def __hash__(self):
        return hash((self.states, self.activities, self.executability, self.initial_state))


@dataclass(frozen=True)
class ServiceDescription:
    id: str
    consumer: str
    interface: str
    provider: str

    def element(self, role: Role | str) -> str:
        return getattr(self, Role(role).value)

    def elements(self) -> tuple[tuple[Role, str], ...]:
        return tuple((role, self.element(role)) for role in Role)


@dataclass(frozen=True)
class ServiceOrientedSummary:
    """A process model plus a bijection ``activity_descriptions`` from
    activity ids to service description ids."""

    process_model: ProcessModel
    descriptions: tuple[ServiceDescription, ...]
    activity_descriptions: Mapping

    def __post_init__(self):
        object.__setattr__(self, "descriptions", tuple(sorted(self.descriptions, key=lambda d: d.id)))
        object.__setattr__(self, "activity_descriptions", _frozen(self.activity_descriptions))

    def __hash__(self):
        return hash((self.process_model, self.descriptions))

    def description(self, description_id: str) -> ServiceDescription:
        for d in self.descriptions:
            if d.id == description_id:
                return d
        raise UnknownId(description_id, "service description")

    @property
    def elements(self) -> tuple[str, ...]:
        """Every consumer, interface and provider element name, sorted."""
        return tuple(sorted({name for d in self.descriptions for _, name in d.elements()}))


@dataclass(frozen=True)
class AbstractProtocol:
    """A summary, a schema, and ``element_classes``: element name -> class id."""

    summary: ServiceOrientedSummary
    schema: ServiceNetworkSchema
    element_classes: Mapping

    def __post_init__(self):
        object.__setattr__(self, "element_classes", _frozen(self.element_classes))

    def __hash__(self):
        return hash((self.summary, self.schema))

    def class_of(self, description_id: str, role: Role | str) -> str:
        return self.element_classes[self.summary.description(description_id).element(role)]


@dataclass(frozen=True)
class PrototypeProtocol:
    """An abstract protocol implemented (partly or wholly) by a network.

    ``implementations`` relates entity ids to the element names they
    implement; ``class_assignments`` relates entity ids directly to class ids.
    """

    abstract: AbstractProtocol
    network: ServiceNetwork
    implementations: frozenset = frozenset()
    class_assignments: frozenset = frozenset()

    def __post_init__(self):
        object.__setattr__(self, "implementations", frozenset(tuple(p) for p in self.implementations))
        object.__setattr__(self, "class_assignments", frozenset(tuple(p) for p in self.class_assignments))

    @property
    def summary(self) -> ServiceOrientedSummary:
        return self.abstract.summary

    @property
    def schema(self) -> ServiceNetworkSchema:
        return self.abstract.schema


Protocol = Union[AbstractProtocol, PrototypeProtocol]


# -- validation -------------------------------------------------------------


def validate_summary(summary: ServiceOrientedSummary) -> list[Violation]:
    """Violations of the summary's invariants; empty when it is well formed."""
    pm = summary.process_model
    found = []
    for state in sorted(pm.states):
        if not isinstance(state, str) or not state:
            found.append(Violation("invalid_state", repr(state), "state ids must be non-empty strings"))
    if pm.initial_state not in pm.states:
        found.append(
            Violation("unknown_initial_state", str(pm.initial_state), "initial state is not a state")
        )
    for activity, state in sorted(pm.executability):
        if activity not in pm.activities:
            found.append(Violation("unknown_activity", activity, f"executability names unknown activity {activity}"))
        if state not in pm.states:
            found.append(Violation("unknown_state", state, f"executability names unknown state {state}"))
    for (state, activity), target in sorted(pm.transitions.items()):
        if (activity, state) not in pm.executability:
            found.append(
                Violation(
                    "transition_not_executable",
                    f"{state}/{activity}",
                    f"transition from {state} by {activity} but {activity} is not executable in {state}",
                )
            )
        if target not in pm.states:
            found.append(Violation("unknown_state", target, f"transition target {target} is not a state"))

    ids = Counter(d.id for d in summary.descriptions)
    for description_id, count in sorted(ids.items()):
        if count > 1:
            found.append(Violation("duplicate_description", description_id, "description id used twice"))
    for activity in sorted(pm.activities):
        if activity not in summary.activity_descriptions:
            found.append(Violation("unmapped_activity", activity, f"activity {activity} has no service description"))
    for activity, description_id in sorted(summary.activity_descriptions.items()):
        if activity not in pm.activities:
            found.append(Violation("unknown_activity", activity, f"unknown activity {activity} has a service description"))
        if description_id not in ids:
            found.append(
                Violation("unknown_description", description_id, f"activity mapped to unknown description {description_id}")
            )
    images = Counter(summary.activity_descriptions.values())
    for description_id, count in sorted(images.items()):
        if count > 1 and description_id in ids:
            found.append(
                Violation("non_injective_activity_map", description_id, f"{count} activities map to {description_id}")
            )
    for description_id in sorted(ids):
        if description_id not in images:
            found.append(
                Violation("non_surjective_activity_map", description_id, f"no activity maps to {description_id}")
            )
    return found


def abstract_violations(abstract: AbstractProtocol) -> list[Violation]:
    found = validate_summary(abstract.summary)
    elements = set(abstract.summary.elements)
    for element in sorted(elements):
        if element not in abstract.element_classes:
            found.append(Violation("unmapped_element", element, f"{element} is mapped to no class"))
    for element, class_id in sorted(abstract.element_classes.items()):
        if element not in elements:
            found.append(Violation("unknown_element", element, f"unknown element {element} is mapped to a class"))
        if class_id not in abstract.schema:
            found.append(Violation("unknown_class", class_id, f"{element} is mapped to unknown class {class_id}"))
    return found


def prototype_violations(proto: PrototypeProtocol) -> list[Violation]:
    """Dangling references in the entity mappings (not compliance failures)."""
    found = []
    elements = set(proto.summary.elements)
    for entity_id, element in sorted(proto.implementations):
        if entity_id not in proto.network:
            found.append(Violation("unknown_entity", entity_id, f"unknown entity {entity_id} implements an element"))
        if element not in elements:
            found.append(Violation("unknown_element", element, f"{entity_id} implements unknown element {element}"))
    for entity_id, class_id in sorted(proto.class_assignments):
        if entity_id not in proto.network:
            found.append(Violation("unknown_entity", entity_id, f"unknown entity {entity_id} is assigned a class"))
        if class_id not in proto.schema:
            found.append(Violation("unknown_class", class_id, f"{entity_id} is assigned unknown class {class_id}"))
    return found


# -- implicit schema and induced relation ------------------------------------


def implicit_link_classes(abstract: AbstractProtocol) -> set[LinkClass]:
    """``provides`` and ``isProvidedBy`` link classes induced by the mapping."""
    added = set()
    for d in abstract.summary.descriptions:
        provider = abstract.element_classes[d.provider]
        interface = abstract.element_classes[d.interface]
        added.add(
            LinkClass(
                provider,
                interface,
                (PropertyConstraint(PROVIDES, Predicate(Op.EQ, True)),),
                name=PROVIDES,
            )
        )
        added.add(
            LinkClass(
                interface,
                provider,
                (PropertyConstraint(IS_PROVIDED_BY, Predicate(Op.EQ, True)),),
                name=IS_PROVIDED_BY,
            )
        )
    return added


def derive_implicit_schema(abstract: AbstractProtocol) -> ServiceNetworkSchema:
    """The schema extended with the link classes implied by the mapping.

    Classes are unchanged; link classes already present are not duplicated.
    ``consumes``/``isConsumedBy`` relations are deliberately not added.
    """
    if isinstance(abstract, PrototypeProtocol):
        abstract = abstract.abstract
    violations = abstract_violations(abstract)
    if violations:
        raise InvalidAbstractProtocol(violations)
    schema = abstract.schema
    return ServiceNetworkSchema(schema.classes, schema.link_classes + tuple(implicit_link_classes(abstract)))


def induced_relation(proto: PrototypeProtocol) -> ComplianceRelation:
    """The induced relation: ``class_assignments`` plus every (entity, class)
    reached by following ``implementations`` and then ``element_classes``."""
    elements = set(proto.summary.elements)
    for entity_id, element in proto.implementations:
        if entity_id not in proto.network:
            raise UnknownEntity(entity_id)
        if element not in elements or element not in proto.abstract.element_classes:
            raise UnknownId(element, "service description element")
    for entity_id, class_id in proto.class_assignments:
        if entity_id not in proto.network:
            raise UnknownEntity(entity_id)
        if class_id not in proto.schema:
            raise UnknownClass(class_id)
    through_elements = {(e, proto.abstract.element_classes[s]) for e, s in proto.implementations}
    return ComplianceRelation(proto.class_assignments | through_elements)


# -- classification ---------------------------------------------------------


class ProtocolLevel(str, Enum):
    ABSTRACT = "ABSTRACT"
    PROTOTYPE = "PROTOTYPE"
    EXECUTABLE = "EXECUTABLE"
    INVALID = "INVALID"


@dataclass(frozen=True)
class Classification:
    """The level reached; ``reasons`` explain invalidity, or what keeps a
    prototype from being executable."""

    level: ProtocolLevel
    reasons: tuple[Violation, ...] = ()


def classify(protocol: Protocol) -> Classification:
    if isinstance(protocol, AbstractProtocol):
        found = abstract_violations(protocol)
        if found:
            return Classification(ProtocolLevel.INVALID, tuple(found))
        return Classification(ProtocolLevel.ABSTRACT)

    found = abstract_violations(protocol.abstract) + prototype_violations(protocol)
    if found:
        return Classification(ProtocolLevel.INVALID, tuple(found))
    implicit = derive_implicit_schema(protocol.abstract)
    induced = induced_relation(protocol)
    found = relation_violations(induced, protocol.network, implicit, coverage=False)
    if found:
        return Classification(ProtocolLevel.INVALID, tuple(found))

    missing = []
    implemented = {element for _, element in protocol.implementations}
    for element in protocol.summary.elements:
        if element not in implemented:
            missing.append(Violation("unimplemented_element", element, f"no entity implements {element}"))
    covered = induced.classes
    for class_id in implicit.class_ids:
        if class_id not in covered:
            missing.append(Violation("coverage", class_id, f"no entity is related to {class_id}"))
    if missing:
        return Classification(ProtocolLevel.PROTOTYPE, tuple(missing))
    return Classification(ProtocolLevel.EXECUTABLE)


# -- enactment --------------------------------------------------------------


@dataclass(frozen=True)
class ProtocolInstance:
    """An executable protocol together with its current process state.

    ``history`` lists ``(activity, performer)`` steps taken since
    ``start_state``.
    """

    protocol: PrototypeProtocol
    current_state: str
    history: tuple[tuple[str, str], ...] = ()
    start_state: Optional[str] = field(default=None)

    def __post_init__(self):
        if self.start_state is None:
            object.__setattr__(self, "start_state", self.current_state)
        object.__setattr__(self, "history", tuple(tuple(h) for h in self.history))


def instantiate(protocol: Protocol, start_state: str | None = None) -> ProtocolInstance:
    verdict = classify(protocol)
    if verdict.level is not ProtocolLevel.EXECUTABLE:
        raise NotExecutable(verdict.level, verdict.reasons)
    pm = protocol.summary.process_model
    state = pm.initial_state if start_state is None else start_state
    if state not in pm.states:
        raise UnknownState(state)
    return ProtocolInstance(protocol, state)


def enabled_activities(instance: ProtocolInstance) -> frozenset[tuple[str, str]]:
    """``(activity, description)`` for every activity executable in the current state."""
    summary = instance.protocol.summary
    return frozenset(
        (activity, summary.activity_descriptions[activity])
        for activity, state in summary.process_model.executability
        if state == instance.current_state
    )


def step(instance: ProtocolInstance, activity: str, performer: str) -> ProtocolInstance:
    """Perform ``activity`` by ``performer``; returns the successor instance.

    The performer must implement the consumer element of the activity's
    service description.
    """
    protocol = instance.protocol
    summary = protocol.summary
    pm = summary.process_model
    state = instance.current_state
    if (activity, state) not in pm.executability:
        raise ActivityNotEnabled(f"{activity} is not executable in state {state}")
    target = pm.transitions.get((state, activity))
    if target is None:
        raise NoTransitionDefined(f"no successor state for {activity} in state {state}")
    consumer = summary.description(summary.activity_descriptions[activity]).consumer
    if (performer, consumer) not in protocol.implementations:
        raise PerformerNotAuthorized(f"{performer} does not implement consumer {consumer} of {activity}")
    return replace(instance, current_state=target, history=instance.history + ((activity, performer),))


def replay(protocol: PrototypeProtocol, history: Iterable[tuple[str, str]], start_state: str | None = None) -> ProtocolInstance:
    instance = instantiate(protocol, start_state)
    for activity, performer in history:
        instance = step(instance, activity, performer)
    return instance
