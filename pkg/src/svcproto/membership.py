"""Class relational membership and link class full membership."""

from __future__ import annotations

from dataclasses import dataclass

from .errors import UnknownLink, UnknownLinkClass
from .model import Link, LinkClass, ServiceNetwork, ServiceNetworkSchema
from .predicates import instance_of, unsatisfied_constraints

INSTANCE, OUTGOING, INCOMING = 1, 2, 3


@dataclass(frozen=True)
class FailedCondition:
    condition: int  # INSTANCE, OUTGOING or INCOMING
    detail: str  # class id for INSTANCE, link class label otherwise
    reason: str = ""

    def __str__(self):
        what = {INSTANCE: "instance", OUTGOING: "outgoing", INCOMING: "incoming"}[self.condition]
        return f"({self.condition}) {what} {self.detail}" + (f": {self.reason}" if self.reason else "")


@dataclass(frozen=True)
class MembershipExplanation:
    failed_conditions: tuple[FailedCondition, ...] = ()

    @property
    def verdict(self) -> bool:
        return not self.failed_conditions

    def __bool__(self):
        return self.verdict


def relational_member(
    entity_id: str, class_id: str, network: ServiceNetwork, schema: ServiceNetworkSchema
) -> MembershipExplanation:
    """Check whether an entity is a relational member of a class.

    Three conditions, all reported when they fail:

    1. the entity is an instance of the class;
    2. for every link class leaving the class, some link leaving the entity
       has a descriptor that is an instance of the link class's descriptor class;
    3. likewise for link classes entering the class and links entering the entity.

    Only descriptors are inspected in (2) and (3); the class of the far
    endpoint plays no part.
    """
    entity = network.entity(entity_id)
    cls = schema.entity_class(class_id)
    failed = []
    missing = unsatisfied_constraints(entity, cls)
    if missing:
        failed.append(FailedCondition(INSTANCE, class_id, "; ".join(str(m) for m in missing)))
    for condition, link_classes, links in (
        (OUTGOING, schema.outgoing(class_id), network.outgoing(entity_id)),
        (INCOMING, schema.incoming(class_id), network.incoming(entity_id)),
    ):
        for lc in link_classes:
            if not any(instance_of(link.descriptor, lc.descriptor_class) for link in links):
                failed.append(FailedCondition(condition, lc.label, "no conforming link"))
    return MembershipExplanation(tuple(failed))


def is_full_member(
    link: Link, link_class: LinkClass, network: ServiceNetwork, schema: ServiceNetworkSchema
) -> bool:
    return (
        instance_of(network.entity(link.source), schema.entity_class(link_class.source))
        and instance_of(network.entity(link.destination), schema.entity_class(link_class.destination))
        and instance_of(link.descriptor, link_class.descriptor_class)
    )


def link_full_member(
    link: Link, link_class: LinkClass, network: ServiceNetwork, schema: ServiceNetworkSchema
) -> bool:
    """Both endpoints are instances of the endpoint classes and the descriptor
    is an instance of the descriptor class."""
    if not network.has_link(link):
        raise UnknownLink(link.label)
    if link_class not in schema.link_classes:
        raise UnknownLinkClass(link_class.label)
    return is_full_member(link, link_class, network, schema)
