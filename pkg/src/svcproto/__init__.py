"""Service networks, schemata, compliance checking and service protocols."""

from __future__ import annotations

from .compliance import (
    ComplianceRelation,
    ComplianceReport,
    Level,
    SubnetworkMatch,
    brute_force_compliance,
    find_compliance,
    find_compliant_subnetworks,
    is_compliance_relation,
    is_partial_compliance_relation,
    relation_violations,
)
from .errors import (
    ServiceProtocolError,
    ModelError,
    DuplicateEntityId,
    DanglingLinkEndpoint,
    DuplicatePropertyName,
    DuplicateSetMember,
    DuplicateClassId,
    DanglingLinkClassEndpoint,
    DuplicateConstraintName,
    InvalidValue,
    PredicateSyntaxError,
    UnknownId,
    UnknownEntity,
    UnknownClass,
    UnknownLink,
    UnknownLinkClass,
    InstanceTooLarge,
    InvalidAbstractProtocol,
    NotExecutable,
    UnknownState,
    EnactmentError,
    ActivityNotEnabled,
    NoTransitionDefined,
    PerformerNotAuthorized,
    FormatError,
    ParseError,
    SchemaViolation,
    UnsupportedVersion,
)
from .formats import MatchReport, dumps, load, loads, save
from .membership import MembershipExplanation, link_full_member, relational_member
from .model import (
    Entity,
    EntityClass,
    Link,
    LinkClass,
    PropertyConstraint,
    ServiceNetwork,
    ServiceNetworkSchema,
    Violation,
    build_network,
    build_schema,
)
from .predicates import Op, Predicate, eval_predicate, instance_of, parse_predicate, print_predicate, satisfies
from .protocol import (
    AbstractProtocol,
    Classification,
    ProcessModel,
    ProtocolInstance,
    ProtocolLevel,
    PrototypeProtocol,
    ServiceDescription,
    ServiceOrientedSummary,
    classify,
    derive_implicit_schema,
    enabled_activities,
    induced_relation,
    instantiate,
    replay,
    step,
    validate_summary,
)
from .values import Property, PropertyMap

__version__ = "0.1.0"

__all__ = [
    "AbstractProtocol",
    "ActivityNotEnabled",
    "Classification",
    "ComplianceRelation",
    "ComplianceReport",
    "DanglingLinkClassEndpoint",
    "DanglingLinkEndpoint",
    "DuplicateClassId",
    "DuplicateConstraintName",
    "DuplicateEntityId",
    "DuplicatePropertyName",
    "DuplicateSetMember",
    "EnactmentError",
    "Entity",
    "EntityClass",
    "FormatError",
    "InstanceTooLarge",
    "InvalidAbstractProtocol",
    "InvalidValue",
    "Level",
    "Link",
    "LinkClass",
    "MatchReport",
    "MembershipExplanation",
    "ModelError",
    "NoTransitionDefined",
    "NotExecutable",
    "Op",
    "ParseError",
    "PerformerNotAuthorized",
    "Predicate",
    "PredicateSyntaxError",
    "ProcessModel",
    "Property",
    "PropertyConstraint",
    "PropertyMap",
    "ProtocolInstance",
    "ProtocolLevel",
    "PrototypeProtocol",
    "SchemaViolation",
    "ServiceDescription",
    "ServiceNetwork",
    "ServiceNetworkSchema",
    "ServiceOrientedSummary",
    "ServiceProtocolError",
    "SubnetworkMatch",
    "UnknownClass",
    "UnknownEntity",
    "UnknownId",
    "UnknownLink",
    "UnknownLinkClass",
    "UnknownState",
    "UnsupportedVersion",
    "Violation",
    "brute_force_compliance",
    "build_network",
    "build_schema",
    "classify",
    "derive_implicit_schema",
    "dumps",
    "enabled_activities",
    "eval_predicate",
    "find_compliance",
    "find_compliant_subnetworks",
    "induced_relation",
    "instance_of",
    "instantiate",
    "is_compliance_relation",
    "is_partial_compliance_relation",
    "link_full_member",
    "load",
    "loads",
    "parse_predicate",
    "print_predicate",
    "relation_violations",
    "relational_member",
    "replay",
    "satisfies",
    "save",
    "step",
    "validate_summary",
]
