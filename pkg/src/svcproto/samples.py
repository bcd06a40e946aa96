"""Builders for the worked examples shipped under ``svcproto/fixtures``.

Two scenarios: a real-estate developer (DevHouse) looking for an architect
(ArchibaldTex) and a bank (MoniBank); and a site protocol whose process
runs from financing to a cleared site.
The JSON fixtures are exactly ``save()`` of these builders;
``python3 -m svcproto.samples DIR`` rewrites them.
"""

from __future__ import annotations

import sys
from decimal import Decimal
from importlib import resources
from pathlib import Path

from .model import Entity, EntityClass, Link, LinkClass, ServiceNetwork, ServiceNetworkSchema
from .protocol import (
    AbstractProtocol,
    ProcessModel,
    PrototypeProtocol,
    ServiceDescription,
    ServiceOrientedSummary,
    derive_implicit_schema,
)

ARCHIBALD_TEX = Entity(
    "ArchibaldTex",
    {
        "name": "Archibald Tex",
        "profession": ["Architect"],
        "#realizations": 17,
        "nationality": "Canadian",
    },
)
DEVHOUSE = Entity(
    "DevHouse",
    {"name": "DevHouse", "profession": ["Real-estate Developer"], "#investments": 24},
)
MONIBANK = Entity(
    "MoniBank",
    {
        "name": "MoniBank",
        "profession": ["Bank"],
        "#clients": 235500,
        "interestRate3y": 3,
    },
)
COLLABORATION = Link(
    "ArchibaldTex", "DevHouse", {"#currentProjects": 3, "#pastProjects": 15}, "Collaboration"
)
DEVELOPER_BANK = Link(
    "DevHouse", "MoniBank", {"hasAccount": True, "#currentLoans": 0}, "DeveloperBank"
)

EXPERIENCED_ARCHITECT = EntityClass(
    "ExperiencedArchitect",
    {"profession": "superset {Architect}", "#realizations": "> 15"},
)
EXPERIENCED_DEVELOPER = EntityClass(
    "ExperiencedDeveloper",
    {"profession": "superset {Real-estate Developer}", "#investments": "> 10"},
)
BANK = EntityClass("Bank", {"profession": "superset {Bank}", "interestRate3y": "<= 5.5"})
SITE_PREPARATION = EntityClass("SitePreparation", {"profession": "superset {Site Preparation}"})
COLLABORATION_CLASS = LinkClass(
    "ExperiencedArchitect",
    "ExperiencedDeveloper",
    {"#currentProjects": "> 2", "#pastProjects": "> 5"},
    name="Collaboration",
)
DEVELOPER_BANK_CLASS = LinkClass(
    "ExperiencedDeveloper",
    "Bank",
    {"hasAccount": "= true", "#currentLoans": "= 0"},
    name="DeveloperBank",
)
# A self-loop keeps the recommendation requirement away from the architect.
RECOMMEND_CLASS = LinkClass(
    "SitePreparation", "SitePreparation", {"recommended": "= true"}, name="Recommend"
)


def construction_network() -> ServiceNetwork:
    return ServiceNetwork((ARCHIBALD_TEX, DEVHOUSE, MONIBANK), (COLLABORATION, DEVELOPER_BANK))


def construction_schema() -> ServiceNetworkSchema:
    return ServiceNetworkSchema(
        (EXPERIENCED_ARCHITECT, EXPERIENCED_DEVELOPER, BANK),
        (COLLABORATION_CLASS, DEVELOPER_BANK_CLASS),
    )


def extended_construction_schema() -> ServiceNetworkSchema:
    base = construction_schema()
    return ServiceNetworkSchema(
        base.classes + (SITE_PREPARATION,), base.link_classes + (RECOMMEND_CLASS,)
    )


# -- the site protocol --------------------------------------------------------

_KINDS = {
    "v1": ("developer", {"#investments": "> 10"}),
    "v2": ("loan-desk", {}),
    "v3": ("bank", {"interestRate3y": "<= 5.5"}),
    "v4": ("site-supervisor", {}),
    "v5": ("demolition-order", {}),
    "v6": ("architect", {"#realizations": "> 15"}),
    "v7": ("site-preparation-order", {}),
    "v8": ("site-preparation-company", {}),
    "v9": ("demolition-company", {}),
}

_ENTITY_PROPERTIES = {
    "n1": {"kind": "site-preparation-order", "label": "1"},
    "n2": {"kind": "site-preparation-order", "label": "2"},
    "n3": {"kind": "site-preparation-company"},
    "n4": {"kind": "architect", "#realizations": 17},
    "n5": {"kind": "developer", "#investments": 24},
    "n6": {"kind": "loan-desk"},
    "n7": {"kind": "bank", "interestRate3y": Decimal("3")},
    "n8": {"kind": "site-supervisor"},
    "n9": {"kind": "demolition-order"},
    "n10": {"kind": "demolition-company"},
}


def site_schema() -> ServiceNetworkSchema:
    classes = [
        EntityClass(cid, {"kind": f'= "{kind}"', **extra}) for cid, (kind, extra) in _KINDS.items()
    ]
    link_classes = [
        LinkClass("v1", "v6", {"#pastProjects": "> 5"}),
        LinkClass("v6", "v8", {"trusts": "= true"}),
        LinkClass("v6", "v9", {"trusts": "= true"}),
    ]
    return ServiceNetworkSchema(tuple(classes), tuple(link_classes))


def site_summary() -> ServiceOrientedSummary:
    process_model = ProcessModel(
        states={"initial", "financed", "site-ordered", "cleared"},
        activities={"a1", "a2", "a3"},
        executability={("a2", "initial"), ("a1", "financed"), ("a3", "site-ordered")},
        transitions={
            ("initial", "a2"): "financed",
            ("financed", "a1"): "site-ordered",
            ("site-ordered", "a3"): "cleared",
        },
        initial_state="initial",
    )
    descriptions = tuple(
        ServiceDescription(f"d{i}", f"sc{i}", f"si{i}", f"sp{i}") for i in (1, 2, 3)
    )
    return ServiceOrientedSummary(process_model, descriptions, {"a1": "d1", "a2": "d2", "a3": "d3"})


def site_abstract_protocol() -> AbstractProtocol:
    element_classes = {
        "sc1": "v6", "si1": "v7", "sp1": "v8",
        "sc2": "v1", "si2": "v2", "sp2": "v3",
        "sc3": "v4", "si3": "v5", "sp3": "v9",
    }  # fmt: skip
    return AbstractProtocol(site_summary(), site_schema(), element_classes)


def _provided(provider: str, interface: str) -> tuple[Link, Link]:
    return (
        Link(provider, interface, {"provides": True}, "provides"),
        Link(interface, provider, {"isProvidedBy": True}, "isProvidedBy"),
    )


def site_network() -> ServiceNetwork:
    links = [
        *_provided("n3", "n1"),
        *_provided("n3", "n2"),
        *_provided("n7", "n6"),
        *_provided("n10", "n9"),
        Link("n5", "n4", {"#pastProjects": 15}),
        Link("n4", "n3", {"trusts": True}),
        Link("n4", "n10", {"trusts": True}),
    ]
    entities = [Entity(eid, props) for eid, props in _ENTITY_PROPERTIES.items()]
    return ServiceNetwork(tuple(entities), tuple(links))


def site_prototype_protocol() -> PrototypeProtocol:
    """Only the site-preparation description is implemented."""
    return PrototypeProtocol(
        site_abstract_protocol(),
        site_network(),
        {("n1", "si1"), ("n2", "si1"), ("n3", "sp1"), ("n4", "sc1")},
        {("n1", "v7"), ("n2", "v7")},
    )


def site_executable_protocol() -> PrototypeProtocol:
    """Every element implemented and every class covered."""
    proto = site_prototype_protocol()
    more = {
        ("n5", "sc2"), ("n6", "si2"), ("n7", "sp2"),
        ("n8", "sc3"), ("n9", "si3"), ("n10", "sp3"),
    }  # fmt: skip
    return PrototypeProtocol(
        proto.abstract, proto.network, proto.implementations | more, proto.class_assignments
    )


FIXTURES = {
    "fig2-network.json": construction_network,
    "construction-schema.json": construction_schema,
    "extended-construction-schema.json": extended_construction_schema,
    "site-abstract-protocol.json": site_abstract_protocol,
    "site-prototype-protocol.json": site_prototype_protocol,
    "site-executable-protocol.json": site_executable_protocol,
    "site-implicit-schema.json": lambda: derive_implicit_schema(site_abstract_protocol()),
}


def fixture_path(name: str) -> Path:
    """Filesystem path of a shipped fixture."""
    return Path(str(resources.files("svcproto") / "fixtures" / name))


def write_fixtures(directory) -> list[Path]:
    from .formats import save

    directory = Path(directory)
    directory.mkdir(parents=True, exist_ok=True)
    written = []
    for name, build in FIXTURES.items():
        target = directory / name
        target.write_bytes(save(build()))
        written.append(target)
    return written


if __name__ == "__main__":
    out = sys.argv[1] if len(sys.argv) > 1 else fixture_path("")
    for p in write_fixtures(out):
        print(p)
