from __future__ import annotations

import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from generators import random_instance
from strategies import constraint_sets
from svcproto import samples
from svcproto.errors import UnknownClass, UnknownEntity, UnknownLink, UnknownLinkClass
from svcproto.membership import INCOMING, INSTANCE, OUTGOING, link_full_member, relational_member
from svcproto.model import Entity, EntityClass, Link, LinkClass, ServiceNetwork, ServiceNetworkSchema
from svcproto.predicates import instance_of


def test_developer_is_relational_member(network, schema):
    explanation = relational_member("DevHouse", "ExperiencedDeveloper", network, schema)
    assert explanation.verdict and explanation.failed_conditions == ()


def test_architect_fails_only_on_instance_for_developer(network, schema):
    explanation = relational_member("ArchibaldTex", "ExperiencedDeveloper", network, schema)
    conditions = [f.condition for f in explanation.failed_conditions]
    # the outgoing DeveloperBank link class needs a hasAccount link that ArchibaldTex lacks
    assert conditions == [INSTANCE, OUTGOING, INCOMING]


def test_isolated_entity_without_required_link():
    net = ServiceNetwork((Entity("a"), Entity("b")))
    sch = ServiceNetworkSchema((EntityClass("c"), EntityClass("d")), (LinkClass("c", "d"),))
    explanation = relational_member("a", "c", net, sch)
    assert not explanation
    assert [f.condition for f in explanation.failed_conditions] == [OUTGOING]


def test_vacuous_membership():
    net = ServiceNetwork((Entity("a"),))
    sch = ServiceNetworkSchema((EntityClass("c"),))
    assert relational_member("a", "c", net, sch).verdict


def test_unknown_ids(network, schema):
    with pytest.raises(UnknownEntity):
        relational_member("nobody", "Bank", network, schema)
    with pytest.raises(UnknownClass):
        relational_member("MoniBank", "Nothing", network, schema)


def test_link_full_members(network, schema):
    assert link_full_member(samples.DEVELOPER_BANK, samples.DEVELOPER_BANK_CLASS, network, schema)
    assert link_full_member(samples.COLLABORATION, samples.COLLABORATION_CLASS, network, schema)
    assert not link_full_member(samples.COLLABORATION, samples.DEVELOPER_BANK_CLASS, network, schema)


def test_link_lacking_descriptor_property(network, schema):
    demanding = LinkClass("ExperiencedDeveloper", "Bank", {"hasAccount": "= true", "insured": "= true"})
    sch = ServiceNetworkSchema(schema.classes, schema.link_classes + (demanding,))
    assert not link_full_member(samples.DEVELOPER_BANK, demanding, network, sch)


def test_link_membership_unknown(network, schema):
    with pytest.raises(UnknownLink):
        link_full_member(Link("MoniBank", "DevHouse"), samples.DEVELOPER_BANK_CLASS, network, schema)
    with pytest.raises(UnknownLinkClass):
        link_full_member(samples.DEVELOPER_BANK, LinkClass("Bank", "Bank"), network, schema)


def test_far_endpoint_is_irrelevant(network, schema):
    # make MoniBank a non-instance of Bank; DevHouse's membership must not change
    poor = Entity("MoniBank", {"profession": ["Bank"], "interestRate3y": 9})
    changed = ServiceNetwork(
        tuple(poor if e.id == "MoniBank" else e for e in network.entities), network.links
    )
    assert relational_member("DevHouse", "ExperiencedDeveloper", changed, schema).verdict


@given(st.integers(0, 10_000))
@settings(max_examples=150)
def test_locality(seed):
    """Changing an entity that is not adjacent leaves membership unchanged."""
    rng = random.Random(seed)
    network, schema = random_instance(rng, max_entities=5)
    for entity_id in network.entity_ids:
        distant = [
            e for e in network.entity_ids if e != entity_id and e not in network.neighbours(entity_id)
        ]
        if not distant:
            continue
        target = rng.choice(distant)
        mutated = ServiceNetwork(
            tuple(Entity(e.id, {"mutated": True}) if e.id == target else e for e in network.entities),
            network.links,
        )
        for class_id in schema.class_ids:
            before = relational_member(entity_id, class_id, network, schema).verdict
            after = relational_member(entity_id, class_id, mutated, schema).verdict
            assert before == after


@given(st.integers(0, 10_000))
@settings(max_examples=150)
def test_membership_implies_instance(seed):
    network, schema = random_instance(random.Random(seed))
    for e in network.entity_ids:
        for c in schema.class_ids:
            if relational_member(e, c, network, schema):
                assert instance_of(network.entity(e), schema.entity_class(c))


@given(st.integers(0, 10_000), constraint_sets, st.sampled_from(["source", "destination", "descriptor"]))
@settings(max_examples=150)
def test_full_membership_never_gained_by_adding_constraints(seed, extra, where):
    network, schema = random_instance(random.Random(seed), max_links=8)
    for lc in schema.link_classes:
        for link in network.links:
            before = link_full_member(link, lc, network, schema)
            if where == "descriptor":
                names = {c.name for c in lc.descriptor_class}
                tighter_lc = LinkClass(lc.source, lc.destination, lc.descriptor_class + tuple(c for c in extra if c.name not in names))
                classes = schema.classes
            else:
                target = getattr(lc, where)
                cls = schema.entity_class(target)
                names = {c.name for c in cls.constraints}
                tighter = EntityClass(target, cls.constraints + tuple(c for c in extra if c.name not in names))
                classes = tuple(tighter if c.id == target else c for c in schema.classes)
                tighter_lc = lc
            links = tuple(x for x in schema.link_classes if x != lc) + (tighter_lc,)
            tightened = ServiceNetworkSchema(classes, links)
            if link_full_member(link, tighter_lc, network, tightened):
                assert before
