"""Acceptance criteria, one test each.

Every test prints a ``criterion N: PASS|FAIL`` line (shown even under output
capture).  Run directly with ``python3 tests/test_acceptance.py`` for just
the summary.
"""

from __future__ import annotations

import random
import sys
import time
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from generators import random_instance  # noqa: E402
from malformed import MALFORMED  # noqa: E402
from oracles import minimal_compliant_subsets  # noqa: E402
from svcproto import samples  # noqa: E402
from svcproto.compliance import (  # noqa: E402
    Level,
    brute_force_compliance,
    find_compliance,
    find_compliant_subnetworks,
)
from svcproto.errors import ActivityNotEnabled, FormatError, PerformerNotAuthorized  # noqa: E402
from svcproto.formats import load, loads, save  # noqa: E402
from svcproto.membership import link_full_member, relational_member  # noqa: E402
from svcproto.predicates import instance_of, parse_predicate, print_predicate, unsatisfied_constraints  # noqa: E402
from svcproto.protocol import (  # noqa: E402
    IS_PROVIDED_BY,
    PROVIDES,
    AbstractProtocol,
    ProtocolLevel,
    PrototypeProtocol,
    classify,
    derive_implicit_schema,
    enabled_activities,
    instantiate,
    replay,
    step,
)

ORACLE_INSTANCES = 500
SUBNETWORK_INSTANCES = 200


def criterion_1():
    architect, developer = samples.EXPERIENCED_ARCHITECT, samples.EXPERIENCED_DEVELOPER
    tex = samples.ARCHIBALD_TEX
    reasons = unsatisfied_constraints(tex, developer)
    rounds = 1000
    start = time.perf_counter()
    for _ in range(rounds):
        instance_of(tex, architect)
    per_call = (time.perf_counter() - start) / rounds
    ok = (
        instance_of(tex, architect) is True
        and instance_of(tex, developer) is False
        and sorted((r.constraint.name, r.reason) for r in reasons)
        == [("#investments", "missing"), ("profession", "rejected")]
        and per_call < 1e-3
    )
    return ok, f"two reasons: {', '.join(map(str, reasons))}; {per_call * 1e6:.1f} us per check"


def criterion_2():
    network, schema = samples.construction_network(), samples.construction_schema()
    member = relational_member("DevHouse", "ExperiencedDeveloper", network, schema).verdict
    full = link_full_member(samples.DEVELOPER_BANK, samples.DEVELOPER_BANK_CLASS, network, schema)
    return member is True and full is True, f"relational member {member}, link full member {full}"


def criterion_3():
    network = samples.construction_network()
    full = find_compliance(network, samples.construction_schema())
    oracle = brute_force_compliance(network, samples.construction_schema())
    expected = {("ArchibaldTex", "ExperiencedArchitect"), ("DevHouse", "ExperiencedDeveloper"), ("MoniBank", "Bank")}
    partial = find_compliance(network, samples.extended_construction_schema())
    ok = (
        full.level is Level.FULL
        and full.witness.pairs == expected
        and oracle == full
        and partial.level is Level.PARTIAL
        and partial.uncovered == {"SitePreparation"}
    )
    return ok, f"{full.summary}; {partial.summary}"


def criterion_4():
    abstract = samples.site_abstract_protocol()
    implicit = derive_implicit_schema(abstract)
    pairs = {
        (abstract.element_classes[d.provider], abstract.element_classes[d.interface])
        for d in abstract.summary.descriptions
    }
    expected_added = {(p, i, PROVIDES) for p, i in pairs} | {(i, p, IS_PROVIDED_BY) for p, i in pairs}
    added = set(implicit.link_classes) - set(abstract.schema.link_classes)
    added_triples = {(lc.source, lc.destination, lc.descriptor_class[0].name) for lc in added}
    descriptors_ok = all(
        len(lc.descriptor_class) == 1 and str(lc.descriptor_class[0]) in (f"{PROVIDES} = true", f"{IS_PROVIDED_BY} = true")
        for lc in added
    )
    again = derive_implicit_schema(AbstractProtocol(abstract.summary, implicit, abstract.element_classes))
    ok = (
        implicit.classes == abstract.schema.classes
        and set(abstract.schema.link_classes) <= set(implicit.link_classes)
        and added_triples == expected_added
        and len(added) == 2 * len(pairs)
        and descriptors_ok
        and again == implicit
        and load(samples.fixture_path("site-implicit-schema.json")) == implicit
    )
    return ok, f"{len(added)} link classes added for {len(pairs)} provider/interface pairs; idempotent {again == implicit}"


def criterion_5():
    prototype = samples.site_prototype_protocol()
    executable = samples.site_executable_protocol()
    demoted = PrototypeProtocol(
        executable.abstract, executable.network, executable.implementations - {("n8", "sc3")}, executable.class_assignments
    )
    corrupt = PrototypeProtocol(
        prototype.abstract, prototype.network, prototype.implementations, prototype.class_assignments | {("n1", "v8")}
    )
    levels = [classify(p) for p in (prototype, executable, demoted, corrupt)]
    ok = (
        [v.level for v in levels]
        == [ProtocolLevel.PROTOTYPE, ProtocolLevel.EXECUTABLE, ProtocolLevel.PROTOTYPE, ProtocolLevel.INVALID]
        and any(r.rule == "membership" for r in levels[3].reasons)
    )
    return ok, ", ".join(v.level.value for v in levels)


def criterion_6():
    rng = random.Random(20240601)
    disagreements = 0
    for _ in range(ORACLE_INSTANCES):
        network, schema = random_instance(rng, max_entities=6, max_classes=4, max_link_classes=4, max_pairs=14)
        fast, slow = find_compliance(network, schema), brute_force_compliance(network, schema)
        if (fast.level, fast.covered, fast.witness) != (slow.level, slow.covered, slow.witness):
            disagreements += 1
    sub_disagreements = 0
    for _ in range(SUBNETWORK_INSTANCES):
        network, schema = random_instance(rng, max_entities=8, max_classes=4, max_link_classes=4, max_links=12)
        found = [m.entities for m in find_compliant_subnetworks(network, schema, limit=256)]
        if found != minimal_compliant_subsets(network, schema):
            sub_disagreements += 1
    ok = disagreements == 0 and sub_disagreements == 0
    return ok, (
        f"{disagreements} disagreements in {ORACLE_INSTANCES} compliance instances, "
        f"{sub_disagreements} in {SUBNETWORK_INSTANCES} subnetwork instances"
    )


def criterion_7():
    proto = load(samples.fixture_path("site-executable-protocol.json"))
    pm = proto.summary.process_model
    instance = instantiate(proto)
    trace = [instance.current_state]
    ok = True
    for activity, performer in [("a2", "n5"), ("a1", "n4"), ("a3", "n8")]:
        enabled = {a for a, _ in enabled_activities(instance)}
        ok &= enabled == {a for a, s in pm.executability if s == instance.current_state}
        ok &= activity in enabled
        expected = pm.transitions[(instance.current_state, activity)]
        instance = step(instance, activity, performer)
        ok &= instance.current_state == expected
        trace.append(instance.current_state)
    ok &= replay(proto, instance.history) == instance
    start = instantiate(proto)
    errors = []
    for activity, performer, error in [("a2", "n6", PerformerNotAuthorized), ("a3", "n8", ActivityNotEnabled)]:
        try:
            step(start, activity, performer)
        except error as exc:
            errors.append(type(exc).__name__)
    ok &= errors == ["PerformerNotAuthorized", "ActivityNotEnabled"]
    return ok, f"{' -> '.join(trace)}; refused with {', '.join(errors)}"


def criterion_8():
    failures = []
    texts = ["> 15", "superset {Architect}", "superset {Architect, Real-estate Developer}", '= "x y"', "in {a, 1, true}", "!= false"]
    for text in texts:
        if print_predicate(parse_predicate(text)) != text:
            failures.append(text)
    for name in sorted(samples.FIXTURES):
        data = samples.fixture_path(name).read_bytes()
        if save(load(data)) != data:
            failures.append(name)
    rejected = 0
    for label, text, path, _ in MALFORMED:
        try:
            loads(text)
        except FormatError as exc:
            if exc.path == path and path.startswith("$"):
                rejected += 1
                continue
        failures.append(label)
    ok = not failures and rejected >= 10
    return ok, f"{len(texts)} predicates and {len(samples.FIXTURES)} fixtures round-trip; {rejected}/{len(MALFORMED)} malformed documents rejected with a path" + (
        f"; failing: {failures}" if failures else ""
    )


CRITERIA = [
    (1, "instance relation", criterion_1),
    (2, "memberships", criterion_2),
    (3, "compliance", criterion_3),
    (4, "implicit schema", criterion_4),
    (5, "level classification", criterion_5),
    (6, "oracle equivalence", criterion_6),
    (7, "enactment", criterion_7),
    (8, "round-trips", criterion_8),
]


def _line(number, title, ok, detail):
    return f"criterion {number} ({title}): {'PASS' if ok else 'FAIL'} - {detail}"


@pytest.mark.parametrize("number, title, check", CRITERIA, ids=[f"criterion_{n}" for n, _, _ in CRITERIA])
def test_criterion(number, title, check, capsys):
    ok, detail = check()
    with capsys.disabled():
        print("\n" + _line(number, title, ok, detail))
    assert ok, detail


if __name__ == "__main__":
    results = []
    for number, title, check in CRITERIA:
        ok, detail = check()
        results.append(ok)
        print(_line(number, title, ok, detail))
    sys.exit(0 if all(results) else 1)
