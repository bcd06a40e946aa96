"""Compliance of service networks with schemata.

A relation between entities and classes is a *partial compliance relation*
when

* membership: every related entity is a relational member of its class, and
* linkage: for every link class ``s -> d`` and every pair of entities related
  to ``s`` and ``d`` respectively, some link between them is a full member
  of the link class;

it is a *compliance relation* when additionally

* coverage: every class has at least one related entity.

Both conditions besides coverage are preserved under removing pairs, so the
search below only ever needs one entity per covered class.
"""

from __future__ import annotations

from collections.abc import Iterator
from dataclasses import dataclass
from enum import Enum
from typing import NamedTuple

from .errors import InstanceTooLarge
from .membership import is_full_member, relational_member
from .model import ServiceNetwork, ServiceNetworkSchema, Violation

BRUTE_FORCE_MAX_PAIRS = 20


class Level(str, Enum):
    FULL = "FULL"
    PARTIAL = "PARTIAL"
    NONE = "NONE"


def _pair_order(pair: tuple[str, str]) -> tuple[str, str]:
    entity_id, class_id = pair
    return (class_id, entity_id)


@dataclass(frozen=True)
class ComplianceRelation:
    """A set of ``(entity_id, class_id)`` pairs; iterates by (class, entity)."""

    pairs: frozenset = frozenset()

    def __post_init__(self):
        pairs = frozenset((str(e), str(c)) for e, c in self.pairs)
        object.__setattr__(self, "pairs", pairs)

    def __iter__(self) -> Iterator[tuple[str, str]]:
        return iter(sorted(self.pairs, key=_pair_order))

    def __len__(self) -> int:
        return len(self.pairs)

    def __contains__(self, pair) -> bool:
        return tuple(pair) in self.pairs

    def entities_of(self, class_id: str) -> list[str]:
        return sorted(e for e, c in self.pairs if c == class_id)

    @property
    def classes(self) -> frozenset[str]:
        return frozenset(c for _, c in self.pairs)

    def __or__(self, other: ComplianceRelation) -> ComplianceRelation:
        return ComplianceRelation(self.pairs | other.pairs)

    def __le__(self, other: ComplianceRelation) -> bool:
        return self.pairs <= other.pairs


def _relation(relation) -> ComplianceRelation:
    return relation if isinstance(relation, ComplianceRelation) else ComplianceRelation(relation)


def relation_violations(
    relation, network: ServiceNetwork, schema: ServiceNetworkSchema, *, coverage: bool = True
) -> list[Violation]:
    """All membership, linkage and (optionally) coverage failures of ``relation``.

    Raises UnknownEntity / UnknownClass when a pair does not resolve.
    """
    relation = _relation(relation)
    for entity_id, class_id in relation:
        network.entity(entity_id)
        schema.entity_class(class_id)
    found = []
    for entity_id, class_id in relation:
        explanation = relational_member(entity_id, class_id, network, schema)
        if not explanation:
            detail = "; ".join(str(f) for f in explanation.failed_conditions)
            found.append(
                Violation(
                    "membership",
                    entity_id,
                    f"{entity_id} is not a relational member of {class_id}: {detail}",
                )
            )
    for lc in schema.link_classes:
        for src in relation.entities_of(lc.source):
            for dst in relation.entities_of(lc.destination):
                links = network.links_between(src, dst)
                if not any(is_full_member(link, lc, network, schema) for link in links):
                    found.append(
                        Violation(
                            "linkage",
                            f"{src}->{dst}",
                            f"no link {src}->{dst} is a full member of {lc.label}",
                        )
                    )
    if coverage:
        covered = relation.classes
        for class_id in schema.class_ids:
            if class_id not in covered:
                found.append(Violation("coverage", class_id, f"no entity is related to {class_id}"))
    return found


def is_compliance_relation(relation, network, schema) -> bool:
    return not relation_violations(relation, network, schema, coverage=True)


def is_partial_compliance_relation(relation, network, schema) -> bool:
    return not relation_violations(relation, network, schema, coverage=False)


@dataclass(frozen=True)
class ComplianceReport:
    level: Level
    witness: ComplianceRelation
    covered: frozenset
    uncovered: frozenset
    diagnostics: tuple[str, ...] = ()

    @property
    def summary(self) -> str:
        if self.level is Level.FULL:
            return "FULL"
        return f"{self.level.value}, uncovered: {', '.join(sorted(self.uncovered))}"


def relational_candidates(network: ServiceNetwork, schema: ServiceNetworkSchema) -> dict[str, list[str]]:
    """For each class (sorted), the sorted ids of its relational members."""
    return {
        class_id: [e for e in network.entity_ids if relational_member(e, class_id, network, schema)]
        for class_id in schema.class_ids
    }


def _report(
    witness: ComplianceRelation, candidates: dict[str, list[str]], schema: ServiceNetworkSchema
) -> ComplianceReport:
    covered = witness.classes
    uncovered = frozenset(schema.class_ids) - covered
    if not uncovered:
        level = Level.FULL
    elif covered:
        level = Level.PARTIAL
    else:
        level = Level.NONE
    diagnostics = []
    for class_id in sorted(uncovered):
        if candidates[class_id]:
            members = ", ".join(candidates[class_id])
            diagnostics.append(
                f"{class_id}: relational members ({members}) lack required links to the rest of the witness"
            )
        else:
            diagnostics.append(f"{class_id}: no entity is a relational member")
    return ComplianceReport(level, witness, covered, uncovered, tuple(diagnostics))


class _Linkage:
    """Memoised linkage test between two (entity, class) assignments."""

    def __init__(self, network: ServiceNetwork, schema: ServiceNetworkSchema):
        self.network = network
        self.schema = schema
        self._cache: dict[tuple, bool] = {}

    def ok(self, src: str, src_class: str, dst: str, dst_class: str) -> bool:
        key = (src, src_class, dst, dst_class)
        hit = self._cache.get(key)
        if hit is None:
            hit = all(
                any(
                    is_full_member(link, lc, self.network, self.schema)
                    for link in self.network.links_between(src, dst)
                )
                for lc in self.schema.outgoing(src_class)
                if lc.destination == dst_class
            )
            self._cache[key] = hit
        return hit

    def compatible(self, entity_id: str, class_id: str, assigned: list[tuple[str, str]]) -> bool:
        if not self.ok(entity_id, class_id, entity_id, class_id):
            return False
        return all(
            self.ok(entity_id, class_id, e, c) and self.ok(e, c, entity_id, class_id)
            for e, c in assigned
        )


def find_compliance(network: ServiceNetwork, schema: ServiceNetworkSchema) -> ComplianceReport:
    """Maximum-coverage partial compliance relation, by backtracking.

    Classes are visited in id order; for each, its relational members are
    tried in id order before leaving the class uncovered.  A branch is cut
    when it cannot beat the best coverage found so far, so the first witness
    reaching the maximum is the lexicographically least one (pairs ordered by
    class id, then entity id), with exactly one entity per covered class.
    """
    candidates = relational_candidates(network, schema)
    class_ids = list(schema.class_ids)
    linkage = _Linkage(network, schema)
    # reachable[i]: classes from i onward that could still be covered
    reachable = [0] * (len(class_ids) + 1)
    for i in range(len(class_ids) - 1, -1, -1):
        reachable[i] = reachable[i + 1] + (1 if candidates[class_ids[i]] else 0)

    best: list[tuple[str, str]] | None = None
    assigned: list[tuple[str, str]] = []

    def search(i: int) -> None:
        nonlocal best
        if best is not None and len(assigned) + reachable[i] <= len(best):
            return
        if i == len(class_ids):
            best = list(assigned)
            return
        class_id = class_ids[i]
        for entity_id in candidates[class_id]:
            if linkage.compatible(entity_id, class_id, assigned):
                assigned.append((entity_id, class_id))
                search(i + 1)
                assigned.pop()
        search(i + 1)

    search(0)
    return _report(ComplianceRelation(best or ()), candidates, schema)


def brute_force_compliance(network: ServiceNetwork, schema: ServiceNetworkSchema) -> ComplianceReport:
    """Same contract as :func:`find_compliance`, by trying every subset of
    candidate pairs against the definition directly.

    Raises InstanceTooLarge beyond ``BRUTE_FORCE_MAX_PAIRS`` candidate pairs.
    """
    candidates = relational_candidates(network, schema)
    pairs = [(e, c) for c in sorted(candidates) for e in candidates[c]]
    if len(pairs) > BRUTE_FORCE_MAX_PAIRS:
        raise InstanceTooLarge(
            f"{len(pairs)} candidate pairs exceed the limit of {BRUTE_FORCE_MAX_PAIRS}"
        )
    best_key = None
    best: list[tuple[str, str]] = []
    for mask in range(1 << len(pairs)):
        subset = [pairs[i] for i in range(len(pairs)) if mask >> i & 1]
        if not is_partial_compliance_relation(subset, network, schema):
            continue
        key = (-len({c for _, c in subset}), len(subset), sorted(map(_pair_order, subset)))
        if best_key is None or key < best_key:
            best_key, best = key, subset
    return _report(ComplianceRelation(best), candidates, schema)


class SubnetworkMatch(NamedTuple):
    entities: tuple[str, ...]
    witness: ComplianceRelation


def find_compliant_subnetworks(
    network: ServiceNetwork, schema: ServiceNetworkSchema, limit: int = 1
) -> list[SubnetworkMatch]:
    """Up to ``limit`` inclusion-minimal entity sets whose induced subnetwork
    is fully compliant, in lexicographic order of their sorted id tuples.

    Full compliance of an induced subnetwork only grows with the entity set
    (memberships and linkage ask for the existence of links), which gives
    three cuts: a compliant set's extensions are never minimal; a subtree is
    dead if even adding every remaining entity is not compliant; and only
    relational members of some class plus their neighbours can appear in a
    minimal set, which has at most one witness and one supporting neighbour
    per class and incident link class.
    """
    if limit < 1:
        raise ValueError("limit must be at least 1")
    candidates = relational_candidates(network, schema)
    members = {e for ids in candidates.values() for e in ids}
    relevant = set(members)
    for entity_id in members:
        relevant |= network.neighbours(entity_id)
    universe = sorted(relevant)
    max_size = min(len(universe), len(schema.class_ids) + 2 * len(schema.link_classes))

    memo: dict[frozenset, ComplianceReport | None] = {}

    def compliant(ids) -> ComplianceReport | None:
        key = frozenset(ids)
        if key not in memo:
            report = find_compliance(network.induced(key), schema)
            memo[key] = report if report.level is Level.FULL else None
        return memo[key]

    results: list[SubnetworkMatch] = []
    chosen: list[str] = []

    def visit(start: int) -> None:
        report = compliant(chosen)
        if report is not None:
            if all(compliant(chosen[:i] + chosen[i + 1 :]) is None for i in range(len(chosen))):
                results.append(SubnetworkMatch(tuple(chosen), report.witness))
            return
        if len(chosen) >= max_size or compliant(chosen + universe[start:]) is None:
            return
        for i in range(start, len(universe)):
            chosen.append(universe[i])
            visit(i + 1)
            chosen.pop()
            if len(results) >= limit:
                return

    visit(0)
    return results[:limit]

