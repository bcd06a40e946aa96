from __future__ import annotations

from decimal import Decimal

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from strategies import constraint_sets, literals, predicates, property_maps, values
from svcproto import samples
from svcproto.errors import PredicateSyntaxError
from svcproto.model import PropertyConstraint
from svcproto.predicates import (
    Op,
    Predicate,
    eval_predicate,
    instance_of,
    parse_predicate,
    print_predicate,
    satisfies,
    unsatisfied_constraints,
)
from svcproto.values import Property, PropertyMap


class TestParse:
    def test_comparison(self):
        assert parse_predicate("> 15") == Predicate(Op.GT, Decimal(15))

    def test_superset_bare_words(self):
        assert parse_predicate("superset {Architect}") == Predicate(Op.SUPERSET, {"Architect"})

    def test_missing_operand_offset(self):
        with pytest.raises(PredicateSyntaxError) as info:
            parse_predicate("> ")
        assert info.value.offset == 2

    @pytest.mark.parametrize(
        "text, expected",
        [
            ("⊃ {Architect}", Predicate(Op.SUPERSET, {"Architect"})),
            ("⊇ {a, b}", Predicate(Op.SUPERSET, {"a", "b"})),
            ("⊂ {a}", Predicate(Op.SUBSET, {"a"})),
            ("≥ 3", Predicate(Op.GE, Decimal(3))),
            ("≤ 3", Predicate(Op.LE, Decimal(3))),
            ("≠ false", Predicate(Op.NEQ, False)),
            ("∈ {1, 2}", Predicate(Op.IN, [Decimal(1), Decimal(2)])),
            ('= "text"', Predicate(Op.EQ, "text")),
            ("=true", Predicate(Op.EQ, True)),
            ('contains "Bank"', Predicate(Op.CONTAINS, "Bank")),
            ("subset {}", Predicate(Op.SUBSET, set())),
            ("in {x, 2, true}", Predicate(Op.IN, ["x", Decimal(2), True])),
        ],
    )
    def test_accepted_forms(self, text, expected):
        assert parse_predicate(text) == expected

    @pytest.mark.parametrize("text", ["", ">", "= ", "superset Architect", "in {a,", "> 1 2", "contains", "between 1"])
    def test_rejected(self, text):
        with pytest.raises(PredicateSyntaxError):
            parse_predicate(text)

    def test_offset_counts_bytes(self):
        # "⊃" is three bytes in UTF-8
        with pytest.raises(PredicateSyntaxError) as info:
            parse_predicate("⊃ ")
        assert info.value.offset == 4

    def test_print_quotes_what_needs_quoting(self):
        text = print_predicate(Predicate(Op.IN, ["true", "12", "plain"]))
        assert parse_predicate(text) == Predicate(Op.IN, ["true", "12", "plain"])
        assert print_predicate(Predicate(Op.SUPERSET, {"Architect", "Real-estate Developer"})) == (
            "superset {Architect, Real-estate Developer}"
        )


class TestEvaluate:
    def test_greater_than(self):
        assert eval_predicate(Predicate(Op.GT, 15), Decimal(17))

    def test_superset_is_not_strict(self):
        assert eval_predicate(Predicate(Op.SUPERSET, {"Architect"}), frozenset({"Architect"}))

    def test_type_mismatch_is_false(self):
        assert not eval_predicate(Predicate(Op.SUPERSET, {"Architect"}), Decimal(3))
        assert not eval_predicate(Predicate(Op.GT, 1), "2")
        assert not eval_predicate(Predicate(Op.EQ, True), Decimal(1))
        assert not eval_predicate(Predicate(Op.NEQ, "1"), Decimal(1))

    def test_numbers_compare_exactly(self):
        assert eval_predicate(Predicate(Op.EQ, Decimal("5.50")), Decimal("5.5"))
        assert eval_predicate(Predicate(Op.LE, Decimal("5.5")), Decimal("5.5"))
        assert not eval_predicate(Predicate(Op.LE, Decimal("5.5")), Decimal("5.5000000000000000001"))

    def test_nested_values_only_fail(self):
        nested = PropertyMap({"a": 1})
        for text in ("= 1", "> 0", "superset {}", 'contains "a"', "in {1}"):
            assert not eval_predicate(parse_predicate(text), nested)

    def test_set_operators(self):
        skills = frozenset({"a", "b"})
        assert eval_predicate(parse_predicate("subset {a, b, c}"), skills)
        assert not eval_predicate(parse_predicate("subset {a}"), skills)
        assert eval_predicate(parse_predicate('contains "b"'), skills)
        assert not eval_predicate(parse_predicate('contains "b"'), "abc")
        assert eval_predicate(parse_predicate("in {x, y}"), "y")
        assert not eval_predicate(parse_predicate("in {1}"), True)

    @given(predicates(), values)
    def test_evaluation_is_total(self, predicate, value):
        assert eval_predicate(predicate, value) in (True, False)

    @given(predicates())
    def test_print_parse_round_trip(self, predicate):
        text = print_predicate(predicate)
        assert parse_predicate(text) == predicate
        assert print_predicate(parse_predicate(text)) == text

    @given(literals)
    def test_equality_is_reflexive(self, literal):
        value = literal if not isinstance(literal, int) or isinstance(literal, bool) else Decimal(literal)
        assert eval_predicate(Predicate(Op.EQ, value), value)
        assert not eval_predicate(Predicate(Op.NEQ, value), value)


class TestSatisfaction:
    def test_matching_property(self):
        assert satisfies(Property("#realizations", 17), PropertyConstraint("#realizations", "> 15"))

    def test_name_mismatch(self):
        assert not satisfies(Property("#realizations", 17), PropertyConstraint("#investments", "> 10"))

    def test_reflexive_equality(self):
        assert satisfies(Property("x", 5), PropertyConstraint("x", "= 5"))

    @given(st.text(min_size=1, max_size=4), st.text(min_size=1, max_size=4), values, predicates())
    def test_name_mismatch_never_satisfies(self, name, other, value, predicate):
        if name != other:
            assert not satisfies(Property(name, value), PropertyConstraint(other, predicate))


class TestInstanceOf:
    def test_architect(self):
        assert instance_of(samples.ARCHIBALD_TEX, samples.EXPERIENCED_ARCHITECT)

    def test_not_a_developer_for_two_reasons(self):
        reasons = unsatisfied_constraints(samples.ARCHIBALD_TEX, samples.EXPERIENCED_DEVELOPER)
        assert [(r.constraint.name, r.reason) for r in reasons] == [
            ("#investments", "missing"),
            ("profession", "rejected"),
        ]
        assert not instance_of(samples.ARCHIBALD_TEX, samples.EXPERIENCED_DEVELOPER)

    @given(property_maps)
    def test_empty_class(self, props):
        assert instance_of(props, ())

    @given(property_maps, constraint_sets, constraint_sets)
    @settings(max_examples=200)
    def test_anti_monotone_in_constraints(self, props, smaller, extra):
        names = {c.name for c in smaller}
        larger = smaller + tuple(c for c in extra if c.name not in names)
        if instance_of(props, larger):
            assert instance_of(props, smaller)

    def test_property_matching_constraint(self):
        # an object built from its own values is an instance of the equality class
        props = PropertyMap({"a": 1, "b": "x", "c": True})
        cls = [PropertyConstraint(n, Predicate(Op.EQ, v)) for n, v in props.items()]
        assert instance_of(props, cls)
