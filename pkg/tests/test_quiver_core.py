import itertools
import json

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from corpus import enumerated, fixture, small_corpus
from gentle.quiver_core import (
    CompositionError,
    DSLSyntaxError,
    NotGentleError,
    QuiverError,
    are_isomorphic,
    canonical_form,
    cycle_number,
    ensure_gentle,
    from_json,
    opposite,
    parse_quiver,
    presentation,
    rename,
    spanning_tree_complement,
    to_dsl,
    to_json,
    validate_gentle,
)
from oracles import brute_isomorphic


def test_parse_example_counts():
    p = fixture("ten_vertex")
    assert p.name == "ten_vertex"
    assert len(p.vertices) == 10
    assert len(p.arrows) == 11
    assert len(p.relations) == 4
    assert cycle_number(p) == 2


def test_vertices_inferred_without_declaration():
    p = parse_quiver("arrow a: u -> v\narrow b: v -> w\n")
    assert p.vertices == ("u", "v", "w")


def test_comments_and_blank_lines_are_ignored():
    p = parse_quiver("# header\n\narrow a: u -> v   # trailing\n")
    assert [a.name for a in p.arrows] == ["a"]


def test_primed_names_are_accepted():
    p = parse_quiver("arrow a': u -> v\narrow b'': v -> u\nrel a' b''\n")
    assert p.relations == (("a'", "b''"),)


@pytest.mark.parametrize(
    "text, line, column",
    [
        ("", 1, 1),
        ("vertex u\nedge a: u -> u\n", 2, 1),
        ("arrow a u -> v\n", 1, 7),
        ("quiver A\nquiver B\n", 2, 1),
        ("arrow a: u -> v\nrel a\n", 2, 5),
    ],
)
def test_syntax_errors_carry_position(text, line, column):
    with pytest.raises(DSLSyntaxError) as info:
        parse_quiver(text)
    assert (info.value.line, info.value.column) == (line, column)


def test_relation_must_compose():
    with pytest.raises(CompositionError) as info:
        parse_quiver("arrow a: u -> v\narrow b: w -> u\nrel a b\nrel b a\n")
    assert info.value.line == 4


def test_undeclared_vertex_in_strict_mode():
    with pytest.raises(QuiverError, match="undeclared vertex"):
        parse_quiver("vertex u\narrow a: u -> v\n")


def test_duplicates_rejected():
    with pytest.raises(QuiverError, match="duplicate arrow"):
        parse_quiver("arrow a: u -> v\narrow a: v -> u\n")
    with pytest.raises(QuiverError, match="duplicate vertex"):
        parse_quiver("vertex u u\n")
    with pytest.raises(QuiverError, match="duplicate relation"):
        parse_quiver("arrow a: u -> u\nrel a a\nrel a a\n")


@pytest.mark.parametrize("name", ["ten_vertex", "a2", "nf4", "nf5", "quiver1", "quiver2"])
def test_dsl_and_json_round_trip(name):
    p = fixture(name)
    q = parse_quiver(to_dsl(p))
    assert to_dsl(q) == to_dsl(p)
    r = from_json(json.dumps(to_json(p)))
    assert to_json(r) == to_json(p)


def test_dsl_output_is_sorted():
    text = to_dsl(parse_quiver("arrow z: b -> a\narrow y: a -> b\nrel y z\n"))
    assert text == "vertex a b\narrow y: a -> b\narrow z: b -> a\nrel y z\n"


def test_bad_fixture_violates_degree_condition():
    report = validate_gentle(fixture("bad"))
    assert not report.ok
    assert report.conditions() == {1}


def test_two_continuations_violate_condition_two():
    p = parse_quiver("arrow a: u -> v\narrow b: v -> w\narrow c: v -> x\n")
    assert 2 in validate_gentle(p).conditions()


def test_relation_free_cycle_violates_finite_dimension():
    p = parse_quiver("arrow a: u -> v\narrow b: v -> u\n")
    assert validate_gentle(p).conditions() == {3}
    p = parse_quiver("arrow a: u -> u\n")
    assert validate_gentle(p).conditions() == {3}


def test_loop_with_self_relation_is_gentle():
    assert validate_gentle(parse_quiver("arrow a: u -> u\nrel a a\n")).ok


def test_two_zero_successors_violate_condition_five():
    p = parse_quiver("arrow a: u -> v\narrow b: v -> w\narrow c: v -> x\nrel b a\nrel c a\n")
    assert 5 in validate_gentle(p).conditions()


def test_disconnected_is_reported():
    p = presentation(["u", "v"], [])
    assert "disconnected" in validate_gentle(p).conditions()


def test_ensure_gentle_raises():
    with pytest.raises(NotGentleError):
        ensure_gentle(fixture("bad"))


def test_conditions_are_independent():
    # each example breaks exactly one condition
    cases = {
        1: "arrow a: u -> v\narrow b: u -> w\narrow c: u -> x\n",
        2: "arrow a: u -> v\narrow b: v -> w\narrow c: v -> x\n",
        3: "arrow a: u -> v\narrow b: v -> u\n",
        5: "arrow a: u -> v\narrow b: v -> w\narrow c: v -> x\nrel b a\nrel c a\n",
    }
    for cond, text in cases.items():
        assert validate_gentle(parse_quiver(text)).conditions() == {cond}


def test_cycle_number_and_spanning_tree():
    for name in ("ten_vertex", "nf4", "nf5", "quiver1"):
        p = fixture(name)
        assert len(spanning_tree_complement(p)) == cycle_number(p) == 2
    assert cycle_number(fixture("a2")) == 0


def test_opposite_is_an_involution():
    for p in enumerated(3):
        assert to_dsl(opposite(opposite(p))) == to_dsl(p)
        assert validate_gentle(opposite(p)).ok


def test_canonical_form_matches_brute_force_isomorphism():
    items = [p for n in (2, 3) for c in (0, 1, 2) for p in enumerated(n, c)]
    for p, q in itertools.combinations(items, 2):
        if len(p.vertices) == len(q.vertices) and len(p.arrows) == len(q.arrows):
            assert (canonical_form(p) == canonical_form(q)) == brute_isomorphic(p, q)


def test_isomorphism_witness_maps_structure():
    p = fixture("ten_vertex")
    vm = {v: f"x{k}" for k, v in enumerate(reversed(p.vertices))}
    am = {a.name: f"b{k}" for k, a in enumerate(p.arrows)}
    q = rename(p, vm, am)
    ok, iso = are_isomorphic(p, q)
    assert ok
    for a in p.arrows:
        b = q.arrow(iso.arrow_map[a.name])
        assert (iso.vertex_map[a.source], iso.vertex_map[a.target]) == (b.source, b.target)
    assert {(iso.arrow_map[g], iso.arrow_map[f]) for g, f in p.relations} == set(q.relations)


def test_fixture_collision_quivers_are_not_isomorphic():
    ok, iso = are_isomorphic(fixture("quiver1"), fixture("quiver2"))
    assert not ok and iso is None


@settings(max_examples=100)
@given(st.sampled_from(small_corpus(4)), st.randoms(use_true_random=False))
def test_canonical_form_is_relabelling_invariant(p, rnd):
    verts = list(p.vertices)
    rnd.shuffle(verts)
    vm = {v: f"n{k}" for k, v in enumerate(verts)}
    names = [a.name for a in p.arrows]
    rnd.shuffle(names)
    am = {a: f"m{k}" for k, a in enumerate(names)}
    q = rename(p, vm, am)
    assert canonical_form(q) == canonical_form(p)
    assert are_isomorphic(p, q)[0]
