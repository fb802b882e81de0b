import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from corpus import enumerated, fixture, small_corpus
from gentle.invariant import compute_phi, parse_phi
from gentle.normal_forms import build_family, build_normal_form, is_normal_form
from gentle.quiver_core import QuiverError, canonical_form, cycle_number, rename
from gentle.reduction import (
    ReductionError,
    RemovalSite,
    decide_derived_equivalence,
    find_removable_vertex,
    reduce_to_normal_form,
    remove_vertex,
    removal_sites,
    vertex_degree,
)
from gentle.transforms import applicable_steps, apply_step

SITES = [(p, s) for p in small_corpus(4) if len(p.vertices) >= 3 for s in removal_sites(p) if s.removable]


def _shrinks_one_pair(before, after):
    # exactly one pair loses (1, 1); the rest are untouched
    b, a = list(before.pairs), list(after.pairs)
    for k, (n, m) in enumerate(b):
        if n >= 1 and m >= 1 and sorted(b[:k] + [(n - 1, m - 1)] + b[k + 1:]) == a:
            return True
    return False


def test_vertex_degrees():
    p = fixture("ten_vertex")
    assert vertex_degree(p, "v3") == 4
    assert vertex_degree(p, "v6") == 1
    assert vertex_degree(fixture("nf4"), "u0") == 2


def test_sites_of_example():
    sites = {(s.vertex, s.pattern) for s in removal_sites(fixture("ten_vertex"))}
    assert sites == {
        ("v2", "transition"),
        ("v4", "transition"),
        ("v6", "hanging-start"),
        ("v9", "hanging-start"),
    }


def test_transition_removal_splices_arrows():
    p = fixture("ten_vertex")
    q = remove_vertex(p, RemovalSite("v2", "transition", ("a1", "a2")))
    assert "v2" not in q.vertices
    assert q.arrow("a1'").source == "v1" and q.arrow("a1'").target == "v3"
    assert ("a1'", "a8") in q.relations and ("a7", "a1'") in q.relations
    assert compute_phi(q) == parse_phi("[(8,10)]")


def test_hanging_start_removal_drops_its_relations():
    p = fixture("ten_vertex")
    q = remove_vertex(p, RemovalSite("v9", "hanging-start", ("a8",)))
    assert "a8" not in q.arrow_map
    assert all("a8" not in r for r in q.relations)
    assert compute_phi(q) == parse_phi("[(8,10)]")


def test_removal_refuses_missing_sites():
    p = fixture("ten_vertex")
    with pytest.raises(QuiverError):
        remove_vertex(p, RemovalSite("v3", "transition", ("a2", "a3")))


def test_removal_needs_three_vertices():
    p = next(q for q in enumerated(2, 0))
    site = removal_sites(p)[0]
    with pytest.raises(QuiverError, match="three vertices"):
        remove_vertex(p, site)


def test_relation_transition_on_a_cycle_is_reported_but_not_removed():
    found = [
        (p, s) for p in enumerated(4) for s in removal_sites(p) if s.pattern == "cycle-transition-with-relations"
    ]
    assert found
    p, s = found[0]
    assert not s.removable
    with pytest.raises(QuiverError, match="not removed"):
        remove_vertex(p, s)


def test_removal_shifts_one_pair_on_every_small_site():
    assert len(SITES) > 100
    for p, s in SITES:
        assert _shrinks_one_pair(compute_phi(p), compute_phi(remove_vertex(p, s))), (p.name, str(s))


@settings(max_examples=100)
@given(st.sampled_from(SITES))
def test_removal_keeps_cycle_number(item):
    p, s = item
    assert cycle_number(remove_vertex(p, s)) == cycle_number(p)


def test_smallest_families_are_irreducible():
    assert find_removable_vertex(build_family(1, {"a": 2, "b": 3})) is None
    assert find_removable_vertex(build_family(4)) is None
    assert find_removable_vertex(build_family(5)) is None


def test_larger_form_has_removable_vertex():
    steps, site = find_removable_vertex(build_family(9, {"k": 1, "q": 2, "r": 1}))
    assert steps == [] and site.pattern == "transition"


def test_removable_vertex_found_after_steps():
    for p in enumerated(4):
        phi = compute_phi(p)
        if len(phi) != 3 or cycle_number(p) != 2:
            continue
        found = find_removable_vertex(p)
        if found is None:
            continue
        steps, site = found
        q = p
        for step in steps:
            q = apply_step(q, step)
        assert site in removal_sites(q) and site.removable


def test_normal_form_reduces_in_zero_steps():
    trace = reduce_to_normal_form(fixture("nf4"))
    assert trace.steps == [] and trace.family == 4


def test_second_collision_quiver_reduces():
    p = fixture("quiver2")
    trace = reduce_to_normal_form(p)
    assert trace.family == 9
    assert [str(s) for s in trace.steps] == ["V A"]
    assert canonical_form(trace.replay(p)) == canonical_form(build_normal_form("[(1,1),(1,1),(1,3)]"))


def test_first_collision_quiver_has_no_path():
    with pytest.raises(ReductionError, match="no path"):
        reduce_to_normal_form(fixture("quiver1"), budget=50)
    with pytest.raises(ReductionError):
        reduce_to_normal_form(fixture("quiver1"))


def test_reduction_scope():
    with pytest.raises(ReductionError, match="cycle number"):
        reduce_to_normal_form(fixture("a2"))
    single = next(p for p in enumerated(3) if len(compute_phi(p)) == 1)
    with pytest.raises(ReductionError, match="three invariant pairs"):
        reduce_to_normal_form(single)


def test_every_four_vertex_presentation_reduces_except_the_exception():
    q1 = canonical_form(fixture("quiver1"))
    for p in enumerated(4):
        if len(compute_phi(p)) != 3:
            continue
        if canonical_form(p) == q1:
            continue
        trace = reduce_to_normal_form(p)
        assert is_normal_form(trace.replay(p)) is not None


def test_descent_on_relabelled_larger_form():
    nf = build_family(9, {"k": 2, "q": 2, "r": 1})
    assert len(nf.vertices) >= 6
    scrambled = nf
    for k in (0, -1):
        scrambled = apply_step(scrambled, applicable_steps(scrambled)[k])
    vm = {v: f"x{k}" for k, v in enumerate(reversed(scrambled.vertices))}
    scrambled = rename(scrambled, vm, {})
    trace = reduce_to_normal_form(scrambled)
    assert canonical_form(trace.final) == canonical_form(nf)
    assert trace.to_json()["family"] == 9


def test_trace_replay_catches_bad_steps():
    p = fixture("quiver2")
    trace = reduce_to_normal_form(p)
    assert trace.replay(p, check_phi=True) is not None
    data = trace.to_json()
    assert data["steps"] == [{"kind": "vertex", "direction": "forward", "site": "A"}]


def test_verdicts():
    v = decide_derived_equivalence(fixture("quiver1"), fixture("quiver2"))
    assert (v.verdict, v.exit_code) == ("equivalent", 0)
    v = decide_derived_equivalence(fixture("nf4"), fixture("nf5"))
    assert (v.verdict, v.exit_code) == ("not-equivalent", 1)
    splits = [p for p in enumerated(3) if str(compute_phi(p)) == "[(2,4)]"]
    v = decide_derived_equivalence(splits[0], splits[1])
    assert (v.verdict, v.exit_code) == ("out-of-scope", 2)
    a2 = fixture("a2")
    assert decide_derived_equivalence(a2, a2).verdict == "equivalent"
